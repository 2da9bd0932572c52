#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pcop/bergman.hpp"
#include "pcop/quadrature.hpp"
#include "pcop/symbols.hpp"

namespace pcop {

enum class AssemblyPath { fast, dense };

/// Truncated matrix A(n, m) = <C_phi e_m, e_n>_omega of K_phi = P_omega C_phi,
/// n < rows, m < N. rows = N is the square section; rows > N keeps more of
/// the output of K_phi on span{e_0, ..., e_(N-1)}.
struct OperatorMatrix {
  Eigen::MatrixXcd A;
  std::string weight;
  std::string symbol;
  double p = 2.0;
  int N = 0;
  int rows = 0;
  int n_r = 0;
  int n_theta = 0;
  AssemblyPath path = AssemblyPath::fast;
};

/// Default tensor rule for a weight and symbol: the weight's grading plus the
/// symbol's feature radii as radial panel breakpoints.
QuadratureRule default_rule(const Weight& w, const Symbol& s, const GridSpec& grid = {});

/// Fast path: phi^m sampled on every ring and transformed with one FFT per
/// ring, then paired with r^n omega(r) radially. Dense path: the full
/// two-dimensional sum for every entry. Rows run over the whole basis, columns
/// over the first `columns` entries (all when 0).
OperatorMatrix assemble_K(const Symbol& s, const BasisTable& basis, const QuadratureRule& rule,
                          AssemblyPath path = AssemblyPath::fast, int columns = 0);

struct NormBound {
  double b1;          // inf over the grid of omega / (omega o phi |J|)
  double b2;          // sup of the same
  double norm_upper;  // b2^(1/p), bound for ||C_phi|| on L^p_omega
  double inverse_norm_upper;  // b1^(-1/p), the same bound for C_psi
  bool unbounded_evidence;    // b2 or 1/b1 exceeded the cap, or grows toward 0
};

/// Change-of-variables bounds on the nodes of the rule. Throws
/// DegenerateDerivativeError when the Jacobian vanishes at a node.
NormBound c_phi_norm_bound(const Symbol& s, const Weight& w, const QuadratureRule& rule,
                           double p = 2.0, double cap = 1e8);

struct SpectralDiagnostics {
  double sigma_min;
  double sigma_max;
  double cond;
  double sigma_min_half;  // sigma_min of the leading block of half the size
  double trend;           // sigma_min / sigma_min_half
  bool drifting;          // trend < 1/2
  Eigen::VectorXd singular_values;
};

SpectralDiagnostics spectral_diagnostics(const Eigen::MatrixXcd& A);

struct CarlesonResult {
  double max_ratio;
  std::vector<cplx> probes;
  std::vector<double> ratios;
  double restricted_norm_sq;  // largest eigenvalue of the pulled-back Gram matrix
};

/// Default probes: 16 radii in [0, 0.95] times 8 angles.
std::vector<cplx> default_probes();

/// For each probe w, int |f_w o phi|^2 omega dA / ||f_w||^2 with f_w the
/// normalized truncated reproducing kernel at w.
CarlesonResult carleson_ratio(const Symbol& s, const BasisTable& basis, const QuadratureRule& rule,
                              const std::vector<cplx>& probes = default_probes());

}  // namespace pcop
