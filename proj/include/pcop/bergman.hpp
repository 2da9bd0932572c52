#pragma once

#include <functional>

#include <Eigen/Dense>

#include "pcop/common.hpp"
#include "pcop/quadrature.hpp"
#include "pcop/weights.hpp"

namespace pcop {

/// Truncated orthonormal monomial basis e_n = z^n / sqrt(h_n), n < N, of the
/// Bergman space with measure nu_p dA.
class BasisTable {
 public:
  static BasisTable build(const Weight& w, int N, double p = 2.0, double rtol = 1e-12);

  const Weight& weight() const { return weight_; }
  double p() const { return p_; }
  int size() const { return static_cast<int>(h_.size()); }
  const Eigen::VectorXd& moments() const { return h_; }
  double h(int n) const { return h_(n); }

  cplx e(int n, cplx z) const { return std::pow(z, n) / std::sqrt(h_(n)); }
  cplx de(int n, cplx z) const {
    return n == 0 ? cplx(0.0) : double(n) * std::pow(z, n - 1) / std::sqrt(h_(n));
  }

 private:
  BasisTable(Weight w, double p, Eigen::VectorXd h) : weight_(w), p_(p), h_(std::move(h)) {}

  Weight weight_;
  double p_;
  Eigen::VectorXd h_;
};

/// Coefficients c_n = <f, e_n>_omega, n < N, i.e. P_omega f = sum c_n e_n.
/// Requires p = 2.
Eigen::VectorXcd project_coeffs(const BasisTable& basis, const std::function<cplx(cplx)>& f,
                                const QuadratureRule& rule);

/// Same, from samples of f on the nodes of the rule.
Eigen::VectorXcd project_coeffs(const BasisTable& basis, const Eigen::MatrixXcd& nodal,
                                const QuadratureRule& rule);

/// Evaluates sum c_n e_n(z).
cplx synthesize(const BasisTable& basis, const Eigen::VectorXcd& coeffs, cplx z);

struct KernelDiag {
  double K;   // sum |e_n(z)|^2
  double K1;  // sum |e_n'(z)|^2
};

KernelDiag kernel_diag(const BasisTable& basis, cplx z);

struct BetaInfty {
  double value;
  double radius;  // where the sup over |z| <= 1/2 was attained
  int N;
};

/// sup_{|z| <= 1/2} max(sqrt K, sqrt K1) over `samples` radii in [0, 1/2].
BetaInfty beta_infty(const BasisTable& basis, int samples = 2001);

struct LittlewoodPaley {
  double value;        // sqrt(max_n g_n)
  Eigen::VectorXd g;   // g_n = int |e_n'|^2 rho2 omega dA
  double g_last;       // g_{N-1}
  double g_half;       // g_{N/2}
};

/// Truncated Littlewood-Paley constant (a lower bound for the true one).
LittlewoodPaley d_LP(const BasisTable& basis, double rtol = 1e-12);

/// Norm of P_omega on L^p_nu: exact 1 for p = 2, otherwise a lower bound
/// obtained by maximizing ||P f|| / ||f|| over monomial mixtures z^a conj(z)^b.
Estimate d_P(const BasisTable& basis, double p, const QuadratureRule& rule);

/// ||P f||_{p,nu} / ||f||_{p,nu} for f = sum c_ab z^a conj(z)^b, coefficients
/// indexed (a, b). Used by d_P and exposed for tests.
double projection_ratio(const BasisTable& omega_basis, double p,
                        const Eigen::MatrixXcd& coeffs, const QuadratureRule& rule);

}  // namespace pcop
