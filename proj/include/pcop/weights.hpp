#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcop/common.hpp"

namespace pcop {

/// Standard weights sit in the upper-doubling class; exponential weights are
/// the prototype of the rapidly decreasing class W_A.
enum class WeightClass { standard, w_a };

/// Radial weight on the unit disc. Immutable after construction.
///
///   standard(alpha):    omega(r) = (1 - r^2)^alpha,          alpha >= 0
///   exponential(a, b):  omega(r) = exp(-b / (1 - r^2)^a),    a, b > 0
///
/// For exponential weights omega = exp(-2 phi) with phi = b (1 - r^2)^-a / 2,
/// tau = (Laplacian phi)^(-1/2) and R(r) = tau(r)^2 / (1 - r).
class Weight {
 public:
  static Weight standard(double alpha);
  static Weight exponential(double a, double b);

  WeightClass weight_class() const { return class_; }
  bool is_standard() const { return class_ == WeightClass::standard; }
  double alpha() const { return alpha_; }
  double exp_a() const { return a_; }
  double exp_b() const { return b_; }

  double omega(double r) const;
  double log_omega(double r) const;

  /// nu_p: omega for standard weights, omega^(p/2) for W_A weights.
  double nu(double p, double r) const;
  double log_nu(double p, double r) const;

  /// Littlewood-Paley density: (1 - r^2)^2 (standard) or R(r)^2 (W_A).
  double rho2(double r) const;

  /// Only defined for W_A weights; DomainError otherwise.
  double tau(double r) const;
  double R(double r) const;
  double laplacian_phi(double r) const;

  /// Breakpoints that make radial quadrature against this weight accurate:
  /// geometric grading toward r = 1 unless omega is a polynomial in r^2.
  std::vector<double> radial_breakpoints() const;

  /// The CLI spelling, e.g. "standard:0" or "exp:1:1".
  std::string spec() const;

 private:
  Weight(WeightClass c, double alpha, double a, double b)
      : class_(c), alpha_(alpha), a_(a), b_(b) {}

  WeightClass class_;
  double alpha_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Parses `standard:<alpha>` or `exp:<a>:<b>`.
Weight parse_weight(std::string_view text);

struct FieldValues {
  double omega;
  double rho2;
  double nu_p;
  std::optional<double> tau;
  std::optional<double> R;
};

/// All weight-derived fields at z. DomainError when |z| >= 1.
FieldValues eval_fields(const Weight& w, cplx z, double p = 2.0);

/// 2 * int_0^1 r^(2n+1) density(r) dr by adaptive quadrature on the given
/// breakpoints, to relative tolerance rtol.
double radial_moment(const std::function<double(double)>& density, int n,
                     const std::vector<double>& breakpoints, double rtol = 1e-12);

/// h_n = int_D |z|^(2n) nu_p(z) dA(z).
double moment(const Weight& w, double p, int n, double rtol = 1e-12);

}  // namespace pcop
