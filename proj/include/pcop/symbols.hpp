#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcop/common.hpp"

namespace pcop {

struct Wirtinger {
  cplx dz;
  cplx dzbar;
};

enum class SymbolFamily { identity, mobius, radial_twist, radial_stretch, example3, custom };

std::string to_string(SymbolFamily f);

/// Profiles of a map phi(r e^{it}) = modulus(r) e^{i(t + angle(r))}.
/// modulus must be an increasing bijection of [0, 1).
struct RadialProfile {
  std::function<double(double)> angle;
  std::function<double(double)> d_angle;
  std::function<double(double)> modulus;
  std::function<double(double)> d_modulus;
  std::function<double(double)> modulus_inverse;
};

/// A self-map of the disc with closed-form Wirtinger derivatives and inverse.
/// Immutable; copies share the underlying callables.
class Symbol {
 public:
  using Map = std::function<cplx(cplx)>;
  using Derivatives = std::function<Wirtinger(cplx)>;

  Symbol(SymbolFamily family, std::string spec, Map map, Derivatives derivatives, Map inverse);

  /// Symbol of the form modulus(r) e^{i(t + angle(r))}.
  static Symbol from_profile(SymbolFamily family, std::string spec, RadialProfile profile);

  cplx operator()(cplx z) const { return map_(z); }
  Wirtinger wirtinger(cplx z) const { return derivatives_(z); }
  cplx inverse(cplx w) const { return inverse_(w); }

  /// Wirtinger derivatives of the inverse psi at w, from those of phi at psi(w).
  Wirtinger inverse_wirtinger(cplx w) const;

  SymbolFamily family() const { return family_; }
  const std::string& spec() const { return spec_; }
  const std::optional<RadialProfile>& profile() const { return profile_; }

  /// Radii where the map changes character; useful quadrature breakpoints.
  const std::vector<double>& features() const { return features_; }
  /// Radii where first derivatives jump.
  const std::vector<double>& kinks() const { return kinks_; }
  /// phi is conformal on the annulus R < |z| < 1 for this R, when known.
  std::optional<double> conformal_radius() const { return conformal_radius_; }

  Symbol with_features(std::vector<double> features, std::vector<double> kinks,
                       std::optional<double> conformal_radius) const;

  /// Builder parameters: {C} twist, {a, R} stretch, {re, im} mobius,
  /// {delta_a, delta, delta_b} example3.
  const std::vector<double>& parameters() const { return parameters_; }
  Symbol with_parameters(std::vector<double> parameters) const;

 private:
  SymbolFamily family_;
  std::string spec_;
  Map map_;
  Derivatives derivatives_;
  Map inverse_;
  std::optional<RadialProfile> profile_;
  std::vector<double> features_;
  std::vector<double> kinks_;
  std::optional<double> conformal_radius_;
  std::vector<double> parameters_;
};

Symbol make_identity();

/// (c - z) / (1 - conj(c) z), an analytic involution of the disc.
Symbol make_mobius(cplx c);

/// z e^{i angle(|z|)}.
Symbol make_radial_twist(std::function<double(double)> angle,
                         std::function<double(double)> d_angle, std::string spec);

/// Twist with angle C (r - r^3/3), so that |angle'| = C (1 - r^2).
Symbol make_twist_poly(double C);

/// R^(1-a) z |z|^(a-1) for |z| <= R, z outside.
Symbol make_radial_stretch(double a, double R);

struct Example3Params {
  double delta_a;
  double delta;
  double delta_b;
};

/// Radii fixed by the construction.
double example3_R();
double example3_R_prime();

/// Smooth radial-profile symbol with angle pi near 0, a negative bump near
/// R' and a mollified piecewise-linear modulus, chosen so that
/// int_0^1 b r^2 e^{ia} dr can be made to vanish.
Symbol make_example3(const Example3Params& params);

/// Profile pieces of make_example3, exposed for the tuning and its tests.
RadialProfile example3_profile(const Example3Params& params);

struct Example3Tuning {
  Example3Params params;
  double I_re;
  double I_im;
  double I_re_check;  // independent adaptive quadrature
  double I_im_check;
  double J1;
  double J2;
};

/// Chooses delta_a so that the imaginary part of int_0^1 b r^2 e^{ia} dr
/// vanishes, then delta_b so that the real part vanishes.
Example3Tuning tune_example3(double delta = 0.008);

/// Real and imaginary parts of int_0^1 b(r) r^2 e^{i a(r)} dr, by composite
/// Gauss-Legendre on the profile breakpoints.
cplx example3_moment(const Example3Params& params, int nodes_per_panel = 32);

/// -R^4/3 + (1 - R^4)/4, the moment of the untuned step profiles.
double example3_step_moment(double R);

/// Beltrami coefficient dzbar / dz. DegenerateDerivativeError when
/// |dz| < eps_deriv.
cplx beltrami(const Symbol& s, cplx z, double eps_deriv = 1e-14);

/// |dz|^2 - |dzbar|^2.
double jacobian(const Symbol& s, cplx z);

/// Centered finite-difference Wirtinger derivatives of f at z, from stencils
/// of the given order (2 or 4) in x and y with step h.
Wirtinger wirtinger_fd(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-5,
                       int order = 4);

struct ValidationGrid {
  int n_r = 64;
  int n_theta = 64;
  double r_max = 0.95;
  double h_fd = 1e-5;
  int fd_order = 4;
  double tol_inv = 1e-9;
};

struct ValidationReport {
  double sup_mu = 0.0;
  double min_jacobian = 0.0;
  double max_modulus = 0.0;       // sup |phi(z)|
  double max_inverse_error = 0.0; // sup |psi(phi(z)) - z|
  double max_fd_error = 0.0;      // sup of FD vs closed-form Wirtinger discrepancy
  int fd_points = 0;              // points where the FD comparison was made
  bool self_map = false;
  bool quasiconformal = false;
  bool orientation_preserving = false;
  bool inverse_ok = false;
};

/// Grid checks on the polar midpoint grid r_i = r_max (i + 1/2) / n_r,
/// t_j = 2 pi (j + 1/2) / n_theta. FD comparisons skip points whose stencil
/// straddles a kink.
ValidationReport validate(const Symbol& s, const ValidationGrid& grid = {});

/// Parses `id`, `mobius:<re>,<im>`, `twist:poly:<C>`, `stretch:<a>:<R>`,
/// `example3:auto` or `example3:<da>:<d>:<db>`.
Symbol parse_symbol(std::string_view text);

}  // namespace pcop
