#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcop/common.hpp"

namespace pcop {

/// Nodes and weights of a one-dimensional rule on [-1, 1].
template <typename Scalar = double>
struct GaussRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on the
/// three-term recurrence.
template <typename Scalar = double>
GaussRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = Scalar(kPi);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1;
      Scalar p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = Scalar(n) * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // Recompute the derivative at the converged node.
    Scalar p0 = 1;
    Scalar p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1;
    dp = Scalar(n) * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
GaussRule<double> gauss_legendre_on(int n, double a, double b);

/// Composite Gauss-Legendre rule: `n_per_panel` nodes on every interval
/// between consecutive (sorted, deduplicated) breakpoints.
GaussRule<double> composite_gauss_legendre(std::span<const double> breakpoints,
                                           int n_per_panel);

struct AdaptiveOptions {
  double rtol = 1e-12;
  double atol = 0.0;
  int max_panels = 20000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over
/// [breakpoints.front(), breakpoints.back()], starting from the given panels.
/// Throws QuadratureError when the panel budget runs out.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options = {});

/// Geometric breakpoints 0, 1/2, 3/4, ..., 1 - 2^-levels, 1.
std::vector<double> graded_breakpoints(int levels);

struct RadialNode {
  double r;
  double w;  // weight of the 1-D rule on [0,1]
};

struct GridSpec {
  int n_r = 256;
  int n_theta = 1024;
};

/// Parses "<n_r>x<n_theta>".
GridSpec parse_grid(std::string_view text);

/// Tensor rule on the disc: radial Gauss-Legendre nodes times uniform angles
/// theta_j = 2 pi j / n_theta, for integrals against dA = r dr dtheta / pi.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<RadialNode> radial, int n_theta);

  /// Single Gauss-Legendre panel on [0, 1].
  static QuadratureRule uniform(int n_r, int n_theta);

  /// Composite rule with panels between the breakpoints (0 and 1 are always
  /// added); n_r nodes in total, spread evenly over the panels with at least
  /// `min_per_panel` per panel.
  static QuadratureRule with_breakpoints(std::vector<double> breakpoints, int n_r,
                                         int n_theta, int min_per_panel = 16);

  const std::vector<RadialNode>& radial() const { return radial_; }
  int n_r() const { return static_cast<int>(radial_.size()); }
  int n_theta() const { return n_theta_; }
  double theta(int j) const { return 2.0 * kPi * j / n_theta_; }
  cplx point(int i, int j) const { return std::polar(radial_[i].r, theta(j)); }

  /// Weight of ring i in the normalized area measure: w_i * 2 r_i.
  double ring_weight(int i) const { return radial_[i].w * 2.0 * radial_[i].r; }

 private:
  std::vector<RadialNode> radial_;
  int n_theta_;
};

/// Tensor approximation of the integral of f against dA.
/// Throws EvaluationError if f is not finite at a node.
cplx integrate_disc(const QuadratureRule& rule, const std::function<cplx(cplx)>& f);

/// Same sum for values already sampled on the nodes (n_r x n_theta).
cplx integrate_disc(const QuadratureRule& rule, const Eigen::MatrixXcd& nodal);

/// Samples f on every node of the rule (n_r x n_theta).
Eigen::MatrixXcd sample_disc(const QuadratureRule& rule,
                             const std::function<cplx(cplx)>& f);

/// k-th angular Fourier coefficient of f on every ring.
/// Throws AliasingError when |k| >= n_theta / 2.
Eigen::VectorXcd angular_fourier_profile(const QuadratureRule& rule,
                                         const std::function<cplx(cplx)>& f, int k);

/// Angular Fourier coefficients 0..k_max-1 of every ring of nodal samples,
/// as an n_r x k_max matrix. Uses an FFT per ring.
Eigen::MatrixXcd angular_fourier_modes(const Eigen::MatrixXcd& nodal, int k_max);

}  // namespace pcop
