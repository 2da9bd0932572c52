#include "pcop/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <string>

#include <unsupported/Eigen/FFT>

namespace pcop {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_k = fc * kWgk[7];
  double result_g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_k += kWgk[j] * fsum;
    if (j % 2 == 1) result_g += kWg[j / 2] * fsum;
  }
  result_k *= half;
  result_g *= half;
  if (!std::isfinite(result_k)) {
    throw EvaluationError("integrate_adaptive: non-finite integrand on [" +
                          std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, result_k, std::abs(result_k - result_g)};
}

}  // namespace

GaussRule<double> gauss_legendre_on(int n, double a, double b) {
  auto rule = gauss_legendre<double>(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

GaussRule<double> composite_gauss_legendre(std::span<const double> breakpoints,
                                           int n_per_panel) {
  std::vector<double> pts(breakpoints.begin(), breakpoints.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const auto base = gauss_legendre<double>(n_per_panel);
  GaussRule<double> out;
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double half = 0.5 * (pts[p + 1] - pts[p]);
    const double mid = 0.5 * (pts[p + 1] + pts[p]);
    for (int i = 0; i < n_per_panel; ++i) {
      out.nodes.push_back(mid + half * base.nodes[i]);
      out.weights.push_back(half * base.weights[i]);
    }
  }
  return out;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options) {
  std::vector<double> pts(breakpoints.begin(), breakpoints.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) throw ParameterError("integrate_adaptive: need an interval");

  std::priority_queue<Panel> queue;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const Panel panel = kronrod15(f, pts[p], pts[p + 1]);
    value += panel.value;
    error += panel.error;
    queue.push(panel);
  }
  int panels = static_cast<int>(queue.size());
  const double eps = std::numeric_limits<double>::epsilon();
  while (error > std::max(options.atol, options.rtol * std::abs(value))) {
    if (panels >= options.max_panels) {
      throw QuadratureError("integrate_adaptive: no convergence within " +
                                std::to_string(options.max_panels) + " panels",
                            error);
    }
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= 64 * eps * std::max(1.0, std::abs(mid))) {
      // The worst panel cannot be split further; what remains is roundoff.
      if (worst.error <= 1e3 * eps * std::abs(value) + options.atol) break;
      throw QuadratureError("integrate_adaptive: panel width underflow", error);
    }
    queue.pop();
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
    // Recompute the totals now and then to shed accumulated cancellation.
    if (panels % 256 == 0) {
      auto copy = queue;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {value, error, panels};
}

std::vector<double> graded_breakpoints(int levels) {
  std::vector<double> pts{0.0};
  double gap = 1.0;
  for (int k = 0; k < levels; ++k) {
    gap *= 0.5;
    pts.push_back(1.0 - gap);
  }
  pts.push_back(1.0);
  return pts;
}

GridSpec parse_grid(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    throw ParameterError("grid spec must look like <n_r>x<n_theta>: " + std::string(text));
  }
  GridSpec spec;
  const auto parse = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, out);
    if (ec != std::errc() || ptr != end || out <= 0) {
      throw ParameterError("bad grid spec: " + std::string(text));
    }
  };
  parse(text.substr(0, x), spec.n_r);
  parse(text.substr(x + 1), spec.n_theta);
  return spec;
}

QuadratureRule::QuadratureRule(std::vector<RadialNode> radial, int n_theta)
    : radial_(std::move(radial)), n_theta_(n_theta) {
  if (n_theta_ < 8 || n_theta_ % 2 != 0) {
    throw ParameterError("QuadratureRule: n_theta must be even and >= 8");
  }
  if (radial_.empty()) throw ParameterError("QuadratureRule: no radial nodes");
  for (const auto& node : radial_) {
    if (!(node.r > 0.0 && node.r < 1.0 && node.w > 0.0)) {
      throw ParameterError("QuadratureRule: radial nodes must lie in (0,1) with w > 0");
    }
  }
}

QuadratureRule QuadratureRule::uniform(int n_r, int n_theta) {
  const auto gl = gauss_legendre_on(n_r, 0.0, 1.0);
  std::vector<RadialNode> radial(n_r);
  for (int i = 0; i < n_r; ++i) radial[i] = {gl.nodes[i], gl.weights[i]};
  return QuadratureRule(std::move(radial), n_theta);
}

QuadratureRule QuadratureRule::with_breakpoints(std::vector<double> breakpoints, int n_r,
                                                int n_theta, int min_per_panel) {
  breakpoints.push_back(0.0);
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> pts;
  for (double b : breakpoints) {
    if (b < 0.0 || b > 1.0) continue;
    if (pts.empty() || b - pts.back() > 1e-14) pts.push_back(b);
  }
  if (pts.back() < 1.0) pts.push_back(1.0);
  const int panels = static_cast<int>(pts.size()) - 1;
  if (panels == 1) return uniform(n_r, n_theta);
  const int base = std::max(min_per_panel, n_r / panels);
  int extra = std::max(0, n_r - base * panels);
  std::vector<RadialNode> radial;
  for (int p = 0; p < panels; ++p) {
    const int n = base + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
    const auto gl = gauss_legendre_on(n, pts[p], pts[p + 1]);
    for (int i = 0; i < n; ++i) radial.push_back({gl.nodes[i], gl.weights[i]});
  }
  return QuadratureRule(std::move(radial), n_theta);
}

Eigen::MatrixXcd sample_disc(const QuadratureRule& rule,
                             const std::function<cplx(cplx)>& f) {
  Eigen::MatrixXcd values(rule.n_r(), rule.n_theta());
  for (int i = 0; i < rule.n_r(); ++i) {
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx z = rule.point(i, j);
      const cplx v = f(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw EvaluationError("non-finite field value at node (" + std::to_string(i) + ", " +
                              std::to_string(j) + "), z = " + std::to_string(z.real()) +
                              " + " + std::to_string(z.imag()) + "i");
      }
      values(i, j) = v;
    }
  }
  return values;
}

cplx integrate_disc(const QuadratureRule& rule, const Eigen::MatrixXcd& nodal) {
  if (nodal.rows() != rule.n_r() || nodal.cols() != rule.n_theta()) {
    throw ParameterError("integrate_disc: nodal values do not match the rule");
  }
  cplx total = 0.0;
  for (int i = 0; i < rule.n_r(); ++i) total += rule.ring_weight(i) * nodal.row(i).sum();
  return total / static_cast<double>(rule.n_theta());
}

cplx integrate_disc(const QuadratureRule& rule, const std::function<cplx(cplx)>& f) {
  return integrate_disc(rule, sample_disc(rule, f));
}

Eigen::MatrixXcd angular_fourier_modes(const Eigen::MatrixXcd& nodal, int k_max) {
  const auto n_theta = static_cast<int>(nodal.cols());
  if (k_max > n_theta / 2) {
    throw AliasingError("angular_fourier_modes: k_max exceeds n_theta / 2");
  }
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd modes(nodal.rows(), k_max);
  std::vector<cplx> ring(n_theta);
  std::vector<cplx> spectrum;
  for (Eigen::Index i = 0; i < nodal.rows(); ++i) {
    for (int j = 0; j < n_theta; ++j) ring[j] = nodal(i, j);
    fft.fwd(spectrum, ring);
    for (int k = 0; k < k_max; ++k) modes(i, k) = spectrum[k] / static_cast<double>(n_theta);
  }
  return modes;
}

Eigen::VectorXcd angular_fourier_profile(const QuadratureRule& rule,
                                         const std::function<cplx(cplx)>& f, int k) {
  if (std::abs(k) >= rule.n_theta() / 2) {
    throw AliasingError("angular_fourier_profile: |k| must be < n_theta / 2");
  }
  const Eigen::MatrixXcd nodal = sample_disc(rule, f);
  Eigen::VectorXcd profile(rule.n_r());
  for (int i = 0; i < rule.n_r(); ++i) {
    cplx acc = 0.0;
    for (int j = 0; j < rule.n_theta(); ++j) {
      acc += nodal(i, j) * std::polar(1.0, -k * rule.theta(j));
    }
    profile(i) = acc / static_cast<double>(rule.n_theta());
  }
  return profile;
}

}  // namespace pcop
