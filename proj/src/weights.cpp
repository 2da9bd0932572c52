#include "pcop/weights.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "pcop/quadrature.hpp"

namespace pcop {

namespace {

double parse_number(std::string_view s, std::string_view context) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParameterError("cannot parse number '" + std::string(s) + "' in " +
                         std::string(context));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void check_radius(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("weight evaluated outside [0, 1)");
}

}  // namespace

Weight Weight::standard(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("standard weight needs alpha >= 0");
  }
  return Weight(WeightClass::standard, alpha, 0.0, 0.0);
}

Weight Weight::exponential(double a, double b) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("exponential weight needs a > 0 and b > 0");
  }
  Weight w(WeightClass::w_a, 0.0, a, b);
  if (!(w.laplacian_phi(0.0) > 0.0)) throw ParameterError("Laplacian of phi must be positive");
  return w;
}

double Weight::log_omega(double r) const {
  check_radius(r);
  const double s = 1.0 - r * r;
  if (is_standard()) return alpha_ == 0.0 ? 0.0 : alpha_ * std::log(s);
  return -b_ / std::pow(s, a_);
}

double Weight::omega(double r) const { return std::exp(log_omega(r)); }

double Weight::log_nu(double p, double r) const {
  return is_standard() ? log_omega(r) : 0.5 * p * log_omega(r);
}

double Weight::nu(double p, double r) const { return std::exp(log_nu(p, r)); }

double Weight::laplacian_phi(double r) const {
  if (is_standard()) throw DomainError("tau and R are defined for W_A weights only");
  check_radius(r);
  const double s = 1.0 - r * r;
  return 2.0 * a_ * b_ * std::pow(s, -a_ - 2.0) * (1.0 + a_ * r * r);
}

double Weight::tau(double r) const {
  if (is_standard()) throw DomainError("tau and R are defined for W_A weights only");
  check_radius(r);
  const double s = 1.0 - r * r;
  return std::pow(s, 0.5 * (a_ + 2.0)) / std::sqrt(2.0 * a_ * b_ * (1.0 + a_ * r * r));
}

double Weight::R(double r) const {
  const double t = tau(r);
  return t * t / (1.0 - r);
}

double Weight::rho2(double r) const {
  check_radius(r);
  if (is_standard()) {
    const double s = 1.0 - r * r;
    return s * s;
  }
  const double rr = R(r);
  return rr * rr;
}

std::vector<double> Weight::radial_breakpoints() const {
  if (is_standard() && alpha_ == std::floor(alpha_)) return {0.0, 1.0};
  return graded_breakpoints(4);
}

std::string Weight::spec() const {
  std::ostringstream out;
  out.precision(17);
  if (is_standard()) {
    out << "standard:" << alpha_;
  } else {
    out << "exp:" << a_ << ":" << b_;
  }
  return out.str();
}

Weight parse_weight(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "standard" && parts.size() == 2) {
    return Weight::standard(parse_number(parts[1], text));
  }
  if (parts[0] == "exp" && parts.size() == 3) {
    return Weight::exponential(parse_number(parts[1], text), parse_number(parts[2], text));
  }
  throw ParameterError("weight spec must be standard:<alpha> or exp:<a>:<b>, got '" +
                       std::string(text) + "'");
}

FieldValues eval_fields(const Weight& w, cplx z, double p) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw DomainError("eval_fields: |z| must be < 1");
  FieldValues out{w.omega(r), w.rho2(r), w.nu(p, r), std::nullopt, std::nullopt};
  if (!w.is_standard()) {
    out.tau = w.tau(r);
    out.R = w.R(r);
  }
  return out;
}

double radial_moment(const std::function<double(double)>& density, int n,
                     const std::vector<double>& breakpoints, double rtol) {
  if (n < 0) throw ParameterError("moment index must be >= 0");
  // Extra breakpoints near the peak of r^(2n+1) keep the initial panels
  // informative for large n.
  std::vector<double> pts = breakpoints;
  if (n > 8) {
    const double peak = std::sqrt(1.0 - 1.0 / (n + 1.0));
    for (double t : {0.5 * peak, peak, 0.5 * (1.0 + peak)}) pts.push_back(t);
  }
  const auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 0.0;
    return 2.0 * std::pow(r, 2 * n + 1) * density(r);
  };
  AdaptiveOptions options;
  options.rtol = rtol;
  options.atol = 1e-300;
  return integrate_adaptive(integrand, pts, options).value;
}

double moment(const Weight& w, double p, int n, double rtol) {
  if (!(p > 1.0)) throw ParameterError("moment: p must lie in (1, inf)");
  return radial_moment([&](double r) { return w.nu(p, r); }, n, w.radial_breakpoints(), rtol);
}

}  // namespace pcop
