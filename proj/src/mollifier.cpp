#include "pcop/mollifier.hpp"

#include <cmath>
#include <utility>

#include "pcop/quadrature.hpp"

namespace pcop::mollifier {
namespace {

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

// Integrals of bump(s) and s * bump(s) over [-1, t] for t in [-1, 0]. The bump
// is flat to all orders at -1, so plain Gauss-Legendre converges fast.
struct Partial {
  double m0;
  double m1;
};

Partial partial(double t) {
  static const GaussRule<double> g = gauss_legendre<double>(48);
  Partial out{0.0, 0.0};
  if (t <= -1.0) return out;
  const double mid = 0.5 * (t - 1.0);
  for (const auto& [a, b] : {std::pair{-1.0, mid}, std::pair{mid, t}}) {
    const double half = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double s = c + half * g.nodes[k];
      const double v = g.weights[k] * half * bump(s);
      out.m0 += v;
      out.m1 += v * s;
    }
  }
  return out;
}

}  // namespace

double normalization() {
  static const double c = 1.0 / (2.0 * partial(0.0).m0);
  return c;
}

double phi(double x) { return normalization() * bump(x); }

double dphi(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double d = 1.0 - x * x;
  return phi(x) * (-2.0 * x / (d * d));
}

double step(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t > 0.0) return 1.0 - step(-t);
  return normalization() * partial(t).m0;
}

double ramp(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return t;
  // ramp(t) = t step(t) - C int_{-1}^t s bump(s) ds; the second integral is
  // even in t because s bump(s) is odd.
  const Partial q = partial(-std::abs(t));
  const double C = normalization();
  const double st = t <= 0.0 ? C * q.m0 : 1.0 - C * q.m0;
  return t * st - C * q.m1;
}

}  // namespace pcop::mollifier
