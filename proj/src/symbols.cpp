#include "pcop/symbols.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>

#include "pcop/mollifier.hpp"
#include "pcop/quadrature.hpp"

namespace pcop {
namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double to_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParameterError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string to_string(SymbolFamily f) {
  switch (f) {
    case SymbolFamily::identity: return "identity";
    case SymbolFamily::mobius: return "mobius";
    case SymbolFamily::radial_twist: return "radial_twist";
    case SymbolFamily::radial_stretch: return "radial_stretch";
    case SymbolFamily::example3: return "example3";
    case SymbolFamily::custom: return "custom";
  }
  return "unknown";
}

Symbol::Symbol(SymbolFamily family, std::string spec, Map map, Derivatives derivatives,
               Map inverse)
    : family_(family),
      spec_(std::move(spec)),
      map_(std::move(map)),
      derivatives_(std::move(derivatives)),
      inverse_(std::move(inverse)) {}

Symbol Symbol::from_profile(SymbolFamily family, std::string spec, RadialProfile p) {
  auto prof = std::make_shared<const RadialProfile>(std::move(p));
  Map map = [prof](cplx z) -> cplx {
    const double r = std::abs(z);
    if (r == 0.0) return 0.0;
    return prof->modulus(r) * (z / r) * std::polar(1.0, prof->angle(r));
  };
  Derivatives der = [prof](cplx z) -> Wirtinger {
    const double r = std::abs(z);
    const double b = prof->modulus(r);
    const double db = prof->d_modulus(r);
    const cplx rot = std::polar(1.0, prof->angle(r));
    if (r == 0.0) return {rot * db, 0.0};
    const double P = b / r;
    const cplx Q(db, b * prof->d_angle(r));
    return {0.5 * rot * (P + Q), (z * z / (2.0 * r * r)) * rot * (Q - P)};
  };
  Map inv = [prof](cplx w) -> cplx {
    const double rho = std::abs(w);
    if (rho == 0.0) return 0.0;
    const double r = prof->modulus_inverse(rho);
    return r * (w / rho) * std::polar(1.0, -prof->angle(r));
  };
  Symbol s(family, std::move(spec), std::move(map), std::move(der), std::move(inv));
  s.profile_ = *prof;
  return s;
}

Wirtinger Symbol::inverse_wirtinger(cplx w) const {
  const Wirtinger d = wirtinger(inverse(w));
  const double J = std::norm(d.dz) - std::norm(d.dzbar);
  if (J == 0.0) throw DegenerateDerivativeError("inverse_wirtinger: vanishing Jacobian");
  return {std::conj(d.dz) / J, -d.dzbar / J};
}

Symbol Symbol::with_features(std::vector<double> features, std::vector<double> kinks,
                             std::optional<double> conformal_radius) const {
  Symbol s = *this;
  std::sort(features.begin(), features.end());
  std::sort(kinks.begin(), kinks.end());
  s.features_ = std::move(features);
  s.kinks_ = std::move(kinks);
  s.conformal_radius_ = conformal_radius;
  return s;
}

Symbol Symbol::with_parameters(std::vector<double> parameters) const {
  Symbol s = *this;
  s.parameters_ = std::move(parameters);
  return s;
}

Symbol make_identity() {
  RadialProfile p{[](double) { return 0.0; }, [](double) { return 0.0; },
                  [](double r) { return r; }, [](double) { return 1.0; },
                  [](double r) { return r; }};
  return Symbol::from_profile(SymbolFamily::identity, "id", std::move(p)).with_features({}, {}, 0.0);
}

Symbol make_mobius(cplx c) {
  if (!(std::abs(c) < 1.0)) throw ParameterError("mobius: need |c| < 1");
  auto map = [c](cplx z) { return (c - z) / (1.0 - std::conj(c) * z); };
  auto der = [c](cplx z) -> Wirtinger {
    const cplx d = 1.0 - std::conj(c) * z;
    return {-(1.0 - std::norm(c)) / (d * d), 0.0};
  };
  return Symbol(SymbolFamily::mobius, "mobius:" + fmt(c.real()) + "," + fmt(c.imag()), map, der,
                map)
      .with_features({}, {}, 0.0)
      .with_parameters({c.real(), c.imag()});
}

Symbol make_radial_twist(std::function<double(double)> angle,
                         std::function<double(double)> d_angle, std::string spec) {
  RadialProfile p{std::move(angle), std::move(d_angle), [](double r) { return r; },
                  [](double) { return 1.0; }, [](double r) { return r; }};
  return Symbol::from_profile(SymbolFamily::radial_twist, std::move(spec), std::move(p));
}

Symbol make_twist_poly(double C) {
  Symbol s = make_radial_twist([C](double r) { return C * (r - r * r * r / 3.0); },
                               [C](double r) { return C * (1.0 - r * r); },
                               "twist:poly:" + fmt(C));
  return s.with_features({}, {}, C == 0.0 ? std::optional<double>(0.0) : std::nullopt)
      .with_parameters({C});
}

Symbol make_radial_stretch(double a, double R) {
  if (!(a > 0.0)) throw ParameterError("stretch: need a > 0");
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("stretch: need R in (0, 1)");
  const double c = std::pow(R, 1.0 - a);
  const double ci = std::pow(R, 1.0 - 1.0 / a);
  RadialProfile p{
      [](double) { return 0.0; },
      [](double) { return 0.0; },
      [=](double r) { return r <= R ? c * std::pow(r, a) : r; },
      [=](double r) { return r <= R ? a * c * std::pow(r, a - 1.0) : 1.0; },
      [=](double w) { return w <= R ? ci * std::pow(w, 1.0 / a) : w; },
  };
  return Symbol::from_profile(SymbolFamily::radial_stretch, "stretch:" + fmt(a) + ":" + fmt(R),
                              std::move(p))
      .with_features({R}, {R}, R)
      .with_parameters({a, R});
}

double example3_R() { return std::pow(3.0 / 7.0, 0.25); }
double example3_R_prime() { return 0.9; }

double example3_step_moment(double R) {
  const double R4 = R * R * R * R;
  return -R4 / 3.0 + (1.0 - R4) / 4.0;
}

namespace {

void check_example3(const Example3Params& q) {
  if (!(q.delta_a > 0.0 && q.delta_a < 0.05)) throw ParameterError("example3: delta_a outside (0, 1/20)");
  if (!(q.delta > 0.0 && q.delta < 0.05)) throw ParameterError("example3: delta outside (0, 1/20)");
  if (!(q.delta_b > 0.0 && q.delta_b < 0.1)) throw ParameterError("example3: delta_b outside (0, 1/10)");
}

// Modulus: the piecewise-linear profile through (0,0), (db/2, db/2),
// (db, R - db), (R - 2 eps, R - 2 eps) and then the diagonal, mollified at
// scale eps = db/10. Each kink contributes slope_jump * eps * ramp((r - k)/eps).
struct ModulusProfile {
  double R;
  double eps;
  double k[3];
  double jump[3];

  explicit ModulusProfile(double db) : R(example3_R()), eps(db / 10.0) {
    k[0] = db / 2.0;
    k[1] = db;
    k[2] = R - 2.0 * eps;
    const double s1 = (R - 1.5 * db) / (db / 2.0);
    const double s2 = (k[2] - (R - db)) / (k[2] - db);
    jump[0] = s1 - 1.0;
    jump[1] = s2 - s1;
    jump[2] = 1.0 - s2;
  }

  bool diagonal(double r) const { return r <= k[0] - eps || r >= k[2] + eps; }

  double value(double r) const {
    if (diagonal(r)) return r;
    double b = r;
    for (int i = 0; i < 3; ++i) b += jump[i] * eps * mollifier::ramp((r - k[i]) / eps);
    return b;
  }

  double derivative(double r) const {
    if (diagonal(r)) return 1.0;
    double d = 1.0;
    for (int i = 0; i < 3; ++i) d += jump[i] * mollifier::step((r - k[i]) / eps);
    return d;
  }

  // Newton steps kept inside a shrinking bracket.
  double inverse(double w) const {
    if (diagonal(w)) return w;
    double lo = k[0] - eps, hi = k[2] + eps;
    double x = std::clamp(w, lo, hi);
    for (int it = 0; it < 100; ++it) {
      const double f = value(x) - w;
      if (f == 0.0) return x;
      (f < 0.0 ? lo : hi) = x;
      double next = x - f / derivative(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-16 * std::max(1.0, x) || hi - lo <= 1e-16) return next;
      x = next;
    }
    return x;
  }
};

struct AngleProfile {
  double R, Rp, d, da;

  double value(double r) const {
    if (r <= R) return kPi;
    if (r < R + d) return kPi * (1.0 - mollifier::step(2.0 * (r - R) / d - 1.0));
    if (r <= Rp || r >= Rp + da) return 0.0;
    const double t = 2.0 * (r - Rp) / da - 1.0;
    return -(mollifier::step(2.0 * t + 1.0) - mollifier::step(2.0 * t - 1.0));
  }

  double derivative(double r) const {
    if (r <= R) return 0.0;
    if (r < R + d) return -kPi * mollifier::phi(2.0 * (r - R) / d - 1.0) * 2.0 / d;
    if (r <= Rp || r >= Rp + da) return 0.0;
    const double t = 2.0 * (r - Rp) / da - 1.0;
    return -(2.0 * mollifier::phi(2.0 * t + 1.0) - 2.0 * mollifier::phi(2.0 * t - 1.0)) * 2.0 / da;
  }
};

std::vector<double> example3_breakpoints(const Example3Params& q) {
  const ModulusProfile m(q.delta_b);
  const double R = example3_R();
  const double Rp = example3_R_prime();
  std::vector<double> v;
  for (double k : m.k) {
    v.push_back(k - m.eps);
    v.push_back(k + m.eps);
  }
  for (double x : {R, R + q.delta / 2.0, R + q.delta}) v.push_back(x);
  for (int i = 0; i <= 4; ++i) v.push_back(Rp + q.delta_a * i / 4.0);
  std::sort(v.begin(), v.end());
  return v;
}

// int over [a, b] of f by composite Gauss-Legendre on the given cut points.
double panel_integral(const std::function<double(double)>& f, std::vector<double> cuts,
                      int nodes_per_panel) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const GaussRule<double> g = composite_gauss_legendre(cuts, nodes_per_panel);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(g.nodes[i]);
  return s;
}

}  // namespace

RadialProfile example3_profile(const Example3Params& q) {
  check_example3(q);
  auto m = std::make_shared<const ModulusProfile>(q.delta_b);
  auto a = std::make_shared<const AngleProfile>(
      AngleProfile{example3_R(), example3_R_prime(), q.delta, q.delta_a});
  return RadialProfile{
      [a](double r) { return a->value(r); },
      [a](double r) { return a->derivative(r); },
      [m](double r) { return m->value(r); },
      [m](double r) { return m->derivative(r); },
      [m](double w) { return m->inverse(w); },
  };
}

Symbol make_example3(const Example3Params& q) {
  const std::string spec =
      "example3:" + fmt(q.delta_a) + ":" + fmt(q.delta) + ":" + fmt(q.delta_b);
  return Symbol::from_profile(SymbolFamily::example3, spec, example3_profile(q))
      .with_features(example3_breakpoints(q), {}, example3_R_prime() + q.delta_a)
      .with_parameters({q.delta_a, q.delta, q.delta_b});
}

cplx example3_moment(const Example3Params& q, int nodes_per_panel) {
  const RadialProfile p = example3_profile(q);
  std::vector<double> cuts = example3_breakpoints(q);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  const double re = panel_integral(
      [&](double r) { return p.modulus(r) * r * r * std::cos(p.angle(r)); }, cuts, nodes_per_panel);
  const double im = panel_integral(
      [&](double r) { return p.modulus(r) * r * r * std::sin(p.angle(r)); }, cuts, nodes_per_panel);
  return {re, im};
}

Example3Tuning tune_example3(double delta) {
  const double R = example3_R();
  const double Rp = example3_R_prime();
  if (!(delta > 0.0 && delta < 0.05)) throw ParameterError("tune_example3: delta outside (0, 1/20)");

  // On [R, 1] the modulus is the identity, so only the angle enters there.
  auto J1 = [&](double d) {
    const AngleProfile a{R, Rp, d, 0.01};
    return panel_integral([&](double r) { return r * r * r * std::sin(a.value(r)); },
                          {R, R + d / 4, R + d / 2, R + 3 * d / 4, R + d}, 32);
  };
  auto J2 = [&](double da) {
    const AngleProfile a{R, Rp, delta, da};
    return panel_integral([&](double r) { return r * r * r * std::sin(a.value(r)); },
                          {Rp, Rp + da / 4, Rp + da / 2, Rp + 3 * da / 4, Rp + da}, 32);
  };
  const double j1 = J1(delta);
  const double da_max = 0.05 * (1.0 - 1e-12);
  if (!(j1 > 0.0) || !(j1 + J2(da_max) < 0.0))
    throw TuningError("tune_example3: no sign change for delta_a; J1 = " + fmt(j1) +
                      ", J2(1/20) = " + fmt(J2(da_max)));
  double lo = 0.0, hi = da_max;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (j1 + J2(mid) > 0.0 ? lo : hi) = mid;
  }
  const double da = 0.5 * (lo + hi);

  std::vector<double> outer{R, R + delta / 4, R + delta / 2, R + 3 * delta / 4, R + delta, Rp};
  for (int i = 1; i <= 4; ++i) outer.push_back(Rp + da * i / 4.0);
  outer.push_back(1.0);
  const AngleProfile ang{R, Rp, delta, da};
  const double K2 =
      panel_integral([&](double r) { return r * r * r * std::cos(ang.value(r)); }, outer, 32);

  // Real part as a function of delta_b: K2 - int_0^R b r^2 dr, increasing.
  auto real_part = [&](double db) {
    const ModulusProfile m(db);
    std::vector<double> cuts{0.0, R};
    for (double k : m.k) {
      cuts.push_back(k - m.eps);
      cuts.push_back(k + m.eps);
    }
    return K2 - panel_integral([&](double r) { return m.value(r) * r * r; }, cuts, 32);
  };
  const double db_lo = 1e-6, db_hi = 0.1 * (1.0 - 1e-12);
  const double f_lo = real_part(db_lo), f_hi = real_part(db_hi);
  if (!(f_lo < 0.0 && f_hi > 0.0))
    throw TuningError("tune_example3: no sign change for delta_b; K2 = " + fmt(K2) +
                      ", real part ranges over [" + fmt(f_lo) + ", " + fmt(f_hi) +
                      "]; try a smaller delta");
  lo = db_lo;
  hi = db_hi;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (real_part(mid) < 0.0 ? lo : hi) = mid;
  }

  Example3Tuning t;
  t.params = {da, delta, 0.5 * (lo + hi)};
  t.J1 = j1;
  t.J2 = J2(da);
  const cplx I = example3_moment(t.params, 32);
  t.I_re = I.real();
  t.I_im = I.imag();

  const RadialProfile p = example3_profile(t.params);
  std::vector<double> cuts = example3_breakpoints(t.params);
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(1.0);
  AdaptiveOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  t.I_re_check = integrate_adaptive(
      [&](double r) { return p.modulus(r) * r * r * std::cos(p.angle(r)); }, cuts, opt).value;
  t.I_im_check = integrate_adaptive(
      [&](double r) { return p.modulus(r) * r * r * std::sin(p.angle(r)); }, cuts, opt).value;
  return t;
}

cplx beltrami(const Symbol& s, cplx z, double eps_deriv) {
  const Wirtinger d = s.wirtinger(z);
  if (std::abs(d.dz) < eps_deriv)
    throw DegenerateDerivativeError("beltrami: |dz| below threshold at z = (" + fmt(z.real()) +
                                    ", " + fmt(z.imag()) + ")");
  return d.dzbar / d.dz;
}

double jacobian(const Symbol& s, cplx z) {
  const Wirtinger d = s.wirtinger(z);
  return std::norm(d.dz) - std::norm(d.dzbar);
}

Wirtinger wirtinger_fd(const std::function<cplx(cplx)>& f, cplx z, double h, int order) {
  auto diff = [&](cplx step) -> cplx {
    if (order == 2) return (f(z + step) - f(z - step)) / (2.0 * h);
    if (order == 4)
      return (-f(z + 2.0 * step) + 8.0 * f(z + step) - 8.0 * f(z - step) + f(z - 2.0 * step)) /
             (12.0 * h);
    throw ParameterError("wirtinger_fd: order must be 2 or 4");
  };
  const cplx fx = diff(cplx(h, 0.0));
  const cplx fy = diff(cplx(0.0, h));
  const cplx i(0.0, 1.0);
  return {0.5 * (fx - i * fy), 0.5 * (fx + i * fy)};
}

ValidationReport validate(const Symbol& s, const ValidationGrid& grid) {
  ValidationReport rep;
  rep.min_jacobian = std::numeric_limits<double>::infinity();
  const double guard = grid.fd_order * grid.h_fd * 1.5;
  const auto map = [&s](cplx z) { return s(z); };
  for (int i = 0; i < grid.n_r; ++i) {
    const double r = grid.r_max * (i + 0.5) / grid.n_r;
    const bool near_kink = std::any_of(s.kinks().begin(), s.kinks().end(),
                                       [&](double k) { return std::abs(r - k) <= guard; });
    for (int j = 0; j < grid.n_theta; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * (j + 0.5) / grid.n_theta);
      const Wirtinger d = s.wirtinger(z);
      const cplx w = s(z);
      rep.sup_mu = std::max(rep.sup_mu, std::abs(d.dzbar) / std::abs(d.dz));
      rep.min_jacobian = std::min(rep.min_jacobian, std::norm(d.dz) - std::norm(d.dzbar));
      rep.max_modulus = std::max(rep.max_modulus, std::abs(w));
      rep.max_inverse_error = std::max(rep.max_inverse_error, std::abs(s.inverse(w) - z));
      if (near_kink) continue;
      const Wirtinger fd = wirtinger_fd(map, z, grid.h_fd, grid.fd_order);
      rep.max_fd_error = std::max(
          {rep.max_fd_error, std::abs(fd.dz - d.dz), std::abs(fd.dzbar - d.dzbar)});
      ++rep.fd_points;
    }
  }
  rep.self_map = rep.max_modulus < 1.0;
  rep.quasiconformal = rep.sup_mu < 1.0;
  rep.orientation_preserving = rep.min_jacobian > 0.0;
  rep.inverse_ok = rep.max_inverse_error <= grid.tol_inv;
  return rep;
}

Symbol parse_symbol(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view head = parts[0];
  if (head == "id" && parts.size() == 1) return make_identity();
  if (head == "mobius" && parts.size() == 2) {
    const auto c = split(parts[1], ',');
    if (c.size() != 2) throw ParameterError("mobius spec is mobius:<re>,<im>");
    return make_mobius({to_double(c[0], "re"), to_double(c[1], "im")});
  }
  if (head == "twist" && parts.size() == 3 && parts[1] == "poly")
    return make_twist_poly(to_double(parts[2], "C"));
  if (head == "stretch" && parts.size() == 3)
    return make_radial_stretch(to_double(parts[1], "a"), to_double(parts[2], "R"));
  if (head == "example3" && parts.size() == 2 && parts[1] == "auto")
    return make_example3(tune_example3().params);
  if (head == "example3" && parts.size() == 4)
    return make_example3({to_double(parts[1], "delta_a"), to_double(parts[2], "delta"),
                          to_double(parts[3], "delta_b")});
  throw ParameterError("unknown symbol spec '" + std::string(text) + "'");
}

}  // namespace pcop
