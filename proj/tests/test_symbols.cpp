#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pcop/mollifier.hpp"
#include "pcop/quadrature.hpp"
#include "pcop/symbols.hpp"

using namespace pcop;

namespace {

std::vector<Symbol> builder_samples() {
  return {make_identity(),
          make_mobius({0.3, 0.0}),
          make_mobius({-0.2, 0.5}),
          make_twist_poly(0.5),
          make_twist_poly(-1.3),
          make_radial_stretch(2.0, 0.5),
          make_radial_stretch(0.6, 0.7),
          make_example3(tune_example3().params)};
}

}  // namespace

TEST(Mollifier, UnitMassAndSupport) {
  const std::vector<double> bp{-1.0, 0.0, 1.0};
  const auto r = integrate_adaptive(mollifier::phi, bp);
  EXPECT_NEAR(r.value, 1.0, 1e-13);
  EXPECT_EQ(mollifier::phi(1.0), 0.0);
  EXPECT_EQ(mollifier::phi(-1.5), 0.0);
  EXPECT_GT(mollifier::phi(0.999), 0.0);
}

TEST(Mollifier, StepAndRamp) {
  using namespace mollifier;
  EXPECT_EQ(step(-1.0), 0.0);
  EXPECT_EQ(step(1.0), 1.0);
  EXPECT_NEAR(step(0.0), 0.5, 1e-15);
  EXPECT_EQ(ramp(-1.0), 0.0);
  EXPECT_NEAR(ramp(1.0), 1.0, 1e-15);
  EXPECT_EQ(ramp(3.0), 3.0);
  for (double t : {-0.9, -0.5, -0.1, 0.2, 0.7}) {
    EXPECT_NEAR(step(t) + step(-t), 1.0, 1e-15);
    // ramp(t) - ramp(-t) = t by symmetry of phi.
    EXPECT_NEAR(ramp(t) - ramp(-t), t, 1e-15);
    const double h = 1e-5;
    EXPECT_NEAR((step(t + h) - step(t - h)) / (2 * h), phi(t), 1e-8);
    EXPECT_NEAR((ramp(t + h) - ramp(t - h)) / (2 * h), step(t), 1e-9);
    EXPECT_NEAR((phi(t + h) - phi(t - h)) / (2 * h), dphi(t), 1e-7);
  }
}

TEST(Mollifier, StepMonotone) {
  double prev = 0.0;
  for (int k = -100; k <= 100; ++k) {
    const double v = mollifier::step(k / 100.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Wirtinger, ClosedFormsMatchFiniteDifferences) {
  for (const Symbol& s : builder_samples()) {
    const ValidationReport v = validate(s);
    EXPECT_LE(v.max_fd_error, 1e-6) << s.spec();
    EXPECT_GT(v.fd_points, 64 * 60) << s.spec();
    EXPECT_TRUE(v.self_map) << s.spec();
    EXPECT_TRUE(v.inverse_ok) << s.spec() << " " << v.max_inverse_error;
    EXPECT_TRUE(v.orientation_preserving) << s.spec();
  }
}

TEST(Wirtinger, FiniteDifferenceOrders) {
  auto f = [](cplx z) { return std::exp(z) * std::conj(z); };
  const cplx z(0.2, 0.1);
  const Wirtinger exact{std::exp(z) * std::conj(z), std::exp(z)};
  const Wirtinger w4 = wirtinger_fd(f, z, 1e-3, 4);
  const Wirtinger w2 = wirtinger_fd(f, z, 1e-3, 2);
  EXPECT_LT(std::abs(w4.dz - exact.dz), 1e-11);
  EXPECT_LT(std::abs(w2.dz - exact.dz), 1e-6);
  EXPECT_LT(std::abs(w4.dzbar - exact.dzbar), 1e-11);
  EXPECT_THROW(wirtinger_fd(f, z, 1e-3, 3), ParameterError);
}

TEST(Wirtinger, InverseDerivatives) {
  for (const Symbol& s : builder_samples()) {
    const auto inv = [&s](cplx w) { return s.inverse(w); };
    for (cplx w : {cplx(0.1, 0.2), cplx(-0.55, 0.3), cplx(0.0, -0.8)}) {
      if (s.family() == SymbolFamily::radial_stretch &&
          std::abs(std::abs(s.inverse(w)) - s.parameters()[1]) < 1e-3)
        continue;
      const Wirtinger fd = wirtinger_fd(inv, w, 1e-5, 4);
      const Wirtinger d = s.inverse_wirtinger(w);
      EXPECT_LT(std::abs(fd.dz - d.dz), 1e-6) << s.spec();
      EXPECT_LT(std::abs(fd.dzbar - d.dzbar), 1e-6) << s.spec();
    }
  }
}

TEST(Beltrami, StretchConstantInside) {
  for (double a : {0.3, 0.8, 2.0, 3.0}) {
    const Symbol s = make_radial_stretch(a, 0.6);
    for (double r : {0.05, 0.3, 0.59})
      for (double t : {0.0, 1.0, 4.0}) {
        const cplx z = std::polar(r, t);
        EXPECT_NEAR(std::abs(beltrami(s, z)), std::abs(a - 1.0) / (a + 1.0), 1e-9);
        EXPECT_NEAR(std::abs(beltrami(s, std::polar(0.8, t))), 0.0, 1e-15);
      }
  }
}

TEST(Beltrami, TwistModulus) {
  // mu = (i r b'/2) / (1 + i r b'/2) up to a unimodular factor.
  const double C = 0.7;
  const Symbol s = make_twist_poly(C);
  for (double r : {0.1, 0.5, 0.9}) {
    const double x = 0.5 * r * C * (1 - r * r);
    EXPECT_NEAR(std::abs(beltrami(s, std::polar(r, 0.3))), x / std::sqrt(1 + x * x), 1e-13);
    EXPECT_NEAR(jacobian(s, std::polar(r, 0.3)), 1.0, 1e-13);
  }
}

TEST(Beltrami, MobiusIsConformal) {
  const Symbol s = make_mobius({0.3, -0.1});
  EXPECT_EQ(std::abs(beltrami(s, cplx(0.2, 0.2))), 0.0);
  EXPECT_LT(std::abs(s(s(cplx(0.4, 0.1))) - cplx(0.4, 0.1)), 1e-15);
  EXPECT_GT(jacobian(s, 0.5), 0.0);
}

TEST(Beltrami, DegenerateDerivativeThrows) {
  // The stretch with a > 1 has dz -> 0 at the origin.
  const Symbol s = make_radial_stretch(3.0, 0.5);
  EXPECT_THROW(beltrami(s, cplx(1e-9, 0.0)), DegenerateDerivativeError);
}

TEST(Example3, StepMomentVanishesAtR) {
  const double R = example3_R();
  EXPECT_NEAR(std::pow(R, 4), 3.0 / 7.0, 1e-15);
  EXPECT_LE(std::abs(example3_step_moment(R)), 1e-14);
  double prev = example3_step_moment(R - 0.01);
  for (int k = -9; k <= 10; ++k) {
    const double v = example3_step_moment(R + 0.001 * k);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_GT(example3_step_moment(R - 0.01), 0.0);
  EXPECT_LT(example3_step_moment(R + 0.01), 0.0);
}

TEST(Example3, TuningResidualsAndFrozenParameters) {
  const Example3Tuning t = tune_example3();
  EXPECT_LE(std::abs(t.I_re), 1e-8);
  EXPECT_LE(std::abs(t.I_im), 1e-8);
  EXPECT_LE(std::abs(t.I_re_check), 1e-10);
  EXPECT_LE(std::abs(t.I_im_check), 1e-10);
  EXPECT_NEAR(t.params.delta_a, 0.0056518050929311, 1e-10);
  EXPECT_NEAR(t.params.delta_b, 0.0701055507127358, 1e-10);
  EXPECT_DOUBLE_EQ(t.params.delta, 0.008);
  EXPECT_GT(t.J1, 0.0);
  EXPECT_NEAR(t.J1 + t.J2, 0.0, 1e-12);
}

TEST(Example3, TuningAtOtherDelta) {
  const Example3Tuning t = tune_example3(0.005);
  EXPECT_LE(std::abs(t.I_re), 1e-8);
  EXPECT_LE(std::abs(t.I_im), 1e-8);
  EXPECT_THROW(tune_example3(0.2), ParameterError);
}

TEST(Example3, ProfileShape) {
  const Example3Tuning t = tune_example3();
  const RadialProfile p = example3_profile(t.params);
  const double R = example3_R();
  // Angle pi near the origin, 0 past the ramp and the bump.
  EXPECT_NEAR(p.angle(0.1), kPi, 1e-15);
  EXPECT_NEAR(p.angle(0.95), 0.0, 1e-15);
  EXPECT_LT(p.angle(0.9 + t.params.delta_a / 2), 0.0);
  EXPECT_NEAR(p.angle(R - 1e-6), kPi, 1e-15);
  // The modulus is an increasing bijection of [0, 1) and the identity past R.
  double prev = -1.0;
  for (int k = 0; k < 1000; ++k) {
    const double r = k / 1000.0;
    EXPECT_GT(p.modulus(r), prev);
    EXPECT_NEAR(p.modulus_inverse(p.modulus(r)), r, 1e-12);
    prev = p.modulus(r);
  }
  EXPECT_DOUBLE_EQ(p.modulus(0.95), 0.95);
  // phi = -z near the origin.
  const Symbol s = make_example3(t.params);
  EXPECT_LT(std::abs(s(cplx(0.01, 0.02)) + cplx(0.01, 0.02)), 1e-15);
}

TEST(Example3, RejectsOutOfRangeParameters) {
  EXPECT_THROW(make_example3({0.06, 0.008, 0.07}), ParameterError);
  EXPECT_THROW(make_example3({0.005, 0.008, 0.2}), ParameterError);
}

TEST(Parse, SpecsRoundTrip) {
  for (const char* spec : {"id", "mobius:0.3,0", "twist:poly:0.5", "stretch:2:0.5"}) {
    const Symbol s = parse_symbol(spec);
    EXPECT_EQ(s.spec(), spec);
    EXPECT_EQ(parse_symbol(s.spec()).spec(), s.spec());
  }
  const Symbol e = parse_symbol("example3:0.005:0.008:0.07");
  EXPECT_EQ(e.family(), SymbolFamily::example3);
  EXPECT_EQ(parse_symbol(e.spec()).spec(), e.spec());
  for (const char* bad : {"", "ident", "mobius:1,0", "mobius:0.3", "twist:0.5", "stretch:0:0.5",
                          "stretch:2:1", "example3:1:2", "twist:poly:x"})
    EXPECT_THROW(parse_symbol(bad), ParameterError) << bad;
}

TEST(Symbol, Metadata) {
  EXPECT_EQ(make_identity().conformal_radius(), 0.0);
  EXPECT_EQ(make_twist_poly(0.0).conformal_radius(), 0.0);
  EXPECT_FALSE(make_twist_poly(0.4).conformal_radius().has_value());
  const Symbol st = make_radial_stretch(1.5, 0.4);
  EXPECT_EQ(st.kinks(), std::vector<double>{0.4});
  EXPECT_EQ(st.parameters(), (std::vector<double>{1.5, 0.4}));
  EXPECT_EQ(to_string(SymbolFamily::radial_twist), "radial_twist");
}

// Random points: closed-form and FD derivatives agree away from kinks.
TEST(Wirtinger, RandomPoints) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> rr(0.0, 0.95), tt(0.0, 2 * kPi);
  const Symbol s = make_twist_poly(1.7);
  for (int k = 0; k < 200; ++k) {
    const cplx z = std::polar(rr(gen), tt(gen));
    const Wirtinger fd = wirtinger_fd([&](cplx x) { return s(x); }, z);
    const Wirtinger d = s.wirtinger(z);
    EXPECT_LT(std::abs(fd.dz - d.dz) + std::abs(fd.dzbar - d.dzbar), 1e-8);
  }
}
