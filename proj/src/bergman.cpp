#include "pcop/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pcop {

BasisTable BasisTable::build(const Weight& w, int N, double p, double rtol) {
  if (N < 1) throw ParameterError("basis size must be >= 1");
  Eigen::VectorXd h(N);
  for (int n = 0; n < N; ++n) h(n) = moment(w, p, n, rtol);
  return BasisTable(w, p, std::move(h));
}

Eigen::VectorXcd project_coeffs(const BasisTable& basis, const Eigen::MatrixXcd& nodal,
                                const QuadratureRule& rule) {
  if (basis.p() != 2.0) throw ParameterError("project_coeffs needs a p = 2 basis");
  const int N = basis.size();
  if (N >= rule.n_theta() / 2) throw AliasingError("basis size exceeds angular resolution");
  const Eigen::MatrixXcd modes = angular_fourier_modes(nodal, N);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N);
  for (int i = 0; i < rule.n_r(); ++i) {
    const double r = rule.radial()[i].r;
    const double wi = rule.ring_weight(i) * basis.weight().omega(r);
    double rn = 1.0;
    for (int n = 0; n < N; ++n) {
      c(n) += wi * rn * modes(i, n);
      rn *= r;
    }
  }
  for (int n = 0; n < N; ++n) c(n) /= std::sqrt(basis.h(n));
  return c;
}

Eigen::VectorXcd project_coeffs(const BasisTable& basis, const std::function<cplx(cplx)>& f,
                                const QuadratureRule& rule) {
  return project_coeffs(basis, sample_disc(rule, f), rule);
}

cplx synthesize(const BasisTable& basis, const Eigen::VectorXcd& coeffs, cplx z) {
  cplx s = 0.0;
  cplx zn = 1.0;
  for (int n = 0; n < coeffs.size(); ++n) {
    s += coeffs(n) * zn / std::sqrt(basis.h(n));
    zn *= z;
  }
  return s;
}

KernelDiag kernel_diag(const BasisTable& basis, cplx z) {
  if (std::abs(z) >= 1.0) throw DomainError("kernel_diag: |z| >= 1");
  const double x = std::norm(z);
  KernelDiag k{0.0, 0.0};
  double xn = 1.0;  // x^n
  for (int n = 0; n < basis.size(); ++n) {
    k.K += xn / basis.h(n);
    if (n + 1 < basis.size()) k.K1 += double(n + 1) * double(n + 1) * xn / basis.h(n + 1);
    xn *= x;
  }
  return k;
}

BetaInfty beta_infty(const BasisTable& basis, int samples) {
  if (samples < 2) throw ParameterError("beta_infty: need at least 2 samples");
  BetaInfty best{0.0, 0.0, basis.size()};
  for (int k = 0; k < samples; ++k) {
    const double r = 0.5 * k / (samples - 1);
    const KernelDiag d = kernel_diag(basis, r);
    const double v = std::sqrt(std::max(d.K, d.K1));
    if (v > best.value) {
      best.value = v;
      best.radius = r;
    }
  }
  return best;
}

LittlewoodPaley d_LP(const BasisTable& basis, double rtol) {
  const Weight& w = basis.weight();
  const int N = basis.size();
  LittlewoodPaley out;
  out.g = Eigen::VectorXd::Zero(N);
  const auto density = [&](double r) { return w.rho2(r) * w.omega(r); };
  const std::vector<double> bp = w.radial_breakpoints();
  for (int n = 1; n < N; ++n) {
    const double m = radial_moment(density, n - 1, bp, rtol);
    out.g(n) = double(n) * double(n) * m / moment(w, 2.0, n, rtol);
  }
  out.value = std::sqrt(out.g.maxCoeff());
  out.g_last = out.g(N - 1);
  out.g_half = out.g(N / 2);
  return out;
}

double projection_ratio(const BasisTable& omega_basis, double p, const Eigen::MatrixXcd& coeffs,
                        const QuadratureRule& rule) {
  const int A = static_cast<int>(coeffs.rows());
  const int Bd = static_cast<int>(coeffs.cols());
  if (A > omega_basis.size()) throw ParameterError("projection_ratio: basis too small");
  const Weight& w = omega_basis.weight();
  // P(z^a conj(z)^b) = (h_a / h_{a-b}) z^(a-b) for a >= b, and 0 otherwise.
  Eigen::VectorXcd pc = Eigen::VectorXcd::Zero(A);
  for (int a = 0; a < A; ++a)
    for (int b = 0; b <= std::min(a, Bd - 1); ++b)
      pc(a - b) += coeffs(a, b) * omega_basis.h(a) / omega_basis.h(a - b);

  double nf = 0.0;
  double np = 0.0;
  for (int i = 0; i < rule.n_r(); ++i) {
    const double r = rule.radial()[i].r;
    const double wi = rule.ring_weight(i) * w.nu(p, r) / rule.n_theta();
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx z = rule.point(i, j);
      const cplx zb = std::conj(z);
      cplx f = 0.0;
      cplx g = 0.0;
      cplx za = 1.0;
      for (int a = 0; a < A; ++a) {
        cplx zbb = 1.0;
        for (int b = 0; b < Bd; ++b) {
          f += coeffs(a, b) * za * zbb;
          zbb *= zb;
        }
        g += pc(a) * za;
        za *= z;
      }
      nf += wi * std::pow(std::abs(f), p);
      np += wi * std::pow(std::abs(g), p);
    }
  }
  if (!(nf > 0.0)) throw ParameterError("projection_ratio: zero test field");
  return std::pow(np / nf, 1.0 / p);
}

Estimate d_P(const BasisTable& basis, double p, const QuadratureRule& rule) {
  if (!(p > 1.0)) throw ParameterError("d_P: p must lie in (1, inf)");
  if (p == 2.0) return {1.0, Provenance::exact, "orthogonal projection"};

  const int deg = std::min(basis.size() - 1, 8);
  const BasisTable omega_basis = BasisTable::build(basis.weight(), deg + 1, 2.0);
  double best = 0.0;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(deg + 1, deg + 1);
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; b <= deg; ++b) {
      c.setZero();
      c(a, b) = 1.0;
      best = std::max(best, projection_ratio(omega_basis, p, c, rule));
    }
  // Seeded random mixtures of up to four monomials.
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> idx(0, deg);
  std::uniform_int_distribution<int> terms(2, 4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 64; ++trial) {
    c.setZero();
    const int t = terms(rng);
    for (int k = 0; k < t; ++k) c(idx(rng), idx(rng)) += cplx(gauss(rng), gauss(rng));
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    best = std::max(best, projection_ratio(omega_basis, p, c, rule));
  }
  return {best, Provenance::estimated_lower_bound,
          "max ratio over monomial mixtures of bidegree <= " + std::to_string(deg)};
}

}  // namespace pcop
