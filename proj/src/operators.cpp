#include "pcop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pcop {

QuadratureRule default_rule(const Weight& w, const Symbol& s, const GridSpec& grid) {
  std::vector<double> bp = w.radial_breakpoints();
  for (double r : s.features())
    if (r > 0.0 && r < 1.0) bp.push_back(r);
  return QuadratureRule::with_breakpoints(std::move(bp), grid.n_r, grid.n_theta);
}

namespace {

Eigen::MatrixXcd sample_symbol(const Symbol& s, const QuadratureRule& rule) {
  Eigen::MatrixXcd phi(rule.n_r(), rule.n_theta());
  for (int i = 0; i < rule.n_r(); ++i)
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx w = s(rule.point(i, j));
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw EvaluationError("symbol not finite at ring " + std::to_string(i) + ", angle " +
                              std::to_string(j));
      phi(i, j) = w;
    }
  return phi;
}

}  // namespace

OperatorMatrix assemble_K(const Symbol& s, const BasisTable& basis, const QuadratureRule& rule,
                          AssemblyPath path, int columns) {
  if (basis.p() != 2.0) throw ParameterError("assemble_K needs a p = 2 basis");
  const int M = basis.size();
  const int N = columns > 0 ? columns : M;
  if (N > M) throw ParameterError("assemble_K: more columns than basis functions");
  if (M >= rule.n_theta() / 2) throw AliasingError("assemble_K: basis too large for n_theta");
  const Weight& w = basis.weight();
  const Eigen::MatrixXcd phi = sample_symbol(s, rule);
  const Eigen::VectorXd inv_sqrt_h = basis.moments().cwiseSqrt().cwiseInverse();

  OperatorMatrix out;
  out.A = Eigen::MatrixXcd::Zero(M, N);
  out.weight = w.spec();
  out.symbol = s.spec();
  out.N = N;
  out.rows = M;
  out.n_r = rule.n_r();
  out.n_theta = rule.n_theta();
  out.path = path;

  if (path == AssemblyPath::fast) {
    // coeff(i, n) = ring weight * omega(r_i) * r_i^n / sqrt(h_n)
    Eigen::MatrixXd coeff(rule.n_r(), M);
    for (int i = 0; i < rule.n_r(); ++i) {
      const double r = rule.radial()[i].r;
      double rn = rule.ring_weight(i) * w.omega(r);
      for (int n = 0; n < M; ++n) {
        coeff(i, n) = rn * inv_sqrt_h(n);
        rn *= r;
      }
    }
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Ones(rule.n_r(), rule.n_theta());
    for (int m = 0; m < N; ++m) {
      if (m > 0) power = power.cwiseProduct(phi);
      const Eigen::MatrixXcd modes = angular_fourier_modes(power, M);
      out.A.col(m) = (coeff.cast<cplx>().cwiseProduct(modes)).colwise().sum().transpose() *
                     inv_sqrt_h(m);
    }
    return out;
  }

  // Dense: A = Z^H W V with V(p, m) = phi_p^m, Z(p, n) = z_p^n, ring by ring.
  Eigen::MatrixXcd V(rule.n_theta(), N);
  Eigen::MatrixXcd Z(rule.n_theta(), M);
  for (int i = 0; i < rule.n_r(); ++i) {
    const double wi = rule.ring_weight(i) * w.omega(rule.radial()[i].r) / rule.n_theta();
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx z = rule.point(i, j);
      cplx vp = 1.0;
      cplx zp = 1.0;
      for (int n = 0; n < M; ++n) {
        if (n < N) V(j, n) = vp;
        Z(j, n) = zp;
        vp *= phi(i, j);
        zp *= z;
      }
    }
    out.A.noalias() += wi * Z.adjoint() * V;
  }
  out.A = inv_sqrt_h.asDiagonal() * out.A * inv_sqrt_h.head(N).asDiagonal();
  return out;
}

NormBound c_phi_norm_bound(const Symbol& s, const Weight& w, const QuadratureRule& rule, double p,
                           double cap) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rule.n_r(); ++i) {
    const double r = rule.radial()[i].r;
    const double lw = w.log_omega(r);
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx z = rule.point(i, j);
      const double J = jacobian(s, z);
      if (!(J > 0.0))
        throw DegenerateDerivativeError("c_phi_norm_bound: Jacobian not positive at ring " +
                                        std::to_string(i) + ", angle " + std::to_string(j));
      const double v = lw - w.log_omega(std::abs(s(z))) - std::log(J);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // The grid stops near 1e-5 from the origin; a power-law Jacobian there
  // (stretch maps) shows up as a ratio that keeps growing further in.
  double probe_hi = -std::numeric_limits<double>::infinity();
  double probe_lo = std::numeric_limits<double>::infinity();
  for (int k = 6; k <= 12; ++k) {
    const cplx z = std::polar(std::pow(10.0, -k), 0.3);
    const double J = jacobian(s, z);
    if (!(J > 0.0) || !std::isfinite(J)) continue;
    const double v = w.log_omega(std::abs(z)) - w.log_omega(std::abs(s(z))) - std::log(J);
    probe_hi = std::max(probe_hi, v);
    probe_lo = std::min(probe_lo, v);
  }
  NormBound b;
  b.b1 = std::exp(lo);
  b.b2 = std::exp(hi);
  b.norm_upper = std::exp(hi / p);
  b.inverse_norm_upper = std::exp(-lo / p);
  b.unbounded_evidence = hi > std::log(cap) || -lo > std::log(cap) ||
                         probe_hi > hi + std::log(10.0) || probe_lo < lo - std::log(10.0);
  return b;
}

SpectralDiagnostics spectral_diagnostics(const Eigen::MatrixXcd& A) {
  if (A.cols() == 0 || A.rows() < A.cols())
    throw ParameterError("spectral_diagnostics: need a nonempty square or tall matrix");
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  if (svd.info() != Eigen::Success) throw NumericalError("spectral_diagnostics: SVD failed");
  SpectralDiagnostics d;
  d.singular_values = svd.singularValues();
  if (!d.singular_values.allFinite()) throw NumericalError("spectral_diagnostics: non-finite SVD");
  d.sigma_max = d.singular_values(0);
  d.sigma_min = d.singular_values(d.singular_values.size() - 1);
  d.cond = d.sigma_min > 0.0 ? d.sigma_max / d.sigma_min : std::numeric_limits<double>::infinity();
  const int half_c = std::max<int>(1, static_cast<int>(A.cols()) / 2);
  const int half_r = std::max<int>(half_c, static_cast<int>(A.rows()) / 2);
  const Eigen::BDCSVD<Eigen::MatrixXcd> hs(A.topLeftCorner(half_r, half_c));
  d.sigma_min_half = hs.singularValues()(half_c - 1);
  d.trend = d.sigma_min_half > 0.0 ? d.sigma_min / d.sigma_min_half : 0.0;
  d.drifting = d.trend < 0.5;
  return d;
}

std::vector<cplx> default_probes() {
  std::vector<cplx> probes;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 8; ++j) probes.push_back(std::polar(0.95 * i / 15.0, 2.0 * kPi * j / 8.0));
  return probes;
}

CarlesonResult carleson_ratio(const Symbol& s, const BasisTable& basis, const QuadratureRule& rule,
                              const std::vector<cplx>& probes) {
  if (basis.p() != 2.0) throw ParameterError("carleson_ratio needs a p = 2 basis");
  const int N = basis.size();
  const Weight& w = basis.weight();
  const Eigen::MatrixXcd phi = sample_symbol(s, rule);
  const Eigen::VectorXd inv_sqrt_h = basis.moments().cwiseSqrt().cwiseInverse();

  // G(n, m) = <e_m o phi, e_n o phi>, G0(n, m) = <e_m, e_n>, both on the rule.
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd G0 = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd V(rule.n_theta(), N);
  Eigen::MatrixXcd Z(rule.n_theta(), N);
  for (int i = 0; i < rule.n_r(); ++i) {
    const double wi = rule.ring_weight(i) * w.omega(rule.radial()[i].r) / rule.n_theta();
    for (int j = 0; j < rule.n_theta(); ++j) {
      const cplx z = rule.point(i, j);
      cplx vp = 1.0;
      cplx zp = 1.0;
      for (int n = 0; n < N; ++n) {
        V(j, n) = vp * inv_sqrt_h(n);
        Z(j, n) = zp * inv_sqrt_h(n);
        vp *= phi(i, j);
        zp *= z;
      }
    }
    G.noalias() += wi * V.adjoint() * V;
    G0.noalias() += wi * Z.adjoint() * Z;
  }

  CarlesonResult res;
  res.probes = probes;
  res.max_ratio = 0.0;
  for (const cplx& p : probes) {
    Eigen::VectorXcd c(N);
    for (int n = 0; n < N; ++n) c(n) = std::conj(basis.e(n, p));
    const double num = (c.adjoint() * G * c)(0).real();
    const double den = (c.adjoint() * G0 * c)(0).real();
    res.ratios.push_back(num / den);
    res.max_ratio = std::max(res.max_ratio, num / den);
  }
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(
      G, G0, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  res.restricted_norm_sq = ges.eigenvalues().maxCoeff();
  return res;
}

}  // namespace pcop
