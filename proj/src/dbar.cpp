#include "pcop/dbar.hpp"

#include <algorithm>
#include <cmath>

#include "pcop/quadrature.hpp"

namespace pcop {

BiPoly dbar_apply(const BiPoly& f) {
  const int A = f.deg_z();
  const int B = f.deg_zbar();
  BiPoly g(A, std::max(B - 1, 0));
  for (int a = 0; a <= A; ++a)
    for (int b = 1; b <= B; ++b) g.c(a, b - 1) = double(b) * f.c(a, b);
  return g;
}

BiPoly dbar_right_inverse(const BiPoly& g) {
  BiPoly u(g.deg_z(), g.deg_zbar() + 1);
  for (int a = 0; a <= g.deg_z(); ++a)
    for (int b = 0; b <= g.deg_zbar(); ++b) u.c(a, b + 1) = g.c(a, b) / double(b + 1);
  return u;
}

BiPoly project(const BiPoly& f, const BasisTable& basis) {
  if (basis.p() != 2.0) throw ParameterError("project needs a p = 2 basis");
  if (f.deg_z() >= basis.size()) throw ParameterError("project: basis too small for degree");
  BiPoly out(f.deg_z(), 0);
  for (int a = 0; a <= f.deg_z(); ++a)
    for (int b = 0; b <= std::min(a, f.deg_zbar()); ++b)
      out.c(a - b, 0) += f.c(a, b) * (basis.h(a) / basis.h(a - b));
  return out;
}

BiPoly M_apply(const BiPoly& g, const BasisTable& basis) {
  BiPoly u = dbar_right_inverse(g);
  const BiPoly pu = project(u, basis);
  u.c.col(0) -= pu.c.col(0);
  return u;
}

cplx inner_product(const BiPoly& f, const BiPoly& g, const BasisTable& basis) {
  cplx s = 0.0;
  for (int a = 0; a <= f.deg_z(); ++a)
    for (int b = 0; b <= f.deg_zbar(); ++b) {
      if (f.c(a, b) == 0.0) continue;
      for (int d = 0; d <= g.deg_zbar(); ++d) {
        const int c = a - b + d;
        if (c < 0 || c > g.deg_z()) continue;
        if (a + d >= basis.size()) throw ParameterError("inner_product: basis too small");
        s += f.c(a, b) * std::conj(g.c(c, d)) * basis.h(a + d);
      }
    }
  return s;
}

namespace {

// Legendre polynomials P_0..P_n at x.
Eigen::VectorXd legendre(int n, double x) {
  Eigen::VectorXd p(n + 1);
  p(0) = 1.0;
  if (n >= 1) p(1) = x;
  for (int k = 2; k <= n; ++k) p(k) = ((2 * k - 1) * x * p(k - 1) - (k - 1) * p(k - 2)) / k;
  return p;
}

}  // namespace

Estimate estimate_d_M(const Weight& w, int D) {
  if (D < 0) throw ParameterError("estimate_d_M: bidegree must be >= 0");

  // Quadrature in s = |z|^2 on [0, 1], where int f(|z|^2) dA = int_0^1 f(s) ds.
  std::vector<double> cuts;
  for (double r : w.radial_breakpoints()) cuts.push_back(r * r);
  for (double t : graded_breakpoints(6)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const int per_panel = std::max(48, 2 * D + 8);
  const GaussRule<double> sq = composite_gauss_legendre(cuts, per_panel);
  const int S = static_cast<int>(sq.nodes.size());
  Eigen::VectorXd om(S);
  for (int i = 0; i < S; ++i) om(i) = w.omega(std::sqrt(sq.nodes[i]));
  const GaussRule<double> gx = gauss_legendre_on(2 * D + 4, 0.0, 1.0);

  double best = 0.0;
  int best_k = 0;
  for (int k = -D; k <= D; ++k) {
    const int m = std::abs(k);
    const int n = D - m;  // degree of q in s
    // Input g = z^k q(s) (k >= 0) or conj(z)^m q(s); q spans P_0..P_n(2s - 1).
    Eigen::MatrixXd Ain(S, n + 1);
    // Output radial factor F and output mode exponent.
    Eigen::MatrixXd F(S, n + 1);
    const int m_in = m;
    const int m_out = k >= 1 ? k - 1 : m + 1;
    for (int i = 0; i < S; ++i) {
      const double s = sq.nodes[i];
      Ain.row(i) = legendre(n, 2.0 * s - 1.0).transpose();
      // k >= 1: Q(s) = s int_0^1 q(s x) dx.  k <= 0: int_0^1 x^m q(s x) dx.
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(n + 1);
      for (std::size_t q = 0; q < gx.nodes.size(); ++q) {
        const double x = gx.nodes[q];
        const double wx = gx.weights[q] * (k >= 1 ? 1.0 : std::pow(x, m));
        acc += wx * legendre(n, 2.0 * s * x - 1.0);
      }
      F.row(i) = (k >= 1 ? s : 1.0) * acc.transpose();
    }
    if (k >= 1) {
      // Subtract the projection onto z^(k-1).
      double hk = 0.0;
      Eigen::VectorXd proj = Eigen::VectorXd::Zero(n + 1);
      for (int i = 0; i < S; ++i) {
        const double wi = sq.weights[i] * std::pow(sq.nodes[i], k - 1) * om(i);
        hk += wi;
        proj += wi * F.row(i).transpose();
      }
      proj /= hk;
      F.rowwise() -= proj.transpose();
    }
    for (int i = 0; i < S; ++i) {
      const double s = sq.nodes[i];
      Ain.row(i) *= std::sqrt(sq.weights[i] * std::pow(s, m_in) * om(i));
      F.row(i) *= std::sqrt(sq.weights[i] * std::pow(s, m_out) * om(i));
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Ain);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(n + 1).triangularView<Eigen::Upper>();
    const Eigen::VectorXd diag = R.diagonal().cwiseAbs();
    if (diag.minCoeff() <= 1e-12 * diag.maxCoeff())
      throw ConditioningError("estimate_d_M: input Gram matrix numerically singular at mode " +
                              std::to_string(k) + "; lower the bidegree");
    // X = F R^{-1}, via R^T X^T = F^T.
    const Eigen::MatrixXd X =
        R.transpose().triangularView<Eigen::Lower>().solve(F.transpose()).transpose();
    const double sv = Eigen::JacobiSVD<Eigen::MatrixXd>(X).singularValues()(0);
    if (sv > best) {
      best = sv;
      best_k = k;
    }
  }
  return {best, Provenance::estimated_lower_bound,
          "bidegree " + std::to_string(D) + ", maximizing mode " + std::to_string(best_k)};
}

}  // namespace pcop
