#pragma once

#include <Eigen/Dense>

#include "pcop/bergman.hpp"
#include "pcop/common.hpp"

namespace pcop {

/// sum c(a, b) z^a conj(z)^b over 0 <= a, b < rows/cols of the coefficient
/// matrix.
template <typename Scalar = cplx>
struct BiPolynomial {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c;

  BiPolynomial() = default;
  BiPolynomial(int da, int db) : c(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(da + 1, db + 1)) {}

  static BiPolynomial monomial(int a, int b, Scalar coeff = Scalar(1)) {
    BiPolynomial p(a, b);
    p.c(a, b) = coeff;
    return p;
  }

  int deg_z() const { return static_cast<int>(c.rows()) - 1; }
  int deg_zbar() const { return static_cast<int>(c.cols()) - 1; }

  Scalar operator()(const std::complex<double>& z) const {
    const std::complex<double> zb = std::conj(z);
    Scalar s(0);
    std::complex<double> za = 1.0;
    for (int a = 0; a < c.rows(); ++a) {
      std::complex<double> zbb = 1.0;
      for (int b = 0; b < c.cols(); ++b) {
        s += c(a, b) * za * zbb;
        zbb *= zb;
      }
      za *= z;
    }
    return s;
  }
};

using BiPoly = BiPolynomial<cplx>;

/// d/d(conj z), coefficient-exact.
BiPoly dbar_apply(const BiPoly& f);

/// The antiderivative in conj(z): u(a, b+1) = g(a, b) / (b + 1).
BiPoly dbar_right_inverse(const BiPoly& g);

/// P_omega applied to a bipolynomial: each z^a conj(z)^b with a >= b maps to
/// (h_a / h_(a-b)) z^(a-b). The moments come from the p = 2 basis, which must
/// have at least deg_z + 1 entries.
BiPoly project(const BiPoly& f, const BasisTable& basis);

/// M g = u - P_omega u with u = dbar_right_inverse(g).
BiPoly M_apply(const BiPoly& g, const BasisTable& basis);

/// <f, g>_omega from exact radial moments:
/// <z^a conj(z)^b, z^c conj(z)^d> = [a - b = c - d] h_(a + d).
cplx inner_product(const BiPoly& f, const BiPoly& g, const BasisTable& basis);

/// Lower bound for ||M|| on span{z^a conj(z)^b : a, b <= D}. The maximal
/// Rayleigh quotient ||Mg|| / ||g|| is computed one angular mode at a time
/// in an orthonormalized (shifted-Legendre in |z|^2) basis.
Estimate estimate_d_M(const Weight& w, int D);

}  // namespace pcop
