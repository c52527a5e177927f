#include "zigzag/elliptic.hpp"

#include <cmath>

namespace zz {

Real cross_ratio_lambda(ExtendedReal x1, ExtendedReal x2, ExtendedReal x3, ExtendedReal x4) {
  const int infinite = !x1 + !x2 + !x3 + !x4;
  if (infinite > 1) throw DegenerateCrossRatio("at most one point may be infinite");
  const ExtendedReal pts[4] = {x1, x2, x3, x4};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (pts[a] && pts[b] && *pts[a] == *pts[b]) throw DegenerateCrossRatio("coincident points");
    }
  }
  if (!x1) return (*x2 - *x3) / (*x4 - *x3);
  if (!x2) return (*x4 - *x1) / (*x4 - *x3);
  if (!x3) return (*x4 - *x1) / (*x2 - *x1);
  if (!x4) return (*x2 - *x3) / (*x2 - *x1);
  return (*x2 - *x3) * (*x4 - *x1) / ((*x2 - *x1) * (*x4 - *x3));
}

EllipticData elliptic_periods(Real lambda) {
  if (!(lambda < 0)) throw DomainError("elliptic_periods requires lambda < 0");
  EllipticData d;
  d.lambda = lambda;
  // int_lambda^0 du / sqrt(u (u-1) (u-lambda)) = 2 R_F(0, 1 - lambda, 1), and
  // int_0^1 = 2 R_F(0, -lambda, 1 - lambda) up to the factor i from the sign
  // of u (u - 1) (u - lambda) on (0, 1).
  d.omega1 = 4 * carlson_rf<Real>(0, 1 - lambda, 1);
  d.omega2 = 4.0 * kI * carlson_rf<Real>(0, -lambda, 1 - lambda);
  return d;
}

EllipticData elliptic_periods_quadrature(Real lambda) {
  if (!(lambda < 0)) throw DomainError("elliptic_periods requires lambda < 0");
  // Both segment integrands are |u|^{-1/2} |u-1|^{-1/2} |u-lambda|^{-1/2};
  // reuse the singular-product quadrature with modulus weights.
  SingularProduct f;
  f.points = {lambda, 0.0, 1.0};
  f.exponents = {-0.5, -0.5, -0.5};
  QuadratureOptions opts;
  opts.rel_tol = 1e-14;
  auto modulus_integral = [&](Real a, Real b) {
    // On a real segment with endpoints at singular points the upper
    // half-plane branch has constant phase; strip it.
    const Complex v = integrate_segment(f, a, b, opts).value;
    return std::abs(v);
  };
  EllipticData d;
  d.lambda = lambda;
  d.omega1 = 2 * modulus_integral(lambda, 0.0);
  d.omega2 = 2.0 * kI * modulus_integral(0.0, 1.0);
  return d;
}

Real extremal_length_quad(Real lambda) {
  const EllipticData d = elliptic_periods(lambda);
  const Real det = std::imag(std::conj(d.omega1) * d.omega2);
  return 2 * std::norm(d.omega1) / det;
}

VectorXr extremal_lengths(const Prevertices& prev) {
  const int p = prev.genus();
  VectorXr e(std::max(p - 1, 0));
  for (int k = 1; k < p; ++k) {
    const ExtendedReal x4 = (k + 2 <= p) ? ExtendedReal(prev(k + 2)) : kInfinity;
    const Real lambda = cross_ratio_lambda(prev(k - 1), prev(k), prev(k + 1), x4);
    e(k - 1) = 2 * extremal_length_quad(lambda);
  }
  return e;
}

}  // namespace zz
