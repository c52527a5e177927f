#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "zigzag/common.hpp"
#include "zigzag/schwarz_christoffel.hpp"

namespace zz {

/// Carlson's symmetric integral R_F(x, y, z) for x, y, z >= 0 with at most
/// one zero, by the duplication theorem.
template <typename Scalar>
Scalar carlson_rf(Scalar x, Scalar y, Scalar z) {
  using std::abs;
  using std::max;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0) throw DomainError("carlson_rf: negative argument");
  const Scalar tol = pow(3 * std::numeric_limits<Scalar>::epsilon(), Scalar(1) / 6);
  Scalar a = (x + y + z) / 3;
  const Scalar q = max({abs(a - x), abs(a - y), abs(a - z)}) / tol;
  Scalar scale = 1;
  while (q * scale >= abs(a)) {
    const Scalar sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Scalar lambda = sx * (sy + sz) + sy * sz;
    x = (x + lambda) / 4;
    y = (y + lambda) / 4;
    z = (z + lambda) / 4;
    a = (a + lambda) / 4;
    scale /= 4;
  }
  const Scalar X = (a - x) / a;
  const Scalar Y = (a - y) / a;
  const Scalar Z = -(X + Y);
  const Scalar e2 = X * Y - Z * Z;
  const Scalar e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / sqrt(a);
}

/// A real point or the point at infinity.
using ExtendedReal = std::optional<Real>;
inline constexpr std::nullopt_t kInfinity = std::nullopt;

/// Image of x2 under the Mobius map sending (x1, x3, x4) to (inf, 0, 1).
/// Negative for x1 < x2 < x3 < x4 (cyclically ordered on the circle).
Real cross_ratio_lambda(ExtendedReal x1, ExtendedReal x2, ExtendedReal x3, ExtendedReal x4);

/// Periods of du / sqrt(u (u - 1) (u - lambda)) for lambda < 0.
/// omega1 encircles the short cut [lambda, 0] (real, tends to 2 pi as
/// lambda -> 0-); omega2 encircles [0, 1].
struct EllipticData {
  Real lambda = 0;
  Complex omega1;
  Complex omega2;

  Complex tau() const { return omega2 / omega1; }
};

EllipticData elliptic_periods(Real lambda);
/// Same periods by Gauss-Jacobi quadrature of the real segment integrals.
EllipticData elliptic_periods_quadrature(Real lambda);

/// 2 |omega1|^2 / Im(conj(omega1) omega2).
Real extremal_length_quad(Real lambda);

/// E(k) = 2 ext(lambda(s_{k-1}, s_k, s_{k+1}, s_{k+2})), k = 1..p-1, with
/// s_{p+1} the point at infinity.
VectorXr extremal_lengths(const Prevertices& prev);

}  // namespace zz
