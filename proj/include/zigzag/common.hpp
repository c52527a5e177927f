#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace zz {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXr = VectorX<Real>;
using VectorXc = VectorX<Complex>;
using MatrixXr = MatrixX<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Complex kI{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ZZ_DECLARE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

ZZ_DECLARE_ERROR(DegenerateSide);
ZZ_DECLARE_ERROR(EmbeddingViolation);
ZZ_DECLARE_ERROR(EpsTooLarge);
ZZ_DECLARE_ERROR(IndexOutOfRange);
ZZ_DECLARE_ERROR(QuadratureFailure);
ZZ_DECLARE_ERROR(NoConvergence);
ZZ_DECLARE_ERROR(FitFailure);
ZZ_DECLARE_ERROR(DomainError);
ZZ_DECLARE_ERROR(DegenerateCrossRatio);
ZZ_DECLARE_ERROR(StepTooLarge);
ZZ_DECLARE_ERROR(NotReflexive);
ZZ_DECLARE_ERROR(PeriodMismatch);
ZZ_DECLARE_ERROR(LadderFailure);
ZZ_DECLARE_ERROR(FormatError);

#undef ZZ_DECLARE_ERROR

/// Argument of a point in the closed upper half-plane, in [0, pi].
/// Rounding that leaves a tiny negative imaginary part is folded back
/// onto the real axis.
inline Real arg_upper(Complex z) {
  const Real a = std::atan2(z.imag(), z.real());
  if (a < 0) return z.real() < 0 ? kPi : 0.0;
  return a;
}

}  // namespace zz
