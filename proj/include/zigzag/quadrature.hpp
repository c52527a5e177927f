#pragma once

#include <cmath>

#include <Eigen/Eigenvalues>

#include "zigzag/common.hpp"

namespace zz {

/// Nodes and weights of an n-point Gauss rule on [-1, 1].
template <typename Scalar>
struct GaussRule {
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;
};

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1],
/// alpha, beta > -1, built by Golub-Welsch from the monic three-term
/// recurrence. alpha = beta = 0 gives Gauss-Legendre.
template <typename Scalar>
GaussRule<Scalar> gauss_jacobi(int n, Scalar alpha, Scalar beta) {
  using std::lgamma;
  using std::exp;
  using std::sqrt;
  using std::log;
  if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
  if (!(alpha > -1) || !(beta > -1)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const Scalar ab = alpha + beta;
  MatrixX<Scalar> jacobi = MatrixX<Scalar>::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const Scalar two_k_ab = 2 * Scalar(k) + ab;
    Scalar diag;
    if (k == 0) {
      diag = (beta - alpha) / (ab + 2);
    } else {
      diag = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2));
    }
    jacobi(k, k) = diag;
    if (k + 1 < n) {
      const Scalar m = Scalar(k + 1);
      const Scalar t = 2 * m + ab;
      // The first coefficient is written in cancelled form; t - 1 vanishes
      // when alpha + beta = -1.
      const Scalar b =
          k == 0 ? 4 * (1 + alpha) * (1 + beta) / ((ab + 2) * (ab + 2) * (ab + 3))
                 : 4 * m * (m + alpha) * (m + beta) * (m + ab) / (t * t * (t + 1) * (t - 1));
      jacobi(k, k + 1) = jacobi(k + 1, k) = sqrt(b);
    }
  }

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(jacobi);
  const Scalar log_mu0 = (ab + 1) * log(Scalar(2)) + lgamma(alpha + 1) + lgamma(beta + 1) -
                         lgamma(ab + 2);
  const Scalar mu0 = exp(log_mu0);

  GaussRule<Scalar> rule;
  rule.nodes = eig.eigenvalues();
  rule.weights = mu0 * eig.eigenvectors().row(0).transpose().array().square();
  return rule;
}

template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n) {
  return gauss_jacobi<Scalar>(n, Scalar(0), Scalar(0));
}

/// Cached double-precision rule; the cache is per thread, so concurrent
/// callers never contend.
const GaussRule<Real>& cached_gauss_jacobi(int n, Real alpha, Real beta);

}  // namespace zz
