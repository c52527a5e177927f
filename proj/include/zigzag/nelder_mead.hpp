#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "zigzag/common.hpp"

namespace zz {

template <typename Scalar>
struct NelderMeadOptions {
  Scalar initial_step = Scalar(0.1);
  Scalar target = -std::numeric_limits<Scalar>::infinity();  // stop once best <= target
  Scalar x_tol = Scalar(1e-13);                               // simplex diameter
  int max_evaluations = 4000;
  /// Stop when the best value improved by less than the relative factor
  /// stall_ratio over the last stall_window iterations (0 disables).
  int stall_window = 0;
  Scalar stall_ratio = Scalar(1e-2);
};

template <typename Scalar>
struct NelderMeadState {
  int iteration = 0;
  int evaluations = 0;
  const MatrixX<Scalar>* simplex = nullptr;  // columns are vertices, sorted best first
  const VectorX<Scalar>* values = nullptr;
};

template <typename Scalar>
struct NelderMeadResult {
  VectorX<Scalar> x;
  Scalar value{};
  int evaluations = 0;
  int iterations = 0;
  bool reached_target = false;
  bool stalled = false;
};

/// Least-squares gradient of the linear model through the simplex
/// vertices; a by-product estimate, no extra evaluations.
template <typename Scalar>
VectorX<Scalar> simplex_gradient(const MatrixX<Scalar>& simplex, const VectorX<Scalar>& values) {
  const Eigen::Index n = simplex.rows();
  MatrixX<Scalar> dx(n, n);
  VectorX<Scalar> df(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    dx.row(c) = (simplex.col(c + 1) - simplex.col(0)).transpose();
    df(c) = values(c + 1) - values(0);
  }
  return dx.colPivHouseholderQr().solve(df);
}

/// Adaptive Nelder-Mead (dimension-dependent coefficients of Gao and Han).
/// Non-finite objective values act as a barrier.
template <typename Scalar, typename Objective>
NelderMeadResult<Scalar> nelder_mead(
    Objective&& f, const VectorX<Scalar>& x0, const NelderMeadOptions<Scalar>& opts,
    const std::function<void(const NelderMeadState<Scalar>&)>& on_iteration = {}) {
  const Eigen::Index n = x0.size();
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  auto eval = [&](const VectorX<Scalar>& x) {
    const Scalar v = f(x);
    return std::isfinite(static_cast<double>(v)) ? v : inf;
  };

  NelderMeadResult<Scalar> result;
  if (n == 0) {
    result.x = x0;
    result.value = eval(x0);
    result.evaluations = 1;
    result.reached_target = result.value <= opts.target;
    return result;
  }

  // Below dimension 2 the adaptive coefficients degenerate (shrink = 0);
  // they coincide with the standard ones at n = 2.
  const Scalar dim = Scalar(std::max<Eigen::Index>(n, 2));
  const Scalar reflect = 1;
  const Scalar expand = 1 + 2 / dim;
  const Scalar contract = Scalar(0.75) - 1 / (2 * dim);
  const Scalar shrink = 1 - 1 / dim;

  MatrixX<Scalar> simplex(n, n + 1);
  VectorX<Scalar> values(n + 1);
  simplex.col(0) = x0;
  for (Eigen::Index i = 0; i < n; ++i) {
    simplex.col(i + 1) = x0;
    simplex(i, i + 1) += opts.initial_step;
  }
  int evals = 0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    values(i) = eval(simplex.col(i));
    ++evals;
  }

  auto sort_simplex = [&] {
    std::vector<Eigen::Index> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
    MatrixX<Scalar> s(n, n + 1);
    VectorX<Scalar> v(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
      s.col(i) = simplex.col(order[i]);
      v(i) = values(order[i]);
    }
    simplex = s;
    values = v;
  };

  int iteration = 0;
  bool stalled = false;
  std::vector<Scalar> history;
  sort_simplex();
  while (true) {
    if (on_iteration) on_iteration({iteration, evals, &simplex, &values});
    if (values(0) <= opts.target) break;
    if (evals >= opts.max_evaluations) break;
    history.push_back(values(0));
    if (opts.stall_window > 0 && static_cast<int>(history.size()) > opts.stall_window) {
      const Scalar before = history[history.size() - 1 - opts.stall_window];
      if (std::isfinite(static_cast<double>(before)) &&
          values(0) > (1 - opts.stall_ratio) * before) {
        stalled = true;
        break;
      }
    }
    Scalar diameter = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      diameter = std::max(diameter, (simplex.col(i) - simplex.col(0)).template lpNorm<Eigen::Infinity>());
    }
    if (diameter < opts.x_tol) break;
    ++iteration;

    const VectorX<Scalar> centroid = simplex.leftCols(n).rowwise().mean();
    const VectorX<Scalar> worst = simplex.col(n);
    const VectorX<Scalar> xr = centroid + reflect * (centroid - worst);
    const Scalar fr = eval(xr);
    ++evals;
    if (fr < values(0)) {
      const VectorX<Scalar> xe = centroid + expand * (xr - centroid);
      const Scalar fe = eval(xe);
      ++evals;
      if (fe < fr) {
        simplex.col(n) = xe;
        values(n) = fe;
      } else {
        simplex.col(n) = xr;
        values(n) = fr;
      }
    } else if (fr < values(n - 1)) {
      simplex.col(n) = xr;
      values(n) = fr;
    } else {
      const bool outside = fr < values(n);
      const VectorX<Scalar> xc = outside ? VectorX<Scalar>(centroid + contract * (xr - centroid))
                                         : VectorX<Scalar>(centroid + contract * (worst - centroid));
      const Scalar fc = eval(xc);
      ++evals;
      if (fc < std::min(fr, values(n))) {
        simplex.col(n) = xc;
        values(n) = fc;
      } else {
        for (Eigen::Index i = 1; i <= n; ++i) {
          simplex.col(i) = simplex.col(0) + shrink * (simplex.col(i) - simplex.col(0));
          values(i) = eval(simplex.col(i));
          ++evals;
        }
      }
    }
    sort_simplex();
  }

  result.x = simplex.col(0);
  result.value = values(0);
  result.evaluations = evals;
  result.iterations = iteration;
  result.reached_target = values(0) <= opts.target;
  result.stalled = stalled;
  return result;
}

}  // namespace zz
