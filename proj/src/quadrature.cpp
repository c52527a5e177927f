#include "zigzag/quadrature.hpp"

#include <map>
#include <tuple>

namespace zz {

const GaussRule<Real>& cached_gauss_jacobi(int n, Real alpha, Real beta) {
  thread_local std::map<std::tuple<int, Real, Real>, GaussRule<Real>> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gauss_jacobi<Real>(n, alpha, beta)).first;
  return it->second;
}

}  // namespace zz
