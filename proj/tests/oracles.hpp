#pragma once
// Independent reference computations for the tests. Nothing here calls the
// library's quadrature, solvers or elliptic code.

#include <cmath>
#include <complex>
#include <array>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

// Double-exponential (tanh-sinh) rule on [a, b]. The integrand receives x
// together with x - a and b - x, computed without cancellation, so
// algebraic endpoint singularities are integrated to full precision.
template <typename T, typename F>
T tanh_sinh(F&& f, double a, double b, double tol = 1e-14) {
  const double half = 0.5 * (b - a);
  auto term = [&](double tau) -> T {
    const double u = 0.5 * pi * std::sinh(tau);
    const double da = (b - a) / (1 + std::exp(-2 * u));
    const double db = (b - a) / (1 + std::exp(2 * u));
    if (da <= 0 || db <= 0) return T(0);
    const double c = std::cosh(u);
    const double w = half * 0.5 * pi * std::cosh(tau) / (c * c);
    return w * f(a + da, da, db);
  };
  double h = 0.5;
  const double tmax = 6.0;
  T sum = term(0.0);
  for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
  T estimate = h * sum;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    T extra = T(0);
    for (double t = h; t <= tmax; t += 2 * h) extra += term(t) + term(-t);
    sum += extra;
    const T next = h * sum;
    if (std::abs(next - estimate) <= tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

// Composite Simpson rule with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, long n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3;
}

// Root of a monotone function on [lo, hi] by bisection.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Length of the image of [s[j], s[j+1]] under the map with derivative
// prod |t - s_m|^{e_m}.
inline double sc_side_length(const std::vector<double>& s, const std::vector<double>& e, int j) {
  auto f = [&](double x, double da, double db) {
    double v = std::pow(da, e[j]) * std::pow(db, e[j + 1]);
    for (std::size_t m = 0; m < s.size(); ++m) {
      if (static_cast<int>(m) == j || static_cast<int>(m) == j + 1) continue;
      v *= std::pow(std::abs(x - s[m]), e[m]);
    }
    return v;
  };
  return tanh_sinh<double>(f, s[j], s[j + 1]);
}

// Alternating exponents with ends at `end`, for points s_{-p}..s_p.
inline std::vector<double> alternating(int p, double end) {
  std::vector<double> e;
  for (int j = -p; j <= p; ++j) e.push_back(((j + p) % 2 == 0) ? end : -end);
  return e;
}

inline std::vector<double> symmetric(const std::vector<double>& positive) {
  std::vector<double> s;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) s.push_back(-*it);
  s.push_back(0.0);
  for (double x : positive) s.push_back(x);
  return s;
}

// Real segment integrals of 1/sqrt|u (u-1) (u-lambda)| over [lambda, 0]
// and [0, 1]; the periods are twice these.
inline double elliptic_short(double lambda) {
  return tanh_sinh<double>(
      [&](double u, double da, double db) { return 1 / std::sqrt(da * db * (1 - u)); }, lambda, 0.0);
}
inline double elliptic_long(double lambda) {
  return tanh_sinh<double>(
      [&](double u, double da, double db) { return 1 / std::sqrt(da * db * (u - lambda)); }, 0.0, 1.0);
}
inline double ext_oracle(double lambda) {
  return 2 * elliptic_short(lambda) / elliptic_long(lambda);
}

// Mobius image of x2 when (x1, x3, x4) -> (inf, 0, 1), all finite.
inline double mobius_lambda(double x1, double x2, double x3, double x4) {
  return (x2 - x3) * (x4 - x1) / ((x2 - x1) * (x4 - x3));
}

// Closed-form Enneper surface from g = z, dh = z dz.
inline std::array<double, 3> enneper(cplx z) {
  const cplx a = 0.5 * (z - z * z * z / 3.0);
  const cplx b = cplx(0, 0.5) * (z + z * z * z / 3.0);
  const cplx c = 0.5 * z * z;
  return {a.real(), b.real(), c.real()};
}

}  // namespace oracle
