#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "zigzag/elliptic.hpp"

using namespace zz;

namespace {

// 30-digit reference values (mpmath ellipk), frozen.
struct Frozen {
  Real lambda;
  Real omega1;
  Real omega2_abs;
  Real ext;
};
constexpr Frozen kFrozen[] = {
    {-1.0, 5.24411510858423957, 5.24411510858423957, 2.0},
    {-0.1, 6.13437127885382747, 10.0038260422284048, 1.22640502802812914},
    {-1e-3, 6.28161539381260243, 19.3568498953821209, 0.649032815542076398},
    {-1e-6, 6.28318373638414320, 33.1761912663624515, 0.378776676679863648},
    {-1000.0, 0.612117339953995114, 0.198642120296233891, 6.16301657514678079},
};

Real spread(const std::vector<Real>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *hi;
}

}  // namespace

TEST_CASE("Carlson R_F known values") {
  CHECK(std::abs(carlson_rf(1.0, 2.0, 0.0) - 1.3110287771461) < 1e-13);
  CHECK(std::abs(carlson_rf(2.0, 3.0, 4.0) - 0.58408284167715) < 1e-13);
  CHECK(std::abs(carlson_rf(0.0, 1.0, 1.0) - oracle::pi / 2) < 1e-15);
  CHECK(std::abs(carlson_rf(4.0, 4.0, 4.0) - 0.5) < 1e-15);
  CHECK_THROWS_AS(carlson_rf(-1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("cross ratio") {
  CHECK(cross_ratio_lambda(kInfinity, -1.0, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(cross_ratio_lambda(0.0, 1.0, 2.0, 3.0) == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(std::abs(cross_ratio_lambda(0.0, 1.0, 3.0, kInfinity) - (1.0 - 3.0)) < 1e-15);
  CHECK(cross_ratio_lambda(0.0, 1.0 - 1e-9, 1.0, 2.0) < 0);
  CHECK(cross_ratio_lambda(0.0, 1.0 - 1e-9, 1.0, 2.0) > -1e-8);
  CHECK_THROWS_AS(cross_ratio_lambda(0.0, 1.0, 1.0, 2.0), DegenerateCrossRatio);
  CHECK_THROWS_AS(cross_ratio_lambda(kInfinity, 1.0, 2.0, kInfinity), DegenerateCrossRatio);

  std::mt19937 rng(4);
  std::uniform_real_distribution<Real> u(0.01, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Real x1 = -u(rng), x2 = x1 + u(rng), x3 = x2 + u(rng), x4 = x3 + u(rng);
    const Real l = cross_ratio_lambda(x1, x2, x3, x4);
    CHECK(l < 0);
    CHECK(std::abs(l - oracle::mobius_lambda(x1, x2, x3, x4)) < 1e-12 * std::abs(l));
    const Real a = u(rng), b = 5 * u(rng) - 7;
    const Real moved = cross_ratio_lambda(a * x1 + b, a * x2 + b, a * x3 + b, a * x4 + b);
    CHECK(std::abs(moved - l) < 1e-12 * std::abs(l));
  }
}

TEST_CASE("periods against frozen references and the quadrature oracle") {
  for (const Frozen& f : kFrozen) {
    const EllipticData d = elliptic_periods(f.lambda);
    CHECK(std::abs(d.omega1.imag()) == 0.0);
    CHECK(std::abs(d.omega1.real() - f.omega1) < 1e-12 * f.omega1);
    CHECK(std::abs(std::abs(d.omega2) - f.omega2_abs) < 1e-12 * f.omega2_abs);
    CHECK(d.tau().imag() > 0);
    CHECK(std::abs(extremal_length_quad(f.lambda) - f.ext) < 1e-12 * f.ext);

    CHECK(std::abs(d.omega1.real() - 2 * oracle::elliptic_short(f.lambda)) < 1e-12 * f.omega1);
    CHECK(std::abs(d.omega2.imag() - 2 * oracle::elliptic_long(f.lambda)) < 1e-12 * f.omega2_abs);
    CHECK(std::abs(extremal_length_quad(f.lambda) - oracle::ext_oracle(f.lambda)) < 1e-11 * f.ext);

    const EllipticData q = elliptic_periods_quadrature(f.lambda);
    CHECK(std::abs(q.omega1 - d.omega1) < 1e-11 * std::abs(d.omega1));
    CHECK(std::abs(q.omega2 - d.omega2) < 1e-11 * std::abs(d.omega2));
  }
  CHECK(std::abs(extremal_length_quad(-10.0) - 3.26156523219036817) < 1e-12 * 3.3);
  CHECK_THROWS_AS(elliptic_periods(0.0), DomainError);
  CHECK_THROWS_AS(elliptic_periods(0.5), DomainError);
  CHECK_THROWS_AS(extremal_length_quad(1.0), DomainError);
}

TEST_CASE("square point") {
  CHECK(std::abs(elliptic_periods(-1.0).tau() - Complex(0, 1)) < 1e-10);
  CHECK(std::abs(extremal_length_quad(-1.0) - 2.0) < 1e-12);
  CHECK(std::abs(oracle::ext_oracle(-1.0) - 2.0) < 1e-12);
}

TEST_CASE("omega1 follows 2 pi 2F1(1/2, 1/2; 1; lambda)") {
  // Hypergeometric coefficients ((1/2)_n / n!)^2: 1, 1/4, 9/64, 25/256.
  for (Real lambda : {-0.1, -0.05, -0.01, -1e-3}) {
    const Real series = 2 * kPi * (1 + lambda / 4 + 9 * lambda * lambda / 64 + 25 * std::pow(lambda, 3) / 256);
    CHECK(std::abs(elliptic_periods(lambda).omega1.real() - series) <= 10 * std::pow(lambda, 4) * 2 * kPi);
  }
  CHECK(std::abs(elliptic_periods(-1e-12).omega1.real() - 2 * kPi) < 1e-11);
}

TEST_CASE("tau grows like log(1/|lambda|)") {
  const Real t3 = elliptic_periods(-1e-3).tau().imag();
  const Real t6 = elliptic_periods(-1e-6).tau().imag();
  CHECK(t6 > t3);
  // Im tau = log(16/|lambda|) / pi + o(1).
  CHECK(std::abs(t3 - std::log(16e3) / kPi) < 1e-3);
  CHECK(std::abs(t6 - std::log(16e6) / kPi) < 1e-6);
}

TEST_CASE("ext is strictly increasing in |lambda|") {
  Real previous = 0;
  for (int e = -12; e <= 6; ++e) {
    const Real lambda = -std::pow(10.0, 0.5 * e);
    const Real x = extremal_length_quad(lambda);
    CHECK(x > previous);
    previous = x;
  }
}

TEST_CASE("degeneration law") {
  std::vector<Real> products;
  for (Real lambda : {-1e-3, -1e-4, -1e-5, -1e-6}) {
    products.push_back(extremal_length_quad(lambda) * std::log(1 / std::abs(lambda)));
  }
  CHECK(spread(products) < 0.15);

  // Least-squares C in ext ~ C / log(1/|lambda|) over 1e-4..1e-8.
  Real num = 0, den = 0;
  for (int e = 4; e <= 8; ++e) {
    const Real inv = 1 / std::log(std::pow(10.0, e));
    num += extremal_length_quad(-std::pow(10.0, -e)) * inv;
    den += inv * inv;
  }
  const Real c = num / den;
  const Real at6 = extremal_length_quad(-1e-6);
  CHECK(std::abs(at6 - c / std::log(1e6)) < 0.1 * at6);
}

TEST_CASE("extremal lengths from prevertices") {
  CHECK(extremal_lengths(Prevertices::base(0)).size() == 0);
  CHECK(extremal_lengths(Prevertices::base(1)).size() == 0);

  VectorXr pos(2);
  pos << 1.0, 1.7;
  const VectorXr e = extremal_lengths(Prevertices::from_positive(pos));
  REQUIRE(e.size() == 1);
  // lambda(0, 1, s2, inf) with (x1, x3, x4) -> (inf, 0, 1) is 1 - s2.
  CHECK(std::abs(e(0) - 2 * oracle::ext_oracle(1.0 - 1.7)) < 1e-11);

  std::mt19937 rng(8);
  std::uniform_real_distribution<Real> u(0.1, 2.0);
  for (int p = 2; p <= 6; ++p) {
    VectorXr gaps(p - 1);
    for (int j = 0; j < p - 1; ++j) gaps(j) = u(rng);
    const Prevertices s = Prevertices::from_gaps(p, gaps);
    const VectorXr base = extremal_lengths(s);
    REQUIRE(base.size() == p - 1);
    CHECK((base.array() > 0).all());

    const std::vector<double> f = [&] {
      const VectorXr v = s.full();
      return std::vector<double>(v.data() + p, v.data() + v.size());
    }();
    for (int k = 1; k <= p - 1; ++k) {
      const Real lambda = k + 2 <= p ? oracle::mobius_lambda(f[k - 1], f[k], f[k + 1], f[k + 2])
                                     : (f[k] - f[k + 1]) / (f[k] - f[k - 1]);
      CHECK(std::abs(base(k - 1) - 2 * oracle::ext_oracle(lambda)) < 1e-10 * base(k - 1));
    }
  }
}
