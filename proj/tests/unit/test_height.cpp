#include <doctest.h>

#include "zigzag/height.hpp"

using namespace zz;

namespace {

const SolutionRecord& solved(int genus) {
  static const SolutionRecord g2 = continuation_solve(2, 2);
  static const SolutionRecord g3 = continuation_solve(3, 2);
  return genus == 2 ? g2 : g3;
}

VectorXr lengths(std::initializer_list<Real> v) {
  VectorXr out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Real x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("height is zero without extremal lengths") {
  CHECK(height(ZigzagParams::base(0, 2)) == 0.0);
  CHECK(height(ZigzagParams::base(1, 2)) == 0.0);
  CHECK(height(ZigzagParams::base(1, 3)) == 0.0);
  CHECK(height_from(VectorXr(0), VectorXr(0)) == 0.0);
  CHECK(grad_height_fd(ZigzagParams::base(1, 2)).size() == 0);
}

TEST_CASE("height formula") {
  const VectorXr a = lengths({0.5, 2.0});
  const VectorXr b = lengths({0.4, 2.5});
  const Real expected = std::pow(std::exp(2.0) - std::exp(2.5), 2) + 0.01 +
                        std::pow(std::exp(0.5) - std::exp(0.4), 2) + 0.25;
  CHECK(std::abs(height_from(a, b) - expected) < 1e-12 * expected);
  CHECK(height_from(a, a) == 0.0);
  // Overflow guard: tiny extremal lengths give a large finite penalty.
  const Real capped = height_from(lengths({1e-4}), lengths({1.0}));
  CHECK(std::isfinite(capped));
  CHECK(capped > 1e300);
}

TEST_CASE("a generic zigzag has positive height") {
  const SolutionRecord r = evaluate_height(ZigzagParams::make(3, 2, lengths({0.3, 0.4, 0.3})));
  CHECK(r.height > 1e-3);
  CHECK(r.e_ne.size() == 2);
  CHECK((r.e_ne.array() > 0).all());
  CHECK((r.e_sw.array() > 0).all());
  CHECK(std::abs(r.height - height_from(r.e_ne, r.e_sw)) < 1e-15 * r.height);
}

TEST_CASE("genus 1 and genus 0 solve trivially") {
  for (int k : {2, 3}) {
    const SolutionRecord r1 = continuation_solve(1, k);
    CHECK(r1.converged);
    CHECK(r1.height == 0.0);
    CHECK(r1.prev_ne.full().isApprox(lengths({-1, 0, 1})));
    const SolutionRecord r0 = continuation_solve(0, k);
    CHECK(r0.converged);
    CHECK(r0.zigzag.side_lengths.size() == 0);
  }
  const SolutionRecord m = minimize(ZigzagParams::base(1, 2));
  CHECK(m.converged);
  CHECK(m.height == 0.0);
}

TEST_CASE("genus 2 solution") {
  const SolutionRecord& r = solved(2);
  REQUIRE(r.converged);
  CHECK(r.height < 1e-10);
  CHECK(std::abs(r.e_ne(0) - r.e_sw(0)) < 1e-6);
  // Frozen: independent high-precision solve of E_ne(l) = E_sw(l).
  CHECK(std::abs(r.zigzag.side_lengths(0) - 0.566672260829188470) < 1e-8);
  CHECK((r.prev_ne.full() - r.prev_sw.full()).cwiseAbs().maxCoeff() < 1e-8);

  const VectorXr g = grad_height_fd(r.zigzag);
  CHECK(g.norm() < 1e-6);
}

TEST_CASE("finite-difference gradient") {
  const ZigzagParams z = ZigzagParams::make(3, 2, lengths({0.3, 0.4, 0.3}));
  const VectorXr g1 = grad_height_fd(z, 1e-4);
  const VectorXr g2 = grad_height_fd(z, 5e-5);
  // Central differences: halving h cuts the error by about 4.
  const VectorXr g3 = grad_height_fd(z, 2.5e-5);
  const Real e12 = (g1 - g2).norm(), e23 = (g2 - g3).norm();
  CHECK(e23 < e12);
  CHECK((g2 - g3).norm() < 1e-6 * g3.norm());
  CHECK(g3.norm() > 0);

  // Directional check against a one-sided secant along e_1 - e_0.
  const Real h = 1e-6;
  const Real up = height(ZigzagParams::make(3, 2, lengths({0.3 - h, 0.4 + h, 0.3})));
  const Real down = height(ZigzagParams::make(3, 2, lengths({0.3 + h, 0.4 - h, 0.3})));
  CHECK(std::abs((up - down) / (2 * h) - g3(0)) < 1e-4 * std::abs(g3(0)) + 1e-8);

  CHECK_THROWS_AS(grad_height_fd(ZigzagParams::make(2, 2, lengths({1.0 - 1e-6, 1e-6})), 1e-5), StepTooLarge);
}

TEST_CASE("minimize trace is monotone") {
  const SolutionRecord r = minimize(ZigzagParams::make(3, 2, lengths({0.3, 0.4, 0.3})));
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().step == 0);
  for (size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].height <= r.trace[i - 1].height);
    CHECK(r.trace[i].stratum_distance > 0);
  }
  CHECK(r.trace.back().height == r.height);
  if (r.converged) {
    CHECK(r.height < 1e-10);
    CHECK((r.e_ne - r.e_sw).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("genus 2 from the handle start") {
  const SolutionRecord parent = continuation_solve(1, 2);
  const SolutionRecord r = minimize(add_handle(parent, 0.05));
  CHECK(r.converged);
  CHECK(r.height < 1e-10);
  CHECK(std::abs(r.zigzag.side_lengths(0) - solved(2).zigzag.side_lengths(0)) < 1e-7);
}

TEST_CASE("genus 3 solution and isolation") {
  for (int p : {2, 3}) {
    const SolutionRecord& r = solved(p);
    REQUIRE(r.converged);
    CHECK(r.height < 1e-10);
    const VectorXr y = to_tangent(r.zigzag);
    for (int m = 0; m < p - 1; ++m) {
      for (Real s : {-1e-3, 1e-3}) {
        VectorXr yy = y;
        yy(m) += s;
        CHECK(height(from_tangent(p, 2, yy)) > r.height);
      }
    }
    for (int m = 1; m < p; ++m) {
      for (Real s : {-1e-3, 1e-3}) {
        VectorXr l = r.zigzag.side_lengths;
        l(m) += s;
        l(0) -= s;
        CHECK(height(ZigzagParams::make(p, 2, l)) > r.height);
      }
    }
  }
  const VectorXr l = solved(3).zigzag.side_lengths;
  CHECK(std::abs(l(0) - 0.32638959315014) < 1e-8);
  CHECK(std::abs(l(1) - 0.40744795568217) < 1e-8);
  CHECK(std::abs(l(2) - 0.26616245116769) < 1e-8);
}

TEST_CASE("height grows toward the boundary of Z_3") {
  for (int side = 0; side < 3; ++side) {
    std::vector<Real> values;
    for (int e = 1; e <= 6; ++e) {
      VectorXr l = lengths({0.3, 0.4, 0.3});
      l(side) *= std::pow(10.0, -e);
      values.push_back(height(ZigzagParams::make(3, 2, l)));
    }
    // Eventually increasing: the last three samples climb.
    CHECK(values[3] < values[4]);
    CHECK(values[4] < values[5]);
    CHECK(values.back() > values.front());
  }
}

TEST_CASE("tangent coordinates round trip") {
  const ZigzagParams z = ZigzagParams::make(4, 2, lengths({0.1, 0.2, 0.3, 0.4}));
  const ZigzagParams back = from_tangent(4, 2, to_tangent(z));
  CHECK((back.side_lengths - z.side_lengths).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ladder failure is reported") {
  ContinuationOptions opts;
  opts.max_halvings = 0;
  opts.minimize.polish = false;
  opts.minimize.max_evaluations = 3;
  const Ladder ladder = solve_ladder(3, 2, opts);
  CHECK_FALSE(ladder.complete);
  CHECK(ladder.failed_genus == 2);
  // Converged rungs 0 and 1, then the best unconverged genus-2 record.
  REQUIRE(ladder.records.size() == 3);
  CHECK(ladder.records[1].converged);
  CHECK_FALSE(ladder.records[2].converged);
  CHECK_FALSE(ladder.message.empty());
  CHECK_THROWS_AS(continuation_solve(3, 2, opts), LadderFailure);

  CHECK_THROWS_AS(add_handle(ladder.records.back(), 0.05), DomainError);
}

TEST_CASE("turn order 3") {
  const SolutionRecord r = continuation_solve(2, 3);
  CHECK(r.converged);
  CHECK(r.height < 1e-10);
  CHECK(std::abs(r.zigzag.side_lengths(0) - 0.5509668857) < 1e-9);
}
