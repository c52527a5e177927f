#include "zigzag/height.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "zigzag/elliptic.hpp"
#include "zigzag/nelder_mead.hpp"

namespace zz {

namespace {

constexpr Real kLogCap = 700.0;

// [exp(a) - exp(b)]^2 without forming exp(a) or exp(b).
Real squared_exp_difference(Real a, Real b) {
  if (a == b) return 0.0;
  const Real hi = std::max(a, b);
  const Real log_abs = hi + std::log(-std::expm1(-std::abs(a - b)));
  return std::exp(std::min(2 * log_abs, kLogCap));
}

}  // namespace

Real height_from(const VectorXr& e_ne, const VectorXr& e_sw) {
  if (e_ne.size() != e_sw.size()) throw DomainError("extremal-length vectors differ in size");
  Real d = 0;
  for (Eigen::Index j = 0; j < e_ne.size(); ++j) {
    d += squared_exp_difference(1 / e_ne(j), 1 / e_sw(j));
    const Real diff = e_ne(j) - e_sw(j);
    d += diff * diff;
  }
  return d;
}

SolutionRecord evaluate_height(const ZigzagParams& z, const HeightOptions& opts,
                               const Prevertices* guess_ne, const Prevertices* guess_sw) {
  SolutionRecord rec;
  rec.zigzag = canonicalize(z);
  const auto ne = ExponentPattern::make(Orientation::NE, z.genus, z.turn_order);
  const auto sw = ExponentPattern::make(Orientation::SW, z.genus, z.turn_order);
  rec.prev_ne = solve_parameter_problem(rec.zigzag, ne, opts.parameter, guess_ne);
  rec.prev_sw = solve_parameter_problem(rec.zigzag, sw, opts.parameter, guess_sw);
  rec.e_ne = extremal_lengths(rec.prev_ne);
  rec.e_sw = extremal_lengths(rec.prev_sw);
  rec.height = height_from(rec.e_ne, rec.e_sw);
  return rec;
}

Real height(const ZigzagParams& z, const HeightOptions& opts) {
  return evaluate_height(z, opts).height;
}

VectorXr to_tangent(const ZigzagParams& z) {
  VectorXr y(std::max(z.genus - 1, 0));
  for (int j = 1; j < z.genus; ++j) y(j - 1) = std::log(z.side_lengths(j) / z.side_lengths(0));
  return y;
}

ZigzagParams from_tangent(int genus, int turn_order, const VectorXr& y) {
  if (genus <= 1) return ZigzagParams::base(genus, turn_order);
  if (y.size() != genus - 1) throw DomainError("tangent vector has the wrong size");
  VectorXr w(genus);
  w(0) = 0;
  w.tail(genus - 1) = y;
  w = (w.array() - w.maxCoeff()).exp().matrix();
  return ZigzagParams::make(genus, turn_order, w);
}

VectorXr grad_height_fd(const ZigzagParams& z, Real h, const HeightOptions& opts) {
  const int p = z.genus;
  VectorXr g(std::max(p - 1, 0));
  if (p < 2) return g;
  const ZigzagParams c = canonicalize(z);
  if (!(stratum_distance(c) > 2 * h)) throw StepTooLarge("finite-difference step reaches the boundary");
  const SolutionRecord centre = evaluate_height(c, opts);
  for (int m = 1; m < p; ++m) {
    auto shifted = [&](Real s) {
      VectorXr l = c.side_lengths;
      l(m) += s;
      l(0) -= s;
      return evaluate_height(ZigzagParams::make(p, c.turn_order, l), opts, &centre.prev_ne,
                             &centre.prev_sw)
          .height;
    };
    g(m - 1) = (shifted(h) - shifted(-h)) / (2 * h);
  }
  return g;
}

namespace {

// Gradient of D in tangent coordinates from the extremal-length Jacobians.
VectorXr height_gradient(const SolutionRecord& r, const MatrixXr& jne, const MatrixXr& jsw) {
  VectorXr g = VectorXr::Zero(jne.cols());
  for (Eigen::Index j = 0; j < r.e_ne.size(); ++j) {
    const Real a = r.e_ne(j), b = r.e_sw(j);
    const Real ea = std::exp(std::min(1 / a, kLogCap)), eb = std::exp(std::min(1 / b, kLogCap));
    const Real u = ea - eb;
    const Real v = a - b;
    const VectorXr du = -ea / (a * a) * jne.row(j).transpose() + eb / (b * b) * jsw.row(j).transpose();
    const VectorXr dv = (jne.row(j) - jsw.row(j)).transpose();
    g += 2 * (u * du + v * dv);
  }
  return g;
}

}  // namespace

namespace {

// Newton on E_ne(y) - E_sw(y) = 0 in tangent coordinates. A step is kept
// only if D decreases, so the trace stays monotone.
void polish(SolutionRecord& best, const MinimizeOptions& opts, std::vector<TraceRow>& trace) {
  const int p = best.zigzag.genus;
  const int k = best.zigzag.turn_order;
  const Real fd = 1e-6;
  for (int it = 0; it < 40 && best.height > 0; ++it) {
    const VectorXr y = to_tangent(best.zigzag);
    MatrixXr jne(p - 1, p - 1), jsw(p - 1, p - 1);
    try {
      for (int c = 0; c < p - 1; ++c) {
        VectorXr yp = y, ym = y;
        yp(c) += fd;
        ym(c) -= fd;
        const SolutionRecord rp =
            evaluate_height(from_tangent(p, k, yp), opts.height, &best.prev_ne, &best.prev_sw);
        const SolutionRecord rm =
            evaluate_height(from_tangent(p, k, ym), opts.height, &best.prev_ne, &best.prev_sw);
        jne.col(c) = (rp.e_ne - rm.e_ne) / (2 * fd);
        jsw.col(c) = (rp.e_sw - rm.e_sw) / (2 * fd);
      }
    } catch (const Error&) {
      return;
    }
    const VectorXr grad = height_gradient(best, jne, jsw);
    VectorXr step = (jne - jsw).fullPivLu().solve(-(best.e_ne - best.e_sw));
    if (!step.allFinite()) return;
    const Real size = step.lpNorm<Eigen::Infinity>();
    if (size > 1) step /= size;
    bool improved = false;
    Real alpha = 1;
    for (int ls = 0; ls < 30 && !improved; ++ls, alpha *= 0.5) {
      const ZigzagParams z = from_tangent(p, k, y + alpha * step);
      if (stratum_distance(z) < opts.barrier) continue;
      try {
        SolutionRecord r = evaluate_height(z, opts.height, &best.prev_ne, &best.prev_sw);
        if (r.height < best.height) {
          best = std::move(r);
          improved = true;
        }
      } catch (const Error&) {
      }
    }
    if (!improved) return;
    trace.push_back({static_cast<int>(trace.size()), best.height, grad.norm(),
                     stratum_distance(best.zigzag)});
  }
}

}  // namespace

SolutionRecord minimize(const ZigzagParams& z0, const MinimizeOptions& opts) {
  const int p = z0.genus;
  const int k = z0.turn_order;
  if (p < 2) {
    SolutionRecord rec = evaluate_height(z0, opts.height);
    rec.converged = rec.height < opts.tol;
    rec.trace.push_back({0, rec.height, 0.0, stratum_distance(rec.zigzag)});
    return rec;
  }
  if (!(stratum_distance(z0) > 0)) throw DegenerateSide("starting zigzag lies on the boundary");

  SolutionRecord best = evaluate_height(z0, opts.height);
  std::vector<TraceRow> trace;
  trace.push_back({0, best.height, 0.0, stratum_distance(best.zigzag)});
  // Polish target: far below tol so the prevertex tuples agree closely.
  const Real target = std::max(opts.tol * 1e-6, 1e-24);

  if (opts.polish) polish(best, opts, trace);
  if (best.height > target) {
    auto objective = [&](const VectorXr& y) -> Real {
      const ZigzagParams z = from_tangent(p, k, y);
      if (stratum_distance(z) < opts.barrier) return std::numeric_limits<Real>::infinity();
      try {
        if (k > 2 && !is_embedded(build_vertices(z))) return std::numeric_limits<Real>::infinity();
        SolutionRecord r = evaluate_height(z, opts.height, &best.prev_ne, &best.prev_sw);
        const Real value = r.height;
        if (value < best.height) best = std::move(r);
        return value;
      } catch (const Error&) {
        return std::numeric_limits<Real>::infinity();
      }
    };
    NelderMeadOptions<Real> nm;
    nm.initial_step = opts.initial_step;
    nm.max_evaluations = opts.max_evaluations;
    nm.stall_window = std::max(30, 10 * (p - 1));
    nm.target = opts.polish ? opts.tol * 1e-2 : 0.0;
    nelder_mead<Real>(objective, to_tangent(best.zigzag), nm, [&](const NelderMeadState<Real>& s) {
      if (s.iteration == 0) return;
      const VectorXr grad = simplex_gradient<Real>(*s.simplex, *s.values);
      const ZigzagParams zb = from_tangent(p, k, s.simplex->col(0));
      trace.push_back({static_cast<int>(trace.size()), (*s.values)(0),
                       grad.allFinite() ? grad.norm() : 0.0, stratum_distance(zb)});
    });
    if (opts.polish) polish(best, opts, trace);
  }

  best.trace = std::move(trace);
  best.converged = best.height < opts.tol && stratum_distance(best.zigzag) > 0;
  return best;
}

SolutionRecord base_solution(int genus, int turn_order) {
  if (genus > 1) throw DomainError("base solutions exist for genus 0 and 1 only");
  SolutionRecord rec = evaluate_height(ZigzagParams::base(genus, turn_order));
  rec.converged = true;
  rec.trace.push_back({0, rec.height, 0.0, stratum_distance(rec.zigzag)});
  return rec;
}

ZigzagParams add_handle(const SolutionRecord& parent, Real eps) {
  if (!parent.converged) throw DomainError("handle insertion requires a converged parent");
  return add_handle(parent.zigzag, eps);
}

Ladder solve_ladder(int genus, int turn_order, const ContinuationOptions& opts) {
  if (genus < 0) throw DomainError("genus must be non-negative");
  if (turn_order < 2) throw DomainError("turn order must be at least 2");
  Ladder ladder;
  ladder.records.push_back(base_solution(0, turn_order));
  if (genus >= 1) ladder.records.push_back(base_solution(1, turn_order));
  for (int g = 2; g <= genus; ++g) {
    const SolutionRecord& parent = ladder.records.back();
    Real eps = std::min(opts.eps, stratum_distance(parent.zigzag) / 5);
    SolutionRecord rec;
    std::ostringstream log;
    for (int attempt = 0; attempt <= opts.max_halvings; ++attempt, eps /= 2) {
      rec = minimize(add_handle(parent, eps), opts.minimize);
      if (rec.converged) break;
      log << "genus " << g << " eps " << eps << ": stalled at D = " << rec.height << "\n";
    }
    if (!rec.converged) {
      ladder.records.push_back(std::move(rec));
      ladder.failed_genus = g;
      ladder.message = log.str();
      return ladder;
    }
    ladder.records.push_back(std::move(rec));
  }
  ladder.complete = true;
  if (genus == 0) ladder.records.resize(1);
  return ladder;
}

SolutionRecord continuation_solve(int genus, int turn_order, const ContinuationOptions& opts) {
  Ladder ladder = solve_ladder(genus, turn_order, opts);
  if (!ladder.complete) throw LadderFailure(ladder.message);
  return ladder.records.back();
}

}  // namespace zz
