#pragma once

#include <string>
#include <vector>

#include "zigzag/common.hpp"
#include "zigzag/schwarz_christoffel.hpp"
#include "zigzag/zigzag.hpp"

namespace zz {

struct TraceRow {
  int step = 0;
  Real height = 0;
  Real gradient_norm = 0;
  Real stratum_distance = 0;
};

struct SolutionRecord {
  ZigzagParams zigzag;
  Prevertices prev_ne;
  Prevertices prev_sw;
  VectorXr e_ne;
  VectorXr e_sw;
  Real height = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

/// Sum over j of [exp(1/E_ne(j)) - exp(1/E_sw(j))]^2 + [E_ne(j) - E_sw(j)]^2.
/// Exponentials are formed in log space; log of each squared exponential
/// term is capped at 700.
Real height_from(const VectorXr& e_ne, const VectorXr& e_sw);

struct HeightOptions {
  ParameterSolveOptions parameter{};
};

/// Both parameter solves, both extremal-length vectors and D. The optional
/// prevertex guesses warm-start the solves.
SolutionRecord evaluate_height(const ZigzagParams& z, const HeightOptions& opts = {},
                               const Prevertices* guess_ne = nullptr,
                               const Prevertices* guess_sw = nullptr);

Real height(const ZigzagParams& z, const HeightOptions& opts = {});

/// Simplex tangent coordinates y_j = log(l_j / l_0), j = 1..p-1.
VectorXr to_tangent(const ZigzagParams& z);
ZigzagParams from_tangent(int genus, int turn_order, const VectorXr& y);

/// Central differences of D along the simplex directions e_m - e_0,
/// m = 1..p-1. Throws StepTooLarge unless stratum_distance(z) > 2h.
VectorXr grad_height_fd(const ZigzagParams& z, Real h = 1e-5, const HeightOptions& opts = {});

struct MinimizeOptions {
  Real tol = 1e-10;
  Real initial_step = 0.2;
  int max_evaluations = 3000;
  /// Points closer than this to the boundary evaluate to +inf.
  Real barrier = 1e-8;
  /// Newton steps on E_ne = E_sw before and after the simplex search.
  bool polish = true;
  HeightOptions height{};
};

/// Simplex descent of D followed by an optional Newton polish; converged
/// iff D < tol. A stalled search returns its best record unconverged.
SolutionRecord minimize(const ZigzagParams& z0, const MinimizeOptions& opts = {});

struct ContinuationOptions {
  Real eps = 0.05;
  int max_halvings = 4;
  MinimizeOptions minimize{};
};

/// Solutions of genus 0..p (or up to the first genus that failed).
struct Ladder {
  std::vector<SolutionRecord> records;
  bool complete = false;
  int failed_genus = -1;
  std::string message;
};

SolutionRecord base_solution(int genus, int turn_order);

Ladder solve_ladder(int genus, int turn_order, const ContinuationOptions& opts = {});

/// Genus-p record of the ladder; throws LadderFailure if any rung stalls.
SolutionRecord continuation_solve(int genus, int turn_order, const ContinuationOptions& opts = {});

/// Handle insertion on a converged parent.
ZigzagParams add_handle(const SolutionRecord& parent, Real eps);

}  // namespace zz
