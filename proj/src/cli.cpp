#include "zigzag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "zigzag/elliptic.hpp"
#include "zigzag/height.hpp"
#include "zigzag/io.hpp"
#include "zigzag/weierstrass.hpp"

namespace zz {

namespace {

struct SolveArgs {
  int genus = 0;
  int k = 2;
  double tol = 1e-10;
  double eps = 0.05;
  std::string out;
  std::string trace;
};

struct VerifyArgs {
  std::string path;
  double tol = 1e-8;
};

struct MeshArgs {
  std::string path;
  double radius = 0;
  int resolution = 32;
  std::string out = "surface.obj";
};

struct SweepArgs {
  std::vector<double> lambdas;
  std::string solution;
  int genus = 3;
  int j = 0;
  int m = 1;
  std::vector<double> deltas;
  std::string out;
};

void write_trace_csv(const std::string& path, const SolutionRecord& rec) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot write " + path);
  std::vector<std::vector<Real>> rows;
  for (const auto& r : rec.trace) {
    rows.push_back({static_cast<Real>(r.step), r.height, r.gradient_norm, r.stratum_distance});
  }
  write_csv(f, {"step", "height", "gradient_norm", "stratum_distance"}, rows);
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  ContinuationOptions opts;
  opts.eps = a.eps;
  opts.minimize.tol = a.tol;
  const std::string path = a.out.empty() ? "solution_g" + std::to_string(a.genus) + ".json" : a.out;
  const Ladder ladder = solve_ladder(a.genus, a.k, opts);
  if (!ladder.complete) {
    write_json(path + ".partial", partial_document(ladder));
    err << "ladder failed at genus " << ladder.failed_genus << "\n" << ladder.message;
    err << "partial ladder written to " << path << ".partial\n";
    return 2;
  }
  const SolutionRecord& rec = ladder.records.back();
  const WeierstrassData wd = build_weierstrass(rec);
  write_json(path, solution_document(rec, &wd));
  if (!a.trace.empty()) write_trace_csv(a.trace, rec);
  out << std::setprecision(17) << "genus " << rec.zigzag.genus << " k " << rec.zigzag.turn_order
      << " D = " << rec.height << "\n";
  out << "side lengths:";
  for (Eigen::Index i = 0; i < rec.zigzag.side_lengths.size(); ++i) out << " " << rec.zigzag.side_lengths(i);
  out << "\nwritten " << path << "\n";
  return 0;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(a.path)) {
    err << "no such file: " << a.path << "\n";
    return 1;
  }
  const SolutionRecord stored = load_solution(a.path);
  bool ok = true;

  const SolutionRecord fresh = evaluate_height(stored.zigzag);
  const Real height_gap = std::abs(fresh.height - stored.height);
  out << std::scientific << std::setprecision(3);
  out << "height: stored " << stored.height << " recomputed " << fresh.height;
  if (height_gap > 1e-9) {
    out << "  MISMATCH";
    ok = false;
  }
  out << "\n";

  const int p = stored.zigzag.genus;
  Real prev_gap = 0;
  for (int j = 1; j <= p; ++j) prev_gap = std::max(prev_gap, std::abs(stored.prev_ne(j) - stored.prev_sw(j)));
  out << "NE/SW prevertex gap " << prev_gap << "\n";

  SolutionRecord rec = stored;
  rec.converged = true;
  WeierstrassOptions wopts;
  wopts.reflexive_tol = std::numeric_limits<Real>::infinity();
  const WeierstrassData wd = build_weierstrass(rec, wopts);
  const PeriodReport report = verify_periods(wd, wd.chain, a.tol);
  out << report.summary();
  ok = ok && report.passed;

  const CurvatureSummary cs = curvature_summary(wd);
  out << std::defaultfloat << std::setprecision(10);
  out << "deg g = " << cs.deg_g << "\n";
  out << "total curvature = " << -4 * cs.deg_g << "pi (" << cs.total_curvature << ")\n";
  out << "winding order = " << cs.winding_order << "\n";
  out << (ok ? "verify: PASS\n" : "verify: FAIL\n");
  if (!report.passed) {
    try {
      require_periods(report);
    } catch (const PeriodMismatch& e) {
      err << "PeriodMismatch: " << e.what() << "\n";
    }
  }
  return ok ? 0 : 3;
}

int cmd_mesh(const MeshArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(a.path)) {
    err << "no such file: " << a.path << "\n";
    return 1;
  }
  SolutionRecord rec = load_solution(a.path);
  rec.converged = true;
  WeierstrassOptions wopts;
  wopts.reflexive_tol = std::numeric_limits<Real>::infinity();
  const WeierstrassData wd = build_weierstrass(rec, wopts);
  const int p = wd.genus;
  const Real reach = p > 0 ? wd.prevertices(p) : 0.0;
  const Real radius = a.radius > 0 ? a.radius : 2 * std::max(1.0, reach);
  const SurfaceMesh mesh = generate_mesh(wd, radius, a.resolution);
  write_obj(a.out, mesh);
  out << "wrote " << a.out << ": " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
      << " triangles, symmetry order " << mesh.symmetry_order << "\n";
  return 0;
}

int cmd_sweep_ext(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.lambdas.empty()) {
    err << "empty sample set\n";
    return 1;
  }
  std::vector<std::vector<Real>> rows;
  for (double l : a.lambdas) {
    const Real e = extremal_length_quad(l);
    rows.push_back({l, e, e * std::log(1 / std::abs(l))});
  }
  std::ofstream file;
  if (!a.out.empty()) file.open(a.out);
  write_csv(a.out.empty() ? out : file, {"lambda", "ext", "ext_log_inv_abs_lambda"}, rows);
  return 0;
}

int cmd_sweep_coalescence(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.deltas.empty()) {
    err << "empty sample set\n";
    return 1;
  }
  Prevertices base;
  if (!a.solution.empty()) {
    const SolutionRecord rec = load_solution(a.solution);
    base = rec.prev_ne;
  } else {
    base = continuation_solve(a.genus, 2).prev_ne;
  }
  const int p = base.genus();
  const auto ne = ExponentPattern::make(Orientation::NE, p, 2);
  const auto sw = ExponentPattern::make(Orientation::SW, p, 2);
  const LogFit fne = coalescence_log_fit(base, ne, a.j, a.m, a.deltas);
  const LogFit fsw = coalescence_log_fit(base, sw, a.j, a.m, a.deltas);

  std::vector<std::vector<Real>> rows;
  for (double d : a.deltas) {
    VectorXr positive = base.positive();
    positive(a.m) = base(a.m) + d;
    const Prevertices moved = Prevertices::from_positive(positive);
    const PeriodVector pa = periods(moved, ne);
    const PeriodVector pb = periods(moved, sw);
    rows.push_back({d, std::abs(pa.values(a.j)), std::abs(pb.values(a.j)), std::abs(pa.values(a.m)),
                    std::abs(pb.values(a.m)), fne.c1.real(), fne.c1.imag(), fsw.c1.real(),
                    fsw.c1.imag(), fne.modulus_slope, fsw.modulus_slope});
  }
  std::ofstream file;
  if (!a.out.empty()) file.open(a.out);
  write_csv(a.out.empty() ? out : file,
            {"delta", "abs_a_j", "abs_b_j", "abs_a_m", "abs_b_m", "c1_ne_re", "c1_ne_im",
             "c1_sw_re", "c1_sw_im", "slope_ne", "slope_sw"},
            rows);
  err << std::setprecision(6) << "log slopes of |a_j|, |b_j|: " << fne.modulus_slope << ", "
      << fsw.modulus_slope << " (relative residuals " << fne.residual / std::abs(fne.c1) << ", "
      << fsw.residual / std::abs(fsw.c1) << ")\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reflexive symmetric zigzags and their minimal surfaces"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the continuation ladder up to the given genus");
  s->add_option("--genus", solve.genus, "genus p")->required()->check(CLI::NonNegativeNumber);
  s->add_option("--k", solve.k, "turn order k")->check(CLI::Range(2, 64));
  s->add_option("--tol", solve.tol, "convergence threshold on D")->check(CLI::PositiveNumber);
  s->add_option("--eps", solve.eps, "initial handle size")->check(CLI::Range(1e-12, 0.2));
  s->add_option("--out", solve.out, "solution file (default solution_gP.json)");
  s->add_option("--trace", solve.trace, "CSV trace: step,height,gradient_norm,stratum_distance");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Re-check heights, periods and curvature of a solution file");
  v->add_option("path", verify.path, "solution file")->required();
  v->add_option("--tol", verify.tol, "period tolerance")->check(CLI::PositiveNumber);

  MeshArgs mesh;
  auto* m = app.add_subcommand("mesh", "Write the half-plane sheet as a Wavefront OBJ mesh");
  m->add_option("path", mesh.path, "solution file")->required();
  m->add_option("--radius", mesh.radius, "half-disk radius (default 2 max(1, s_p))")
      ->check(CLI::PositiveNumber);
  m->add_option("--resolution", mesh.resolution, "rings and half the angular count")
      ->check(CLI::Range(8, 4096));
  m->add_option("--out", mesh.out, "OBJ path");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "CSV sweeps for plotting");
  w->require_subcommand(1);
  auto* we = w->add_subcommand("ext", "Columns: lambda, ext, ext_log_inv_abs_lambda = ext log(1/|lambda|)");
  we->add_option("--lambda", sweep.lambdas, "negative cross-ratios")->delimiter(',')->check(CLI::Range(-1e300, -1e-300));
  we->add_option("--out", sweep.out, "CSV path (default stdout)");
  auto* wc = w->add_subcommand(
      "coalescence",
      "Columns: delta, abs_a_j, abs_b_j, abs_a_m, abs_b_m (NE/SW periods), c1_ne_re, c1_ne_im, "
      "c1_sw_re, c1_sw_im (log coefficients), slope_ne, slope_sw (log slopes of |a_j|, |b_j|)");
  wc->add_option("--solution", sweep.solution, "solution file providing the base prevertices");
  wc->add_option("--genus", sweep.genus, "genus solved when no file is given")->check(CLI::Range(2, 12));
  wc->add_option("--j", sweep.j, "fitted period index")->check(CLI::NonNegativeNumber);
  wc->add_option("--m", sweep.m, "shrinking period index")->check(CLI::PositiveNumber);
  wc->add_option("--delta", sweep.deltas, "gap samples")->delimiter(',')->check(CLI::PositiveNumber);
  wc->add_option("--out", sweep.out, "CSV path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (v->parsed()) return cmd_verify(verify, out, err);
    if (m->parsed()) return cmd_mesh(mesh, out, err);
    if (we->parsed()) return cmd_sweep_ext(sweep, out, err);
    if (wc->parsed()) return cmd_sweep_coalescence(sweep, out, err);
  } catch (const PeriodMismatch& e) {
    err << "PeriodMismatch: " << e.what() << "\n";
    return 3;
  } catch (const LadderFailure& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace zz
