#include "zigzag/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>

#include "zigzag/parallel.hpp"

namespace zz {

namespace {

const Complex kEighthTurn = std::polar(1.0, -kPi / 4);

Complex integrate_path(const SingularProduct& f, Complex a, Complex b,
                       const QuadratureOptions& opts) {
  if (a.imag() == 0 && b.imag() == 0) {
    Real lo = a.real(), hi = b.real();
    const Real sign = lo <= hi ? 1.0 : -1.0;
    if (lo > hi) std::swap(lo, hi);
    std::vector<Real> cuts{lo};
    for (Real s : f.points) {
      if (s > lo && s < hi) cuts.push_back(s);
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(hi);
    Complex sum = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      sum += integrate_segment(f, cuts[i], cuts[i + 1], opts).value;
    }
    return sign * sum;
  }
  return integrate_segment(f, a, b, opts).value;
}

}  // namespace

SingularProduct WeierstrassData::alpha_product() const {
  SingularProduct f = SingularProduct::make(prevertices, ne);
  f.multiplier = kEighthTurn * a;
  return f;
}

SingularProduct WeierstrassData::beta_product() const {
  SingularProduct f = SingularProduct::make(prevertices, sw);
  f.multiplier = kEighthTurn * b;
  return f;
}

Complex WeierstrassData::alpha(Complex t) const {
  return kEighthTurn * a * SingularProduct::make(prevertices, ne).eval(t);
}

Complex WeierstrassData::beta(Complex t) const {
  return kEighthTurn * b * SingularProduct::make(prevertices, sw).eval(t);
}

Complex WeierstrassData::g(Complex t) const { return alpha(t) / c; }

Real WeierstrassData::ds(Complex t) const {
  const Real mod = std::abs(g(t));
  return 0.5 * (mod + 1 / mod) * std::abs(c);
}

WeierstrassData build_weierstrass(const ZigzagParams& z, const Prevertices& shared,
                                  const QuadratureOptions& opts) {
  if (shared.genus() != z.genus) throw DomainError("prevertex genus differs from zigzag genus");
  WeierstrassData wd;
  wd.genus = z.genus;
  wd.turn_order = z.turn_order;
  wd.prevertices = shared;
  wd.ne = ExponentPattern::make(Orientation::NE, z.genus, z.turn_order);
  wd.sw = ExponentPattern::make(Orientation::SW, z.genus, z.turn_order);
  wd.chain = build_vertices(z);
  wd.a = ScMap::fit(shared, wd.ne, wd.chain, opts).constant();
  wd.b = ScMap::fit(shared, wd.sw, wd.chain, opts).constant();
  wd.c = std::sqrt(-kI * wd.a * wd.b);
  if (wd.c.real() < 0) wd.c = -wd.c;
  return wd;
}

WeierstrassData build_weierstrass(const SolutionRecord& sol, const WeierstrassOptions& opts) {
  if (!sol.converged) throw NotReflexive("solution record is not converged");
  const int p = sol.zigzag.genus;
  VectorXr shared(p);
  Real gap = 0;
  for (int j = 1; j <= p; ++j) {
    gap = std::max(gap, std::abs(sol.prev_ne(j) - sol.prev_sw(j)));
    shared(j - 1) = 0.5 * (sol.prev_ne(j) + sol.prev_sw(j));
  }
  if (!(gap <= opts.reflexive_tol)) {
    std::ostringstream msg;
    msg << "NE and SW prevertices differ by " << gap;
    throw NotReflexive(msg.str());
  }
  if (p > 0) shared(0) = 1.0;
  return build_weierstrass(sol.zigzag, Prevertices::from_positive(shared), opts.quadrature);
}

PeriodReport verify_periods(const WeierstrassData& wd, const VertexChain& chain, Real tol,
                            Real dh_tol) {
  const int p = wd.genus;
  const Prevertices& s = wd.prevertices;
  PeriodReport report;
  report.tol = tol;
  report.dh_tol = dh_tol;
  const SingularProduct fa = wd.alpha_product();
  const SingularProduct fb = wd.beta_product();
  SingularProduct fh;
  fh.multiplier = wd.c;
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;

  for (int j = -p; j < p; ++j) {
    const Real xl = j - 1 >= -p ? 0.5 * (s(j - 1) + s(j)) : s(j) - 0.5 * (s(j + 1) - s(j));
    const Real xr = j + 2 <= p ? 0.5 * (s(j + 1) + s(j + 2)) : s(j + 1) + 0.5 * (s(j + 1) - s(j));
    const Real centre = 0.5 * (xl + xr);
    const Real radius = 0.5 * (xr - xl);
    auto loop = [&](const SingularProduct& f) {
      SingularProduct lower = f;
      lower.shifts.assign(f.points.size(), 0);
      for (int m = j; m <= p && !f.points.empty(); ++m) lower.shifts[m + p] = 1;
      return integrate_arc(f, centre, radius, 0.0, kPi, opts).value +
             integrate_arc(lower, centre, radius, kPi, 2 * kPi, opts).value;
    };
    CyclePeriods cyc;
    cyc.j = j;
    cyc.alpha = loop(fa);
    cyc.beta = loop(fb);
    cyc.dh = loop(fh);
    const Complex factor = 1.0 - std::polar(1.0, 2 * kPi * wd.ne(j));
    cyc.expected_alpha = factor * kEighthTurn * (chain.vertex(j) - chain.vertex(j + 1));
    cyc.alpha_error = std::abs(cyc.alpha - cyc.expected_alpha);
    cyc.conjugate_error = std::abs(cyc.beta - std::conj(cyc.alpha));
    cyc.dh_error = std::abs(cyc.dh);
    const Real worst = std::max(cyc.alpha_error, cyc.conjugate_error);
    if (worst > std::max(report.max_alpha_error, report.max_conjugate_error)) report.worst_cycle = j;
    report.max_alpha_error = std::max(report.max_alpha_error, cyc.alpha_error);
    report.max_conjugate_error = std::max(report.max_conjugate_error, cyc.conjugate_error);
    report.max_dh_error = std::max(report.max_dh_error, cyc.dh_error);
    report.cycles.push_back(cyc);
  }
  report.passed = report.max_alpha_error <= tol && report.max_conjugate_error <= tol &&
                  report.max_dh_error <= dh_tol;
  return report;
}

std::string PeriodReport::summary() const {
  std::ostringstream out;
  out << std::setw(4) << "j" << std::setw(14) << "|a-expected|" << std::setw(14)
      << "|b-conj(a)|" << std::setw(14) << "|dh|" << "\n";
  out << std::scientific << std::setprecision(3);
  for (const auto& c : cycles) {
    out << std::setw(4) << c.j << std::setw(14) << c.alpha_error << std::setw(14)
        << c.conjugate_error << std::setw(14) << c.dh_error << "\n";
  }
  out << (passed ? "periods: PASS" : "periods: FAIL") << " (worst cycle " << worst_cycle
      << ", tol " << tol << ", dh tol " << dh_tol << ")\n";
  return out.str();
}

void require_periods(const PeriodReport& report) {
  if (report.passed) return;
  std::ostringstream msg;
  msg << "period mismatch at cycle " << report.worst_cycle << ": alpha error "
      << report.max_alpha_error << ", conjugate error " << report.max_conjugate_error
      << ", dh error " << report.max_dh_error;
  throw PeriodMismatch(msg.str());
}

CurvatureSummary curvature_summary(const WeierstrassData& wd) {
  // Orders of g = alpha/dh in local coordinates of the k-fold branched
  // sheet: k e_j at each finite point, -k sum(e_j) at the end.
  const int k = wd.turn_order;
  Real zeros = 0;
  Real sum = 0;
  for (Eigen::Index m = 0; m < wd.ne.exponents.size(); ++m) {
    const Real e = wd.ne.exponents(m);
    sum += e;
    if (e > 0) zeros += k * e;
  }
  zeros += -k * sum;
  CurvatureSummary out;
  out.deg_g = static_cast<int>(std::lround(zeros));
  out.total_curvature = -4 * kPi * out.deg_g;
  out.winding_order = 2 * k - 1;
  return out;
}

Vector3r evaluate_surface(const WeierstrassData& wd, Complex t, Complex base) {
  if (t.imag() < 0 || base.imag() < 0) throw DomainError("points must lie in the closed upper half-plane");
  QuadratureOptions opts;
  const Complex ia = integrate_path(wd.alpha_product(), base, t, opts);
  const Complex ib = integrate_path(wd.beta_product(), base, t, opts);
  const Complex ih = wd.c * (t - base);
  return {std::real(0.5 * (ia - ib)), std::real(0.5 * kI * (ia + ib)), std::real(ih)};
}

Matrix3r SymmetryGenerator::linear() const {
  const Vector3r u = direction.normalized();
  if (kind == "reflection") return Matrix3r::Identity() - 2 * u * u.transpose();
  return 2 * u * u.transpose() - Matrix3r::Identity();
}

namespace {

std::vector<Real> mesh_radii(const Prevertices& s, Real radius, int resolution) {
  std::vector<Real> r;
  for (int i = 1; i <= resolution; ++i) {
    const Real x = static_cast<Real>(i) / resolution;
    r.push_back(radius * x * x);
  }
  const int p = s.genus();
  for (int j = 1; j <= p; ++j) {
    const Real lo = s(j) - s(j - 1);
    const Real hi = j < p ? s(j + 1) - s(j) : lo;
    const Real width = 0.2 * std::min(lo, hi);
    for (int m = 1; m <= 3; ++m) {
      const Real d = width / (1 << m);
      r.push_back(s(j) - d);
      r.push_back(s(j) + d);
    }
  }
  std::sort(r.begin(), r.end());
  std::vector<Real> out;
  for (Real x : r) {
    if (x <= 0 || x > radius) continue;
    bool hits = false;
    for (int j = 1; j <= p; ++j) hits = hits || std::abs(x - s(j)) < 1e-9 * s(j);
    if (hits) continue;
    if (!out.empty() && x - out.back() < 1e-9 * radius) continue;
    out.push_back(x);
  }
  return out;
}

// Rigid fit y ~ R x + d with R orthogonal (reflections allowed).
Matrix3r procrustes(const std::vector<Vector3r>& x, const std::vector<Vector3r>& y, Real* residual) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Matrix<Real, 3, Eigen::Dynamic> X(3, n), Y(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.col(i) = x[static_cast<std::size_t>(i)];
    Y.col(i) = y[static_cast<std::size_t>(i)];
  }
  const Vector3r mx = X.rowwise().mean(), my = Y.rowwise().mean();
  X.colwise() -= mx;
  Y.colwise() -= my;
  Eigen::JacobiSVD<Matrix3r> svd(Y * X.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix3r r = svd.matrixU() * svd.matrixV().transpose();
  if (residual) *residual = (r * X - Y).colwise().norm().maxCoeff();
  return r;
}

int group_order(const std::vector<Matrix3r>& gens, int cap = 64) {
  std::vector<Matrix3r> group{Matrix3r::Identity()};
  for (std::size_t i = 0; i < group.size() && static_cast<int>(group.size()) <= cap; ++i) {
    for (const Matrix3r& g : gens) {
      const Matrix3r h = g * group[i];
      const bool seen = std::any_of(group.begin(), group.end(),
                                    [&](const Matrix3r& e) { return (e - h).norm() < 1e-6; });
      if (!seen) group.push_back(h);
    }
  }
  return static_cast<int>(group.size());
}

}  // namespace

SurfaceMesh generate_mesh(const WeierstrassData& wd, Real radius, int resolution) {
  const Prevertices& s = wd.prevertices;
  const int p = wd.genus;
  if (resolution < 8) throw DomainError("mesh resolution must be at least 8");
  if (!(radius > (p > 0 ? s(p) : 0.0))) throw DomainError("mesh radius must exceed every prevertex");

  const std::vector<Real> radii = mesh_radii(s, radius, resolution);
  const int na = 2 * resolution;  // angular intervals
  SurfaceMesh mesh;
  mesh.parameters.push_back(Complex(0.0, 0.05 * radii.front()));
  for (Real r : radii) {
    for (int l = 0; l <= na; ++l) {
      const Real theta = kPi * l / na;
      Complex t = std::polar(r, theta);
      if (l == 0 || l == na) t = Complex(l == 0 ? r : -r, 0.0);
      mesh.parameters.push_back(t);
    }
  }
  auto index = [&](std::size_t ring, int l) { return static_cast<int>(1 + ring * (na + 1) + l); };
  for (int l = 0; l < na; ++l) mesh.triangles.push_back({0, index(0, l), index(0, l + 1)});
  for (std::size_t ring = 0; ring + 1 < radii.size(); ++ring) {
    for (int l = 0; l < na; ++l) {
      const int a = index(ring, l), b = index(ring, l + 1);
      const int c = index(ring + 1, l), d = index(ring + 1, l + 1);
      mesh.triangles.push_back({a, c, d});
      mesh.triangles.push_back({a, d, b});
    }
  }

  const int nv = static_cast<int>(mesh.parameters.size());
  mesh.vertices.resize(static_cast<std::size_t>(nv));
  mesh.ds.resize(static_cast<std::size_t>(nv));
  parallel_for(nv, [&](int i) {
    const auto u = static_cast<std::size_t>(i);
    mesh.vertices[u] = evaluate_surface(wd, mesh.parameters[u]);
    mesh.ds[u] = wd.ds(mesh.parameters[u]);
  });

  // Boundary intervals of the sheet map to planar geodesics or straight
  // lines; each gives a reflection or half-turn of the completed surface.
  std::vector<Real> cuts{-radius};
  for (int j = -p; j <= p; ++j) cuts.push_back(s(j));
  cuts.push_back(radius);
  std::vector<Matrix3r> linear_parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Real lo = cuts[i], hi = cuts[i + 1];
    const int samples = 9;
    std::vector<Vector3r> pts(samples);
    parallel_for(samples, [&](int q) {
      const Real x = lo + (hi - lo) * (q + 1.0) / (samples + 1.0);
      pts[static_cast<std::size_t>(q)] = evaluate_surface(wd, Complex(x, 0.0));
    });
    Eigen::Matrix<Real, Eigen::Dynamic, 3> m(samples, 3);
    for (int q = 0; q < samples; ++q) m.row(q) = pts[static_cast<std::size_t>(q)].transpose();
    const Vector3r centre = m.colwise().mean().transpose();
    m.rowwise() -= centre.transpose();
    Eigen::JacobiSVD<Eigen::Matrix<Real, Eigen::Dynamic, 3>> svd(m, Eigen::ComputeFullV);
    const Vector3r sv = svd.singularValues();
    const Real scale = std::max(sv(0), 1e-300);
    SymmetryGenerator gen;
    gen.point = centre;
    std::ostringstream src;
    src << "interval [" << lo << ", " << hi << "]";
    gen.source = src.str();
    if (sv(1) / scale < 1e-7) {
      gen.kind = "rotation";
      gen.direction = svd.matrixV().col(0);
      gen.fit_residual = sv(1) / scale;
    } else if (sv(2) / scale < 1e-7) {
      gen.kind = "reflection";
      gen.direction = svd.matrixV().col(2);
      gen.fit_residual = sv(2) / scale;
    } else {
      continue;
    }
    linear_parts.push_back(gen.linear());
    mesh.symmetries.push_back(gen);
  }

  // The sheet is invariant under t -> -conj(t).
  std::vector<Complex> probe;
  for (int q = 1; q <= 6; ++q) probe.push_back(std::polar(0.3 * radius * q / 6 + 0.1, kPi * q / 14));
  std::vector<Vector3r> x(probe.size()), y(probe.size());
  parallel_for(static_cast<int>(probe.size()), [&](int q) {
    const auto u = static_cast<std::size_t>(q);
    x[u] = evaluate_surface(wd, probe[u]);
    y[u] = evaluate_surface(wd, -std::conj(probe[u]));
  });
  Real residual = 0;
  mesh.diagonal_symmetry = procrustes(x, y, &residual);
  linear_parts.push_back(mesh.diagonal_symmetry);
  mesh.symmetry_order = group_order(linear_parts);
  return mesh;
}

}  // namespace zz
