#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zigzag/common.hpp"
#include "zigzag/height.hpp"
#include "zigzag/schwarz_christoffel.hpp"
#include "zigzag/zigzag.hpp"

namespace zz {

using Vector3r = Eigen::Matrix<Real, 3, 1>;
using Matrix3r = Eigen::Matrix<Real, 3, 3>;

/// Weierstrass data on the upper half-plane sheet:
///   alpha = e^{-i pi/4} A h_NE(t) dt,  beta = e^{-i pi/4} B h_SW(t) dt,
///   dh = c dt,  c^2 = -i A B,  g = alpha / dh.
/// A and B are the constants of the fitted NE and SW maps, so alpha beta
/// = dh^2 wherever h_NE h_SW = 1.
struct WeierstrassData {
  int genus = 0;
  int turn_order = 2;
  Prevertices prevertices;
  ExponentPattern ne;
  ExponentPattern sw;
  VertexChain chain;
  Complex a;
  Complex b;
  Complex c;

  Complex alpha(Complex t) const;  // coefficient of dt
  Complex beta(Complex t) const;
  Complex dh(Complex t) const { (void)t; return c; }
  Complex g(Complex t) const;
  /// Conformal factor (|g| + 1/|g|) |dh/dt| / 2 of the induced metric.
  Real ds(Complex t) const;

  SingularProduct alpha_product() const;
  SingularProduct beta_product() const;
};

struct WeierstrassOptions {
  /// NE and SW prevertices must agree to this (max abs difference).
  Real reflexive_tol = 1e-5;
  QuadratureOptions quadrature{};
};

WeierstrassData build_weierstrass(const SolutionRecord& sol, const WeierstrassOptions& opts = {});
/// From an explicit shared prevertex tuple; no reflexivity check.
WeierstrassData build_weierstrass(const ZigzagParams& z, const Prevertices& shared,
                                  const QuadratureOptions& opts = {});

struct CyclePeriods {
  int j = 0;
  Complex alpha;
  Complex beta;
  Complex dh;
  Complex expected_alpha;  // (1 - e^{2 pi i e_j}) e^{-i pi/4} (P_j - P_{j+1})
  Real alpha_error = 0;    // |alpha - expected_alpha|
  Real conjugate_error = 0;  // |beta - conj(alpha)|
  Real dh_error = 0;       // |dh|
};

struct PeriodReport {
  std::vector<CyclePeriods> cycles;
  Real tol = 1e-8;
  Real dh_tol = 1e-10;
  Real max_alpha_error = 0;
  Real max_conjugate_error = 0;
  Real max_dh_error = 0;
  int worst_cycle = 0;
  bool passed = true;

  std::string summary() const;
};

/// Integrals of alpha, beta and dh over the cycles B_j, j = -p..p-1, each
/// represented by a circle around [s_j, s_{j+1}] that crosses the real line
/// in the neighbouring gaps; the lower half is the continuation of the
/// sheet across the left crossing.
PeriodReport verify_periods(const WeierstrassData& wd, const VertexChain& chain,
                            Real tol = 1e-8, Real dh_tol = 1e-10);
/// Throws PeriodMismatch naming the worst cycle.
void require_periods(const PeriodReport& report);

struct CurvatureSummary {
  int deg_g = 0;
  Real total_curvature = 0;
  int winding_order = 0;
};

CurvatureSummary curvature_summary(const WeierstrassData& wd);

/// Re int_base^t (1/2 (alpha - beta), i/2 (alpha + beta), dh).
Vector3r evaluate_surface(const WeierstrassData& wd, Complex t, Complex base = 0.0);

struct SymmetryGenerator {
  std::string kind;  // "reflection" (plane) or "rotation" (half turn about a line)
  std::string source;
  Vector3r point;
  Vector3r direction;  // plane normal or line direction
  Real fit_residual = 0;
  Matrix3r linear() const;
};

struct SurfaceMesh {
  std::vector<Vector3r> vertices;
  std::vector<Complex> parameters;  // half-plane preimages
  std::vector<std::array<int, 3>> triangles;
  std::vector<Real> ds;
  std::vector<SymmetryGenerator> symmetries;
  /// Order of the group generated by the linear parts of the symmetries,
  /// including the diagonal symmetry t -> -conj(t) of the sheet.
  int symmetry_order = 1;
  Matrix3r diagonal_symmetry = Matrix3r::Identity();
};

/// Polar-graded triangulation of the half-disk |t| <= radius, Im t >= 0,
/// refined near the prevertices, mapped through evaluate_surface.
SurfaceMesh generate_mesh(const WeierstrassData& wd, Real radius, int resolution);

}  // namespace zz
