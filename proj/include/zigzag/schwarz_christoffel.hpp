#pragma once

#include <string>
#include <vector>

#include "zigzag/common.hpp"
#include "zigzag/zigzag.hpp"

namespace zz {

enum class Orientation { NE, SW };

std::string to_string(Orientation o);

/// Alternating Schwarz-Christoffel exponents e_{-p}..e_p = -+(k-1)/k.
///
/// The NE domain of the normalized chain has the acute angle pi/k at both
/// extreme vertices, so NE starts and ends with -(k-1)/k; SW is the
/// negation. Consecutive exponents always sum to zero.
struct ExponentPattern {
  Orientation orientation = Orientation::NE;
  int turn_order = 2;
  VectorXr exponents;  // index j + p

  static ExponentPattern make(Orientation orientation, int genus, int turn_order);

  int genus() const { return static_cast<int>((exponents.size() - 1) / 2); }
  Real operator()(int j) const { return exponents(j + genus()); }
  ExponentPattern negated() const;
};

/// Symmetric prevertices s_{-p} < ... < s_0 = 0 < s_1 = 1 < ... < s_p.
class Prevertices {
 public:
  Prevertices() = default;

  /// Build from s_1..s_p; s_1 must be 1 and the tuple strictly increasing.
  static Prevertices from_positive(const VectorXr& positive);
  /// Build from the gaps s_{j+1} - s_j, j = 1..p-1 (s_1 = 1 implied).
  static Prevertices from_gaps(int genus, const VectorXr& gaps);
  static Prevertices base(int genus);

  int genus() const { return static_cast<int>(positive_.size()); }
  Real operator()(int j) const { return j == 0 ? 0.0 : (j > 0 ? positive_(j - 1) : -positive_(-j - 1)); }
  const VectorXr& positive() const { return positive_; }
  VectorXr full() const;
  /// log of the gaps s_{j+1} - s_j for j = 1..p-1.
  VectorXr log_gaps() const;

 private:
  VectorXr positive_;
};

struct QuadratureOptions {
  Real rel_tol = 1e-12;
  int base_nodes = 16;
  int max_nodes = 256;
  int max_depth = 64;
  /// A piece is integrated directly once every non-endpoint singularity is
  /// at least separation * piece length away from it.
  Real separation = 1.0;
};

struct QuadratureResult {
  Complex value;
  Real error = 0;
};

/// Branch of prod (t - s_m)^{e_m}: on the closed upper half plane every
/// factor uses arg in [0, pi]. `shifts` adds 2 pi shifts[m] to factor m,
/// which describes the continuation of that branch into the lower half
/// plane across a chosen real interval.
struct SingularProduct {
  std::vector<Real> points;
  std::vector<Real> exponents;
  std::vector<int> shifts;  // empty: upper half-plane branch
  Complex multiplier{1.0, 0.0};

  static SingularProduct make(const Prevertices& prev, const ExponentPattern& pat);

  /// Product over all factors except `skip_a` and `skip_b` (-1 for none).
  Complex eval(Complex t, int skip_a = -1, int skip_b = -1) const;
  Real eval_modulus(Real t, int skip_a = -1, int skip_b = -1) const;
  /// Same at t = base + offset, with each factor formed as
  /// (base - s_m) + offset so points close to `base` keep full precision.
  Complex eval_at(Complex base, Complex offset, int skip_a = -1, int skip_b = -1) const;
  Real eval_modulus_at(Complex base, Complex offset, int skip_a = -1, int skip_b = -1) const;
  Real factor_arg(Complex z, int m) const;
  int find_point(Complex z) const;
};

/// Integral of the product along the straight segment a -> b. Endpoints
/// that coincide with a singular point are handled by Gauss-Jacobi rules;
/// nearby singular points by bisection.
QuadratureResult integrate_segment(const SingularProduct& f, Complex a, Complex b,
                                   const QuadratureOptions& opts = {});

/// Integral along the circular arc c + r e^{i theta}, theta0 -> theta1.
/// The arc must avoid the singular points.
QuadratureResult integrate_arc(const SingularProduct& f, Complex center, Real radius,
                               Real theta0, Real theta1, const QuadratureOptions& opts = {});

/// Integral of prod |t - s_m|^{e_m} over [s_j, s_{j+1}].
Real side_length(const Prevertices& prev, const ExponentPattern& pat, int j,
                 const QuadratureOptions& opts = {});

/// Raw side periods a_j = int_{s_j}^{s_{j+1}}, j = 0..p-1, with the branch
/// rotated so the integrand is positive on (s_0, s_1).
struct PeriodVector {
  VectorXc values;
  VectorXr errors;
};

PeriodVector periods(const Prevertices& prev, const ExponentPattern& pat,
                     const QuadratureOptions& opts = {});

struct ParameterSolveOptions {
  Real tol = 1e-12;        // target max |log ratio residual|
  Real accept_tol = 1e-9;  // anything looser than this is NoConvergence
  int max_iterations = 60;
  Real fd_step = 1e-7;
  QuadratureOptions quadrature{};
};

/// Symmetric prevertices whose image side lengths are proportional to the
/// zigzag's. `guess` warm-starts Newton.
Prevertices solve_parameter_problem(const ZigzagParams& z, const ExponentPattern& pat,
                                    const ParameterSolveOptions& opts = {},
                                    const Prevertices* guess = nullptr);

/// Ratio residuals log(L_j / L_0) - log(l_j / l_0), j = 1..p-1.
VectorXr parameter_residual(const ZigzagParams& z, const ExponentPattern& pat,
                            const Prevertices& prev, const QuadratureOptions& opts = {});

/// Schwarz-Christoffel map of the upper half plane onto one complementary
/// domain, normalized so prevertices land on the chain's vertices (P_j for
/// NE, Q_j = P_{-j} for SW).
class ScMap {
 public:
  static ScMap fit(const Prevertices& prev, const ExponentPattern& pat, const VertexChain& chain,
                   const QuadratureOptions& opts = {});
  /// Unnormalized map: branch rotated to be positive on (s_0, s_1), f(0) = 0.
  static ScMap raw(const Prevertices& prev, const ExponentPattern& pat,
                   const QuadratureOptions& opts = {});

  Complex operator()(Complex t) const;
  /// Scaled integral of the map's derivative from a to b (closed UHP path).
  Complex integrate(Complex a, Complex b) const;
  /// f(s_{j+1}) - f(s_j) for j = 0..p-1.
  VectorXc periods() const;

  const Prevertices& prevertices() const { return prev_; }
  const ExponentPattern& pattern() const { return pat_; }
  Complex constant() const { return product_.multiplier; }
  Complex origin() const { return origin_; }
  const SingularProduct& product() const { return product_; }

 private:
  Prevertices prev_;
  ExponentPattern pat_;
  SingularProduct product_;
  Complex origin_{0.0, 0.0};
  QuadratureOptions opts_{};
};

Complex forward_map(const Prevertices& prev, const ExponentPattern& pat, const VertexChain& chain,
                    Complex t);

/// Least-squares model of one period along a coalescing family.
struct LogFit {
  Complex c0;            // holomorphic part at delta = 0
  Complex c1;            // coefficient of log(delta) * a_m(delta)
  Real residual = 0;     // RMS residual of the complex fit
  Real modulus_slope = 0;     // coefficient of log(delta)/pi * |a_m| in the |a_j| fit
  Real modulus_residual = 0;  // RMS residual of the |a_j| fit

  /// The logarithmic model holds when residual <= ratio |c1|.
  bool certified(Real ratio = 1e-3) const { return residual <= ratio * std::abs(c1); }
};

/// Throws FitFailure unless fit.certified(ratio).
void require_log_model(const LogFit& fit, Real ratio = 1e-3);

/// Moves s_{m+1} (and its mirror) so the gap delta = s_{m+1} - s_m takes
/// each sampled value, and fits
///   a_j(delta) ~ c0 + c1 log(delta) a_m(delta) + c2 delta + c3 delta^2.
/// When m is adjacent to j the logarithmic term is the coalescence
/// monodromy; otherwise c1 vanishes.
LogFit coalescence_log_fit(const Prevertices& base, const ExponentPattern& pat, int j, int m,
                           const std::vector<Real>& deltas, const QuadratureOptions& opts = {});

}  // namespace zz
