#include "zigzag/schwarz_christoffel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "zigzag/nelder_mead.hpp"
#include "zigzag/quadrature.hpp"

namespace zz {

std::string to_string(Orientation o) { return o == Orientation::NE ? "NE" : "SW"; }

ExponentPattern ExponentPattern::make(Orientation orientation, int genus, int turn_order) {
  if (genus < 0) throw DomainError("genus must be non-negative");
  if (turn_order < 2) throw DomainError("turn order must be at least 2");
  const Real c = (turn_order - 1.0) / turn_order;
  ExponentPattern pat;
  pat.orientation = orientation;
  pat.turn_order = turn_order;
  pat.exponents.resize(2 * genus + 1);
  for (int j = -genus; j <= genus; ++j) {
    const Real ne = ((j + genus) % 2 == 0) ? -c : c;
    pat.exponents(j + genus) = orientation == Orientation::NE ? ne : -ne;
  }
  return pat;
}

ExponentPattern ExponentPattern::negated() const {
  ExponentPattern out = *this;
  out.orientation = orientation == Orientation::NE ? Orientation::SW : Orientation::NE;
  out.exponents = -exponents;
  return out;
}

// ---------------------------------------------------------------------------
// Prevertices

Prevertices Prevertices::from_positive(const VectorXr& positive) {
  if (positive.size() > 0) {
    if (positive(0) != 1.0) throw DomainError("prevertices must satisfy s_1 = 1");
    for (Eigen::Index j = 1; j < positive.size(); ++j) {
      if (!(positive(j) > positive(j - 1)) || !std::isfinite(positive(j))) {
        throw DomainError("prevertices must be strictly increasing");
      }
    }
  }
  Prevertices out;
  out.positive_ = positive;
  return out;
}

Prevertices Prevertices::from_gaps(int genus, const VectorXr& gaps) {
  if (genus < 1) return base(genus);
  if (gaps.size() != genus - 1) throw DomainError("expected genus-1 gaps");
  VectorXr positive(genus);
  positive(0) = 1.0;
  for (int j = 1; j < genus; ++j) positive(j) = positive(j - 1) + gaps(j - 1);
  return from_positive(positive);
}

Prevertices Prevertices::base(int genus) {
  if (genus == 0) return from_positive(VectorXr());
  if (genus == 1) return from_positive(VectorXr::Ones(1));
  throw DomainError("base prevertices exist for genus 0 and 1 only");
}

VectorXr Prevertices::full() const {
  const int p = genus();
  VectorXr s(2 * p + 1);
  for (int j = -p; j <= p; ++j) s(j + p) = (*this)(j);
  return s;
}

VectorXr Prevertices::log_gaps() const {
  const int p = genus();
  VectorXr u(std::max(p - 1, 0));
  for (int j = 1; j < p; ++j) u(j - 1) = std::log((*this)(j + 1) - (*this)(j));
  return u;
}

// ---------------------------------------------------------------------------
// Singular product

SingularProduct SingularProduct::make(const Prevertices& prev, const ExponentPattern& pat) {
  if (pat.genus() != prev.genus()) throw DomainError("pattern and prevertex genus differ");
  SingularProduct f;
  const int p = prev.genus();
  for (int j = -p; j <= p; ++j) {
    f.points.push_back(prev(j));
    f.exponents.push_back(pat(j));
  }
  return f;
}

Real SingularProduct::factor_arg(Complex z, int m) const {
  if (shifts.empty()) return arg_upper(z);
  return std::atan2(z.imag(), z.real()) + 2 * kPi * shifts[m];
}

Complex SingularProduct::eval(Complex t, int skip_a, int skip_b) const {
  return eval_at(t, 0.0, skip_a, skip_b);
}

Real SingularProduct::eval_modulus(Real t, int skip_a, int skip_b) const {
  return eval_modulus_at(t, 0.0, skip_a, skip_b);
}

Complex SingularProduct::eval_at(Complex base, Complex offset, int skip_a, int skip_b) const {
  Real log_mod = 0;
  Real angle = 0;
  for (int m = 0; m < static_cast<int>(points.size()); ++m) {
    if (m == skip_a || m == skip_b) continue;
    const Complex z = (base - points[m]) + offset;
    log_mod += exponents[m] * std::log(std::abs(z));
    angle += exponents[m] * factor_arg(z, m);
  }
  return std::polar(std::exp(log_mod), angle);
}

Real SingularProduct::eval_modulus_at(Complex base, Complex offset, int skip_a, int skip_b) const {
  Real log_mod = 0;
  for (int m = 0; m < static_cast<int>(points.size()); ++m) {
    if (m == skip_a || m == skip_b) continue;
    log_mod += exponents[m] * std::log(std::abs((base - points[m]) + offset));
  }
  return std::exp(log_mod);
}

int SingularProduct::find_point(Complex z) const {
  if (z.imag() != 0) return -1;
  for (int m = 0; m < static_cast<int>(points.size()); ++m) {
    const Real tol = 8 * std::numeric_limits<Real>::epsilon() * std::max(1.0, std::abs(points[m]));
    if (std::abs(z.real() - points[m]) <= tol) return m;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Quadrature drivers

namespace {

constexpr int kMaxPieces = 4000;

struct PieceSum {
  Complex value;
  Real l1 = 0;
};

Real distance_to_segment(Real point, Complex a, Complex b) {
  const Complex d = b - a;
  const Real len2 = std::norm(d);
  if (len2 == 0) return std::abs(point - a);
  const Complex q = Complex(point, 0) - a;
  Real t = (q.real() * d.real() + q.imag() * d.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(Complex(point, 0) - (a + t * d));
}

// n-point rule on the piece u in [u0, u1] of the segment a -> b, with an
// optional algebraic endpoint weight. Nodes are located relative to the
// nearer segment endpoint.
PieceSum rule_piece(const SingularProduct& f, Complex a, Complex b, Real u0, Real u1, int sa,
                    int sb, int n, bool modulus) {
  const Complex seg = b - a;
  const Complex d = seg * (u1 - u0);
  const Real len = std::abs(d);
  Real alpha = 0;  // weight (1-y)^alpha at the piece end
  Real beta = 0;   // weight (1+y)^beta at the piece start
  Complex factor = 0.5 * d;
  if (sa >= 0) {
    beta = f.exponents[sa];
    const Real mod = std::pow(len, beta) * std::pow(2.0, -beta);
    factor *= modulus ? Complex(mod) : std::polar(mod, beta * f.factor_arg(d, sa));
  } else if (sb >= 0) {
    alpha = f.exponents[sb];
    const Real mod = std::pow(len, alpha) * std::pow(2.0, -alpha);
    factor *= modulus ? Complex(mod) : std::polar(mod, alpha * f.factor_arg(-d, sb));
  }
  const GaussRule<Real>& rule = cached_gauss_jacobi(n, alpha, beta);
  Complex sum = 0;
  Real l1 = 0;
  for (int i = 0; i < n; ++i) {
    const Real x = 0.5 * (rule.nodes(i) + 1.0);
    const Real u = u0 + (u1 - u0) * x;
    Complex base = a;
    Complex offset = seg * u;
    if (u > 0.5) {
      base = b;
      offset = -seg * ((1.0 - u1) + (u1 - u0) * (0.5 * (1.0 - rule.nodes(i))));
    }
    const Complex v = modulus ? Complex(f.eval_modulus_at(base, offset, sa, sb))
                              : f.eval_at(base, offset, sa, sb);
    sum += rule.weights(i) * v;
    l1 += rule.weights(i) * std::abs(v);
  }
  return {factor * sum, std::abs(factor) * l1};
}

QuadratureResult adaptive_segment(const SingularProduct& f, Complex a, Complex b,
                                  const QuadratureOptions& opts, bool modulus) {
  QuadratureResult total{0.0, 0.0};
  if (a == b) return total;
  const int ia = f.find_point(a);
  const int ib = f.find_point(b);
  const int npts = static_cast<int>(f.points.size());

  int budget = kMaxPieces;
  std::function<void(Real, Real, int)> piece = [&](Real u0, Real u1, int depth) {
    if (--budget < 0) throw QuadratureFailure("segment quadrature exceeded its piece budget");
    const Complex A = (u0 == 0) ? a : a + (b - a) * u0;
    const Complex B = (u1 == 1) ? b : a + (b - a) * u1;
    const int sa = (u0 == 0) ? ia : -1;
    const int sb = (u1 == 1) ? ib : -1;
    auto split = [&] {
      if (depth >= opts.max_depth) {
        throw QuadratureFailure("segment quadrature exceeded subdivision depth");
      }
      const Real mid = 0.5 * (u0 + u1);
      piece(u0, mid, depth + 1);
      piece(mid, u1, depth + 1);
    };
    if (sa >= 0 && sb >= 0) return split();
    const Real len = std::abs(B - A);
    for (int m = 0; m < npts; ++m) {
      if (m == sa || m == sb) continue;
      if (distance_to_segment(f.points[m], A, B) < opts.separation * len) return split();
    }
    int n = opts.base_nodes;
    PieceSum coarse = rule_piece(f, a, b, u0, u1, sa, sb, n, modulus);
    while (true) {
      const PieceSum fine = rule_piece(f, a, b, u0, u1, sa, sb, 2 * n, modulus);
      if (!std::isfinite(fine.l1)) throw QuadratureFailure("non-finite integrand");
      const Real diff = std::abs(fine.value - coarse.value);
      if (diff <= opts.rel_tol * fine.l1 || diff == 0) {
        total.value += fine.value;
        total.error += diff;
        return;
      }
      n *= 2;
      if (2 * n > opts.max_nodes) return split();
      coarse = fine;
    }
  };
  piece(0.0, 1.0, 0);
  if (!std::isfinite(total.value.real()) || !std::isfinite(total.value.imag())) {
    throw QuadratureFailure("non-finite quadrature value");
  }
  total.value *= modulus ? Complex(1.0) : f.multiplier;
  if (!modulus) total.error *= std::abs(f.multiplier);
  return total;
}

}  // namespace

QuadratureResult integrate_segment(const SingularProduct& f, Complex a, Complex b,
                                   const QuadratureOptions& opts) {
  return adaptive_segment(f, a, b, opts, false);
}

QuadratureResult integrate_arc(const SingularProduct& f, Complex center, Real radius, Real theta0,
                               Real theta1, const QuadratureOptions& opts) {
  QuadratureResult total{0.0, 0.0};
  const int npts = static_cast<int>(f.points.size());
  int budget = kMaxPieces;
  std::function<void(Real, Real, int)> piece = [&](Real t0, Real t1, int depth) {
    if (--budget < 0) throw QuadratureFailure("arc quadrature exceeded its piece budget");
    const Real chord = radius * std::abs(t1 - t0);
    const Complex mid = center + std::polar(radius, 0.5 * (t0 + t1));
    bool near = false;
    for (int m = 0; m < npts && !near; ++m) {
      near = std::abs(mid - f.points[m]) - 0.5 * chord < opts.separation * chord;
    }
    auto split = [&] {
      if (depth >= opts.max_depth) throw QuadratureFailure("arc quadrature exceeded subdivision depth");
      const Real tm = 0.5 * (t0 + t1);
      piece(t0, tm, depth + 1);
      piece(tm, t1, depth + 1);
    };
    if (near) return split();
    auto rule_sum = [&](int n) {
      const GaussRule<Real>& rule = cached_gauss_jacobi(n, 0.0, 0.0);
      Complex sum = 0;
      Real l1 = 0;
      for (int i = 0; i < n; ++i) {
        const Real theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.nodes(i);
        const Complex e = std::polar(1.0, theta);
        const Complex v = f.eval(center + radius * e) * (kI * radius * e);
        sum += rule.weights(i) * v;
        l1 += rule.weights(i) * std::abs(v);
      }
      const Real h = 0.5 * (t1 - t0);
      return PieceSum{h * sum, std::abs(h) * l1};
    };
    int n = opts.base_nodes;
    PieceSum coarse = rule_sum(n);
    while (true) {
      const PieceSum fine = rule_sum(2 * n);
      if (!std::isfinite(fine.l1)) throw QuadratureFailure("non-finite integrand");
      const Real diff = std::abs(fine.value - coarse.value);
      if (diff <= opts.rel_tol * fine.l1 || diff == 0) {
        total.value += fine.value;
        total.error += diff;
        return;
      }
      n *= 2;
      if (2 * n > opts.max_nodes) return split();
      coarse = fine;
    }
  };
  piece(theta0, theta1, 0);
  total.value *= f.multiplier;
  total.error *= std::abs(f.multiplier);
  return total;
}

Real side_length(const Prevertices& prev, const ExponentPattern& pat, int j,
                 const QuadratureOptions& opts) {
  const int p = prev.genus();
  if (j < 0 || j >= p) throw IndexOutOfRange("segment index out of range");
  const SingularProduct f = SingularProduct::make(prev, pat);
  return adaptive_segment(f, prev(j), prev(j + 1), opts, true).value.real();
}

namespace {

// Phase of the upper half-plane branch on (s_0, s_1): factors with
// s_m >= s_1 contribute arg pi.
Complex first_interval_phase(const ExponentPattern& pat) {
  Real angle = 0;
  for (int m = 1; m <= pat.genus(); ++m) angle += kPi * pat(m);
  return std::polar(1.0, angle);
}

}  // namespace

PeriodVector periods(const Prevertices& prev, const ExponentPattern& pat,
                     const QuadratureOptions& opts) {
  const ScMap map = ScMap::raw(prev, pat, opts);
  const int p = prev.genus();
  PeriodVector out;
  out.values.resize(p);
  out.errors.resize(p);
  for (int j = 0; j < p; ++j) {
    const QuadratureResult r = integrate_segment(map.product(), prev(j), prev(j + 1), opts);
    out.values(j) = r.value;
    out.errors(j) = r.error;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter problem

VectorXr parameter_residual(const ZigzagParams& z, const ExponentPattern& pat,
                            const Prevertices& prev, const QuadratureOptions& opts) {
  const int p = z.genus;
  VectorXr r(std::max(p - 1, 0));
  if (p < 2) return r;
  const Real l0 = side_length(prev, pat, 0, opts);
  for (int j = 1; j < p; ++j) {
    const Real lj = side_length(prev, pat, j, opts);
    r(j - 1) = std::log(lj / l0) - std::log(z.side_lengths(j) / z.side_lengths(0));
  }
  return r;
}

Prevertices solve_parameter_problem(const ZigzagParams& z, const ExponentPattern& pat,
                                    const ParameterSolveOptions& opts, const Prevertices* guess) {
  const int p = z.genus;
  for (Eigen::Index j = 0; j < z.side_lengths.size(); ++j) {
    if (!(z.side_lengths(j) > 0)) throw DegenerateSide("zero-length side");
  }
  if (pat.genus() != p) throw DomainError("pattern genus differs from zigzag genus");
  if (p < 2) return Prevertices::base(p);

  const Eigen::Index n = p - 1;
  VectorXr u(n);
  if (guess != nullptr && guess->genus() == p) {
    u = guess->log_gaps();
  } else {
    for (int j = 1; j < p; ++j) u(j - 1) = std::log(z.side_lengths(j) / z.side_lengths(0));
  }
  auto residual = [&](const VectorXr& x) {
    return parameter_residual(z, pat, Prevertices::from_gaps(p, x.array().exp().matrix()),
                              opts.quadrature);
  };

  std::ostringstream trace;
  VectorXr r = residual(u);
  Real norm = r.norm();
  for (int it = 0; it < opts.max_iterations; ++it) {
    trace << "newton " << it << " |r|=" << norm << "\n";
    if (r.lpNorm<Eigen::Infinity>() < opts.tol) break;
    MatrixXr jac(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      VectorXr up = u;
      up(c) += opts.fd_step;
      jac.col(c) = (residual(up) - r) / opts.fd_step;
    }
    VectorXr step = jac.fullPivLu().solve(-r);
    const Real max_step = step.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(max_step)) break;
    if (max_step > 2.0) step *= 2.0 / max_step;

    bool accepted = false;
    Real alpha = 1.0;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const VectorXr trial = u + alpha * step;
      VectorXr rt;
      try {
        rt = residual(trial);
      } catch (const Error&) {
        continue;
      }
      const Real nt = rt.norm();
      if (std::isfinite(nt) && nt < (1 - 1e-4 * alpha) * norm) {
        u = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  if (!(r.lpNorm<Eigen::Infinity>() <= opts.accept_tol)) {
    // Fallback: derivative-free descent on the squared residual.
    trace << "fallback simplex descent from |r|=" << norm << "\n";
    NelderMeadOptions<Real> nm;
    nm.initial_step = 0.05;
    nm.target = opts.tol * opts.tol;
    nm.max_evaluations = 3000;
    auto objective = [&](const VectorXr& x) {
      try {
        return residual(x).squaredNorm();
      } catch (const Error&) {
        return std::numeric_limits<Real>::infinity();
      }
    };
    const auto res = nelder_mead<Real>(objective, u, nm);
    if (res.value < norm * norm) {
      u = res.x;
      r = residual(u);
      norm = r.norm();
    }
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= opts.accept_tol)) {
    trace << "final |r|_inf=" << r.lpNorm<Eigen::Infinity>();
    throw NoConvergence("parameter problem did not converge (" + to_string(pat.orientation) +
                        ")\n" + trace.str());
  }
  return Prevertices::from_gaps(p, u.array().exp().matrix());
}

// ---------------------------------------------------------------------------
// Forward map

ScMap ScMap::raw(const Prevertices& prev, const ExponentPattern& pat,
                 const QuadratureOptions& opts) {
  ScMap map;
  map.prev_ = prev;
  map.pat_ = pat;
  map.opts_ = opts;
  map.product_ = SingularProduct::make(prev, pat);
  map.product_.multiplier = std::conj(first_interval_phase(pat));
  map.origin_ = 0.0;
  return map;
}

ScMap ScMap::fit(const Prevertices& prev, const ExponentPattern& pat, const VertexChain& chain,
                 const QuadratureOptions& opts) {
  if (chain.genus != prev.genus()) throw DomainError("chain genus differs from prevertex genus");
  ScMap map;
  map.prev_ = prev;
  map.pat_ = pat;
  map.opts_ = opts;
  map.product_ = SingularProduct::make(prev, pat);
  const bool ne = pat.orientation == Orientation::NE;
  auto target = [&](int j) { return ne ? chain.vertex(j) : chain.q_vertex(j); };
  map.origin_ = target(0);
  if (prev.genus() == 0) {
    // The integrand is positive on (s_0, inf); send that interval along the
    // ray leaving the single vertex.
    map.product_.multiplier = ne ? chain.outgoing_ray : -chain.incoming_ray;
    return map;
  }
  map.product_.multiplier = 1.0;
  const Complex unit = integrate_segment(map.product_, prev(0), prev(1), opts).value;
  map.product_.multiplier = (target(1) - target(0)) / unit;
  return map;
}

Complex ScMap::integrate(Complex a, Complex b) const {
  if (a.imag() == 0 && b.imag() == 0) {
    Real lo = a.real();
    Real hi = b.real();
    const Real sign = lo <= hi ? 1.0 : -1.0;
    if (lo > hi) std::swap(lo, hi);
    std::vector<Real> cuts{lo};
    for (Real s : product_.points) {
      if (s > lo && s < hi) cuts.push_back(s);
    }
    cuts.push_back(hi);
    Complex sum = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      sum += integrate_segment(product_, cuts[i], cuts[i + 1], opts_).value;
    }
    return sign * sum;
  }
  return integrate_segment(product_, a, b, opts_).value;
}

Complex ScMap::operator()(Complex t) const { return origin_ + integrate(0.0, t); }

VectorXc ScMap::periods() const {
  const int p = prev_.genus();
  VectorXc out(p);
  for (int j = 0; j < p; ++j) out(j) = integrate(prev_(j), prev_(j + 1));
  return out;
}

Complex forward_map(const Prevertices& prev, const ExponentPattern& pat, const VertexChain& chain,
                    Complex t) {
  return ScMap::fit(prev, pat, chain)(t);
}

// ---------------------------------------------------------------------------
// Coalescence

LogFit coalescence_log_fit(const Prevertices& base, const ExponentPattern& pat, int j, int m,
                           const std::vector<Real>& deltas, const QuadratureOptions& opts) {
  const int p = base.genus();
  if (j < 0 || j >= p) throw IndexOutOfRange("period index out of range");
  if (m < 1 || m + 1 > p) throw IndexOutOfRange("moving segment must satisfy 1 <= m <= p-1");
  if (m == j) throw DomainError("the fitted period cannot be the shrinking one");
  if (deltas.size() < 6) throw FitFailure("at least six gaps are required");
  const auto [dmin, dmax] = std::minmax_element(deltas.begin(), deltas.end());
  if (!(*dmin > 0) || *dmax / *dmin < 100.0 * (1 - 1e-12)) {
    throw FitFailure("gaps must be positive and span two decades");
  }
  const Real upper = (m + 2 <= p) ? base(m + 2) : std::numeric_limits<Real>::infinity();
  if (!(base(m) + *dmax < upper)) throw FitFailure("gap would reorder prevertices");

  const Eigen::Index ns = static_cast<Eigen::Index>(deltas.size());
  Eigen::MatrixXcd design(ns, 4);
  Eigen::VectorXcd rhs(ns);
  MatrixXr design_mod(ns, 4);
  VectorXr rhs_mod(ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const Real delta = deltas[static_cast<std::size_t>(i)];
    VectorXr positive = base.positive();
    positive(m) = base(m) + delta;  // positive(m) holds s_{m+1}
    const Prevertices moved = Prevertices::from_positive(positive);
    const PeriodVector pv = periods(moved, pat, opts);
    const Complex aj = pv.values(j);
    const Complex am = pv.values(m);
    const Real ld = std::log(delta);
    design.row(i) << 1.0, ld * am, delta, delta * delta;
    rhs(i) = aj;
    design_mod.row(i) << 1.0, ld / kPi * std::abs(am), delta, delta * delta;
    rhs_mod(i) = std::abs(aj);
  }
  const Eigen::VectorXcd c = design.colPivHouseholderQr().solve(rhs);
  const VectorXr cm = design_mod.colPivHouseholderQr().solve(rhs_mod);

  LogFit fit;
  fit.c0 = c(0);
  fit.c1 = c(1);
  fit.residual = std::sqrt((design * c - rhs).squaredNorm() / static_cast<Real>(ns));
  fit.modulus_slope = cm(1);
  fit.modulus_residual = std::sqrt((design_mod * cm - rhs_mod).squaredNorm() / static_cast<Real>(ns));
  return fit;
}

void require_log_model(const LogFit& fit, Real ratio) {
  if (fit.certified(ratio)) return;
  std::ostringstream msg;
  msg << "log model not certified: residual " << fit.residual << " vs |c1| " << std::abs(fit.c1);
  throw FitFailure(msg.str());
}

}  // namespace zz
