#include "zigzag/zigzag.hpp"

#include <algorithm>
#include <cmath>

namespace zz {

namespace {

void require_positive(const VectorXr& lengths) {
  for (Eigen::Index j = 0; j < lengths.size(); ++j) {
    if (!(lengths(j) > 0) || !std::isfinite(lengths(j))) {
      throw DegenerateSide("side " + std::to_string(j) + " has non-positive length");
    }
  }
}

void require_turn_order(int k) {
  if (k < 2) throw DomainError("turn order must be at least 2");
}

// Parameter-space intersection test for two closed segments (or rays when
// the end parameter is infinite). Shared endpoints of consecutive pieces
// are excluded by the caller.
bool segments_cross(Complex a0, Complex a1, Complex b0, Complex b1) {
  auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const Complex r = a1 - a0;
  const Complex s = b1 - b0;
  const Real denom = cross(r, s);
  const Complex qp = b0 - a0;
  const Real scale = std::max({std::abs(r), std::abs(s), 1.0});
  if (std::abs(denom) < 1e-14 * scale * scale) {
    if (std::abs(cross(qp, r)) > 1e-14 * scale * scale) return false;
    // Collinear: check overlap of projections.
    const Real rr = std::norm(r);
    const Real t0 = (qp.real() * r.real() + qp.imag() * r.imag()) / rr;
    const Real t1 = t0 + (s.real() * r.real() + s.imag() * r.imag()) / rr;
    return std::max(std::min(t0, t1), 0.0) <= std::min(std::max(t0, t1), 1.0);
  }
  const Real t = cross(qp, s) / denom;
  const Real u = cross(qp, r) / denom;
  const Real eps = 1e-12;
  return t >= -eps && t <= 1 + eps && u >= -eps && u <= 1 + eps;
}

}  // namespace

ZigzagParams ZigzagParams::make(int genus, int turn_order, const VectorXr& lengths) {
  if (genus < 0) throw DomainError("genus must be non-negative");
  require_turn_order(turn_order);
  if (lengths.size() != genus) throw DomainError("side length count must equal the genus");
  ZigzagParams z{genus, turn_order, lengths};
  return canonicalize(z);
}

ZigzagParams ZigzagParams::base(int genus, int turn_order) {
  if (genus != 0 && genus != 1) throw DomainError("base zigzags exist for genus 0 and 1 only");
  return make(genus, turn_order, VectorXr::Ones(genus));
}

Real turn_angle(int turn_order) { return kPi * (1.0 - 1.0 / turn_order); }

Complex segment_direction(int genus, int turn_order, int j) {
  // Outgoing ray makes angle theta with the real axis, theta chosen so the
  // chain is symmetric about {y = x}; the incoming ray is its mirror.
  const Real theta = kPi * (turn_order - 2) / (4.0 * turn_order);
  const Complex along_out = std::polar(1.0, theta);
  const Complex along_in = std::polar(1.0, -(theta + kPi / 2));
  return ((j + genus) % 2 == 0) ? along_out : along_in;
}

ZigzagParams canonicalize(const ZigzagParams& z) {
  require_positive(z.side_lengths);
  ZigzagParams out = z;
  if (z.genus == 0) return out;
  out.side_lengths = z.side_lengths / z.side_lengths.sum();
  return out;
}

Real stratum_distance(const ZigzagParams& z) {
  if (z.genus == 0) return 1.0;
  for (Eigen::Index j = 0; j < z.side_lengths.size(); ++j) {
    if (!(z.side_lengths(j) > 0)) return 0.0;
  }
  return (z.side_lengths / z.side_lengths.sum()).minCoeff();
}

VertexChain build_vertices(const ZigzagParams& z) {
  require_turn_order(z.turn_order);
  const int p = z.genus;
  VertexChain chain;
  chain.genus = p;
  chain.turn_order = z.turn_order;
  chain.incoming_ray = segment_direction(p, z.turn_order, -p - 1);
  chain.outgoing_ray = segment_direction(p, z.turn_order, p);
  chain.vertices = VectorXc::Zero(2 * p + 1);
  if (p == 0) return chain;

  require_positive(z.side_lengths);
  VectorXc half(p + 1);
  half(0) = 0.0;
  for (int j = 0; j < p; ++j) {
    half(j + 1) = half(j) + z.side_lengths(j) * segment_direction(p, z.turn_order, j);
  }
  // Slide along the diagonal so P_p becomes real, then scale it to 1.
  const Complex end = half(p);
  const Real shift = -end.imag();
  const Real scale = 1.0 / (end.real() - end.imag());
  for (int j = 0; j <= p; ++j) {
    const Complex v = scale * (half(j) + shift * Complex(1.0, 1.0));
    chain.vertices(p + j) = v;
    chain.vertices(p - j) = kI * std::conj(v);
  }
  // Exact values at the normalization points.
  chain.vertices(2 * p) = 1.0;
  chain.vertices(0) = kI;

  if (z.turn_order > 2 && !is_embedded(chain)) {
    throw EmbeddingViolation("zigzag arc self-intersects");
  }
  return chain;
}

bool is_embedded(const VertexChain& chain) {
  const int p = chain.genus;
  const int n = 2 * p + 1;
  if (n < 2) return true;
  // Pieces: ray into P_{-p}, segments, ray out of P_p. Rays are truncated
  // far beyond the bounding box, which is enough for straight rays.
  Real extent = 1.0;
  for (int j = 0; j < n; ++j) extent = std::max(extent, std::abs(chain.vertices(j)));
  const Real far = 10.0 * extent + 10.0;
  std::vector<std::pair<Complex, Complex>> pieces;
  pieces.emplace_back(chain.vertices(0) - far * chain.incoming_ray, chain.vertices(0));
  for (int j = 0; j + 1 < n; ++j) pieces.emplace_back(chain.vertices(j), chain.vertices(j + 1));
  pieces.emplace_back(chain.vertices(n - 1), chain.vertices(n - 1) + far * chain.outgoing_ray);

  for (std::size_t a = 0; a < pieces.size(); ++a) {
    for (std::size_t b = a + 2; b < pieces.size(); ++b) {
      if (segments_cross(pieces[a].first, pieces[a].second, pieces[b].first, pieces[b].second)) {
        return false;
      }
    }
  }
  return true;
}

ZigzagParams add_handle(const ZigzagParams& parent, Real eps) {
  if (!(eps > 0) || !(eps < stratum_distance(parent) / 4)) {
    throw EpsTooLarge("handle size must lie in (0, stratum_distance/4)");
  }
  const int p = parent.genus + 1;
  VectorXr lengths(p);
  if (parent.genus == 0) {
    lengths(0) = 1.0;
  } else {
    const VectorXr scaled = parent.side_lengths / parent.side_lengths.sum();
    lengths << eps, scaled;
  }
  return ZigzagParams::make(p, parent.turn_order, lengths);
}

ZigzagParams remove_first_side(const ZigzagParams& z) {
  if (z.genus < 1) throw DomainError("genus-0 zigzag has no side to remove");
  return ZigzagParams::make(z.genus - 1, z.turn_order, z.side_lengths.tail(z.genus - 1));
}

}  // namespace zz
