#pragma once

#include <vector>

#include "zigzag/common.hpp"

namespace zz {

/// A point of the moduli space of symmetric zigzags: genus, turn order and
/// the lengths of the sides P_0P_1, ..., P_{p-1}P_p, normalized to sum 1.
struct ZigzagParams {
  int genus = 0;
  int turn_order = 2;
  VectorXr side_lengths;  // size == genus

  /// Validating constructor; canonicalizes the lengths.
  static ZigzagParams make(int genus, int turn_order, const VectorXr& lengths);
  /// The unique point of Z_0 or Z_1.
  static ZigzagParams base(int genus, int turn_order);
};

/// Normalized vertex chain P_{-p}..P_p of a symmetric zigzag.
struct VertexChain {
  int genus = 0;
  int turn_order = 2;
  VectorXc vertices;       // index j + p holds P_j
  Complex incoming_ray;    // direction of travel along the infinite side ending at P_{-p}
  Complex outgoing_ray;    // direction of the infinite side leaving P_p

  Complex vertex(int j) const { return vertices(j + genus); }
  /// Q_j := P_{-j}, the labelling used for the SW domain.
  Complex q_vertex(int j) const { return vertices(genus - j); }
};

/// Exterior turn magnitude pi (1 - 1/k).
Real turn_angle(int turn_order);

/// Direction of segment I_j = P_j P_{j+1} (j = -p..p-1); j = p gives the
/// outgoing ray and j = -p-1 the incoming one.
Complex segment_direction(int genus, int turn_order, int j);

ZigzagParams canonicalize(const ZigzagParams& z);
Real stratum_distance(const ZigzagParams& z);
VertexChain build_vertices(const ZigzagParams& z);

/// True when the polygonal arc (finite segments plus both rays) has no
/// self-intersection.
bool is_embedded(const VertexChain& chain);

/// Insert a new first side of length eps in front of a genus p-1 zigzag.
ZigzagParams add_handle(const ZigzagParams& parent, Real eps);

/// Drop the first side and renormalize; inverse of add_handle.
ZigzagParams remove_first_side(const ZigzagParams& z);

}  // namespace zz
