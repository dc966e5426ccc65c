#pragma once

// Target hyperbolic surface: fundamental polygon in the disk, side-pairing
// Möbius generators, elliptic vertex cycle, bounded group enumeration.

#include <string>
#include <utility>
#include <vector>

#include "harmap/hypgeom.hpp"

namespace harmap {

struct GroupElement {
  MobiusTransform transform;
  std::vector<int> word; // signed 1-based generator indices; -k is inverse
};

struct FundamentalPolygon {
  int genus = 0;
  std::vector<DiskPoint> vertices;       // 4g vertices, CCW; side k = (v_k, v_{k+1})
  std::vector<int> pairing;              // involution on side indices 0..4g-1
  std::vector<MobiusTransform> generators; // generators[k] maps side k onto side pairing[k] reversed

  int n_sides() const { return (int)vertices.size(); }
  std::pair<DiskPoint, DiskPoint> side(int k) const {
    return {vertices[k], vertices[(k + 1) % n_sides()]};
  }
  // Interior angle at vertex k.
  double interior_angle(int k) const;
  double angle_sum() const;
  bool contains(const DiskPoint& p, double tol = 1e-12) const;
};

// Regular 4g-gon centered at the origin, vertex k at radius s and angle
// 2*pi*k/(4g); s solves the Poincare angle-sum condition by bisection.
// Pairing follows the block pattern r_{4m+1}<->r_{4m+3}^{-1},
// r_{4m+2}<->r_{4m+4}^{-1} (1-based).
FundamentalPolygon regular_polygon(int g);

// Same regular geometry with a caller-supplied side pairing involution;
// validates the Poincare condition (single elliptic cycle, angles sum 2*pi).
FundamentalPolygon regular_polygon_with_pairing(int g, const std::vector<int>& pairing);

// Unique orientation-preserving isometry with src1 -> dst1, src2 -> dst2.
// Throws GeometryError when the hyperbolic lengths differ beyond 1e-10.
MobiusTransform side_pairing(const DiskPoint& src1, const DiskPoint& src2,
                             const DiskPoint& dst1, const DiskPoint& dst2);

// Ordered walk v_1 -> gamma(v_1) -> ... visiting each polygon vertex once;
// entry k holds (vertex index, cumulative transform mapping v_1 there).
std::vector<std::pair<int, GroupElement>> elliptic_cycle(const FundamentalPolygon& poly);

// All distinct group elements with word length <= max_word_len, identity
// first, deterministic order; transforms deduplicated at coefficient
// tolerance 1e-9 under the canonical sign convention.
std::vector<GroupElement> enumerate_group(const FundamentalPolygon& poly, int max_word_len);

// Finds gamma with gamma(p) in the closed polygon by greedy descent over the
// pairing generators. Throws GeometryError when max_word_len is exhausted.
std::pair<GroupElement, DiskPoint> locate_in_fundamental_domain(
    const DiskPoint& p, const FundamentalPolygon& poly, int max_word_len);

std::string polygon_to_json(const FundamentalPolygon& poly);
FundamentalPolygon polygon_from_json(const std::string& json_text);
FundamentalPolygon load_polygon(const std::string& path);

} // namespace harmap
