#pragma once

// Cut a closed genus-g mesh along a one-point wedge homology basis into a
// simply-connected disk, tracking projections and the boundary segment
// decomposition matched to fundamental-polygon sides.

#include <string>
#include <vector>

#include "harmap/fuchsian.hpp"
#include "harmap/mesh.hpp"

namespace harmap {

struct CutSurface {
  TriMesh cut_mesh;                    // topological disk with one boundary cycle
  std::vector<int> pi_V;               // cut vertex -> original vertex
  std::vector<int> pi_E;               // cut edge -> original edge
  int base_vertex = -1;                // in the original mesh
  std::vector<std::vector<int>> boundary_segments; // 4g CCW chains of cut vertices;
                                                   // consecutive chains share one endpoint
  std::vector<int> segment_pairing;    // involution: two copies of each loop
};

// Vertex of maximal degree, ties broken by index.
int default_base_vertex(const TriMesh& mesh);

// 2g closed edge loops through `base`, pairwise sharing only the base vertex,
// forming a homology basis (Z2 signatures against tree-cotree cocycles are
// independent). Throws TopologyError when no wedge system exists at `base`.
std::vector<std::vector<int>> homology_basis(const TriMesh& mesh, int base);

// Convenience: tries bases in decreasing degree order until one succeeds.
std::vector<std::vector<int>> homology_basis(const TriMesh& mesh);

CutSurface cut_along(const TriMesh& mesh, const std::vector<std::vector<int>>& loops);

// Cyclic-order-preserving segment -> side assignment such that paired
// segments land on paired sides. Identity whenever the polygon's pairing was
// built from this cut's boundary word.
std::vector<int> match_segments_to_sides(const CutSurface& cut,
                                         const FundamentalPolygon& poly);

std::string cut_to_json(const std::vector<std::vector<int>>& loops,
                        const CutSurface& cut,
                        const std::vector<int>& segment_to_side);

} // namespace harmap
