#pragma once

// Pull a template mesh defined on the fundamental polygon back to the
// original surface through a converged realization, and glue the result
// into a closed mesh.

#include <string>
#include <utility>
#include <vector>

#include "harmap/harmonic.hpp"

namespace harmap {

struct BoundaryTag {
  int vertex = -1; // template vertex index
  int side = -1;   // polygon side
  double param = 0.0; // arc-length fraction from the side's first corner
};

struct TemplateMesh {
  TriMesh mesh; // topological disk
  std::vector<DiskPoint> positions;
  std::vector<BoundaryTag> boundary;
  std::vector<std::pair<int, int>> pairs; // vertices identified after gluing
};

// Trivial cobweb template on the polygon: side_subdiv >= 3 arcs per side
// (compatible across pairings), `rings` concentric interior rings.
TemplateMesh make_polygon_template(const FundamentalPolygon& polygon,
                                   int side_subdiv, int rings);

// The realization's own image as a template (round-trip testing).
TemplateMesh realization_template(const GeodesicRealization& r);

struct CoveringAtlas {
  struct Copy {
    GroupElement gamma;
    std::vector<std::array<double, 2>> klein; // transformed cut vertices
  };
  std::vector<Copy> copies;
};

// Greedily adds group elements in word-length order until the template
// vertices, hyperbolic edge midpoints, and a polygon coverage grid all lie
// in some transformed face. Throws GeometryError listing an uncovered point
// when the word-length cap is exhausted.
CoveringAtlas build_atlas(const GeodesicRealization& r, const TemplateMesh& tmpl,
                          int max_word_len = 4);

struct PulledMesh {
  TriMesh mesh; // still the template connectivity, with boundary
  std::vector<Vec3> positions;
  std::vector<std::pair<int, int>> pairs;
};

// Locates each template vertex in an atlas copy (Klein barycentric, tol
// 1e-12) and interpolates the original surface's 3D face linearly.
PulledMesh pull_back(const TemplateMesh& tmpl, const CoveringAtlas& atlas,
                     const GeodesicRealization& r,
                     const std::vector<Vec3>& original_positions);

// Merges the paired boundary vertices (positions must agree within 1e-9)
// into a closed mesh of the original genus.
EmbeddedMesh glue_boundary(const PulledMesh& pulled);

// OFF with z = 0 plus JSON sidecar
// {"boundary": [{"vertex": k, "side": s, "param": t}], "pairs": [[a,b],...]}.
void save_template(const std::string& off_path, const std::string& json_path,
                   const TemplateMesh& tmpl);
TemplateMesh load_template(const std::string& off_path, const std::string& json_path);

} // namespace harmap
