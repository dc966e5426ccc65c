#pragma once

// Halfedge representation of oriented triangulated surfaces with per-edge
// lengths, plus OFF/OBJ ingestion and topology queries. Halfedge 3f+k
// (k = 0,1,2) belongs to face f; twin(h) = -1 marks a boundary halfedge.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "harmap/errors.hpp"

namespace harmap {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double dist3(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

class TriMesh {
public:
  // Empty mesh, usable only as a placeholder before assignment.
  TriMesh() = default;
  // faces[f] lists the three vertex indices in CCW order.
  TriMesh(int n_vertices, std::vector<std::array<int, 3>> faces,
          bool allow_boundary = false);

  int n_vertices() const { return n_vertices_; }
  int n_faces() const { return (int)faces_.size(); }
  int n_edges() const { return n_edges_; }
  int n_halfedges() const { return 3 * n_faces(); }

  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  int origin(int h) const { return faces_[h / 3][h % 3]; }
  int dest(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  int next(int h) const { return h - h % 3 + (h % 3 + 1) % 3; }
  int prev(int h) const { return h - h % 3 + (h % 3 + 2) % 3; }
  int twin(int h) const { return twin_[h]; }
  int edge(int h) const { return edge_of_halfedge_[h]; }
  int halfedge_of_edge(int e) const { return halfedge_of_edge_[e]; }
  // Endpoints of edge e, ordered as in its representative halfedge.
  std::array<int, 2> edge_vertices(int e) const {
    int h = halfedge_of_edge_[e];
    return {origin(h), dest(h)};
  }

  // Some halfedge with the given origin.
  int halfedge_of_vertex(int v) const { return halfedge_of_vertex_[v]; }
  int vertex_degree(int v) const;
  // Edge index between u and v, or -1.
  int find_edge(int u, int v) const;

  bool is_closed() const { return closed_; }
  bool is_boundary_halfedge(int h) const { return twin_[h] < 0; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }

  int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }
  int genus() const;

  // All halfedges with origin v, in no particular rotational order.
  const std::vector<int>& vertex_halfedges(int v) const { return vertex_halfedges_[v]; }

private:
  int n_vertices_ = 0;
  int n_edges_ = 0;
  bool closed_ = true;
  std::vector<std::array<int, 3>> faces_;
  std::vector<int> twin_;
  std::vector<int> edge_of_halfedge_;
  std::vector<int> halfedge_of_edge_;
  std::vector<int> halfedge_of_vertex_;
  std::vector<char> boundary_vertex_;
  std::vector<std::vector<int>> vertex_halfedges_;
};

struct DiscreteMetric {
  std::vector<double> lengths; // per edge, positive

  double length(int e) const { return lengths[e]; }
};

struct EmbeddedMesh {
  TriMesh mesh;
  std::vector<Vec3> positions;
};

EmbeddedMesh load_mesh(const std::string& path);
void save_off(const std::string& path, const TriMesh& mesh,
              const std::vector<Vec3>& positions);

// Euclidean edge lengths from the embedding. Throws GeometryError on a
// degenerate face.
DiscreteMetric induced_metric(const EmbeddedMesh& em);

// Per-face side lengths (l_jk, l_ki, l_ij) for face (i,j,k).
std::array<double, 3> face_lengths(const TriMesh& mesh, const DiscreteMetric& metric, int f);

// Rejects meshes the pipeline cannot handle (boundary, genus < 2).
void require_pipeline_input(const TriMesh& mesh);

} // namespace harmap
