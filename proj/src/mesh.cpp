#include "harmap/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace harmap {

TriMesh::TriMesh(int n_vertices, std::vector<std::array<int, 3>> faces,
                 bool allow_boundary)
    : n_vertices_(n_vertices), faces_(std::move(faces)) {
  int nh = 3 * (int)faces_.size();
  twin_.assign(nh, -1);
  edge_of_halfedge_.assign(nh, -1);
  halfedge_of_vertex_.assign(n_vertices_, -1);
  boundary_vertex_.assign(n_vertices_, 0);
  vertex_halfedges_.assign(n_vertices_, {});

  std::map<std::pair<int, int>, int> directed;
  for (int h = 0; h < nh; ++h) {
    int u = origin(h), v = dest(h);
    if (u < 0 || v < 0 || u >= n_vertices_ || v >= n_vertices_ || u == v)
      throw ParseError("TriMesh: invalid face vertex index");
    if (!directed.emplace(std::make_pair(u, v), h).second)
      throw TopologyError("TriMesh: non-manifold or inconsistently oriented edge");
    halfedge_of_vertex_[u] = h;
    vertex_halfedges_[u].push_back(h);
  }
  for (int h = 0; h < nh; ++h) {
    auto it = directed.find({dest(h), origin(h)});
    twin_[h] = (it == directed.end()) ? -1 : it->second;
  }

  // Edge indices: one per twin pair, boundary halfedges get their own.
  n_edges_ = 0;
  for (int h = 0; h < nh; ++h) {
    if (edge_of_halfedge_[h] >= 0) continue;
    edge_of_halfedge_[h] = n_edges_;
    if (twin_[h] >= 0) edge_of_halfedge_[twin_[h]] = n_edges_;
    halfedge_of_edge_.push_back(h);
    ++n_edges_;
  }

  closed_ = true;
  for (int h = 0; h < nh; ++h) {
    if (twin_[h] < 0) {
      closed_ = false;
      boundary_vertex_[origin(h)] = 1;
      boundary_vertex_[dest(h)] = 1;
    }
  }
  if (!closed_ && !allow_boundary)
    throw TopologyError("TriMesh: mesh has boundary");

  // Vertex manifoldness: the faces around each vertex must form a single fan.
  for (int v = 0; v < n_vertices_; ++v) {
    if (vertex_halfedges_[v].empty())
      throw TopologyError("TriMesh: isolated vertex");
    int start = halfedge_of_vertex_[v];
    if (!closed_) {
      // Fan start: the outgoing halfedge with no CCW predecessor, i.e. whose
      // own twin is missing. Interior vertices of a bounded mesh keep any
      // start since their fan is a full cycle.
      for (int cand : vertex_halfedges_[v])
        if (twin_[cand] < 0) {
          start = cand;
          break;
        }
    }
    size_t count = 0;
    int h = start;
    do {
      ++count;
      int t = twin_[prev(h)];
      if (t < 0) break;
      h = t;
    } while (h != start && count <= vertex_halfedges_[v].size());
    if (count != vertex_halfedges_[v].size())
      throw TopologyError("TriMesh: non-manifold vertex " + std::to_string(v));
  }

  // Connectivity.
  std::vector<char> seen(n_vertices_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int h : vertex_halfedges_[v]) {
      int w = dest(h);
      if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
      int w2 = dest(next(h));
      if (!seen[w2]) { seen[w2] = 1; stack.push_back(w2); }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw TopologyError("TriMesh: mesh is not connected");
}

int TriMesh::vertex_degree(int v) const {
  return (int)vertex_halfedges_[v].size() + (boundary_vertex_[v] ? 1 : 0);
}

int TriMesh::find_edge(int u, int v) const {
  for (int h : vertex_halfedges_[u])
    if (dest(h) == v) return edge_of_halfedge_[h];
  for (int h : vertex_halfedges_[v])
    if (dest(h) == u) return edge_of_halfedge_[h];
  return -1;
}

int TriMesh::genus() const {
  int chi = euler_characteristic();
  if (!closed_ || (2 - chi) % 2 != 0)
    throw TopologyError("genus: not a closed surface with even 2-chi");
  return (2 - chi) / 2;
}

namespace {

std::string next_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    return tok;
  }
  return {};
}

EmbeddedMesh load_off(std::istream& in) {
  std::string header = next_token(in);
  if (header != "OFF") throw ParseError("OFF: missing header");
  long nv, nf, ne;
  try {
    nv = std::stol(next_token(in));
    nf = std::stol(next_token(in));
    ne = std::stol(next_token(in));
    (void)ne;
  } catch (const std::exception&) {
    throw ParseError("OFF: bad counts line");
  }
  std::vector<Vec3> pos(nv);
  for (long i = 0; i < nv; ++i) {
    try {
      pos[i].x = std::stod(next_token(in));
      pos[i].y = std::stod(next_token(in));
      pos[i].z = std::stod(next_token(in));
    } catch (const std::exception&) {
      throw ParseError("OFF: bad vertex line");
    }
  }
  std::vector<std::array<int, 3>> faces(nf);
  for (long f = 0; f < nf; ++f) {
    int arity;
    try {
      arity = std::stoi(next_token(in));
    } catch (const std::exception&) {
      throw ParseError("OFF: bad face line");
    }
    if (arity != 3) throw ParseError("OFF: non-triangular face");
    for (int k = 0; k < 3; ++k) faces[f][k] = std::stoi(next_token(in));
  }
  return {TriMesh((int)nv, std::move(faces)), std::move(pos)};
}

EmbeddedMesh load_obj(std::istream& in) {
  std::vector<Vec3> pos;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw ParseError("OBJ: bad vertex record");
      pos.push_back(p);
    } else if (kind == "f") {
      std::array<int, 3> f{};
      std::string tok;
      int k = 0;
      while (ls >> tok) {
        if (k >= 3) throw ParseError("OBJ: non-triangular face");
        // Strip texture/normal references "i/j/k".
        f[k++] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      if (k != 3) throw ParseError("OBJ: non-triangular face");
      faces.push_back(f);
    }
    // Other records ignored.
  }
  return {TriMesh((int)pos.size(), std::move(faces)), std::move(pos)};
}

} // namespace

EmbeddedMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "obj" || ext == "OBJ") return load_obj(in);
  return load_off(in);
}

void save_off(const std::string& path, const TriMesh& mesh,
              const std::vector<Vec3>& positions) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out.precision(17);
  out << "OFF\n" << mesh.n_vertices() << " " << mesh.n_faces() << " "
      << mesh.n_edges() << "\n";
  for (const Vec3& p : positions)
    out << p.x << " " << p.y << " " << p.z << "\n";
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    out << "3 " << fv[0] << " " << fv[1] << " " << fv[2] << "\n";
  }
}

DiscreteMetric induced_metric(const EmbeddedMesh& em) {
  DiscreteMetric metric;
  metric.lengths.resize(em.mesh.n_edges());
  for (int e = 0; e < em.mesh.n_edges(); ++e) {
    auto [u, v] = em.mesh.edge_vertices(e);
    metric.lengths[e] = dist3(em.positions[u], em.positions[v]);
    if (metric.lengths[e] <= 0.0)
      throw GeometryError("induced_metric: zero-length edge");
  }
  for (int f = 0; f < em.mesh.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(em.mesh, metric, f);
    if (a >= b + c || b >= a + c || c >= a + b)
      throw GeometryError("induced_metric: degenerate face " + std::to_string(f));
  }
  return metric;
}

std::array<double, 3> face_lengths(const TriMesh& mesh, const DiscreteMetric& metric, int f) {
  int h0 = 3 * f;
  // Side opposite to corner k is the edge not incident to it.
  return {metric.length(mesh.edge(mesh.next(h0))),
          metric.length(mesh.edge(mesh.prev(h0))),
          metric.length(mesh.edge(h0))};
}

void require_pipeline_input(const TriMesh& mesh) {
  if (!mesh.is_closed())
    throw TopologyError("input mesh has boundary; a closed surface is required");
  int g = mesh.genus();
  if (g < 2)
    throw TopologyError("input mesh has genus " + std::to_string(g) +
                        "; genus >= 2 is required");
}

} // namespace harmap
