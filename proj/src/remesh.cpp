#include "harmap/remesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "harmap/target_surface.hpp"

namespace harmap {

namespace {

std::array<double, 2> klein_of(const DiskPoint& p) { return to_klein(p); }

DiskPoint disk_of_klein(const std::array<double, 2>& k) {
  double n2 = k[0] * k[0] + k[1] * k[1];
  double s = 1.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - n2)));
  return {s * k[0], s * k[1]};
}

// Euclidean barycentric coordinates of point q in Klein triangle (a,b,c).
// Returns false when the triangle is degenerate.
bool klein_barycentric(const std::array<double, 2>& a, const std::array<double, 2>& b,
                       const std::array<double, 2>& c, const std::array<double, 2>& q,
                       std::array<double, 3>& lambda) {
  double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  if (std::abs(det) < 1e-300) return false;
  double l1 = ((b[0] - q[0]) * (c[1] - q[1]) - (c[0] - q[0]) * (b[1] - q[1])) / det;
  double l2 = ((c[0] - q[0]) * (a[1] - q[1]) - (a[0] - q[0]) * (c[1] - q[1])) / det;
  lambda = {l1, l2, 1.0 - l1 - l2};
  return true;
}

constexpr double kBaryTol = 1e-12;

bool locate_in_copy(const CoveringAtlas::Copy& copy, const TriMesh& mesh,
                    const std::array<double, 2>& q, int& face_out,
                    std::array<double, 3>& lambda_out) {
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    const auto& a = copy.klein[fv[0]];
    const auto& b = copy.klein[fv[1]];
    const auto& c = copy.klein[fv[2]];
    double lo_x = std::min({a[0], b[0], c[0]}), hi_x = std::max({a[0], b[0], c[0]});
    double lo_y = std::min({a[1], b[1], c[1]}), hi_y = std::max({a[1], b[1], c[1]});
    if (q[0] < lo_x - 1e-9 || q[0] > hi_x + 1e-9 || q[1] < lo_y - 1e-9 ||
        q[1] > hi_y + 1e-9)
      continue;
    std::array<double, 3> lambda;
    if (!klein_barycentric(a, b, c, q, lambda)) continue;
    if (lambda[0] >= -kBaryTol && lambda[1] >= -kBaryTol && lambda[2] >= -kBaryTol) {
      face_out = f;
      lambda_out = lambda;
      return true;
    }
  }
  return false;
}

// Spanning pairs (representative, member) of the boundary identification
// classes induced by the vertex projection.
std::vector<std::pair<int, int>> projection_pairs(const TriMesh& mesh,
                                                  const std::vector<int>& pi_V) {
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) classes[pi_V[v]].push_back(v);
  std::vector<std::pair<int, int>> pairs;
  for (auto& [orig, members] : classes)
    for (size_t i = 1; i < members.size(); ++i)
      pairs.emplace_back(members[0], members[i]);
  return pairs;
}

} // namespace

TemplateMesh make_polygon_template(const FundamentalPolygon& polygon,
                                   int side_subdiv, int rings) {
  TargetSurface ts = make_target_surface(polygon, side_subdiv, rings);
  TemplateMesh tmpl;
  tmpl.mesh = ts.realization.cut.cut_mesh;
  tmpl.positions = ts.realization.positions;
  const auto& segs = ts.realization.cut.boundary_segments;
  for (int k = 0; k < (int)segs.size(); ++k)
    for (int q = 0; q + 1 < (int)segs[k].size(); ++q)
      tmpl.boundary.push_back({segs[k][q], k, (double)q / side_subdiv});
  tmpl.pairs = projection_pairs(tmpl.mesh, ts.realization.cut.pi_V);
  return tmpl;
}

TemplateMesh realization_template(const GeodesicRealization& r) {
  TemplateMesh tmpl;
  tmpl.mesh = r.cut.cut_mesh;
  tmpl.positions = r.positions;
  for (int s = 0; s < (int)r.cut.boundary_segments.size(); ++s) {
    const auto& seg = r.cut.boundary_segments[s];
    std::vector<double> cum(seg.size(), 0.0);
    for (size_t q = 1; q < seg.size(); ++q)
      cum[q] = cum[q - 1] + hyp_distance(r.positions[seg[q - 1]], r.positions[seg[q]]);
    double total = cum.back() > 0.0 ? cum.back() : 1.0;
    for (size_t q = 0; q + 1 < seg.size(); ++q)
      tmpl.boundary.push_back({seg[q], r.segment_to_side[s], cum[q] / total});
  }
  tmpl.pairs = projection_pairs(tmpl.mesh, r.cut.pi_V);
  return tmpl;
}

CoveringAtlas build_atlas(const GeodesicRealization& r, const TemplateMesh& tmpl,
                          int max_word_len) {
  // Sample set: template vertices, hyperbolic edge midpoints, and a Klein
  // grid over the closed polygon.
  std::vector<std::array<double, 2>> samples;
  for (const DiskPoint& p : tmpl.positions) samples.push_back(klein_of(p));
  for (int e = 0; e < tmpl.mesh.n_edges(); ++e) {
    auto [u, v] = tmpl.mesh.edge_vertices(e);
    const DiskPoint& a = tmpl.positions[u];
    const DiskPoint& b = tmpl.positions[v];
    if (hyp_distance(a, b) < kDegenerateEdgeLength) continue;
    TangentVec half = log_map(a, b);
    half.vx *= 0.5;
    half.vy *= 0.5;
    samples.push_back(klein_of(exp_map(a, half)));
  }
  double radius = 0.0;
  for (const DiskPoint& v : r.polygon.vertices) {
    auto k = klein_of(v);
    radius = std::max(radius, std::hypot(k[0], k[1]));
  }
  const int grid = 40;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      std::array<double, 2> k = {radius * (2.0 * i / grid - 1.0),
                                 radius * (2.0 * j / grid - 1.0)};
      if (k[0] * k[0] + k[1] * k[1] >= radius * radius) continue;
      if (r.polygon.contains(disk_of_klein(k))) samples.push_back(k);
    }

  std::vector<char> covered(samples.size(), 0);
  size_t n_uncovered = samples.size();
  CoveringAtlas atlas;
  for (const GroupElement& g : enumerate_group(r.polygon, max_word_len)) {
    if (n_uncovered == 0) break;
    CoveringAtlas::Copy copy;
    copy.gamma = g;
    copy.klein.resize(r.positions.size());
    for (size_t v = 0; v < r.positions.size(); ++v)
      copy.klein[v] = klein_of(g.transform.apply(r.positions[v]));
    size_t gained = 0;
    int face;
    std::array<double, 3> lambda;
    for (size_t s = 0; s < samples.size(); ++s) {
      if (covered[s]) continue;
      if (locate_in_copy(copy, r.cut.cut_mesh, samples[s], face, lambda)) {
        covered[s] = 1;
        ++gained;
      }
    }
    if (gained > 0) {
      n_uncovered -= gained;
      atlas.copies.push_back(std::move(copy));
    }
  }
  if (n_uncovered > 0) {
    size_t first = 0;
    while (covered[first]) ++first;
    DiskPoint p = disk_of_klein(samples[first]);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "build_atlas: %zu sample points uncovered at word length %d, "
                  "e.g. (%.12g, %.12g)",
                  n_uncovered, max_word_len, p.x, p.y);
    throw GeometryError(buf);
  }
  return atlas;
}

PulledMesh pull_back(const TemplateMesh& tmpl, const CoveringAtlas& atlas,
                     const GeodesicRealization& r,
                     const std::vector<Vec3>& original_positions) {
  PulledMesh out;
  out.mesh = tmpl.mesh;
  out.pairs = tmpl.pairs;
  out.positions.resize(tmpl.positions.size());
  const TriMesh& cut_mesh = r.cut.cut_mesh;
  // Paired vertices name the same quotient point; evaluating each class once
  // keeps the interpolated inverse map single-valued (independent evaluation
  // in different atlas copies would differ by the projective distortion of
  // Klein barycentrics).
  std::vector<int> cls(tmpl.positions.size());
  for (size_t i = 0; i < cls.size(); ++i) cls[i] = (int)i;
  auto find_cls = [&](int x) {
    while (cls[x] != x) x = cls[x] = cls[cls[x]];
    return x;
  };
  for (auto [a, b] : tmpl.pairs) cls[find_cls(a)] = find_cls(b);
  for (size_t i = 0; i < tmpl.positions.size(); ++i) {
    if (find_cls((int)i) != (int)i) continue;
    std::array<double, 2> q = klein_of(tmpl.positions[i]);
    int face = -1;
    std::array<double, 3> lambda;
    for (const auto& copy : atlas.copies)
      if (locate_in_copy(copy, cut_mesh, q, face, lambda)) break;
    if (face < 0) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "pull_back: template vertex %zu at (%.12g, %.12g) not "
                    "covered by the atlas",
                    i, tmpl.positions[i].x, tmpl.positions[i].y);
      throw GeometryError(buf);
    }
    double s = lambda[0] + lambda[1] + lambda[2];
    const auto& fv = cut_mesh.face(face);
    Vec3 p;
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = original_positions[r.cut.pi_V[fv[c]]];
      double w = lambda[c] / s;
      p.x += w * v.x;
      p.y += w * v.y;
      p.z += w * v.z;
    }
    out.positions[i] = p;
  }
  for (size_t i = 0; i < tmpl.positions.size(); ++i)
    out.positions[i] = out.positions[find_cls((int)i)];
  return out;
}

EmbeddedMesh glue_boundary(const PulledMesh& pulled) {
  const int n = pulled.mesh.n_vertices();
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : pulled.pairs) {
    double gap = dist3(pulled.positions[a], pulled.positions[b]);
    if (gap > 1e-9) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "glue_boundary: paired vertices %d and %d disagree by %.3g",
                    a, b, gap);
      throw GeometryError(buf);
    }
    parent[find(a)] = find(b);
  }
  std::vector<int> new_id(n, -1);
  std::vector<Vec3> positions;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) {
      new_id[i] = (int)positions.size();
      positions.push_back(pulled.positions[i]);
    }
  for (int i = 0; i < n; ++i) new_id[i] = new_id[find(i)];
  std::vector<std::array<int, 3>> faces = pulled.mesh.faces();
  for (auto& f : faces)
    for (int& v : f) v = new_id[v];
  TriMesh glued((int)positions.size(), std::move(faces));
  if (!glued.is_closed())
    throw TopologyError("glue_boundary: result is not closed");
  return {std::move(glued), std::move(positions)};
}

void save_template(const std::string& off_path, const std::string& json_path,
                   const TemplateMesh& tmpl) {
  std::vector<Vec3> flat(tmpl.positions.size());
  for (size_t i = 0; i < tmpl.positions.size(); ++i)
    flat[i] = {tmpl.positions[i].x, tmpl.positions[i].y, 0.0};
  save_off(off_path, tmpl.mesh, flat);

  nlohmann::json j;
  j["boundary"] = nlohmann::json::array();
  for (const BoundaryTag& t : tmpl.boundary)
    j["boundary"].push_back({{"vertex", t.vertex}, {"side", t.side}, {"param", t.param}});
  j["pairs"] = nlohmann::json::array();
  for (auto [a, b] : tmpl.pairs) j["pairs"].push_back({a, b});
  std::ofstream out(json_path);
  if (!out) throw ParseError("save_template: cannot open " + json_path);
  out << j.dump(2) << "\n";
}

TemplateMesh load_template(const std::string& off_path, const std::string& json_path) {
  std::ifstream in(off_path);
  if (!in) throw ParseError("load_template: cannot open " + off_path);
  std::string token;
  if (!(in >> token) || token != "OFF")
    throw ParseError("load_template: missing OFF header in " + off_path);
  int nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne) || nv <= 0 || nf <= 0)
    throw ParseError("load_template: bad OFF counts in " + off_path);
  TemplateMesh tmpl;
  tmpl.positions.resize(nv);
  for (int i = 0; i < nv; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z))
      throw ParseError("load_template: truncated vertex list in " + off_path);
    tmpl.positions[i] = {x, y};
    if (DiskPoint{x, y}.norm2() >= 1.0)
      throw GeometryError("load_template: vertex outside the open unit disk");
  }
  std::vector<std::array<int, 3>> faces(nf);
  for (int f = 0; f < nf; ++f) {
    int k;
    if (!(in >> k) || k != 3)
      throw ParseError("load_template: only triangle faces are supported");
    for (int c = 0; c < 3; ++c)
      if (!(in >> faces[f][c]) || faces[f][c] < 0 || faces[f][c] >= nv)
        throw ParseError("load_template: face index out of range");
  }
  tmpl.mesh = TriMesh(nv, std::move(faces), /*allow_boundary=*/true);

  std::ifstream jin(json_path);
  if (!jin) throw ParseError("load_template: cannot open " + json_path);
  nlohmann::json j;
  try {
    jin >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("load_template: bad JSON sidecar: ") + e.what());
  }
  for (const auto& t : j.at("boundary"))
    tmpl.boundary.push_back({t.at("vertex").get<int>(), t.at("side").get<int>(),
                             t.at("param").get<double>()});
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2)
      throw ParseError("load_template: pair entries must be [a, b]");
    tmpl.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  for (auto [a, b] : tmpl.pairs)
    if (a < 0 || a >= nv || b < 0 || b >= nv)
      throw ParseError("load_template: pair index out of range");
  return tmpl;
}

} // namespace harmap
