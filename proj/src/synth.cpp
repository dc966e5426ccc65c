#include "harmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace harmap {

EmbeddedMesh make_torus(int n, int m, double big_radius, double small_radius,
                        Vec3 offset) {
  std::vector<Vec3> pos(n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double u = 2.0 * std::numbers::pi * i / n;
      double v = 2.0 * std::numbers::pi * j / m;
      double w = big_radius + small_radius * std::cos(v);
      pos[i * m + j] = {w * std::cos(u) + offset.x, w * std::sin(u) + offset.y,
                       small_radius * std::sin(v) + offset.z};
    }
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(2 * n * m);
  auto vid = [&](int i, int j) { return ((i + n) % n) * m + ((j + m) % m); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      faces.push_back({a, b, c});
      faces.push_back({a, c, d});
    }
  }
  return {TriMesh(n * m, std::move(faces)), std::move(pos)};
}

EmbeddedMesh make_genus_surface(int genus, int n, int m) {
  if (genus < 2) throw TopologyError("make_genus_surface: genus must be >= 2");
  if (genus > 4)
    throw TopologyError("make_genus_surface: star construction supports genus <= 4");
  if (n < 8 || m < 6) throw TopologyError("make_genus_surface: grid too coarse");

  auto vid = [&](int torus, int i, int j) {
    return torus * n * m + ((i + n) % n) * m + ((j + m) % m);
  };

  // Star connected sum: every handle torus glues onto a face of the hub
  // torus incident to the hub vertex (0,0), so one vertex lies on every
  // neck; the one-point wedge homology basis then routes each handle's
  // loops locally. The three chosen hub faces share only the hub vertex.
  // Each handle's removed face spatially mirrors its hub face (the handle
  // sits at x offset 7 facing back), and the vertex correspondence pairs
  // nearest mirrored corners with opposite boundary orientation, keeping
  // the glued triangles well shaped after position averaging.
  auto hub_face = [&](int t) {
    switch (t) {
      case 1: return std::array<int, 3>{vid(0, 0, 0), vid(0, 1, 0), vid(0, 1, 1)};
      case 2: return std::array<int, 3>{vid(0, -1, 0), vid(0, 0, 0), vid(0, 0, 1)};
      default: return std::array<int, 3>{vid(0, -1, -1), vid(0, 0, -1), vid(0, 0, 0)};
    }
  };
  auto handle_face = [&](int t) {
    switch (t) {
      case 1:
        return std::array<int, 3>{vid(t, n / 2 - 1, 0), vid(t, n / 2, 0),
                                  vid(t, n / 2, 1)};
      case 2:
        return std::array<int, 3>{vid(t, n / 2, 0), vid(t, n / 2 + 1, 0),
                                  vid(t, n / 2 + 1, 1)};
      default:
        return std::array<int, 3>{vid(t, n / 2, -1), vid(t, n / 2 + 1, -1),
                                  vid(t, n / 2 + 1, 0)};
    }
  };
  // corner k of the hub face merges with corner glue_map(t)[k] of the
  // handle face; each map is an odd permutation, reversing orientation.
  auto glue_map = [&](int t) {
    switch (t) {
      case 1: return std::array<int, 3>{1, 0, 2};
      case 2: return std::array<int, 3>{1, 0, 2};
      default: return std::array<int, 3>{2, 1, 0};
    }
  };

  std::vector<Vec3> pos;
  std::vector<std::array<int, 3>> faces;
  for (int t = 0; t < genus; ++t) {
    // Handles may interpenetrate in space; only edge lengths matter.
    Vec3 off = t > 0 ? Vec3{7.0, 0.0, 0.0} : Vec3{0, 0, 0};
    EmbeddedMesh torus = make_torus(n, m, 2.0, 0.8, off);
    pos.insert(pos.end(), torus.positions.begin(), torus.positions.end());
    for (const auto& f : torus.mesh.faces()) {
      std::array<int, 3> g = {f[0] + t * n * m, f[1] + t * n * m, f[2] + t * n * m};
      bool removed = false;
      for (int s = 1; s < genus; ++s) {
        if (t == 0 && g == hub_face(s)) removed = true;
        if (t == s && g == handle_face(s)) removed = true;
      }
      if (!removed) faces.push_back(g);
    }
  }
  if ((int)faces.size() != genus * 2 * n * m - 2 * (genus - 1))
    throw TopologyError("make_genus_surface: junction face removal failed");

  std::vector<int> parent(pos.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
  for (int t = 1; t < genus; ++t) {
    auto fa = hub_face(t), fb = handle_face(t), gm = glue_map(t);
    for (int k = 0; k < 3; ++k) unite(fa[k], fb[gm[k]]);
  }

  std::vector<int> compact(pos.size(), -1);
  std::vector<Vec3> out_pos;
  std::vector<int> mass;
  for (size_t i = 0; i < pos.size(); ++i) {
    int r = find((int)i);
    if (compact[r] < 0) {
      compact[r] = (int)out_pos.size();
      out_pos.push_back({0, 0, 0});
      mass.push_back(0);
    }
    int c = compact[r];
    out_pos[c].x += pos[i].x;
    out_pos[c].y += pos[i].y;
    out_pos[c].z += pos[i].z;
    mass[c] += 1;
  }
  for (size_t c = 0; c < out_pos.size(); ++c) {
    out_pos[c].x /= mass[c];
    out_pos[c].y /= mass[c];
    out_pos[c].z /= mass[c];
  }
  for (auto& f : faces)
    for (int& v : f) v = compact[find(v)];

  int hub = compact[find(vid(0, 0, 0))];
  int hub_degree = 0;
  for (const auto& f : faces)
    hub_degree += (f[0] == hub || f[1] == hub || f[2] == hub);
  if (hub_degree < 4 * genus)
    throw TopologyError("make_genus_surface: hub valence below 4g");

  return {TriMesh((int)out_pos.size(), std::move(faces)), std::move(out_pos)};
}

} // namespace harmap
