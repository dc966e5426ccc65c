#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "harmap/cut.hpp"
#include "harmap/synth.hpp"

using namespace harmap;

namespace {

void check_wedge(const TriMesh& mesh, const std::vector<std::vector<int>>& loops) {
  int base = loops[0].front();
  std::set<int> all_interior;
  for (const auto& loop : loops) {
    CHECK(loop.front() == base);
    CHECK(loop.back() == base);
    for (size_t k = 0; k + 1 < loop.size(); ++k)
      CHECK(mesh.find_edge(loop[k], loop[k + 1]) >= 0);
    for (size_t k = 1; k + 1 < loop.size(); ++k) {
      CHECK(loop[k] != base);
      CHECK(!all_interior.count(loop[k])); // pairwise disjoint except base
      all_interior.insert(loop[k]);
    }
  }
}

} // namespace

TEST_CASE("homology basis on genus-2 and genus-3") {
  auto g2 = make_genus_surface(2);
  auto loops2 = homology_basis(g2.mesh);
  REQUIRE(loops2.size() == 4);
  check_wedge(g2.mesh, loops2);

  auto g3 = make_genus_surface(3);
  auto loops3 = homology_basis(g3.mesh);
  REQUIRE(loops3.size() == 6);
  check_wedge(g3.mesh, loops3);
}

TEST_CASE("base vertex selection") {
  auto g2 = make_genus_surface(2);
  int base = default_base_vertex(g2.mesh);
  for (int v = 0; v < g2.mesh.n_vertices(); ++v)
    CHECK(g2.mesh.vertex_degree(v) <= g2.mesh.vertex_degree(base));

  // A low-degree base cannot host the wedge.
  int low = 0;
  for (int v = 0; v < g2.mesh.n_vertices(); ++v)
    if (g2.mesh.vertex_degree(v) < 8) { low = v; break; }
  CHECK_THROWS_AS(homology_basis(g2.mesh, low), TopologyError);
}

TEST_CASE("cut to a disk") {
  auto g2 = make_genus_surface(2);
  auto loops = homology_basis(g2.mesh);
  auto cut = cut_along(g2.mesh, loops);

  CHECK(cut.cut_mesh.euler_characteristic() == 1);
  CHECK(cut.cut_mesh.n_faces() == g2.mesh.n_faces());
  CHECK(!cut.cut_mesh.is_closed());
  REQUIRE(cut.boundary_segments.size() == 8);

  // Base has 4g preimages; interior vertices exactly one.
  std::vector<int> count(g2.mesh.n_vertices(), 0);
  for (int v : cut.pi_V) ++count[v];
  CHECK(count[cut.base_vertex] == 8);
  std::set<int> on_loops;
  for (const auto& loop : loops)
    for (size_t k = 1; k + 1 < loop.size(); ++k) on_loops.insert(loop[k]);
  for (int v = 0; v < g2.mesh.n_vertices(); ++v) {
    if (v == cut.base_vertex) continue;
    CHECK(count[v] == (on_loops.count(v) ? 2 : 1));
  }

  // Projection consistency: edge endpoints commute with pi.
  for (int e = 0; e < cut.cut_mesh.n_edges(); ++e) {
    auto [u, v] = cut.cut_mesh.edge_vertices(e);
    auto [ou, ov] = g2.mesh.edge_vertices(cut.pi_E[e]);
    CHECK(((cut.pi_V[u] == ou && cut.pi_V[v] == ov) ||
           (cut.pi_V[u] == ov && cut.pi_V[v] == ou)));
  }

  // Boundary segments: consecutive share a base copy; pairs are reversed.
  int n = 8;
  for (int s = 0; s < n; ++s) {
    const auto& seg = cut.boundary_segments[s];
    const auto& nxt = cut.boundary_segments[(s + 1) % n];
    CHECK(seg.back() == nxt.front());
    CHECK(cut.pi_V[seg.front()] == cut.base_vertex);
    int t = cut.segment_pairing[s];
    CHECK(cut.segment_pairing[t] == s);
    CHECK(t != s);
    const auto& pair = cut.boundary_segments[t];
    REQUIRE(pair.size() == seg.size());
    for (size_t k = 0; k < seg.size(); ++k)
      CHECK(cut.pi_V[seg[k]] == cut.pi_V[pair[seg.size() - 1 - k]]);
  }

  // Gluing inverse: projecting the cut faces reproduces the original faces.
  for (int f = 0; f < cut.cut_mesh.n_faces(); ++f)
    for (int k = 0; k < 3; ++k)
      CHECK(cut.pi_V[cut.cut_mesh.face(f)[k]] == g2.mesh.face(f)[k]);

  // Every cut boundary edge projects to the same edge as its paired edge.
  for (int s = 0; s < n; ++s) {
    const auto& seg = cut.boundary_segments[s];
    const auto& pair = cut.boundary_segments[cut.segment_pairing[s]];
    for (size_t k = 0; k + 1 < seg.size(); ++k) {
      int e1 = cut.cut_mesh.find_edge(seg[k], seg[k + 1]);
      int e2 = cut.cut_mesh.find_edge(pair[seg.size() - 2 - k], pair[seg.size() - 1 - k]);
      REQUIRE(e1 >= 0);
      REQUIRE(e2 >= 0);
      CHECK(e1 != e2);
      CHECK(cut.pi_E[e1] == cut.pi_E[e2]);
    }
  }
}

TEST_CASE("genus-3 cut") {
  auto g3 = make_genus_surface(3);
  auto cut = cut_along(g3.mesh, homology_basis(g3.mesh));
  CHECK(cut.cut_mesh.euler_characteristic() == 1);
  CHECK(cut.boundary_segments.size() == 12);
  std::vector<int> count(g3.mesh.n_vertices(), 0);
  for (int v : cut.pi_V) ++count[v];
  CHECK(count[cut.base_vertex] == 12);
}

TEST_CASE("segment-to-side matching against the cut-word polygon") {
  auto g2 = make_genus_surface(2);
  auto cut = cut_along(g2.mesh, homology_basis(g2.mesh));
  auto poly = regular_polygon_with_pairing(2, cut.segment_pairing);
  auto assign = match_segments_to_sides(cut, poly);
  REQUIRE(assign.size() == 8);
  for (int k = 0; k < 8; ++k) CHECK(assign[k] == k);
  // Paired segments land on paired sides.
  for (int k = 0; k < 8; ++k)
    CHECK(poly.pairing[assign[k]] == assign[cut.segment_pairing[k]]);
}

TEST_CASE("cut JSON dump") {
  auto g2 = make_genus_surface(2);
  auto loops = homology_basis(g2.mesh);
  auto cut = cut_along(g2.mesh, loops);
  auto poly = regular_polygon_with_pairing(2, cut.segment_pairing);
  auto text = cut_to_json(loops, cut, match_segments_to_sides(cut, poly));
  auto j = nlohmann::json::parse(text);
  CHECK(j["loops"].size() == 4);
  CHECK(j["segments"].size() == 8);
  CHECK(j["base_vertex"].get<int>() == cut.base_vertex);
}

TEST_CASE("cut rejects bad loop systems") {
  auto g2 = make_genus_surface(2);
  auto loops = homology_basis(g2.mesh);
  auto bad = loops;
  bad.pop_back();
  CHECK_THROWS_AS(cut_along(g2.mesh, bad), TopologyError);
  bad = loops;
  bad.back() = bad.front(); // duplicate loop: crossing + dependent
  CHECK_THROWS_AS(cut_along(g2.mesh, bad), TopologyError);
}
