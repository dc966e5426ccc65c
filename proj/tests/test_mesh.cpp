#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "harmap/mesh.hpp"
#include "harmap/synth.hpp"

using namespace harmap;

namespace {

const char* kOctahedronOff = R"(OFF
6 8 12
0 0 1
1 0 0
0 1 0
-1 0 0
0 -1 0
0 0 -1
3 0 1 2
3 0 2 3
3 0 3 4
3 0 4 1
3 5 2 1
3 5 3 2
3 5 4 3
3 5 1 4
)";

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/harmap_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

} // namespace

TEST_CASE("octahedron OFF") {
  auto path = write_temp("oct.off", kOctahedronOff);
  auto em = load_mesh(path);
  CHECK(em.mesh.n_vertices() == 6);
  CHECK(em.mesh.n_edges() == 12);
  CHECK(em.mesh.n_faces() == 8);
  CHECK(em.mesh.euler_characteristic() == 2);
  CHECK(em.mesh.genus() == 0);
  CHECK(em.mesh.is_closed());
}

TEST_CASE("quad face rejected") {
  auto path = write_temp("quad.off", "OFF\n4 1 4\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  CHECK_THROWS_AS(load_mesh(path), ParseError);
}

TEST_CASE("halfedge algebra") {
  auto em = make_torus(6, 6);
  const TriMesh& m = em.mesh;
  CHECK(2 * m.n_edges() == 3 * m.n_faces());
  for (int h = 0; h < m.n_halfedges(); ++h) {
    CHECK(m.twin(m.twin(h)) == h);
    CHECK(m.next(m.next(m.next(h))) == h);
    // The two halfedges of an edge traverse it oppositely.
    CHECK(m.origin(h) == m.dest(m.twin(h)));
    CHECK(m.dest(h) == m.origin(m.twin(h)));
  }
  for (int v = 0; v < m.n_vertices(); ++v) CHECK(m.vertex_degree(v) >= 3);
}

TEST_CASE("synthetic genus-2 and genus-3 surfaces") {
  auto g2 = make_genus_surface(2);
  CHECK(g2.mesh.euler_characteristic() == -2);
  CHECK(g2.mesh.genus() == 2);
  auto g3 = make_genus_surface(3);
  CHECK(g3.mesh.euler_characteristic() == -4);
  CHECK(g3.mesh.genus() == 3);

  // Induced metric is valid on both.
  auto metric = induced_metric(g2);
  CHECK((int)metric.lengths.size() == g2.mesh.n_edges());
  for (double l : metric.lengths) CHECK(l > 0.0);
  induced_metric(g3);

  // The junction gives a vertex with enough valence for a wedge basis.
  int maxdeg = 0;
  for (int v = 0; v < g2.mesh.n_vertices(); ++v)
    maxdeg = std::max(maxdeg, g2.mesh.vertex_degree(v));
  CHECK(maxdeg >= 8);
  int maxdeg3 = 0;
  for (int v = 0; v < g3.mesh.n_vertices(); ++v)
    maxdeg3 = std::max(maxdeg3, g3.mesh.vertex_degree(v));
  CHECK(maxdeg3 >= 12);
}

TEST_CASE("degenerate face errors") {
  // Two triangles glued along all three edges (a valid closed "pillow" is
  // non-manifold for us); use a flat tetrahedron for collinearity instead.
  std::string off = "OFF\n4 4 6\n0 0 0\n1 0 0\n2 0 0\n0 1 0\n"
                    "3 0 1 3\n3 1 2 3\n3 0 3 2\n3 0 2 1\n";
  auto path = write_temp("flat.off", off);
  auto em = load_mesh(path);
  CHECK_THROWS_AS(induced_metric(em), GeometryError);
}

TEST_CASE("OFF round trip is bit-exact") {
  auto g2 = make_genus_surface(2);
  std::string p1 = "/tmp/harmap_rt1.off";
  std::string p2 = "/tmp/harmap_rt2.off";
  save_off(p1, g2.mesh, g2.positions);
  auto loaded = load_mesh(p1);
  CHECK(loaded.mesh.n_vertices() == g2.mesh.n_vertices());
  CHECK(loaded.mesh.faces() == g2.mesh.faces());
  save_off(p2, loaded.mesh, loaded.positions);
  std::ifstream f1(p1), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
}

TEST_CASE("OBJ ingestion") {
  std::string obj = "v 0 0 1\nv 1 0 0\nv 0 1 0\nv -1 0 0\nv 0 -1 0\nv 0 0 -1\n"
                    "f 1 2 3\nf 1 3 4\nf 1 4 5\nf 1 5 2\n"
                    "f 6 3 2\nf 6 4 3\nf 6 5 4\nf 6 2 5\n";
  auto path = write_temp("oct.obj", obj);
  auto em = load_mesh(path);
  CHECK(em.mesh.n_vertices() == 6);
  CHECK(em.mesh.genus() == 0);
}

TEST_CASE("pipeline entry rejects low genus") {
  auto t = make_torus(6, 6);
  CHECK_THROWS_AS(require_pipeline_input(t.mesh), TopologyError);
}
