#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "harmap/mesh.hpp"
#include "harmap/synth.hpp"
#include "harmap/uniformize.hpp"

using namespace harmap;
using std::numbers::pi;

namespace {

// Two triangles glued along all three edges: the smallest closed surface on
// which every edge has two distinct adjacent faces.
TriMesh pillow() {
  return TriMesh(3, {{0, 1, 2}, {0, 2, 1}});
}

DiscreteMetric pillow_metric(double l01, double l12, double l20) {
  // Edge order produced by the constructor: (0,1), (1,2), (2,0).
  return {{l01, l12, l20}};
}

double gauss_bonnet_residual(const TriMesh& mesh, const DiscreteMetric& m) {
  auto K = vertex_curvature(mesh, m);
  double sumK = 0.0;
  for (double k : K) sumK += k;
  return sumK - total_area(mesh, m) - 2.0 * pi * mesh.euler_characteristic();
}

} // namespace

TEST_CASE("vertex curvature basics") {
  // Degree-6 vertex with tiny equal lengths: Euclidean limit, K near 0.
  auto torus = make_torus(8, 8);
  DiscreteMetric tiny{std::vector<double>(torus.mesh.n_edges(), 1e-4)};
  auto K = vertex_curvature(torus.mesh, tiny);
  for (double k : K) CHECK(std::abs(k) < 1e-7);

  // Doubling one edge length changes the adjacent corner angles.
  DiscreteMetric m2 = tiny;
  m2.lengths[0] *= 1.5;
  auto K2 = vertex_curvature(torus.mesh, m2);
  auto [u, v] = torus.mesh.edge_vertices(0);
  CHECK(std::abs(K2[u] - K[u]) > 1e-8);
  CHECK(std::abs(K2[v] - K[v]) > 1e-8);
}

TEST_CASE("Gauss-Bonnet identity") {
  auto g2 = make_genus_surface(2);
  auto metric = induced_metric(g2);
  CHECK(std::abs(gauss_bonnet_residual(g2.mesh, metric)) < 1e-9);

  auto p = pillow();
  CHECK(std::abs(gauss_bonnet_residual(p, pillow_metric(1.0, 1.2, 0.8))) < 1e-12);
}

TEST_CASE("yamabe flow on genus-2") {
  auto g2 = make_genus_surface(2);
  auto metric = induced_metric(g2);
  auto flow = hyperbolic_yamabe_flow(g2.mesh, metric);
  auto K = vertex_curvature(g2.mesh, flow.metric);
  double maxK = 0.0;
  for (double k : K) maxK = std::max(maxK, std::abs(k));
  CHECK(maxK < 1e-8);
  CHECK(total_area(g2.mesh, flow.metric) == doctest::Approx(4.0 * pi).epsilon(1e-7));

  // Fixed point: re-running on the flat metric leaves u near zero.
  auto again = hyperbolic_yamabe_flow(g2.mesh, flow.metric);
  for (double u : again.factors.u) CHECK(std::abs(u) < 1e-9);
}

TEST_CASE("canonical weights on the equilateral pillow") {
  auto p = pillow();
  double l = 0.9;
  auto w = canonical_weights(p, pillow_metric(l, l, l));
  double cosA = std::cosh(l) / (std::cosh(l) + 1.0);
  double A = std::acos(cosA);
  double expected = 2.0 * std::tan(A / 2.0) * std::tanh(l / 2.0) / l;
  for (double c : w.c) CHECK(c == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("euclidean cotangent weights") {
  auto p = pillow();
  auto w = euclidean_cotangent_weights(p, pillow_metric(1.0, 1.0, 1.0));
  for (double c : w.c) CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

  // Right isoceles pair: opposite angles 90 degrees give weight 0.
  double h = std::sqrt(2.0);
  auto w2 = euclidean_cotangent_weights(p, pillow_metric(h, 1.0, 1.0));
  CHECK(w2.c[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hyperbolic weights approach cotangent weights for tiny lengths") {
  auto p = pillow();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    double s = 1e-3;
    auto m = pillow_metric(s * u(rng), s * u(rng), s * u(rng));
    auto [a, b, c] = std::array<double, 3>{m.lengths[0], m.lengths[1], m.lengths[2]};
    if (a >= b + c || b >= a + c || c >= a + b) continue;
    auto hyp = canonical_weights(p, m);
    auto euc = euclidean_cotangent_weights(p, m);
    for (int e = 0; e < 3; ++e)
      CHECK(std::abs(hyp.c[e] - euc.c[e]) / std::abs(euc.c[e]) < 1e-4);
  }
}

TEST_CASE("weight symmetry and positivity-Delaunay equivalence") {
  auto g2 = make_genus_surface(2);
  auto metric = induced_metric(g2);
  auto flow = hyperbolic_yamabe_flow(g2.mesh, metric);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.002);
  for (int trial = 0; trial < 3; ++trial) {
    DiscreteMetric m = flow.metric;
    if (trial > 0)
      for (double& l : m.lengths) l *= std::exp(noise(rng));
    auto w = canonical_weights(g2.mesh, m);
    for (int e = 0; e < g2.mesh.n_edges(); ++e) {
      bool delaunay = is_delaunay_edge(g2.mesh, m, e);
      CHECK(delaunay == (w.c[e] >= 0.0));
    }
  }

  // A skewed pillow produces a non-Delaunay edge and a negative weight.
  auto p = pillow();
  auto skew = pillow_metric(1.9, 1.0, 1.0);
  auto w = canonical_weights(p, skew);
  CHECK(w.c[0] < 0.0);
  CHECK(!is_delaunay_edge(p, skew, 0));
}

TEST_CASE("positivity policy") {
  EdgeWeights w{{-0.2, 0.5}};
  auto rep = apply_positivity_policy(w, 0.05);
  CHECK(rep.weights.c[0] == doctest::Approx(0.05));
  CHECK(rep.weights.c[1] == doctest::Approx(0.5));
  CHECK(rep.reset_count == 1);

  // Default floor: 5th percentile of the positive weights.
  EdgeWeights many;
  for (int i = 1; i <= 100; ++i) many.c.push_back(0.01 * i);
  many.c.push_back(-1.0);
  auto rep2 = apply_positivity_policy(many);
  CHECK(rep2.floor > 0.0);
  CHECK(rep2.reset_count >= 1);
  for (double c : rep2.weights.c) CHECK(c >= rep2.floor);
}

TEST_CASE("permutation equivariance of canonical weights") {
  auto g2 = make_genus_surface(2);
  auto metric = induced_metric(g2);
  auto flow = hyperbolic_yamabe_flow(g2.mesh, metric);
  auto w = canonical_weights(g2.mesh, flow.metric);

  // Relabel vertices by a rotation of indices and rebuild.
  int n = g2.mesh.n_vertices();
  auto perm = [n](int v) { return (v + 17) % n; };
  std::vector<std::array<int, 3>> faces = g2.mesh.faces();
  for (auto& f : faces)
    for (int& v : f) v = perm(v);
  TriMesh relabeled(n, faces);
  DiscreteMetric m2;
  m2.lengths.resize(relabeled.n_edges());
  for (int e = 0; e < relabeled.n_edges(); ++e) {
    auto [u, v] = relabeled.edge_vertices(e);
    // Find the matching original edge by un-permuting the endpoints.
    int uu = (u - 17 + n) % n, vv = (v - 17 + n) % n;
    int orig = g2.mesh.find_edge(uu, vv);
    REQUIRE(orig >= 0);
    m2.lengths[e] = flow.metric.lengths[orig];
  }
  auto w2 = canonical_weights(relabeled, m2);
  for (int e = 0; e < relabeled.n_edges(); ++e) {
    auto [u, v] = relabeled.edge_vertices(e);
    int orig = g2.mesh.find_edge((u - 17 + n) % n, (v - 17 + n) % n);
    CHECK(w2.c[e] == doctest::Approx(w.c[orig]).epsilon(1e-12));
  }
}
