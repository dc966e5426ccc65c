#include "harmap/target_surface.hpp"

#include <algorithm>

namespace harmap {

TargetSurface make_target_surface(const FundamentalPolygon& polygon,
                                  int side_subdiv, int rings) {
  // Fewer than 3 arcs per side makes a glued side collapse to a self-loop
  // (1) or a double edge (2) in the quotient.
  if (side_subdiv < 3 || rings < 1)
    throw GeometryError("make_target_surface: need side_subdiv >= 3, rings >= 1");
  const int n = polygon.n_sides();
  const int p = side_subdiv;
  const int B = n * p;     // boundary ring vertex count
  const int M = rings;     // boundary is ring M; rings 1..M-1 interior

  // Disk vertex layout: boundary 0..B-1 (side k point q at id k*p+q), then
  // ring m (1 <= m <= M-1) at B + (m-1)*B + i, then the center.
  auto bid = [&](int k, int q) { return ((k + (q / p)) % n) * p + (q % p); };
  auto rid = [&](int m, int i) { return B + (m - 1) * B + ((i + B) % B); };
  const int center = B + (M - 1) * B;
  const int n_disk = M * B + 1;

  std::vector<DiskPoint> pos(n_disk);
  // Representative sides (k <= pairing[k]) carry exp-map arc placement; the
  // paired side takes the generator image so the pairing holds exactly.
  for (int k = 0; k < n; ++k) pos[bid(k, 0)] = polygon.vertices[k];
  for (int k = 0; k < n; ++k) {
    int j = polygon.pairing[k];
    if (j < k) continue;
    auto [A, Bp] = polygon.side(k);
    double len = hyp_distance(A, Bp);
    TangentVec dir = geodesic_unit_tangent(A, Bp);
    for (int q = 1; q < p; ++q) {
      double t = (double)q / p;
      pos[bid(k, q)] = exp_map(A, {A, t * len * dir.vx, t * len * dir.vy});
      pos[bid(j, p - q)] = polygon.generators[k].apply(pos[bid(k, q)]);
    }
  }
  for (int m = 1; m < M; ++m) {
    double s = (double)m / M;
    for (int i = 0; i < B; ++i)
      pos[rid(m, i)] = {s * pos[i].x, s * pos[i].y};
  }
  pos[center] = {0.0, 0.0};

  std::vector<std::array<int, 3>> disk_faces;
  auto ring_vertex = [&](int m, int i) { return m == M ? bid(0, i) : rid(m, i); };
  for (int i = 0; i < B; ++i)
    disk_faces.push_back({center, rid(1, i), rid(1, i + 1)});
  for (int m = 1; m < M; ++m)
    for (int i = 0; i < B; ++i) {
      int a = ring_vertex(m, i), b = ring_vertex(m, i + 1);
      int c = ring_vertex(m + 1, i), d = ring_vertex(m + 1, i + 1);
      disk_faces.push_back({a, c, d});
      disk_faces.push_back({a, d, b});
    }
  TriMesh disk(n_disk, disk_faces, /*allow_boundary=*/true);
  if (disk.euler_characteristic() != 1)
    throw TopologyError("make_target_surface: triangulation is not a disk");

  // Quotient classes: side k point q glues to side pairing[k] point p-q;
  // all polygon corners collapse to the base vertex.
  std::vector<int> parent(n_disk);
  for (int i = 0; i < n_disk; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int k = 1; k < n; ++k) parent[find(bid(k, 0))] = find(bid(0, 0));
  for (int k = 0; k < n; ++k) {
    int j = polygon.pairing[k];
    for (int q = 1; q < p; ++q) parent[find(bid(j, p - q))] = find(bid(k, q));
  }
  std::vector<int> pi_V(n_disk, -1);
  int n_classes = 0;
  for (int i = 0; i < n_disk; ++i)
    if (find(i) == i) pi_V[i] = n_classes++;
  for (int i = 0; i < n_disk; ++i) pi_V[i] = pi_V[find(i)];

  std::vector<std::array<int, 3>> quot_faces = disk_faces;
  for (auto& f : quot_faces)
    for (int& v : f) v = pi_V[v];
  TriMesh quotient(n_classes, std::move(quot_faces));
  if (quotient.genus() != polygon.genus)
    throw TopologyError("make_target_surface: glued genus mismatch");

  CutSurface cut{disk, pi_V, std::vector<int>(disk.n_edges(), -1),
                 pi_V[bid(0, 0)], {}, polygon.pairing};
  for (int e = 0; e < disk.n_edges(); ++e) {
    auto [u, v] = disk.edge_vertices(e);
    cut.pi_E[e] = quotient.find_edge(pi_V[u], pi_V[v]);
    if (cut.pi_E[e] < 0)
      throw TopologyError("make_target_surface: edge projection failed");
  }
  for (int k = 0; k < n; ++k) {
    std::vector<int> seg;
    for (int q = 0; q <= p; ++q) seg.push_back(bid(k, q));
    cut.boundary_segments.push_back(std::move(seg));
  }

  TargetSurface target;
  target.quotient = quotient;
  // Designated-lift lengths; paired lifts agree to roundoff by construction.
  target.metric.lengths.assign(quotient.n_edges(), -1.0);
  for (int e = 0; e < disk.n_edges(); ++e)
    if (target.metric.lengths[cut.pi_E[e]] < 0.0) {
      auto [u, v] = disk.edge_vertices(e);
      target.metric.lengths[cut.pi_E[e]] = hyp_distance(pos[u], pos[v]);
    }

  target.realization.positions = std::move(pos);
  target.realization.cut = std::move(cut);
  target.realization.polygon = polygon;
  target.realization.segment_to_side.resize(n);
  for (int k = 0; k < n; ++k) target.realization.segment_to_side[k] = k;
  target.realization.weights = canonical_weights(quotient, target.metric);
  return target;
}

} // namespace harmap
