#include "harmap/cut.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include <json.hpp>

namespace harmap {

int default_base_vertex(const TriMesh& mesh) {
  int best = 0;
  for (int v = 1; v < mesh.n_vertices(); ++v)
    if (mesh.vertex_degree(v) > mesh.vertex_degree(best)) best = v;
  return best;
}

namespace {

// Outgoing halfedges at origin(h0), starting from h0, in CCW rotational order.
std::vector<int> ccw_outgoing(const TriMesh& mesh, int h0) {
  std::vector<int> out;
  int h = h0;
  do {
    out.push_back(h);
    h = mesh.twin(mesh.prev(h));
    if (h < 0) throw TopologyError("ccw_outgoing: boundary vertex");
  } while (h != h0);
  return out;
}

struct TreeCotree {
  std::vector<char> in_tree;           // per edge
  std::vector<char> in_cotree;         // per edge
  std::vector<int> leftover;           // 2g edges
  std::vector<std::vector<char>> cocycle; // per leftover edge: parity mask over E
};

TreeCotree build_tree_cotree(const TriMesh& mesh, int base) {
  int nE = mesh.n_edges(), nF = mesh.n_faces();
  TreeCotree tc;
  tc.in_tree.assign(nE, 0);
  tc.in_cotree.assign(nE, 0);

  // Primal BFS tree rooted at base.
  std::vector<char> vis(mesh.n_vertices(), 0);
  std::deque<int> q{base};
  vis[base] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    auto hs = mesh.vertex_halfedges(v);
    std::sort(hs.begin(), hs.end(),
              [&](int a, int b) { return mesh.dest(a) < mesh.dest(b); });
    for (int h : hs) {
      int w = mesh.dest(h);
      if (!vis[w]) {
        vis[w] = 1;
        tc.in_tree[mesh.edge(h)] = 1;
        q.push_back(w);
      }
    }
  }

  // Dual BFS tree over faces, avoiding primal tree edges.
  std::vector<int> fparent_edge(nF, -1), fparent(nF, -1);
  std::vector<char> fvis(nF, 0);
  std::deque<int> fq{0};
  fvis[0] = 1;
  while (!fq.empty()) {
    int f = fq.front();
    fq.pop_front();
    for (int k = 0; k < 3; ++k) {
      int h = 3 * f + k;
      int e = mesh.edge(h);
      if (tc.in_tree[e]) continue;
      int g = mesh.twin(h) / 3;
      if (!fvis[g]) {
        fvis[g] = 1;
        fparent[g] = f;
        fparent_edge[g] = e;
        tc.in_cotree[e] = 1;
        fq.push_back(g);
      }
    }
  }

  for (int e = 0; e < nE; ++e)
    if (!tc.in_tree[e] && !tc.in_cotree[e]) tc.leftover.push_back(e);
  if ((int)tc.leftover.size() != 2 * mesh.genus())
    throw TopologyError("tree-cotree: leftover edge count is not 2g");

  // Z2 cocycle of leftover x: {x} plus the dual-tree path between its faces.
  for (int x : tc.leftover) {
    std::vector<char> z(nE, 0);
    z[x] = 1;
    int h = mesh.halfedge_of_edge(x);
    for (int f : {h / 3, mesh.twin(h) / 3})
      for (int g = f; fparent[g] >= 0; g = fparent[g]) z[fparent_edge[g]] ^= 1;
    tc.cocycle.push_back(std::move(z));
  }
  return tc;
}

// Reduce sig against the echelon basis; returns 0 if dependent, else the
// reduced pivot row to insert.
uint64_t reduce_signature(uint64_t sig, const std::vector<uint64_t>& echelon) {
  for (uint64_t row : echelon) {
    uint64_t pivot = row & ~(row - 1); // lowest set bit
    if (sig & pivot) sig ^= row;
  }
  return sig;
}

} // namespace

std::vector<std::vector<int>> homology_basis(const TriMesh& mesh, int base) {
  require_pipeline_input(mesh);
  int g = mesh.genus();
  if (mesh.vertex_degree(base) < 4 * g)
    throw TopologyError("homology_basis: base degree below 4g");

  TreeCotree tc = build_tree_cotree(mesh, base);

  // Per-edge Z2 signature against the 2g cocycles.
  const uint32_t n_sigs = 1u << (2 * g);
  std::vector<uint32_t> esig(mesh.n_edges(), 0);
  for (int j = 0; j < 2 * g; ++j)
    for (int e = 0; e < mesh.n_edges(); ++e)
      if (tc.cocycle[j][e]) esig[e] |= 1u << j;

  std::vector<char> used(mesh.n_vertices(), 0);
  std::vector<char> base_edge_used(mesh.n_edges(), 0);
  std::vector<uint64_t> echelon;
  std::vector<std::vector<int>> loops;

  // Sorted adjacency for deterministic BFS order.
  std::vector<std::vector<int>> adj(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    adj[v] = mesh.vertex_halfedges(v);
    std::sort(adj[v].begin(), adj[v].end(),
              [&](int a, int b) { return mesh.dest(a) < mesh.dest(b); });
  }

  // Depth-first search over greedy choices. Each round runs one BFS over
  // (vertex, class) states to list the shortest simple loops through the
  // base in classes independent of the loops chosen so far; picking the
  // first such loop can strand a later class, so on failure we back up and
  // try the next candidate of the previous round.
  int budget = 500; // BFS invocations
  std::function<bool()> extend = [&]() -> bool {
    if ((int)loops.size() == 2 * g) return true;
    if (budget-- <= 0) return false;
    const int n_states = mesh.n_vertices() * (int)n_sigs;
    std::vector<int> parent(n_states, -2);
    std::deque<int> q;
    for (int h : adj[base]) {
      int a = mesh.dest(h), e = mesh.edge(h);
      if (used[a] || base_edge_used[e]) continue;
      int s = a * (int)n_sigs + (int)esig[e];
      if (parent[s] != -2) continue;
      parent[s] = -1;
      q.push_back(s);
    }
    struct Arrival { int state; int base_edge; };
    std::vector<Arrival> arrivals;
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      int v = s / (int)n_sigs;
      uint32_t sig = (uint32_t)(s % (int)n_sigs);
      for (int h : adj[v]) {
        int w = mesh.dest(h), e = mesh.edge(h);
        if (w == base) {
          if (!base_edge_used[e]) arrivals.push_back({s, e});
          continue;
        }
        if (used[w]) continue;
        int t = w * (int)n_sigs + (int)(sig ^ esig[e]);
        if (parent[t] != -2) continue;
        parent[t] = s;
        q.push_back(t);
      }
    }

    struct Candidate {
      std::vector<int> path; // base-adjacent ... arrival, in walk order
      int first_edge, last_edge;
      uint64_t sig;
    };
    std::vector<Candidate> candidates;
    for (const auto& arr : arrivals) {
      if ((int)candidates.size() >= 12) break;
      uint32_t total = (uint32_t)(arr.state % (int)n_sigs) ^ esig[arr.base_edge];
      uint64_t sig = reduce_signature(total, echelon);
      if (sig == 0) continue;
      std::vector<int> path; // v ... a, climbed from the arrival
      for (int s = arr.state; s != -1; s = parent[s]) path.push_back(s / (int)n_sigs);
      std::vector<int> sorted = path;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        continue; // walk revisits a vertex: not a simple loop
      int first_edge = mesh.find_edge(base, path.back());
      if (first_edge == arr.base_edge) continue;
      std::reverse(path.begin(), path.end());
      candidates.push_back({std::move(path), first_edge, arr.base_edge, sig});
    }

    for (auto& cand : candidates) {
      std::vector<int> loop{base};
      loop.insert(loop.end(), cand.path.begin(), cand.path.end());
      loop.push_back(base);
      echelon.push_back(cand.sig);
      for (int v : cand.path) used[v] = 1;
      base_edge_used[cand.first_edge] = base_edge_used[cand.last_edge] = 1;
      loops.push_back(std::move(loop));
      if (extend()) return true;
      loops.pop_back();
      base_edge_used[cand.first_edge] = base_edge_used[cand.last_edge] = 0;
      for (int v : cand.path) used[v] = 0;
      echelon.pop_back();
    }
    return false;
  };

  if (!extend())
    throw TopologyError("homology_basis: no disjoint wedge basis at base " +
                        std::to_string(base));
  return loops;
}

std::vector<std::vector<int>> homology_basis(const TriMesh& mesh) {
  std::vector<int> order(mesh.n_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int u, int v) {
    int du = mesh.vertex_degree(u), dv = mesh.vertex_degree(v);
    return du != dv ? du > dv : u < v;
  });
  std::string last_error = "homology_basis: no candidate base";
  for (int k = 0; k < std::min<int>(20, (int)order.size()); ++k) {
    try {
      return homology_basis(mesh, order[k]);
    } catch (const TopologyError& e) {
      last_error = e.what();
    }
  }
  throw TopologyError(last_error);
}

CutSurface cut_along(const TriMesh& mesh, const std::vector<std::vector<int>>& loops) {
  require_pipeline_input(mesh);
  int g = mesh.genus();
  if ((int)loops.size() != 2 * g)
    throw TopologyError("cut_along: expected 2g loops");
  int base = loops[0].front();
  std::vector<int> loop_of_vertex(mesh.n_vertices(), -1);
  std::vector<char> cut_edge(mesh.n_edges(), 0);
  for (size_t li = 0; li < loops.size(); ++li) {
    const auto& loop = loops[li];
    if (loop.size() < 3 || loop.front() != base || loop.back() != base)
      throw TopologyError("cut_along: loop is not a closed walk at the base");
    for (size_t k = 0; k + 1 < loop.size(); ++k) {
      int e = mesh.find_edge(loop[k], loop[k + 1]);
      if (e < 0 || cut_edge[e]) throw TopologyError("cut_along: invalid loop edge");
      cut_edge[e] = 1;
      if (loop[k] != base) {
        if (loop_of_vertex[loop[k]] != -1 && loop_of_vertex[loop[k]] != (int)li)
          throw TopologyError("cut_along: loops cross away from the base");
        loop_of_vertex[loop[k]] = (int)li;
      }
    }
  }

  // Split each vertex star into sectors separated by cut edges; every sector
  // becomes one copy of the vertex.
  int n_new = 0;
  std::vector<int> sector_of_halfedge(mesh.n_halfedges(), -1);
  std::vector<int> first_copy(mesh.n_vertices(), -1);
  std::vector<int> pi_V;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    auto ring = ccw_outgoing(mesh, mesh.halfedge_of_vertex(v));
    int sector = 0;
    std::vector<int> sectors(ring.size());
    for (size_t k = 0; k < ring.size(); ++k) {
      if (k > 0 && cut_edge[mesh.edge(ring[k])]) ++sector;
      sectors[k] = sector;
    }
    int n_sectors = sector + 1;
    if (!cut_edge[mesh.edge(ring[0])] && n_sectors > 1) {
      // The ring is cyclic: the last run joins the first one.
      for (size_t k = 0; k < ring.size(); ++k)
        if (sectors[k] == sector) sectors[k] = 0;
      --n_sectors;
    }
    first_copy[v] = n_new;
    for (size_t k = 0; k < ring.size(); ++k)
      sector_of_halfedge[ring[k]] = first_copy[v] + sectors[k];
    n_new += n_sectors;
    for (int c = 0; c < n_sectors; ++c) pi_V.push_back(v);
  }

  std::vector<std::array<int, 3>> new_faces(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f)
    for (int k = 0; k < 3; ++k) new_faces[f][k] = sector_of_halfedge[3 * f + k];

  CutSurface cut{TriMesh(n_new, std::move(new_faces), /*allow_boundary=*/true),
                 std::move(pi_V), {}, base, {}, {}};
  if (cut.cut_mesh.euler_characteristic() != 1)
    throw TopologyError("cut_along: cut surface is not a disk");

  cut.pi_E.resize(cut.cut_mesh.n_edges());
  for (int e = 0; e < cut.cut_mesh.n_edges(); ++e) {
    auto [u, v] = cut.cut_mesh.edge_vertices(e);
    int orig = mesh.find_edge(cut.pi_V[u], cut.pi_V[v]);
    if (orig < 0) throw TopologyError("cut_along: projection lost an edge");
    cut.pi_E[e] = orig;
  }

  // Single boundary cycle, walked with the disk interior on the left (CCW).
  // Start at the smallest-id base copy for a deterministic segment order.
  int h0 = -1, n_boundary = 0;
  for (int h = 0; h < cut.cut_mesh.n_halfedges(); ++h) {
    if (!cut.cut_mesh.is_boundary_halfedge(h)) continue;
    ++n_boundary;
    if (h0 < 0) {
      h0 = h;
      continue;
    }
    int ov = cut.cut_mesh.origin(h), o0 = cut.cut_mesh.origin(h0);
    bool vb = cut.pi_V[ov] == base, b0 = cut.pi_V[o0] == base;
    if ((vb && !b0) || (vb == b0 && ov < o0)) h0 = h;
  }
  if (h0 < 0) throw TopologyError("cut_along: no boundary");
  auto next_boundary = [&](int h) {
    int e = cut.cut_mesh.next(h);
    while (!cut.cut_mesh.is_boundary_halfedge(e))
      e = cut.cut_mesh.next(cut.cut_mesh.twin(e));
    return e;
  };
  std::vector<int> cycle; // boundary vertices in CCW order, starting at a base copy
  for (int h = h0;;) {
    cycle.push_back(cut.cut_mesh.origin(h));
    h = next_boundary(h);
    if (h == h0) break;
    if ((int)cycle.size() > n_boundary)
      throw TopologyError("cut_along: boundary walk does not close");
  }
  if ((int)cycle.size() != n_boundary)
    throw TopologyError("cut_along: boundary is not a single cycle");
  if (cut.pi_V[cycle[0]] != base)
    throw TopologyError("cut_along: boundary misses the base vertex");

  // Split the cycle into segments at base preimages.
  std::vector<std::vector<int>> segments;
  std::vector<int> seg;
  for (size_t k = 0; k < cycle.size(); ++k) {
    seg.push_back(cycle[k]);
    if (k > 0 && cut.pi_V[cycle[k]] == base) {
      segments.push_back(seg);
      seg = {cycle[k]};
    }
  }
  seg.push_back(cycle[0]);
  segments.push_back(seg);
  if ((int)segments.size() != 4 * g)
    throw TopologyError("cut_along: boundary does not split into 4g segments");

  // Two segments per loop, traversed oppositely.
  cut.segment_pairing.assign(4 * g, -1);
  std::vector<int> seg_loop(4 * g, -1);
  for (int s = 0; s < 4 * g; ++s) {
    if ((int)segments[s].size() < 3)
      throw TopologyError("cut_along: empty boundary segment");
    seg_loop[s] = loop_of_vertex[cut.pi_V[segments[s][1]]];
    if (seg_loop[s] < 0) throw TopologyError("cut_along: segment off the loop system");
  }
  for (int s = 0; s < 4 * g; ++s)
    for (int t = s + 1; t < 4 * g; ++t)
      if (seg_loop[s] == seg_loop[t]) {
        if (cut.segment_pairing[s] >= 0 || cut.segment_pairing[t] >= 0)
          throw TopologyError("cut_along: loop appears in more than two segments");
        cut.segment_pairing[s] = t;
        cut.segment_pairing[t] = s;
      }
  for (int s = 0; s < 4 * g; ++s) {
    int t = cut.segment_pairing[s];
    if (t < 0 || segments[s].size() != segments[t].size())
      throw TopologyError("cut_along: unpaired or mismatched segments");
    for (size_t k = 0; k < segments[s].size(); ++k)
      if (cut.pi_V[segments[s][k]] !=
          cut.pi_V[segments[t][segments[t].size() - 1 - k]])
        throw TopologyError("cut_along: paired segments are not reversed copies");
  }
  cut.boundary_segments = std::move(segments);
  return cut;
}

std::vector<int> match_segments_to_sides(const CutSurface& cut,
                                         const FundamentalPolygon& poly) {
  int n = (int)cut.boundary_segments.size();
  if (n != poly.n_sides())
    throw TopologyError("match_segments_to_sides: segment/side count mismatch");
  for (int r = 0; r < n; ++r) {
    bool ok = true;
    for (int k = 0; k < n && ok; ++k)
      ok = poly.pairing[(k + r) % n] == (cut.segment_pairing[k] + r) % n;
    if (ok) {
      std::vector<int> assign(n);
      for (int k = 0; k < n; ++k) assign[k] = (k + r) % n;
      return assign;
    }
  }
  throw TopologyError(
      "match_segments_to_sides: no rotation aligns the pairings; "
      "build the polygon from this cut's boundary word");
}

std::string cut_to_json(const std::vector<std::vector<int>>& loops,
                        const CutSurface& cut,
                        const std::vector<int>& segment_to_side) {
  nlohmann::json j;
  j["loops"] = loops;
  j["segments"] = cut.boundary_segments;
  j["segment_pairing"] = cut.segment_pairing;
  j["segment_to_side"] = segment_to_side;
  j["base_vertex"] = cut.base_vertex;
  return j.dump(2);
}

} // namespace harmap
