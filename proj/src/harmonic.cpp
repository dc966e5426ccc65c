#include "harmap/harmonic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>

#include <Eigen/Sparse>
#include <json.hpp>

namespace harmap {

namespace {

// Cut-vertex copies of each original vertex, ascending.
std::vector<std::vector<int>> copies_by_vertex(const CutSurface& cut, int n_orig) {
  std::vector<std::vector<int>> copies(n_orig);
  for (int j = 0; j < (int)cut.pi_V.size(); ++j) copies[cut.pi_V[j]].push_back(j);
  return copies;
}

} // namespace

RepresentativeScheme build_scheme(const CutSurface& cut,
                                  const FundamentalPolygon& polygon,
                                  const std::vector<int>& segment_to_side) {
  const TriMesh& cm = cut.cut_mesh;
  int n_cut = cm.n_vertices();
  int n_seg = (int)cut.boundary_segments.size();

  RepresentativeScheme scheme;
  scheme.rep.resize(n_cut);
  for (int j = 0; j < n_cut; ++j) scheme.rep[j] = j;
  scheme.to_copy.assign(n_cut, MobiusTransform::identity());

  // Loop-interior pairs: the copy on the lower-indexed segment represents.
  for (int s = 0; s < n_seg; ++s) {
    int t = cut.segment_pairing[s];
    if (t < s) continue;
    const auto& seg = cut.boundary_segments[s];
    const auto& pair = cut.boundary_segments[t];
    const MobiusTransform& gamma = polygon.generators[segment_to_side[s]];
    for (size_t k = 1; k + 1 < seg.size(); ++k) {
      int copy = pair[seg.size() - 1 - k];
      scheme.rep[copy] = seg[k];
      scheme.to_copy[copy] = gamma;
    }
  }

  // Base copies b_s = front of segment s. The segment-pairing constraint at
  // the segment endpoints links them: b_{t+1} = gamma_s(b_s) and
  // b_t = gamma_s(b_{s+1}); BFS from b_0 assembles each copy's transform.
  std::vector<MobiusTransform> base_transform(n_seg);
  std::vector<char> have(n_seg, 0);
  have[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int a = 0; a < n_seg; ++a) {
      int b = cut.segment_pairing[a];
      const MobiusTransform& gamma = polygon.generators[segment_to_side[a]];
      // pos(b_{(b+1)%n}) = gamma(pos(b_a)); both directions of each relation.
      struct Link { int from, to; bool fwd; };
      for (const Link& ln : {Link{a, (b + 1) % n_seg, true},
                             Link{(b + 1) % n_seg, a, false},
                             Link{(a + 1) % n_seg, b, true},
                             Link{b, (a + 1) % n_seg, false}}) {
        if (ln.from != s || have[ln.to]) continue;
        base_transform[ln.to] = ln.fwd ? compose(gamma, base_transform[s])
                                       : compose(inverse(gamma), base_transform[s]);
        have[ln.to] = 1;
        queue.push_back(ln.to);
      }
    }
  }
  for (int s = 0; s < n_seg; ++s) {
    if (!have[s])
      throw TopologyError("build_scheme: base copies not connected by pairings");
    int copy = cut.boundary_segments[s].front();
    scheme.rep[copy] = cut.boundary_segments[0].front();
    scheme.to_copy[copy] = base_transform[s];
  }

  int n_orig = 0;
  for (int v : cut.pi_V) n_orig = std::max(n_orig, v + 1);
  auto copies = copies_by_vertex(cut, n_orig);
  scheme.representative.resize(n_orig);
  for (int v = 0; v < n_orig; ++v) {
    int r = -1;
    for (int j : copies[v])
      if (scheme.rep[j] == j) {
        if (r >= 0) throw TopologyError("build_scheme: multiple representatives");
        r = j;
      }
    if (r < 0) throw TopologyError("build_scheme: vertex without representative");
    scheme.representative[v] = r;
  }

  int n_edges_orig = 0;
  for (int e : cut.pi_E) n_edges_orig = std::max(n_edges_orig, e + 1);
  scheme.lift_of_edge.assign(n_edges_orig, -1);
  for (int eh = 0; eh < cm.n_edges(); ++eh)
    if (scheme.lift_of_edge[cut.pi_E[eh]] < 0) scheme.lift_of_edge[cut.pi_E[eh]] = eh;

  // Boundary edges only appear as an outgoing halfedge at one endpoint;
  // index the incoming boundary halfedge of each boundary vertex too.
  std::vector<std::vector<int>> incoming_boundary(n_cut);
  for (int h = 0; h < cm.n_halfedges(); ++h)
    if (cm.twin(h) < 0) incoming_boundary[cm.dest(h)].push_back(h);

  // One designated lift per original edge of each vertex star.
  scheme.star_lifts.resize(n_orig);
  for (int v = 0; v < n_orig; ++v) {
    std::vector<char> seen(n_edges_orig, 0);
    for (int j : copies[v]) {
      auto hs = cm.vertex_halfedges(j);
      std::sort(hs.begin(), hs.end());
      for (int in : incoming_boundary[j]) hs.push_back(in);
      for (int h : hs) {
        bool reversed = cm.dest(h) == j;
        int e = cut.pi_E[cm.edge(h)];
        if (seen[e]) continue;
        seen[e] = 1;
        scheme.star_lifts[v].push_back({j, reversed ? cm.origin(h) : cm.dest(h), e});
      }
    }
  }
  return scheme;
}

double constraint_residual(const GeodesicRealization& r,
                           const RepresentativeScheme& scheme) {
  double worst = 0.0;
  for (int j = 0; j < (int)r.positions.size(); ++j) {
    if (scheme.rep[j] == j) continue;
    DiskPoint expect = scheme.to_copy[j].apply(r.positions[scheme.rep[j]]);
    worst = std::max(worst, hyp_distance(r.positions[j], expect));
  }
  return worst;
}

double dirichlet_energy(const GeodesicRealization& r, const RepresentativeScheme& scheme) {
  double energy = 0.0;
  for (int e = 0; e < (int)scheme.lift_of_edge.size(); ++e) {
    auto [u, v] = r.cut.cut_mesh.edge_vertices(scheme.lift_of_edge[e]);
    double l = hyp_distance(r.positions[u], r.positions[v]);
    energy += 0.5 * r.weights.c[e] * l * l;
  }
  return energy;
}

std::vector<TangentVec> gradient(const GeodesicRealization& r,
                                 const RepresentativeScheme& scheme) {
  if (constraint_residual(r, scheme) > 1e-9)
    throw GeometryError("gradient: hard constraint violated beyond 1e-9");
  int n_orig = (int)scheme.representative.size();
  std::vector<TangentVec> grad(n_orig);
  for (int v = 0; v < n_orig; ++v) {
    DiskPoint p = r.positions[scheme.representative[v]];
    TangentVec acc{p, 0.0, 0.0};
    for (const auto& lift : scheme.star_lifts[v]) {
      DiskPoint q = r.positions[lift.neighbor];
      if (lift.copy != scheme.representative[v])
        q = inverse(scheme.to_copy[lift.copy]).apply(q);
      double l = hyp_distance(p, q);
      if (l < kDegenerateEdgeLength) continue;
      TangentVec toward = geodesic_unit_tangent(p, q);
      double w = r.weights.c[lift.edge] * l;
      acc.vx -= w * toward.vx; // outward unit tangent U_ij = -toward
      acc.vy -= w * toward.vy;
    }
    grad[v] = acc;
  }
  return grad;
}

double mean_squared_gradient(const std::vector<TangentVec>& grad) {
  double sum = 0.0;
  for (const TangentVec& g : grad) {
    double n = g.hyp_norm();
    sum += n * n;
  }
  return sum / (double)grad.size();
}

GeodesicRealization initialize_euclidean(const CutSurface& cut,
                                         const FundamentalPolygon& polygon,
                                         const std::vector<int>& segment_to_side,
                                         const EdgeWeights& weights,
                                         const DiscreteMetric& metric) {
  const TriMesh& cm = cut.cut_mesh;
  GeodesicRealization r;
  r.cut = cut;
  r.polygon = polygon;
  r.segment_to_side = segment_to_side;
  r.weights = weights;
  r.positions.assign(cm.n_vertices(), DiskPoint{});

  RepresentativeScheme scheme = build_scheme(cut, polygon, segment_to_side);

  // Representative boundary copies on their assigned side, spaced by
  // cumulative edge-length proportion.
  for (int s = 0; s < (int)cut.boundary_segments.size(); ++s) {
    if (cut.segment_pairing[s] < s) continue;
    const auto& seg = cut.boundary_segments[s];
    auto [A, B] = polygon.side(segment_to_side[s]);
    double total = 0.0;
    std::vector<double> cum{0.0};
    for (size_t k = 0; k + 1 < seg.size(); ++k) {
      total += metric.length(cut.pi_E[cm.find_edge(seg[k], seg[k + 1])]);
      cum.push_back(total);
    }
    double side_len = hyp_distance(A, B);
    TangentVec dir = geodesic_unit_tangent(A, B);
    for (size_t k = 0; k < seg.size(); ++k) {
      double t = cum[k] / total;
      DiskPoint pos = A;
      if (k + 1 == seg.size()) pos = B;
      else if (k > 0)
        pos = exp_map(A, {A, t * side_len * dir.vx, t * side_len * dir.vy});
      if (scheme.rep[seg[k]] == seg[k]) r.positions[seg[k]] = pos;
    }
  }
  // Equivariant propagation makes the constraint exact by construction.
  for (int j = 0; j < cm.n_vertices(); ++j)
    if (scheme.rep[j] != j)
      r.positions[j] = scheme.to_copy[j].apply(r.positions[scheme.rep[j]]);

  // Interior: weighted Euclidean Laplace solve (Tutte-style barycentric
  // system; SPD for positive weights).
  std::vector<int> index(cm.n_vertices(), -1);
  std::vector<int> interior;
  for (int j = 0; j < cm.n_vertices(); ++j)
    if (!cm.is_boundary_vertex(j)) {
      index[j] = (int)interior.size();
      interior.push_back(j);
    }
  int n = (int)interior.size();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd bx = Eigen::VectorXd::Zero(n), by = Eigen::VectorXd::Zero(n);
  for (int row = 0; row < n; ++row) {
    int j = interior[row];
    double diag = 0.0;
    for (int h : cm.vertex_halfedges(j)) {
      int u = cm.dest(h);
      double c = weights.c[cut.pi_E[cm.edge(h)]];
      if (c <= 0.0)
        throw ConvergenceError("initialize_euclidean: nonpositive weight");
      diag += c;
      if (index[u] >= 0) {
        trip.emplace_back(row, index[u], -c);
      } else {
        bx[row] += c * r.positions[u].x;
        by[row] += c * r.positions[u].y;
      }
    }
    trip.emplace_back(row, row, diag);
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("initialize_euclidean: singular Laplace system");
  Eigen::VectorXd x = solver.solve(bx), y = solver.solve(by);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("initialize_euclidean: Laplace solve failed");
  for (int row = 0; row < n; ++row)
    r.positions[interior[row]] = {x[row], y[row]};
  return r;
}

double default_step(const TriMesh& mesh, const EdgeWeights& weights) {
  double worst = 0.0;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    double sum = 0.0;
    for (int h : mesh.vertex_halfedges(v)) sum += weights.c[mesh.edge(h)];
    worst = std::max(worst, sum);
  }
  if (worst <= 0.0) throw ConvergenceError("default_step: nonpositive weights");
  return 0.5 / worst;
}

DescentResult descend(const GeodesicRealization& r0, const RepresentativeScheme& scheme,
                      const DescentOptions& options) {
  if (options.eps_disp <= 0.0 || options.eps_grad <= 0.0 || options.max_iter < 1)
    throw ConvergenceError("descend: invalid stopping parameters");
  DescentResult result;
  result.realization = r0;
  GeodesicRealization& r = result.realization;
  double tau = options.tau;
  if (tau <= 0.0) {
    // Reconstruct a per-vertex weighted degree on the quotient.
    std::vector<double> wdeg(scheme.representative.size(), 0.0);
    for (size_t v = 0; v < scheme.star_lifts.size(); ++v)
      for (const auto& lift : scheme.star_lifts[v]) wdeg[v] += r.weights.c[lift.edge];
    double worst = *std::max_element(wdeg.begin(), wdeg.end());
    if (worst <= 0.0) throw ConvergenceError("descend: nonpositive weights");
    tau = 0.5 / worst;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0).count();
  };

  std::vector<TangentVec> grad = gradient(r, scheme);
  double energy = dirichlet_energy(r, scheme);
  const double initial_energy = energy;
  result.trace.records.push_back({0, energy, mean_squared_gradient(grad), 0.0, 0.0});
  result.criterion = "max_iter";
  int it = 0;
  while (it < options.max_iter) {
    ++it;
    double max_disp = 0.0;
    // A step so large that an iterate leaves the disk (or degenerates the
    // geometry downstream) is divergence, not a geometric precondition bug.
    try {
      for (size_t v = 0; v < scheme.representative.size(); ++v) {
        int rep = scheme.representative[v];
        DiskPoint p = r.positions[rep];
        TangentVec step{p, -tau * grad[v].vx, -tau * grad[v].vy};
        DiskPoint q = exp_map(p, step);
        max_disp = std::max(max_disp, hyp_distance(p, q));
        r.positions[rep] = q;
      }
      for (int j = 0; j < (int)r.positions.size(); ++j)
        if (scheme.rep[j] != j)
          r.positions[j] = scheme.to_copy[j].apply(r.positions[scheme.rep[j]]);

      energy = dirichlet_energy(r, scheme);
      if (energy > 10.0 * initial_energy)
        throw DivergenceError("descend: energy exceeded 10x initial; reduce tau");
      grad = gradient(r, scheme);
    } catch (const GeometryError& e) {
      throw DivergenceError(std::string("descend: iterates degenerated (") +
                            e.what() + "); reduce tau");
    }
    double msq = mean_squared_gradient(grad);
    result.trace.records.push_back({it, energy, msq, max_disp, wall_ms()});
    if (msq < options.eps_grad) {
      result.criterion = "grad";
      break;
    }
    if (max_disp < options.eps_disp) {
      result.criterion = "disp";
      break;
    }
  }
  result.iterations = it;
  result.final_energy = energy;
  return result;
}

std::vector<double> convergence_rate(const OptimizerTrace& trace, double final_energy) {
  if (trace.records.size() < 2)
    throw ConvergenceError("convergence_rate: need at least two records");
  std::vector<double> rates;
  bool underflowed = false;
  for (size_t k = 1; k < trace.records.size(); ++k) {
    double prev_gap = trace.records[k - 1].energy - final_energy;
    double gap = trace.records[k].energy - final_energy;
    if (underflowed || prev_gap <= 0.0 || gap <= 0.0) {
      underflowed = true;
      rates.push_back(0.0);
    } else {
      rates.push_back(gap / prev_gap);
    }
  }
  return rates;
}

EmbeddingReport check_embedding(const GeodesicRealization& r) {
  const TriMesh& cm = r.cut.cut_mesh;
  EmbeddingReport report;
  int n_orig =
      r.cut.pi_V.empty()
          ? 0
          : 1 + *std::max_element(r.cut.pi_V.begin(), r.cut.pi_V.end());
  report.vertex_angle_sums.assign(n_orig, 0.0);
  report.min_signed_area = std::numeric_limits<double>::infinity();
  for (int f = 0; f < cm.n_faces(); ++f) {
    const auto& fv = cm.face(f);
    std::array<DiskPoint, 3> p{r.positions[fv[0]], r.positions[fv[1]],
                               r.positions[fv[2]]};
    auto ka = to_klein(p[0]), kb = to_klein(p[1]), kc = to_klein(p[2]);
    double cross = (kb[0] - ka[0]) * (kc[1] - ka[1]) -
                   (kb[1] - ka[1]) * (kc[0] - ka[0]);
    if (cross <= 0.0) ++report.flipped_face_count;
    double a = hyp_distance(p[1], p[2]);
    double b = hyp_distance(p[2], p[0]);
    double c = hyp_distance(p[0], p[1]);
    std::array<double, 3> angles{0.0, 0.0, 0.0};
    double area = 0.0;
    try {
      angles = angles_from_lengths(a, b, c);
      area = std::numbers::pi - angles[0] - angles[1] - angles[2];
    } catch (const GeometryError&) {
      // Degenerate lift: zero area, zero angles.
    }
    double signed_area = (cross >= 0.0 ? 1.0 : -1.0) * area;
    report.min_signed_area = std::min(report.min_signed_area, signed_area);
    for (int k = 0; k < 3; ++k)
      report.vertex_angle_sums[r.cut.pi_V[fv[k]]] += angles[k];
  }
  return report;
}

std::string trace_to_csv(const OptimizerTrace& trace) {
  std::string out = "iter,energy,grad_msq,max_disp,wall_ms\n";
  char buf[256];
  for (const TraceRecord& rec : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.3f\n", rec.iter,
                  rec.energy, rec.grad_msq, rec.max_disp, rec.wall_ms);
    out += buf;
  }
  return out;
}

std::string realization_to_json(const DescentResult& result) {
  nlohmann::json j;
  j["positions"] = nlohmann::json::array();
  for (const DiskPoint& p : result.realization.positions)
    j["positions"].push_back({p.x, p.y});
  j["criterion"] = result.criterion;
  j["iterations"] = result.iterations;
  j["final_energy"] = result.final_energy;
  return j.dump(2);
}

} // namespace harmap
