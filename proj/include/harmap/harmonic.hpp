#pragma once

// Constraint-preserving Riemannian gradient descent of the discrete
// Dirichlet energy on geodesic realizations of a cut surface in the
// Poincare disk, plus Euclidean-harmonic initialization and diagnostics.

#include <string>
#include <vector>

#include "harmap/cut.hpp"
#include "harmap/fuchsian.hpp"
#include "harmap/uniformize.hpp"

namespace harmap {

// A lift of a quotient map into the disk: one position per cut vertex,
// equivariant across the side pairings (the hard constraint).
struct GeodesicRealization {
  std::vector<DiskPoint> positions;   // per cut vertex
  CutSurface cut;
  FundamentalPolygon polygon;
  std::vector<int> segment_to_side;   // boundary segment -> polygon side
  EdgeWeights weights;                // per original edge, drives the energy
};

// Designated representative per original vertex and the deck transform
// carrying each cut-vertex copy off its representative.
struct RepresentativeScheme {
  std::vector<int> rep;                  // cut vertex -> representative cut vertex
  std::vector<MobiusTransform> to_copy;  // positions[j] = to_copy[j](positions[rep[j]])
  std::vector<int> representative;       // original vertex -> representative cut vertex
  std::vector<int> lift_of_edge;         // original edge -> designated cut edge

  // Per original vertex: the designated lift of each incident original edge,
  // as (copy cut vertex, neighbor cut vertex, original edge).
  struct EdgeLift {
    int copy, neighbor, edge;
  };
  std::vector<std::vector<EdgeLift>> star_lifts; // per original vertex
};

RepresentativeScheme build_scheme(const CutSurface& cut,
                                  const FundamentalPolygon& polygon,
                                  const std::vector<int>& segment_to_side);

// Max over cut vertices of d(positions[j], to_copy[j](positions[rep[j]])).
double constraint_residual(const GeodesicRealization& r,
                           const RepresentativeScheme& scheme);

// D_c = 1/2 sum over original edges of c_ij * l_ij^2, each edge counted once
// through its designated lift.
double dirichlet_energy(const GeodesicRealization& r, const RepresentativeScheme& scheme);

// Riemannian gradient per original vertex, anchored at its representative's
// position: sum of c_ij l_ij U_ij with U_ij the outward unit tangent, pulled
// back to the representative's frame for copies. Edges shorter than
// kDegenerateEdgeLength contribute zero. Throws GeometryError when the hard
// constraint residual exceeds 1e-9.
std::vector<TangentVec> gradient(const GeodesicRealization& r,
                                 const RepresentativeScheme& scheme);

// (1/|V|) sum of squared hyperbolic gradient norms, base counted once.
double mean_squared_gradient(const std::vector<TangentVec>& grad);

// Boundary vertices placed on their assigned polygon side by cumulative
// edge-length proportion (paired segments through the side generator, so the
// hard constraint holds exactly); interior vertices solve the weighted
// Euclidean Laplace system. `weights` are per original edge and must be
// positive; `metric` supplies the original edge lengths for the proportions.
GeodesicRealization initialize_euclidean(const CutSurface& cut,
                                         const FundamentalPolygon& polygon,
                                         const std::vector<int>& segment_to_side,
                                         const EdgeWeights& weights,
                                         const DiscreteMetric& metric);

struct TraceRecord {
  int iter = 0;
  double energy = 0.0;
  double grad_msq = 0.0;
  double max_disp = 0.0;
  double wall_ms = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceRecord> records; // iter 0 is the initial state
};

struct DescentOptions {
  double tau = 0.0; // <= 0 selects default_step
  double eps_disp = 1e-9;
  double eps_grad = 1e-12;
  int max_iter = 200000;
};

// 0.5 / max_i sum_j c_ij, a cheap surrogate for half the Hessian bound.
double default_step(const TriMesh& mesh, const EdgeWeights& weights);

struct DescentResult {
  GeodesicRealization realization;
  OptimizerTrace trace;
  std::string criterion; // "disp" | "grad" | "max_iter"
  int iterations = 0;
  double final_energy = 0.0;
};

// Exponential-map update of the representatives, equivariant propagation of
// the copies after every step. Throws DivergenceError if the energy exceeds
// 10x its initial value.
DescentResult descend(const GeodesicRealization& r, const RepresentativeScheme& scheme,
                      const DescentOptions& options = {});

// Eq-ratio sequence (E_k - E*) / (E_{k-1} - E*) over consecutive trace
// records; reported as exact 0 once the gap underflows.
std::vector<double> convergence_rate(const OptimizerTrace& trace, double final_energy);

struct EmbeddingReport {
  int flipped_face_count = 0;
  double min_signed_area = 0.0;
  std::vector<double> vertex_angle_sums; // per original vertex
};

EmbeddingReport check_embedding(const GeodesicRealization& r);

// CSV with header "iter,energy,grad_msq,max_disp,wall_ms".
std::string trace_to_csv(const OptimizerTrace& trace);

// {"positions": [[x,y],...], "criterion": ..., "iterations": n,
//  "final_energy": e}
std::string realization_to_json(const DescentResult& result);

} // namespace harmap
