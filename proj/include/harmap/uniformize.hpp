#pragma once

// Flat discrete hyperbolic metrics by conformal curvature flow, and the
// canonical edge weights with the Delaunay/positivity policy.

#include <string>
#include <vector>

#include "harmap/mesh.hpp"

namespace harmap {

struct ConformalFactors {
  std::vector<double> u; // per-vertex log scale factors
};

struct EdgeWeights {
  std::vector<double> c; // per-edge, symmetric by construction
};

// Per-face corner angles (at corners 0,1,2 of the face) from a hyperbolic
// metric. Throws GeometryError if a face violates the triangle inequalities.
std::vector<std::array<double, 3>> corner_angles(const TriMesh& mesh,
                                                 const DiscreteMetric& metric);

// K_i = 2*pi - sum of corner angles at i.
std::vector<double> vertex_curvature(const TriMesh& mesh, const DiscreteMetric& metric);

// Total area via the angle deficit: Area(f) = pi - angle sum.
double total_area(const TriMesh& mesh, const DiscreteMetric& metric);

struct FlowResult {
  DiscreteMetric metric;
  ConformalFactors factors;
  int iterations = 0;
  double max_abs_curvature = 0.0;
};

// Newton iteration on the curvature map with step halving; conformal scaling
// sinh(l'/2) = exp((u_i+u_j)/2) sinh(l/2). Throws ConvergenceError.
FlowResult hyperbolic_yamabe_flow(const TriMesh& mesh, const DiscreteMetric& metric,
                                  double tol = 1e-10, int max_iter = 50);

// Eq-weight kernel: (tan((ai+aj-ak)/2) + tan((ai'+aj'-al)/2)) * tanh(l/2)/l.
EdgeWeights canonical_weights(const TriMesh& mesh, const DiscreteMetric& flat_metric);

// Classical cotangent weights (l interpreted as Euclidean lengths).
EdgeWeights euclidean_cotangent_weights(const TriMesh& mesh, const DiscreteMetric& metric);

bool is_delaunay_edge(const TriMesh& mesh, const DiscreteMetric& metric, int e);

struct PositivityReport {
  EdgeWeights weights;
  int reset_count = 0;
  double floor = 0.0;
};

// Resets weights below `floor` to `floor`. floor <= 0 selects the default:
// the 5th percentile of the positive weights.
PositivityReport apply_positivity_policy(const EdgeWeights& weights, double floor = 0.0);

// Debug dump: {"u": [...], "K": [...], "c": [...]}.
std::string uniformize_debug_json(const std::vector<double>& u,
                                  const std::vector<double>& K,
                                  const std::vector<double>& c);

} // namespace harmap
