#include "harmap/uniformize.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "harmap/hypgeom.hpp"

namespace harmap {

using std::numbers::pi;

std::vector<std::array<double, 3>> corner_angles(const TriMesh& mesh,
                                                 const DiscreteMetric& metric) {
  std::vector<std::array<double, 3>> angles(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(mesh, metric, f);
    angles[f] = angles_from_lengths(a, b, c);
  }
  return angles;
}

std::vector<double> vertex_curvature(const TriMesh& mesh, const DiscreteMetric& metric) {
  auto angles = corner_angles(mesh, metric);
  std::vector<double> K(mesh.n_vertices(), 2.0 * pi);
  for (int f = 0; f < mesh.n_faces(); ++f)
    for (int k = 0; k < 3; ++k) K[mesh.face(f)[k]] -= angles[f][k];
  return K;
}

double total_area(const TriMesh& mesh, const DiscreteMetric& metric) {
  auto angles = corner_angles(mesh, metric);
  double area = 0.0;
  for (const auto& a : angles) area += pi - (a[0] + a[1] + a[2]);
  return area;
}

namespace {

DiscreteMetric scaled_metric(const TriMesh& mesh, const DiscreteMetric& base,
                             const std::vector<double>& u) {
  DiscreteMetric out;
  out.lengths.resize(base.lengths.size());
  for (int e = 0; e < (int)base.lengths.size(); ++e) {
    auto [i, j] = mesh.edge_vertices(e);
    out.lengths[e] =
        2.0 * std::asinh(std::exp(0.5 * (u[i] + u[j])) * std::sinh(0.5 * base.lengths[e]));
  }
  return out;
}

bool metric_valid(const TriMesh& mesh, const DiscreteMetric& metric) {
  for (int f = 0; f < mesh.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(mesh, metric, f);
    if (!(a < b + c && b < a + c && c < a + b)) return false;
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) return false;
  }
  return true;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Sparse curvature Jacobian dK/du by central differences on the per-face
// angle map. K_i only couples to u on the 1-ring, so this stays cheap.
Eigen::SparseMatrix<double> curvature_jacobian(const TriMesh& mesh,
                                               const DiscreteMetric& base,
                                               const std::vector<double>& u) {
  const double h = 1e-6;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(12 * mesh.n_faces());
  std::vector<double> up = u;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& fv = mesh.face(f);
    auto [e_a, e_b, e_c] = std::array<int, 3>{mesh.edge(mesh.next(3 * f)),
                                              mesh.edge(mesh.prev(3 * f)),
                                              mesh.edge(3 * f)};
    auto face_angles = [&](const std::vector<double>& uu) {
      auto scale = [&](int e) {
        auto [i, j] = mesh.edge_vertices(e);
        return 2.0 * std::asinh(std::exp(0.5 * (uu[i] + uu[j])) *
                                std::sinh(0.5 * base.lengths[e]));
      };
      return angles_from_lengths(scale(e_a), scale(e_b), scale(e_c));
    };
    for (int m = 0; m < 3; ++m) {
      int vm = fv[m];
      up[vm] = u[vm] + h;
      auto ap = face_angles(up);
      up[vm] = u[vm] - h;
      auto am = face_angles(up);
      up[vm] = u[vm];
      for (int k = 0; k < 3; ++k) {
        double dangle = (ap[k] - am[k]) / (2.0 * h);
        // K contribution is minus the angle at corner k.
        trip.emplace_back(fv[k], vm, -dangle);
      }
    }
  }
  Eigen::SparseMatrix<double> J(mesh.n_vertices(), mesh.n_vertices());
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

} // namespace

FlowResult hyperbolic_yamabe_flow(const TriMesh& mesh, const DiscreteMetric& metric,
                                  double tol, int max_iter) {
  if (!metric_valid(mesh, metric))
    throw GeometryError("hyperbolic_yamabe_flow: invalid input metric");

  auto norm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  std::vector<double> u(mesh.n_vertices(), 0.0);
  DiscreteMetric current = metric;
  std::vector<double> K = vertex_curvature(mesh, current);
  double maxK = max_abs(K);
  double resK = norm2(K);

  int iter = 0;
  for (; iter < max_iter && maxK > tol; ++iter) {
    Eigen::SparseMatrix<double> J = curvature_jacobian(mesh, metric, u);
    Eigen::VectorXd rhs(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) rhs[i] = -K[i];

    Eigen::VectorXd du;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(J);
    bool solved = solver.info() == Eigen::Success;
    if (solved) {
      du = solver.solve(rhs);
      solved = solver.info() == Eigen::Success && du.allFinite();
    }
    if (!solved) {
      // Gradient-style fallback: move against the curvature residual.
      du = 0.1 * rhs;
    }

    double step = 1.0;
    bool accepted = false;
    while (step >= 1e-12) {
      std::vector<double> trial = u;
      for (int i = 0; i < mesh.n_vertices(); ++i) trial[i] += step * du[i];
      DiscreteMetric tm = scaled_metric(mesh, metric, trial);
      if (metric_valid(mesh, tm)) {
        std::vector<double> tK = vertex_curvature(mesh, tm);
        double tres = norm2(tK);
        if (tres < resK) {
          u = std::move(trial);
          current = std::move(tm);
          K = std::move(tK);
          resK = tres;
          maxK = max_abs(K);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted)
      throw ConvergenceError("hyperbolic_yamabe_flow: step halving floored out at max|K| = " +
                             std::to_string(maxK));
  }
  if (maxK > tol)
    throw ConvergenceError("hyperbolic_yamabe_flow: no convergence after " +
                           std::to_string(max_iter) + " iterations, max|K| = " +
                           std::to_string(maxK));
  return {std::move(current), {std::move(u)}, iter, maxK};
}

namespace {

// Half-weight kernel of one side of an edge: tan((a_i + a_j - a_k)/2) where
// a_k is the angle opposite the edge.
double half_angle_tan(const TriMesh& mesh,
                      const std::vector<std::array<double, 3>>& angles, int h) {
  int f = h / 3;
  int k = h % 3;              // corner at origin of h
  int j = (k + 1) % 3;        // corner at dest
  int opp = (k + 2) % 3;      // corner opposite the edge
  return std::tan(0.5 * (angles[f][k] + angles[f][j] - angles[f][opp]));
}

} // namespace

EdgeWeights canonical_weights(const TriMesh& mesh, const DiscreteMetric& flat_metric) {
  auto angles = corner_angles(mesh, flat_metric);
  EdgeWeights w;
  w.c.resize(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    int h = mesh.halfedge_of_edge(e);
    int t = mesh.twin(h);
    if (t < 0) throw TopologyError("canonical_weights: boundary edge");
    double l = flat_metric.length(e);
    w.c[e] = (half_angle_tan(mesh, angles, h) + half_angle_tan(mesh, angles, t)) *
             std::tanh(0.5 * l) / l;
  }
  return w;
}

EdgeWeights euclidean_cotangent_weights(const TriMesh& mesh, const DiscreteMetric& metric) {
  // Euclidean corner angles from the side lengths.
  std::vector<std::array<double, 3>> angles(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(mesh, metric, f);
    if (a >= b + c || b >= a + c || c >= a + b)
      throw GeometryError("euclidean_cotangent_weights: degenerate face");
    auto corner = [](double opp, double s1, double s2) {
      double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
      return std::acos(std::clamp(cosv, -1.0, 1.0));
    };
    angles[f] = {corner(a, b, c), corner(b, c, a), corner(c, a, b)};
  }
  EdgeWeights w;
  w.c.resize(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    int h = mesh.halfedge_of_edge(e);
    int t = mesh.twin(h);
    if (t < 0) throw TopologyError("euclidean_cotangent_weights: boundary edge");
    double ca = angles[h / 3][(h % 3 + 2) % 3];
    double cb = angles[t / 3][(t % 3 + 2) % 3];
    w.c[e] = 0.5 * (1.0 / std::tan(ca) + 1.0 / std::tan(cb));
  }
  return w;
}

bool is_delaunay_edge(const TriMesh& mesh, const DiscreteMetric& metric, int e) {
  auto angles = corner_angles(mesh, metric);
  int h = mesh.halfedge_of_edge(e);
  int t = mesh.twin(h);
  if (t < 0) throw TopologyError("is_delaunay_edge: boundary edge");
  auto half_sum = [&](int hh) {
    int f = hh / 3, k = hh % 3, j = (k + 1) % 3, opp = (k + 2) % 3;
    return 0.5 * (angles[f][k] + angles[f][j] - angles[f][opp]);
  };
  return half_sum(h) + half_sum(t) >= 0.0;
}

PositivityReport apply_positivity_policy(const EdgeWeights& weights, double floor) {
  PositivityReport rep;
  if (floor <= 0.0) {
    std::vector<double> positive;
    for (double c : weights.c)
      if (c > 0.0) positive.push_back(c);
    if (positive.empty())
      throw GeometryError("apply_positivity_policy: no positive weights");
    size_t idx = positive.size() / 20; // 5th percentile
    std::nth_element(positive.begin(), positive.begin() + idx, positive.end());
    floor = positive[idx];
  }
  rep.floor = floor;
  rep.weights = weights;
  for (double& c : rep.weights.c) {
    if (c < floor) {
      c = floor;
      ++rep.reset_count;
    }
  }
  return rep;
}

std::string uniformize_debug_json(const std::vector<double>& u,
                                  const std::vector<double>& K,
                                  const std::vector<double>& c) {
  std::ostringstream os;
  os.precision(17);
  auto arr = [&](const std::vector<double>& v) {
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
  };
  os << "{\"u\":";
  arr(u);
  os << ",\"K\":";
  arr(K);
  os << ",\"c\":";
  arr(c);
  os << "}";
  return os.str();
}

} // namespace harmap
