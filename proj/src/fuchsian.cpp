#include "harmap/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace harmap {

using std::numbers::pi;

double FundamentalPolygon::interior_angle(int k) const {
  int n = n_sides();
  const DiskPoint& v = vertices[k];
  auto t1 = geodesic_unit_tangent(v, vertices[(k + n - 1) % n]);
  auto t2 = geodesic_unit_tangent(v, vertices[(k + 1) % n]);
  // The disk model is conformal: hyperbolic angles are Euclidean angles.
  double dot = t1.vx * t2.vx + t1.vy * t2.vy;
  double n1 = std::hypot(t1.vx, t1.vy), n2 = std::hypot(t2.vx, t2.vy);
  return std::acos(std::clamp(dot / (n1 * n2), -1.0, 1.0));
}

double FundamentalPolygon::angle_sum() const {
  double s = 0.0;
  for (int k = 0; k < n_sides(); ++k) s += interior_angle(k);
  return s;
}

bool FundamentalPolygon::contains(const DiskPoint& p, double tol) const {
  // Geodesic polygons are Euclidean-convex in the Klein model.
  auto kp = to_klein(p);
  int n = n_sides();
  for (int k = 0; k < n; ++k) {
    auto a = to_klein(vertices[k]);
    auto b = to_klein(vertices[(k + 1) % n]);
    double cross = (b[0] - a[0]) * (kp[1] - a[1]) - (b[1] - a[1]) * (kp[0] - a[0]);
    if (cross < -tol) return false;
  }
  return true;
}

namespace {

// Interior angle sum of the regular 4g-gon with vertex radius s.
double regular_angle_sum(int g, double s) {
  int n = 4 * g;
  std::vector<DiskPoint> v(n);
  for (int k = 0; k < n; ++k)
    v[k] = {s * std::cos(2.0 * pi * k / n), s * std::sin(2.0 * pi * k / n)};
  FundamentalPolygon poly;
  poly.vertices = std::move(v);
  return poly.angle_sum();
}

std::vector<MobiusTransform> pairing_generators(const FundamentalPolygon& poly) {
  int n = poly.n_sides();
  std::vector<MobiusTransform> gen(n);
  for (int i = 0; i < n; ++i) {
    int j = poly.pairing[i];
    if (j == i || j < 0 || j >= n || poly.pairing[j] != i)
      throw TopologyError("fuchsian: pairing is not a fixed-point-free involution");
    if (i < j) {
      auto [s1, s2] = poly.side(i);
      auto [d1, d2] = poly.side(j);
      // gamma(v_i) = v_{j+1}, gamma(v_{i+1}) = v_j: source side onto target
      // side reversed.
      gen[i] = side_pairing(s1, s2, d2, d1);
      gen[j] = inverse(gen[i]);
    }
  }
  return gen;
}

void validate_poincare(const FundamentalPolygon& poly) {
  auto cycle = elliptic_cycle(poly);
  if ((int)cycle.size() != poly.n_sides())
    throw TopologyError("fuchsian: pairing does not induce a single elliptic cycle");
  double total = poly.angle_sum();
  if (std::abs(total - 2.0 * pi) > 1e-9)
    throw GeometryError("fuchsian: elliptic cycle angle sum differs from 2*pi");
}

} // namespace

FundamentalPolygon regular_polygon_with_pairing(int g, const std::vector<int>& pairing) {
  if (g < 2) throw TopologyError("regular_polygon: genus must be >= 2");
  int n = 4 * g;
  if ((int)pairing.size() != n)
    throw TopologyError("regular_polygon: pairing size must be 4g");

  // Bisection: the interior angle sum decreases monotonically from the
  // Euclidean limit (4g-2)*pi (s -> 0) to 0 (s -> 1).
  double lo = 0.0, hi = 1.0 - 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (regular_angle_sum(g, mid) > 2.0 * pi ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);

  FundamentalPolygon poly;
  poly.genus = g;
  poly.vertices.resize(n);
  for (int k = 0; k < n; ++k)
    poly.vertices[k] = {s * std::cos(2.0 * pi * k / n), s * std::sin(2.0 * pi * k / n)};
  poly.pairing = pairing;
  poly.generators = pairing_generators(poly);
  validate_poincare(poly);
  return poly;
}

FundamentalPolygon regular_polygon(int g) {
  // Per 4-side block (0-based): 4m <-> 4m+2, 4m+1 <-> 4m+3.
  std::vector<int> pairing(4 * g);
  for (int m = 0; m < g; ++m) {
    pairing[4 * m] = 4 * m + 2;
    pairing[4 * m + 2] = 4 * m;
    pairing[4 * m + 1] = 4 * m + 3;
    pairing[4 * m + 3] = 4 * m + 1;
  }
  return regular_polygon_with_pairing(g, pairing);
}

MobiusTransform side_pairing(const DiskPoint& src1, const DiskPoint& src2,
                             const DiskPoint& dst1, const DiskPoint& dst2) {
  double ls = hyp_distance(src1, src2);
  double ld = hyp_distance(dst1, dst2);
  if (std::abs(ls - ld) > 1e-10)
    throw GeometryError("side_pairing: segment lengths differ");

  // Normalize both segments to (origin, positive real axis) and conjugate.
  auto normalizer = [](const DiskPoint& p1, const DiskPoint& p2) {
    MobiusTransform t = MobiusTransform::to_origin(p1);
    DiskPoint w = t.apply(p2);
    return compose(MobiusTransform::rotation(-std::atan2(w.y, w.x)), t);
  };
  MobiusTransform a = normalizer(src1, src2);
  MobiusTransform b = normalizer(dst1, dst2);
  return compose(inverse(b), a).normalized();
}

std::vector<std::pair<int, GroupElement>> elliptic_cycle(const FundamentalPolygon& poly) {
  int n = poly.n_sides();
  // Signed word letters: pair m (1-based) is +m on its lower side, -m on the
  // paired side.
  std::vector<int> letter(n);
  {
    int next_id = 1;
    for (int i = 0; i < n; ++i) {
      if (i < poly.pairing[i]) {
        letter[i] = next_id;
        letter[poly.pairing[i]] = -next_id;
        ++next_id;
      }
    }
  }

  std::vector<std::pair<int, GroupElement>> cycle;
  std::vector<bool> seen(n, false);
  int v = 0;
  GroupElement cum; // identity
  for (int step = 0; step < n; ++step) {
    if (seen[v]) break;
    seen[v] = true;
    cycle.emplace_back(v, cum);
    // v is the tail of side v; its generator sends v_v to v_{pairing[v]+1}.
    cum.transform = compose(poly.generators[v], cum.transform).normalized();
    cum.word.push_back(letter[v]);
    v = (poly.pairing[v] + 1) % n;
  }
  if (v != 0)
    throw TopologyError("elliptic_cycle: walk did not close at the start vertex");
  return cycle;
}

namespace {

// Canonical sign: Mobius coefficient pairs are defined up to global sign.
std::array<double, 4> canonical_coeffs(const MobiusTransform& m) {
  std::array<double, 4> c = {m.a.real(), m.a.imag(), m.b.real(), m.b.imag()};
  double lead = c[0];
  if (std::abs(lead) < 1e-12) lead = c[1];
  if (lead < 0.0)
    for (double& x : c) x = -x;
  return c;
}

bool same_transform(const MobiusTransform& m1, const MobiusTransform& m2, double tol) {
  auto c1 = canonical_coeffs(m1), c2 = canonical_coeffs(m2);
  for (int k = 0; k < 4; ++k)
    if (std::abs(c1[k] - c2[k]) > tol) return false;
  return true;
}

} // namespace

std::vector<GroupElement> enumerate_group(const FundamentalPolygon& poly, int max_word_len) {
  if (max_word_len < 0) throw GeometryError("enumerate_group: negative word length");

  // One abstract generator per side pair, in side order.
  struct Gen { int letter; MobiusTransform t; };
  std::vector<Gen> gens;
  {
    int next_id = 1;
    for (int i = 0; i < poly.n_sides(); ++i) {
      if (i < poly.pairing[i]) {
        gens.push_back({next_id, poly.generators[i]});
        gens.push_back({-next_id, inverse(poly.generators[i])});
        ++next_id;
      }
    }
  }

  std::vector<GroupElement> out;
  out.push_back({MobiusTransform::identity().normalized(), {}});
  size_t frontier_begin = 0;
  for (int len = 1; len <= max_word_len; ++len) {
    size_t frontier_end = out.size();
    for (size_t k = frontier_begin; k < frontier_end; ++k) {
      for (const Gen& g : gens) {
        if (!out[k].word.empty() && out[k].word.back() == -g.letter) continue;
        MobiusTransform t = compose(g.t, out[k].transform).normalized();
        bool dup = false;
        for (const auto& e : out)
          if (same_transform(e.transform, t, 1e-9)) { dup = true; break; }
        if (dup) continue;
        GroupElement ge;
        ge.transform = t;
        ge.word = out[k].word;
        ge.word.push_back(g.letter);
        out.push_back(std::move(ge));
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

std::pair<GroupElement, DiskPoint> locate_in_fundamental_domain(
    const DiskPoint& p, const FundamentalPolygon& poly, int max_word_len) {
  if (p.norm2() >= 1.0)
    throw GeometryError("locate_in_fundamental_domain: point outside the disk");

  std::vector<int> letter(poly.n_sides());
  {
    int next_id = 1;
    for (int i = 0; i < poly.n_sides(); ++i)
      if (i < poly.pairing[i]) {
        letter[i] = next_id;
        letter[poly.pairing[i]] = -next_id;
        ++next_id;
      }
  }

  GroupElement cum;
  DiskPoint q = p;
  DiskPoint origin{0.0, 0.0};
  for (int step = 0; step <= max_word_len; ++step) {
    if (poly.contains(q, 1e-12)) return {cum, q};
    // The regular polygon is the Dirichlet domain centered at the origin, so
    // some pairing generator strictly reduces the distance to the origin.
    int best = -1;
    double best_d = hyp_distance(origin, q);
    DiskPoint best_q = q;
    for (int i = 0; i < poly.n_sides(); ++i) {
      DiskPoint cand = poly.generators[i].apply(q);
      double d = hyp_distance(origin, cand);
      if (d < best_d - 1e-14) {
        best = i;
        best_d = d;
        best_q = cand;
      }
    }
    if (best < 0) break;
    cum.transform = compose(poly.generators[best], cum.transform).normalized();
    cum.word.push_back(letter[best]);
    q = best_q;
  }
  throw GeometryError("locate_in_fundamental_domain: word length bound exhausted");
}

std::string polygon_to_json(const FundamentalPolygon& poly) {
  nlohmann::json j;
  j["genus"] = poly.genus;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : poly.vertices) verts.push_back({v.x, v.y});
  auto& pairs = j["pairing"] = nlohmann::json::array();
  for (int i = 0; i < poly.n_sides(); ++i)
    if (i < poly.pairing[i]) pairs.push_back({i, poly.pairing[i]});
  auto& gens = j["generators"] = nlohmann::json::array();
  for (const auto& g : poly.generators)
    gens.push_back({g.a.real(), g.a.imag(), g.b.real(), g.b.imag()});
  return j.dump(2);
}

FundamentalPolygon polygon_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polygon JSON: ") + e.what());
  }
  FundamentalPolygon poly;
  try {
    poly.genus = j.at("genus").get<int>();
    for (const auto& v : j.at("vertices"))
      poly.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    poly.pairing.assign(poly.n_sides(), -1);
    for (const auto& pr : j.at("pairing")) {
      int a = pr.at(0).get<int>(), b = pr.at(1).get<int>();
      if (a < 0 || b < 0 || a >= poly.n_sides() || b >= poly.n_sides() || a == b)
        throw ParseError("polygon JSON: invalid pairing entry");
      poly.pairing[a] = b;
      poly.pairing[b] = a;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polygon JSON: ") + e.what());
  }
  if ((int)poly.vertices.size() != 4 * poly.genus)
    throw ParseError("polygon JSON: vertex count must be 4*genus");
  // Generators are recomputed from the geometry; stored ones are advisory.
  poly.generators = pairing_generators(poly);
  validate_poincare(poly);
  return poly;
}

FundamentalPolygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_polygon: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return polygon_from_json(ss.str());
}

} // namespace harmap
