#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "harmap/hypgeom.hpp"

using namespace harmap;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(7);

DiskPoint random_point(double max_radius = 0.9) {
  std::uniform_real_distribution<double> ur(0.0, max_radius);
  std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
  double r = ur(rng), a = ua(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

MobiusTransform random_mobius() {
  std::uniform_real_distribution<double> ua(0.0, 2.0 * pi);
  MobiusTransform rot = MobiusTransform::rotation(ua(rng));
  MobiusTransform tr = MobiusTransform::to_origin(random_point(0.8));
  return compose(rot, tr);
}

} // namespace

TEST_CASE("distance basics") {
  DiskPoint o{0, 0};
  CHECK(hyp_distance(o, o) == doctest::Approx(0.0).epsilon(1e-15));
  // Integrating 2dr/(1-r^2) along a diameter gives ln((1+r)/(1-r)).
  CHECK(hyp_distance(o, {0.5, 0}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  DiskPoint p{0.3, 0.1}, q{-0.2, 0.4};
  CHECK(hyp_distance(p, q) == doctest::Approx(hyp_distance(q, p)).epsilon(1e-15));
  CHECK_THROWS_AS(hyp_distance({1.0, 0.2}, o), GeometryError);
}

TEST_CASE("delta") {
  DiskPoint o{0, 0};
  CHECK(delta(o, o) == 0.0);
  CHECK(delta(o, {0.5, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (int i = 0; i < 50; ++i) {
    DiskPoint p = random_point(), q = random_point();
    CHECK(std::cosh(hyp_distance(p, q)) - 1.0 ==
          doctest::Approx(delta(p, q)).epsilon(1e-11));
  }
}

TEST_CASE("mobius basics") {
  DiskPoint p{0.3, 0.4};
  auto id = MobiusTransform::identity();
  auto ip = id.apply(p);
  CHECK(ip.x == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(ip.y == doctest::Approx(0.4).epsilon(1e-15));

  auto rot = MobiusTransform::rotation(pi / 2.0);
  auto rp = rot.apply(DiskPoint{0.6, 0.0});
  CHECK(rp.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rp.y == doctest::Approx(0.6).epsilon(1e-15));

  for (int i = 0; i < 100; ++i) {
    auto m = random_mobius();
    DiskPoint a = random_point(), b = random_point();
    CHECK(hyp_distance(m.apply(a), m.apply(b)) ==
          doctest::Approx(hyp_distance(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("compose and inverse") {
  auto m = random_mobius();
  auto c = compose(MobiusTransform::identity(), m);
  CHECK(std::abs(c.a - m.a) < 1e-14);
  CHECK(std::abs(c.b - m.b) < 1e-14);

  auto e = compose(m, inverse(m));
  CHECK(std::abs(e.a - Complex{1, 0}) < 1e-14);
  CHECK(std::abs(e.b) < 1e-14);

  for (int i = 0; i < 20; ++i) {
    auto m1 = random_mobius(), m2 = random_mobius(), m3 = random_mobius();
    auto left = compose(compose(m1, m2), m3);
    auto right = compose(m1, compose(m2, m3));
    CHECK(std::abs(left.a - right.a) < 1e-12);
    CHECK(std::abs(left.b - right.b) < 1e-12);
    DiskPoint p = random_point();
    auto q1 = compose(m1, m2).apply(p);
    auto q2 = m1.apply(m2.apply(p));
    CHECK(q1.x == doctest::Approx(q2.x).epsilon(1e-12));
    CHECK(q1.y == doctest::Approx(q2.y).epsilon(1e-12));
  }
}

TEST_CASE("unit tangent") {
  auto u = geodesic_unit_tangent({0, 0}, {0.5, 0});
  // Metric factor at the origin is 2, so the Euclidean components are (1/2, 0).
  CHECK(u.vx == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u.vy == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u.hyp_norm() == doctest::Approx(1.0).epsilon(1e-14));

  auto uy = geodesic_unit_tangent({0, 0}, {0, 0.3});
  CHECK(uy.vx == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(uy.vy > 0.0);

  CHECK_THROWS_AS(geodesic_unit_tangent({0.2, 0.2}, {0.2, 0.2}), GeometryError);
}

TEST_CASE("exp map") {
  DiskPoint p = random_point();
  CHECK(exp_map(p, {p, 0, 0}).x == doctest::Approx(p.x).epsilon(1e-15));

  double t = 0.8;
  auto q = exp_map({0, 0}, {{0, 0}, t / 2.0, 0.0}); // hyperbolic norm t
  CHECK(q.x == doctest::Approx(std::tanh(t / 2.0)).epsilon(1e-14));
  CHECK(q.y == doctest::Approx(0.0).epsilon(1e-14));

  for (int i = 0; i < 200; ++i) {
    DiskPoint a = random_point(0.95), b = random_point(0.95);
    if (hyp_distance(a, b) < 1e-12) continue;
    auto back = exp_map(a, log_map(a, b));
    CHECK(hyp_distance(back, b) < 1e-10);
    // exp moves by exactly the tangent norm
    auto v = log_map(a, b);
    CHECK(hyp_distance(a, exp_map(a, v)) ==
          doctest::Approx(v.hyp_norm()).epsilon(1e-10));
  }
}

TEST_CASE("law of cosines") {
  // Right triangle: cosh a = cosh b cosh c.
  double b = 0.7, c = 1.2;
  double a = hyp_law_of_cosines(b, c, pi / 2.0);
  CHECK(std::cosh(a) == doctest::Approx(std::cosh(b) * std::cosh(c)).epsilon(1e-13));

  // Equilateral: cos A = cosh(l) / (cosh(l) + 1).
  double l = 1.1;
  auto angles = angles_from_lengths(l, l, l);
  CHECK(std::cos(angles[0]) ==
        doctest::Approx(std::cosh(l) / (std::cosh(l) + 1.0)).epsilon(1e-13));
  CHECK(angles[0] == doctest::Approx(angles[1]).epsilon(1e-14));

  // Euclidean limit.
  auto tiny = angles_from_lengths(0.001, 0.001, 0.001);
  for (double ang : tiny) CHECK(std::abs(ang - pi / 3.0) < 1e-6);

  CHECK_THROWS_AS(angles_from_lengths(3.0, 1.0, 1.0), GeometryError);
}

TEST_CASE("triangle inequality and angle-sum deficit") {
  for (int i = 0; i < 100; ++i) {
    DiskPoint p = random_point(), q = random_point(), r = random_point();
    CHECK(hyp_distance(p, r) <= hyp_distance(p, q) + hyp_distance(q, r) + 1e-12);
  }
  for (int i = 0; i < 50; ++i) {
    DiskPoint p = random_point(), q = random_point(), r = random_point();
    double a = hyp_distance(q, r), b = hyp_distance(r, p), c = hyp_distance(p, q);
    if (a < 1e-6 || b < 1e-6 || c < 1e-6) continue;
    auto angles = angles_from_lengths(a, b, c);
    CHECK(angles[0] + angles[1] + angles[2] < pi);
  }
}

TEST_CASE("stability near the boundary") {
  DiskPoint p{1.0 - 1e-9, 0.0};
  DiskPoint q{0.0, 1.0 - 1e-9};
  double d = hyp_distance(p, q);
  CHECK(std::isfinite(d));
  auto u = geodesic_unit_tangent(p, q);
  CHECK(std::isfinite(u.vx));
  CHECK(std::isfinite(u.hyp_norm()));
}
