#include "harmap/hypgeom.hpp"

#include <algorithm>
#include <cmath>

namespace harmap {

namespace {

void check_inside(const DiskPoint& p, const char* who) {
  if (p.norm2() >= 1.0)
    throw GeometryError(std::string(who) + ": point outside the open unit disk");
}

} // namespace

double TangentVec::hyp_norm() const {
  return 2.0 * std::hypot(vx, vy) / (1.0 - base.norm2());
}

MobiusTransform MobiusTransform::to_origin(const DiskPoint& p) {
  check_inside(p, "to_origin");
  // z -> (z - p) / (1 - conj(p) z)
  MobiusTransform m;
  m.a = {1.0, 0.0};
  m.b = -p.z();
  return m.normalized();
}

MobiusTransform MobiusTransform::rotation(double phi) {
  MobiusTransform m;
  m.a = std::polar(1.0, phi / 2.0);
  m.b = {0.0, 0.0};
  return m;
}

MobiusTransform MobiusTransform::normalized() const {
  double det = std::norm(a) - std::norm(b);
  if (det <= 0.0)
    throw GeometryError("MobiusTransform: non-positive determinant");
  double s = std::sqrt(det);
  return {a / s, b / s};
}

DiskPoint MobiusTransform::apply(const DiskPoint& p) const {
  Complex z = p.z();
  Complex w = (a * z + b) / (std::conj(b) * z + std::conj(a));
  return DiskPoint::from(w);
}

Complex MobiusTransform::derivative(const DiskPoint& p) const {
  Complex den = std::conj(b) * p.z() + std::conj(a);
  return (std::norm(a) - std::norm(b)) / (den * den);
}

TangentVec MobiusTransform::apply(const TangentVec& t) const {
  Complex w = derivative(t.base) * t.v();
  return {apply(t.base), w.real(), w.imag()};
}

MobiusTransform compose(const MobiusTransform& m1, const MobiusTransform& m2) {
  MobiusTransform m;
  m.a = m1.a * m2.a + m1.b * std::conj(m2.b);
  m.b = m1.a * m2.b + m1.b * std::conj(m2.a);
  return m.normalized();
}

MobiusTransform inverse(const MobiusTransform& m) {
  return {std::conj(m.a), -m.b};
}

double delta(const DiskPoint& p, const DiskPoint& q) {
  check_inside(p, "delta");
  check_inside(q, "delta");
  double dx = p.x - q.x, dy = p.y - q.y;
  return 2.0 * (dx * dx + dy * dy) / ((1.0 - p.norm2()) * (1.0 - q.norm2()));
}

double hyp_distance(const DiskPoint& p, const DiskPoint& q) {
  double d = delta(p, q);
  // arcosh(1 + d) = log1p(d + sqrt(d^2 + 2d)), accurate for tiny d.
  return std::log1p(d + std::sqrt(d * (d + 2.0)));
}

TangentVec geodesic_unit_tangent(const DiskPoint& p, const DiskPoint& q) {
  double d = hyp_distance(p, q);
  if (d < kDegenerateEdgeLength)
    throw GeometryError("geodesic_unit_tangent: degenerate edge");
  MobiusTransform t = MobiusTransform::to_origin(p);
  Complex q0 = t.apply(q).z();
  // Unit hyperbolic tangent at the origin has Euclidean norm 1/2.
  Complex u0 = q0 / std::abs(q0) * 0.5;
  MobiusTransform ti = inverse(t);
  Complex u = ti.derivative(DiskPoint{0.0, 0.0}) * u0;
  return {p, u.real(), u.imag()};
}

DiskPoint exp_map(const DiskPoint& p, const TangentVec& v) {
  double t = v.hyp_norm();
  if (t < 1e-300) return p;
  MobiusTransform m = MobiusTransform::to_origin(p);
  Complex v0 = m.derivative(p) * v.v();
  Complex dir = v0 / std::abs(v0);
  // Radial geodesic from the origin: exp_0(t u) = tanh(t/2) u.
  Complex q0 = std::tanh(t / 2.0) * dir;
  return inverse(m).apply(DiskPoint::from(q0));
}

TangentVec log_map(const DiskPoint& p, const DiskPoint& q) {
  double d = hyp_distance(p, q);
  if (d < kDegenerateEdgeLength) return {p, 0.0, 0.0};
  TangentVec u = geodesic_unit_tangent(p, q);
  return {p, d * u.vx, d * u.vy};
}

double hyp_law_of_cosines(double b, double c, double angle_a) {
  if (b <= 0.0 || c <= 0.0)
    throw GeometryError("hyp_law_of_cosines: side lengths must be positive");
  double ca = std::cosh(b) * std::cosh(c) - std::sinh(b) * std::sinh(c) * std::cos(angle_a);
  return std::acosh(std::max(ca, 1.0));
}

namespace {

double angle_opposite(double a, double b, double c) {
  double cosA = (std::cosh(b) * std::cosh(c) - std::cosh(a)) / (std::sinh(b) * std::sinh(c));
  if (cosA > 1.0 + 1e-12 || cosA < -1.0 - 1e-12)
    throw GeometryError("angles_from_lengths: invalid hyperbolic triangle");
  return std::acos(std::clamp(cosA, -1.0, 1.0));
}

} // namespace

std::array<double, 3> angles_from_lengths(double a, double b, double c) {
  if (a <= 0.0 || b <= 0.0 || c <= 0.0)
    throw GeometryError("angles_from_lengths: side lengths must be positive");
  if (a >= b + c || b >= a + c || c >= a + b)
    throw GeometryError("angles_from_lengths: triangle inequality violated");
  return {angle_opposite(a, b, c), angle_opposite(b, c, a), angle_opposite(c, a, b)};
}

} // namespace harmap
