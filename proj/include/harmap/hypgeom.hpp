#pragma once

// Exact-formula kernel for the Poincaré disk model: distances, geodesics,
// disk isometries, exponential/log maps and hyperbolic trigonometry.

#include <array>
#include <complex>

#include "harmap/errors.hpp"

namespace harmap {

using Complex = std::complex<double>;

constexpr double kDegenerateEdgeLength = 1e-14;

struct DiskPoint {
  double x = 0.0;
  double y = 0.0;

  Complex z() const { return {x, y}; }
  double norm2() const { return x * x + y * y; }

  static DiskPoint from(Complex c) { return {c.real(), c.imag()}; }
};

// Tangent vector at `base`, components in disk coordinates. The hyperbolic
// norm is 2*sqrt(vx^2+vy^2)/(1-|base|^2).
struct TangentVec {
  DiskPoint base;
  double vx = 0.0;
  double vy = 0.0;

  Complex v() const { return {vx, vy}; }
  double hyp_norm() const;
};

// z -> (a z + b) / (conj(b) z + conj(a)), normalized to |a|^2 - |b|^2 = 1.
struct MobiusTransform {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  static MobiusTransform identity() { return {}; }
  // Disk isometry taking p to the origin.
  static MobiusTransform to_origin(const DiskPoint& p);
  // Rotation about the origin by angle phi.
  static MobiusTransform rotation(double phi);

  MobiusTransform normalized() const;
  DiskPoint apply(const DiskPoint& p) const;
  // Push a tangent vector forward by the differential.
  TangentVec apply(const TangentVec& t) const;
  Complex derivative(const DiskPoint& p) const;

  // Trace of the SU(1,1) matrix representative (defined up to sign).
  double trace() const { return 2.0 * a.real(); }
};

MobiusTransform compose(const MobiusTransform& m1, const MobiusTransform& m2);
MobiusTransform inverse(const MobiusTransform& m);

// delta(p,q) = 2|p-q|^2 / ((1-|p|^2)(1-|q|^2))
double delta(const DiskPoint& p, const DiskPoint& q);

// d(p,q) = arcosh(1 + delta), evaluated in log1p form for tiny delta.
double hyp_distance(const DiskPoint& p, const DiskPoint& q);

// Unit tangent at p of the geodesic from p to q. Throws GeometryError for
// edges shorter than kDegenerateEdgeLength.
TangentVec geodesic_unit_tangent(const DiskPoint& p, const DiskPoint& q);

DiskPoint exp_map(const DiskPoint& p, const TangentVec& v);

// log_p(q): tangent at p with hyperbolic norm d(p,q) and exp_p(log_p(q)) = q.
TangentVec log_map(const DiskPoint& p, const DiskPoint& q);

// cosh a = cosh b cosh c - sinh b sinh c cos A
double hyp_law_of_cosines(double b, double c, double angle_a);

// Corner angles (A, B, C) opposite to sides (a, b, c). Throws GeometryError
// if the strict hyperbolic triangle inequalities fail.
std::array<double, 3> angles_from_lengths(double a, double b, double c);

// Klein projective model, where geodesics are Euclidean-straight. Used for
// point location; not part of the public geometry API surface.
inline std::array<double, 2> to_klein(const DiskPoint& p) {
  double s = 2.0 / (1.0 + p.norm2());
  return {s * p.x, s * p.y};
}

} // namespace harmap
