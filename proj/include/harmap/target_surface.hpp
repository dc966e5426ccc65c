#pragma once

// Geodesic triangulation of the fundamental polygon glued into a closed
// surface: a concrete hyperbolic target with its identity realization.

#include "harmap/harmonic.hpp"

namespace harmap {

struct TargetSurface {
  TriMesh quotient;                // closed genus-g mesh
  DiscreteMetric metric;           // hyperbolic edge lengths on the quotient
  GeodesicRealization realization; // identity realization; weights are the
                                   // raw canonical weights of `metric`
};

// Cobweb triangulation: each side split into `side_subdiv` geodesic arcs
// (paired sides subdivided compatibly through the side generators), interior
// filled with `rings` concentric scaled copies of the boundary ring plus a
// center vertex. side_subdiv >= 3, rings >= 1.
TargetSurface make_target_surface(const FundamentalPolygon& polygon,
                                  int side_subdiv, int rings);

} // namespace harmap
