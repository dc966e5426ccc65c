#pragma once

// Figure-grade SVG rendering of realizations and their tessellations in the
// Poincare disk. Geodesics are drawn as circular arcs orthogonal to the unit
// circle (diameters as straight lines).

#include <string>

#include "harmap/harmonic.hpp"

namespace harmap {

// Path data from a to b along the geodesic: "M ... A ..." (or "M ... L ..."
// within 1e-12 of a diameter). Coordinates are disk coordinates, y up.
std::string geodesic_path(const DiskPoint& a, const DiskPoint& b);

// Unit circle, fundamental polygon, image edges of the realization, and one
// copy of the image per group element of word length <= word_len (0 renders
// the base copy only).
std::string tessellation_svg(const GeodesicRealization& r, int word_len);

} // namespace harmap
