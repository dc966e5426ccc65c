#pragma once

// Synthetic closed genus-g surfaces built as connected sums of grid tori.
// Intended for tests and demos; real inputs come through load_mesh.

#include "harmap/mesh.hpp"

namespace harmap {

// Torus of revolution sampled on an n x m grid (n around the big circle).
EmbeddedMesh make_torus(int n, int m, double big_radius = 2.0,
                        double small_radius = 0.8, Vec3 offset = {});

// Connected sum of g tori along shared triangles; the junction vertices have
// high valence, which the homology-basis search relies on. n, m >= 6.
EmbeddedMesh make_genus_surface(int genus, int n = 12, int m = 8);

} // namespace harmap
