#pragma once

#include <vector>

#include "dmri/gradients.h"

namespace dmri {

// Unit sphere tessellation by recursive midpoint subdivision of an icosahedron.
// Vertex count is 10*4^level + 2 (level 3 -> 642, level 5 -> 10242).
std::vector<Vec3> icosphere(int level);

// Deterministic spherical Fibonacci points on the upper hemisphere (z > 0).
std::vector<Vec3> fibonacci_hemisphere(int n);

// The 362-direction hemisphere used for SH projection and JSD binning.
// Construction is validated: exactly 362 points, all z > 0, pairwise
// non-antipodal, minimum pairwise angle > 5 degrees.
const std::vector<Vec3>& hemisphere362();

}  // namespace dmri
