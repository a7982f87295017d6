#pragma once

#include <vector>

#include "dmri/gradients.h"

namespace dmri {

// Real symmetric spherical harmonics, even degrees 0..order, descoteaux-style
// index ordering: for each even l, m runs -l..l. Entry (l,m) is
//   m < 0: sqrt(2) * Im(Y_l^|m|),  m = 0: Y_l^0,  m > 0: sqrt(2) * Re(Y_l^m),
// with Condon-Shortley phase inside the associated Legendre functions.
int sh_coeff_count(int order);

std::vector<double> sh_basis_row(const Vec3& dir, int order);

}  // namespace dmri
