#pragma once

#include <string>

#include "dmri/design.h"
#include "dmri/sh.h"
#include "dmri/volume.h"

namespace dmri {

struct ShCoeffMap {
  Volume4D coef;  // V = (order+1)(order+2)/2 coefficient volumes
  MaskVolume mask;
  int order = 0;
  double shell_b = 0.0;
  std::string basis = "real-symmetric-even";
};

// Least-squares SH fit of one shell with Laplace-Beltrami regularization
// lambda_lb * diag((l(l+1))^2). With lambda_lb = 0 the system must be
// overdetermined: #dirs >= #coefficients.
ShCoeffMap fit_sh(const Volume4D& shell_signals, const std::vector<Vec3>& directions, int order,
                  double lambda_lb, const MaskVolume& mask, double shell_b = 0.0);

// Amplitudes of the fitted basis at the given directions (V = |dirs|).
Volume4D project_sh(const ShCoeffMap& coeffs, const std::vector<Vec3>& dirs);

// Jensen-Shannon distance with base-2 logs: clamp negatives to 0, add 1e-12,
// normalize, sqrt of the divergence; range [0, 1].
double jsd(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace dmri
