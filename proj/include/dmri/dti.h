#pragma once

#include <array>

#include "dmri/design.h"
#include "dmri/volume.h"

namespace dmri {

// Per-voxel tensor solution: Dxx,Dyy,Dzz,Dxy,Dxz,Dyz (mm^2/s) then ln S0.
struct TensorMap {
  int nx = 0, ny = 0, nz = 0;
  MaskVolume mask;
  std::vector<std::array<double, 7>> coef;

  size_t nvox() const { return static_cast<size_t>(nx) * ny * nz; }
};

struct TensorScalars {
  Volume4D fa, md, ad, rd;  // V = 1
  Volume4D v1;              // V = 3
};

enum class fit_method { ols, wls };

// Log-linear tensor fit; WLS runs one reweighting pass with weights equal to
// the squared OLS-predicted signals. Signals are clamped to max(S, 1e-6 * S0)
// before the log.
TensorMap fit_dti(const Volume4D& vol, const GradientScheme& scheme, const MaskVolume& mask,
                  fit_method method = fit_method::wls);

// Eigenvalues clamped at 0 before FA; V1 sign fixed so its largest-magnitude
// component is non-negative; background voxels 0.
TensorScalars tensor_scalars(const TensorMap& t);

// Mean |a-b| over the mask, scaled by `scale` (1000 converts diffusivities
// from mm^2/s to um^2/ms).
double mae_scalar(const Volume4D& a, const Volume4D& b, const MaskVolume& mask,
                  double scale = 1.0);

// Mean antipodally-invariant angle between V1 fields (V = 3), in degrees.
double v1_angular_error(const Volume4D& a, const Volume4D& b, const MaskVolume& mask);

}  // namespace dmri
