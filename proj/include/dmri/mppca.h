#pragma once

#include <vector>

#include "dmri/volume.h"

namespace dmri {

struct PatchConfig {
  int radius = 2;  // patch side 2*radius+1
  int stride = 1;
  enum class aggregate { overlap_average, center_only } agg = aggregate::overlap_average;
};

struct DenoiseReport {
  Volume4D sigma_map;  // per-voxel noise sigma estimate
  Volume4D npars_map;  // per-voxel retained component count
};

struct MpResult {
  int p = 0;
  double sigma2 = 0.0;
};

// Marchenko-Pastur bulk split. Input: eigenvalues of the RxR scatter XX^T/N
// (descending, length R); n_columns is N. p is the smallest value with
// lambda_{p+1} - lambda_R <= 4*sqrt((R-p)/N)*sigma2(p), where sigma2(p) is
// the mean of the trailing R-p eigenvalues; p = R-1 when nothing satisfies it.
MpResult mp_threshold(const std::vector<double>& eigenvalues, int n_columns);

// Patchwise PCA denoising. Casorati matrices are mean-centered per voxel row;
// the eigen-problem runs on the min(M,V)-sided Gram matrix. Output voxels
// aggregate overlapping patch reconstructions in a fixed patch order, so the
// result is independent of thread count.
std::pair<Volume4D, DenoiseReport> denoise_mppca(const Volume4D& vol, const PatchConfig& cfg);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

enum class moment_source { residual, raw, denoised };

// Pooled moments of masked intensities across all volumes. Constant pools
// report variance 0 and zero higher moments.
Moments residual_moments(const Volume4D& raw, const Volume4D& denoised, const MaskVolume& mask,
                         moment_source source = moment_source::residual);

}  // namespace dmri
