#pragma once

#include <array>
#include <string>
#include <vector>

#include "dmri/volume.h"

namespace dmri {

using Vec3 = std::array<double, 3>;

constexpr double kB0Threshold = 50.0;    // s/mm^2
constexpr double kShellRound = 100.0;    // s/mm^2

// Per-volume b-value (s/mm^2) and unit direction; b0 volumes may carry zero vectors.
struct GradientScheme {
  std::vector<double> bvals;
  std::vector<Vec3> bvecs;
  double b0_threshold = kB0Threshold;

  int nvolumes() const { return static_cast<int>(bvals.size()); }
  bool is_b0(int i) const { return bvals[i] <= b0_threshold; }
  std::vector<int> b0_indices() const;
  std::vector<int> directed_indices() const;
  GradientScheme subset(const std::vector<int>& volumes) const;
};

struct Shell {
  double b = 0.0;                // rounded shell b-value; 0 for the b0 group
  std::vector<int> volumes;      // indices into the scheme
};

// FSL text convention: bval = one row of N numbers, bvec = 3 rows of N numbers.
GradientScheme read_gradients(const std::string& bval_path, const std::string& bvec_path,
                              double b0_threshold = kB0Threshold);
void write_gradients(const GradientScheme& scheme, const std::string& bval_path,
                     const std::string& bvec_path);

std::vector<Shell> shell_partition(const GradientScheme& scheme, double round_to = kShellRound);

Volume4D mean_b0(const Volume4D& vol, const GradientScheme& scheme);

}  // namespace dmri
