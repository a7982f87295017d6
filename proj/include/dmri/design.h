#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "dmri/gradients.h"

namespace dmri {

// Log-linear DTI design: row per volume,
// [-b*gx^2, -b*gy^2, -b*gz^2, -2b*gx*gy, -2b*gx*gz, -2b*gy*gz, 1].
Eigen::MatrixXd dti_design_matrix(const GradientScheme& scheme);

// Angular 6-column b-matrix at b=1 (no ln S0 column); the matrix whose
// condition number direction selection minimizes.
Eigen::MatrixXd dti_direction_design(const std::vector<Vec3>& dirs);

Eigen::MatrixXd sh_design_matrix(const std::vector<Vec3>& dirs, int order);

// Ratio of extreme singular values; requires rows >= cols.
double condition_number(const Eigen::MatrixXd& m);

struct ModelSpec {
  enum class kind { dti, sh } model = kind::dti;
  int sh_order = 0;

  static ModelSpec dti() { return {kind::dti, 0}; }
  static ModelSpec sh(int order) { return {kind::sh, order}; }
  int min_directions() const;
  Eigen::MatrixXd design(const std::vector<Vec3>& dirs) const;
};

struct SubsetSelection {
  std::vector<int> indices;  // sorted indices into the candidate set
  double cond = 0.0;
  uint64_t seed = 0;
  int iters = 0;
};

// Random-restart exchange search. Candidates g and -g are treated as the same
// direction. Deterministic for fixed (seed, iters, restarts): restart r draws
// from mt19937_64 seeded with splitmix64(seed ^ r), restart 0 starting from
// the best of 1000 random subsets drawn from mt19937_64(seed) (quality floor).
SubsetSelection select_subset(const std::vector<Vec3>& candidates, int k, const ModelSpec& model,
                              uint64_t seed, int iters = 2000, int restarts = 20);

}  // namespace dmri
