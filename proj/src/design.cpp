#include "dmri/design.h"

#include <algorithm>
#include <random>

#include "dmri/sh.h"

namespace dmri {
namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Candidate indices collapsed over antipodal duplicates, keeping first occurrence.
std::vector<int> unique_axes(const std::vector<Vec3>& dirs) {
  std::vector<int> reps;
  for (size_t i = 0; i < dirs.size(); ++i) {
    bool dup = false;
    for (int r : reps) {
      const double dot = dirs[i][0] * dirs[r][0] + dirs[i][1] * dirs[r][1] + dirs[i][2] * dirs[r][2];
      if (std::abs(dot) > 1.0 - 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(static_cast<int>(i));
  }
  return reps;
}

double subset_cond(const std::vector<Vec3>& cands, const std::vector<int>& idx,
                   const ModelSpec& model) {
  std::vector<Vec3> dirs;
  dirs.reserve(idx.size());
  for (int i : idx) dirs.push_back(cands[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(model.design(dirs));
  const auto& s = svd.singularValues();
  const double smax = s(0), smin = s(s.size() - 1);
  if (smin < 1e-12 * smax) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::vector<int> draw_subset(std::mt19937_64& rng, int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

Eigen::MatrixXd dti_design_matrix(const GradientScheme& scheme) {
  const int n = scheme.nvolumes();
  Eigen::MatrixXd m(n, 7);
  for (int i = 0; i < n; ++i) {
    const double b = scheme.bvals[i];
    const auto& g = scheme.bvecs[i];
    m(i, 0) = -b * g[0] * g[0];
    m(i, 1) = -b * g[1] * g[1];
    m(i, 2) = -b * g[2] * g[2];
    m(i, 3) = -2.0 * b * g[0] * g[1];
    m(i, 4) = -2.0 * b * g[0] * g[2];
    m(i, 5) = -2.0 * b * g[1] * g[2];
    m(i, 6) = 1.0;
  }
  return m;
}

Eigen::MatrixXd dti_direction_design(const std::vector<Vec3>& dirs) {
  Eigen::MatrixXd m(dirs.size(), 6);
  for (size_t i = 0; i < dirs.size(); ++i) {
    const auto& g = dirs[i];
    m(i, 0) = g[0] * g[0];
    m(i, 1) = g[1] * g[1];
    m(i, 2) = g[2] * g[2];
    m(i, 3) = 2.0 * g[0] * g[1];
    m(i, 4) = 2.0 * g[0] * g[2];
    m(i, 5) = 2.0 * g[1] * g[2];
  }
  return m;
}

Eigen::MatrixXd sh_design_matrix(const std::vector<Vec3>& dirs, int order) {
  const int ncoef = sh_coeff_count(order);
  Eigen::MatrixXd m(dirs.size(), ncoef);
  for (size_t i = 0; i < dirs.size(); ++i) {
    const std::vector<double> row = sh_basis_row(dirs[i], order);
    for (int j = 0; j < ncoef; ++j) m(i, j) = row[j];
  }
  return m;
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.rows() < m.cols())
    fail(errc::invalid_argument, "condition number needs rows >= cols");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0), smin = s(s.size() - 1);
  if (smin < 1e-12 * smax) fail(errc::rank_deficient, "smallest singular value below 1e-12 of largest");
  return smax / smin;
}

int ModelSpec::min_directions() const {
  return model == kind::dti ? 6 : sh_coeff_count(sh_order);
}

Eigen::MatrixXd ModelSpec::design(const std::vector<Vec3>& dirs) const {
  return model == kind::dti ? dti_direction_design(dirs) : sh_design_matrix(dirs, sh_order);
}

SubsetSelection select_subset(const std::vector<Vec3>& candidates, int k, const ModelSpec& model,
                              uint64_t seed, int iters, int restarts) {
  const int n = static_cast<int>(candidates.size());
  if (k < model.min_directions())
    fail(errc::insufficient_directions,
         "k=" + std::to_string(k) + " below model minimum " + std::to_string(model.min_directions()));
  if (k > n) fail(errc::invalid_argument, "k exceeds candidate count");

  SubsetSelection out;
  out.seed = seed;
  out.iters = iters;

  if (k == n) {
    out.indices.resize(n);
    for (int i = 0; i < n; ++i) out.indices[i] = i;
    out.cond = condition_number(model.design(candidates));
    return out;
  }

  const std::vector<int> reps = unique_axes(candidates);
  const int nu = static_cast<int>(reps.size());
  if (k > nu) fail(errc::invalid_argument, "k exceeds distinct (antipodally unique) candidate count");

  auto cond_of = [&](const std::vector<int>& uidx) {
    std::vector<int> idx(uidx.size());
    for (size_t i = 0; i < uidx.size(); ++i) idx[i] = reps[uidx[i]];
    return subset_cond(candidates, idx, model);
  };

  // Quality floor: best of 1000 random subsets from the documented seed stream.
  std::mt19937_64 floor_rng(seed);
  std::vector<int> best_idx;
  double best_cond = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> idx = draw_subset(floor_rng, nu, k);
    const double c = cond_of(idx);
    if (c < best_cond) {
      best_cond = c;
      best_idx = idx;
    }
  }

  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(splitmix64(seed ^ static_cast<uint64_t>(r)));
    std::vector<int> idx = r == 0 ? best_idx : draw_subset(rng, nu, k);
    double c = cond_of(idx);
    std::vector<char> in_subset(nu, 0);
    for (int i : idx) in_subset[i] = 1;
    for (int it = 0; it < iters; ++it) {
      std::uniform_int_distribution<int> slot_pick(0, k - 1);
      std::uniform_int_distribution<int> cand_pick(0, nu - 1);
      const int slot = slot_pick(rng);
      const int cand = cand_pick(rng);
      if (in_subset[cand]) continue;
      const int old = idx[slot];
      idx[slot] = cand;
      const double c2 = cond_of(idx);
      if (c2 < c) {
        c = c2;
        in_subset[old] = 0;
        in_subset[cand] = 1;
      } else {
        idx[slot] = old;
      }
    }
    if (c < best_cond) {
      best_cond = c;
      best_idx = idx;
    }
  }

  out.indices.resize(k);
  for (int i = 0; i < k; ++i) out.indices[i] = reps[best_idx[i]];
  std::sort(out.indices.begin(), out.indices.end());
  out.cond = best_cond;
  return out;
}

}  // namespace dmri
