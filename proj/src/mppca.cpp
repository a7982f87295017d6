#include "dmri/mppca.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dmri/threading.h"

namespace dmri {
namespace {

std::vector<int> anchors(int extent, int side, int stride) {
  std::vector<int> out;
  for (int a = 0; a + side <= extent; a += stride) out.push_back(a);
  const int last = extent - side;
  if (out.empty() || out.back() != last) out.push_back(last);
  return out;
}

// Per-axis owner for center-only aggregation: the anchor whose patch center is
// nearest, ties to the lower anchor.
std::vector<int> center_owners(const std::vector<int>& anchor_list, int extent, int radius) {
  std::vector<int> owner(extent, 0);
  for (int x = 0; x < extent; ++x) {
    int best = 0;
    int best_dist = std::abs(x - (anchor_list[0] + radius));
    for (size_t i = 1; i < anchor_list.size(); ++i) {
      const int dist = std::abs(x - (anchor_list[i] + radius));
      if (dist < best_dist) {
        best = static_cast<int>(i);
        best_dist = dist;
      }
    }
    owner[x] = best;
  }
  return owner;
}

}  // namespace

MpResult mp_threshold(const std::vector<double>& eigenvalues, int n_columns) {
  const int r = static_cast<int>(eigenvalues.size());
  if (r == 0) fail(errc::invalid_argument, "empty eigenvalue list");
  if (n_columns <= 0) fail(errc::invalid_argument, "n_columns must be positive");

  std::vector<double> suffix(r + 1, 0.0);
  for (int i = r - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + eigenvalues[i];
  const double lam_min = eigenvalues[r - 1];

  for (int p = 0; p < r - 1; ++p) {
    const double sigma2 = suffix[p] / static_cast<double>(r - p);
    const double spread = eigenvalues[p] - lam_min;
    const double gap = 4.0 * std::sqrt(static_cast<double>(r - p) / n_columns) * sigma2;
    if (spread <= gap) return {p, sigma2};
  }
  return {r - 1, suffix[r - 1]};
}

std::pair<Volume4D, DenoiseReport> denoise_mppca(const Volume4D& vol, const PatchConfig& cfg) {
  if (cfg.radius < 1) fail(errc::invalid_argument, "patch radius must be >= 1");
  if (cfg.stride < 1) fail(errc::invalid_argument, "patch stride must be >= 1");
  const int d = 2 * cfg.radius + 1;
  if (vol.nx < d || vol.ny < d || vol.nz < d)
    fail(errc::invalid_argument, "volume smaller than patch");

  const int V = vol.nv;
  const int M = d * d * d;
  const size_t nvox = vol.nvox();

  const std::vector<int> xs = anchors(vol.nx, d, cfg.stride);
  const std::vector<int> ys = anchors(vol.ny, d, cfg.stride);
  const std::vector<int> zs = anchors(vol.nz, d, cfg.stride);
  const std::vector<int> own_x = center_owners(xs, vol.nx, cfg.radius);
  const std::vector<int> own_y = center_owners(ys, vol.ny, cfg.radius);
  const std::vector<int> own_z = center_owners(zs, vol.nz, cfg.radius);

  Volume4D out(vol.nx, vol.ny, vol.nz, V);
  out.spacing = vol.spacing;
  out.affine = vol.affine;
  DenoiseReport report{Volume4D(vol.nx, vol.ny, vol.nz, 1), Volume4D(vol.nx, vol.ny, vol.nz, 1)};
  report.sigma_map.spacing = vol.spacing;
  report.sigma_map.affine = vol.affine;
  report.npars_map.spacing = vol.spacing;
  report.npars_map.affine = vol.affine;
  std::vector<double> weight(nvox, 0.0);

  const bool overlap = cfg.agg == PatchConfig::aggregate::overlap_average;

  // Threads own disjoint output z-slabs and rebuild every patch intersecting
  // their slab, so each output voxel accumulates patches in anchor order
  // regardless of the thread partition.
  parallel_for(vol.nz, [&](size_t oz_begin, size_t oz_end) {
    Eigen::MatrixXd C(M, V);
    for (int z0 : zs) {
      if (static_cast<size_t>(z0) >= oz_end || static_cast<size_t>(z0 + d) <= oz_begin) continue;
      for (int y0 : ys) {
        for (int x0 : xs) {
          for (int pz = 0, row = 0; pz < d; ++pz)
            for (int py = 0; py < d; ++py)
              for (int px = 0; px < d; ++px, ++row) {
                const size_t base = vol.index(x0 + px, y0 + py, z0 + pz, 0);
                for (int v = 0; v < V; ++v) C(row, v) = vol.data[base + nvox * v];
              }

          const Eigen::VectorXd row_mean = C.rowwise().mean();
          const Eigen::MatrixXd C0 = C.colwise() - row_mean;

          const int rdim = std::min(M, V);
          const int ncols = std::max(M, V);
          Eigen::MatrixXd gram;
          if (M <= V)
            gram = C0 * C0.transpose() / static_cast<double>(ncols);
          else
            gram = C0.transpose() * C0 / static_cast<double>(ncols);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);

          std::vector<double> lam(rdim);
          for (int i = 0; i < rdim; ++i) lam[i] = std::max(eig.eigenvalues()(rdim - 1 - i), 0.0);
          const MpResult mp = mp_threshold(lam, ncols);

          Eigen::MatrixXd rec;
          if (mp.p == 0) {
            rec = Eigen::MatrixXd::Zero(M, V);
          } else {
            const Eigen::MatrixXd basis = eig.eigenvectors().rightCols(mp.p);
            if (M <= V)
              rec = basis * (basis.transpose() * C0);
            else
              rec = (C0 * basis) * basis.transpose();
          }
          rec.colwise() += row_mean;

          const double sigma = std::sqrt(std::max(mp.sigma2, 0.0));
          for (int pz = 0, row = 0; pz < d; ++pz) {
            const int z = z0 + pz;
            if (static_cast<size_t>(z) < oz_begin || static_cast<size_t>(z) >= oz_end) {
              row += d * d;
              continue;
            }
            for (int py = 0; py < d; ++py)
              for (int px = 0; px < d; ++px, ++row) {
                const int x = x0 + px, y = y0 + py;
                const size_t vox = out.index(x, y, z, 0);
                if (overlap) {
                  for (int v = 0; v < V; ++v) out.data[vox + nvox * v] += rec(row, v);
                  report.sigma_map.data[vox] += sigma;
                  report.npars_map.data[vox] += mp.p;
                  weight[vox] += 1.0;
                } else {
                  if (own_x[x] == static_cast<int>(&x0 - xs.data()) &&
                      own_y[y] == static_cast<int>(&y0 - ys.data()) &&
                      own_z[z] == static_cast<int>(&z0 - zs.data())) {
                    for (int v = 0; v < V; ++v) out.data[vox + nvox * v] = rec(row, v);
                    report.sigma_map.data[vox] = sigma;
                    report.npars_map.data[vox] = mp.p;
                    weight[vox] = 1.0;
                  }
                }
              }
          }
        }
      }
    }
  });

  if (overlap) {
    parallel_for(nvox, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const double w = weight[i];
        for (int v = 0; v < V; ++v) out.data[i + nvox * v] /= w;
        report.sigma_map.data[i] /= w;
        report.npars_map.data[i] /= w;
      }
    });
  }
  return {std::move(out), std::move(report)};
}

Moments residual_moments(const Volume4D& raw, const Volume4D& denoised, const MaskVolume& mask,
                         moment_source source) {
  if (!raw.same_grid(denoised)) fail(errc::grid_mismatch, "raw and denoised grids differ");
  if (!mask.matches(raw)) fail(errc::grid_mismatch, "mask grid differs from volumes");
  const size_t nvox = raw.nvox();
  std::vector<double> pool;
  pool.reserve(mask.count() * raw.nv);
  for (size_t i = 0; i < nvox; ++i) {
    if (!mask.data[i]) continue;
    for (int v = 0; v < raw.nv; ++v) {
      const size_t idx = i + nvox * v;
      switch (source) {
        case moment_source::residual: pool.push_back(raw.data[idx] - denoised.data[idx]); break;
        case moment_source::raw: pool.push_back(raw.data[idx]); break;
        case moment_source::denoised: pool.push_back(denoised.data[idx]); break;
      }
    }
  }
  if (pool.size() < 4) fail(errc::empty_mask, "moment pool needs at least 4 samples");

  Moments m;
  const double n = static_cast<double>(pool.size());
  for (double x : pool) m.mean += x;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : pool) {
    const double c = x - m.mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

}  // namespace dmri
