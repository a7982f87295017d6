#include "dmri/dti.h"

#include <cmath>
#include <numbers>

#include "dmri/threading.h"

namespace dmri {

TensorMap fit_dti(const Volume4D& vol, const GradientScheme& scheme, const MaskVolume& mask,
                  fit_method method) {
  if (!mask.matches(vol)) fail(errc::grid_mismatch, "mask grid differs from volume");
  if (vol.nv != scheme.nvolumes())
    fail(errc::length_mismatch, "volume count differs from gradient scheme");
  const std::vector<int> b0s = scheme.b0_indices();
  if (b0s.empty()) fail(errc::no_b0_volumes, "tensor fit needs at least one b0 volume");
  if (scheme.directed_indices().size() < 6)
    fail(errc::insufficient_directions, "tensor fit needs at least 6 directed volumes");

  const Eigen::MatrixXd A = dti_design_matrix(scheme);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(6) < 1e-10 * svd.singularValues()(0))
    fail(errc::singular_design, "DTI design matrix is rank deficient");

  TensorMap out;
  out.nx = vol.nx;
  out.ny = vol.ny;
  out.nz = vol.nz;
  out.mask = mask;
  out.coef.assign(out.nvox(), {});

  const int nvol = vol.nv;
  const size_t nvox = vol.nvox();
  parallel_for(nvox, [&](size_t begin, size_t end) {
    Eigen::VectorXd s(nvol), y(nvol);
    for (size_t vox = begin; vox < end; ++vox) {
      if (!out.mask.data[vox]) continue;
      for (int v = 0; v < nvol; ++v) s(v) = vol.data[static_cast<size_t>(v) * nvox + vox];
      double s0 = 0.0;
      for (int v : b0s) s0 += s(v);
      s0 /= static_cast<double>(b0s.size());
      const double floor = 1e-6 * std::max(s0, 0.0);
      for (int v = 0; v < nvol; ++v) y(v) = std::log(std::max(s(v), std::max(floor, 1e-300)));

      Eigen::VectorXd beta = svd.solve(y);
      if (method == fit_method::wls) {
        const Eigen::VectorXd pred = A * beta;
        Eigen::VectorXd w(nvol);
        for (int v = 0; v < nvol; ++v) w(v) = std::exp(2.0 * pred(v));
        const Eigen::MatrixXd Aw = w.asDiagonal() * A;
        beta = (A.transpose() * Aw).ldlt().solve(Aw.transpose() * y);
      }
      for (int j = 0; j < 7; ++j) out.coef[vox][j] = beta(j);
    }
  });
  return out;
}

TensorScalars tensor_scalars(const TensorMap& t) {
  TensorScalars out{Volume4D(t.nx, t.ny, t.nz, 1), Volume4D(t.nx, t.ny, t.nz, 1),
                    Volume4D(t.nx, t.ny, t.nz, 1), Volume4D(t.nx, t.ny, t.nz, 1),
                    Volume4D(t.nx, t.ny, t.nz, 3)};
  const size_t nvox = t.nvox();
  parallel_for(nvox, [&](size_t begin, size_t end) {
    for (size_t vox = begin; vox < end; ++vox) {
      if (!t.mask.data[vox]) continue;
      const auto& c = t.coef[vox];
      Eigen::Matrix3d D;
      D << c[0], c[3], c[4], c[3], c[1], c[5], c[4], c[5], c[2];
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(D);
      Eigen::Vector3d lam = eig.eigenvalues().cwiseMax(0.0);  // ascending
      const double md = (lam(0) + lam(1) + lam(2)) / 3.0;
      const double norm = lam.norm();
      double fa = 0.0;
      if (norm > 0.0) {
        const Eigen::Vector3d dev = lam.array() - md;
        fa = std::sqrt(1.5) * dev.norm() / norm;
        fa = std::min(fa, 1.0);
      }
      Eigen::Vector3d v1 = eig.eigenvectors().col(2);
      int imax = 0;
      for (int i = 1; i < 3; ++i)
        if (std::abs(v1(i)) > std::abs(v1(imax))) imax = i;
      if (v1(imax) < 0) v1 = -v1;

      out.fa.data[vox] = fa;
      out.md.data[vox] = md;
      out.ad.data[vox] = lam(2);
      out.rd.data[vox] = 0.5 * (lam(0) + lam(1));
      for (int i = 0; i < 3; ++i) out.v1.data[static_cast<size_t>(i) * nvox + vox] = v1(i);
    }
  });
  return out;
}

double mae_scalar(const Volume4D& a, const Volume4D& b, const MaskVolume& mask, double scale) {
  if (!a.same_grid(b)) fail(errc::grid_mismatch, "scalar volumes on different grids");
  if (a.nv != 1) fail(errc::invalid_argument, "mae_scalar expects single-volume inputs");
  if (!mask.matches(a)) fail(errc::grid_mismatch, "mask grid differs from volumes");
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    if (!mask.data[i]) continue;
    sum += std::abs(a.data[i] - b.data[i]);
    ++n;
  }
  if (n == 0) fail(errc::empty_mask, "mae over empty mask");
  return scale * sum / static_cast<double>(n);
}

double v1_angular_error(const Volume4D& a, const Volume4D& b, const MaskVolume& mask) {
  if (!a.same_grid(b)) fail(errc::grid_mismatch, "V1 volumes on different grids");
  if (a.nv != 3) fail(errc::invalid_argument, "V1 volumes must have 3 components");
  if (!mask.matches(a)) fail(errc::grid_mismatch, "mask grid differs from volumes");
  const size_t nvox = a.nvox();
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < nvox; ++i) {
    if (!mask.data[i]) continue;
    double dot = 0.0;
    for (int c = 0; c < 3; ++c)
      dot += a.data[static_cast<size_t>(c) * nvox + i] * b.data[static_cast<size_t>(c) * nvox + i];
    dot = std::min(1.0, std::abs(dot));
    sum += std::acos(dot) * 180.0 / std::numbers::pi;
    ++n;
  }
  if (n == 0) fail(errc::empty_mask, "angular error over empty mask");
  return sum / static_cast<double>(n);
}

}  // namespace dmri
