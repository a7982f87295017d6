#include "dmri/shfit.h"

#include <cmath>

#include "dmri/threading.h"

namespace dmri {

ShCoeffMap fit_sh(const Volume4D& shell_signals, const std::vector<Vec3>& directions, int order,
                  double lambda_lb, const MaskVolume& mask, double shell_b) {
  const int ndir = static_cast<int>(directions.size());
  const int ncoef = sh_coeff_count(order);
  if (shell_signals.nv != ndir)
    fail(errc::length_mismatch, "signal volume count differs from direction count");
  if (!mask.matches(shell_signals)) fail(errc::grid_mismatch, "mask grid differs from signals");
  if (lambda_lb < 0) fail(errc::invalid_argument, "lambda_lb must be non-negative");
  if (lambda_lb == 0.0 && ndir < ncoef)
    fail(errc::insufficient_directions, std::to_string(ndir) + " directions for " +
                                            std::to_string(ncoef) + " coefficients");

  const Eigen::MatrixXd B = sh_design_matrix(directions, order);
  Eigen::VectorXd lb(ncoef);
  int j = 0;
  for (int l = 0; l <= order; l += 2)
    for (int m = -l; m <= l; ++m, ++j) lb(j) = static_cast<double>(l * (l + 1)) * (l * (l + 1));
  const Eigen::MatrixXd normal = B.transpose() * B + lambda_lb * lb.asDiagonal().toDenseMatrix();
  const Eigen::LDLT<Eigen::MatrixXd> solver(normal);
  if (solver.info() != Eigen::Success)
    fail(errc::singular_design, "SH normal equations not solvable");

  ShCoeffMap out;
  out.coef = Volume4D(shell_signals.nx, shell_signals.ny, shell_signals.nz, ncoef);
  out.coef.spacing = shell_signals.spacing;
  out.coef.affine = shell_signals.affine;
  out.mask = mask;
  out.order = order;
  out.shell_b = shell_b;

  const size_t nvox = shell_signals.nvox();
  parallel_for(nvox, [&](size_t begin, size_t end) {
    Eigen::VectorXd s(ndir);
    for (size_t vox = begin; vox < end; ++vox) {
      if (!mask.data[vox]) continue;
      for (int v = 0; v < ndir; ++v)
        s(v) = shell_signals.data[static_cast<size_t>(v) * nvox + vox];
      const Eigen::VectorXd c = solver.solve(B.transpose() * s);
      for (int k = 0; k < ncoef; ++k)
        out.coef.data[static_cast<size_t>(k) * nvox + vox] = c(k);
    }
  });
  return out;
}

Volume4D project_sh(const ShCoeffMap& coeffs, const std::vector<Vec3>& dirs) {
  const int ncoef = sh_coeff_count(coeffs.order);
  const int ndir = static_cast<int>(dirs.size());
  const Eigen::MatrixXd B = sh_design_matrix(dirs, coeffs.order);
  Volume4D out(coeffs.coef.nx, coeffs.coef.ny, coeffs.coef.nz, ndir);
  out.spacing = coeffs.coef.spacing;
  out.affine = coeffs.coef.affine;
  const size_t nvox = out.nvox();
  parallel_for(nvox, [&](size_t begin, size_t end) {
    Eigen::VectorXd c(ncoef);
    for (size_t vox = begin; vox < end; ++vox) {
      if (!coeffs.mask.data[vox]) continue;
      for (int k = 0; k < ncoef; ++k)
        c(k) = coeffs.coef.data[static_cast<size_t>(k) * nvox + vox];
      const Eigen::VectorXd a = B * c;
      for (int v = 0; v < ndir; ++v)
        out.data[static_cast<size_t>(v) * nvox + vox] = a(v);
    }
  });
  return out;
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) fail(errc::length_mismatch, "JSD inputs differ in length");
  if (p.empty()) fail(errc::invalid_argument, "JSD of empty vectors");
  const double eps = 1e-12;
  auto normalize = [&](const std::vector<double>& x) {
    std::vector<double> out(x.size());
    double sum = 0.0;
    bool any = false;
    for (size_t i = 0; i < x.size(); ++i) {
      out[i] = std::max(x[i], 0.0);
      if (out[i] > 0.0) any = true;
    }
    if (!any) fail(errc::all_zero_distribution, "all-zero distribution after clamping");
    for (double& v : out) {
      v += eps;
    }
    for (double v : out) sum += v;
    for (double& v : out) v /= sum;
    return out;
  };
  const std::vector<double> pn = normalize(p);
  const std::vector<double> qn = normalize(q);
  double js = 0.0;
  for (size_t i = 0; i < pn.size(); ++i) {
    const double m = 0.5 * (pn[i] + qn[i]);
    js += 0.5 * pn[i] * std::log2(pn[i] / m);
    js += 0.5 * qn[i] * std::log2(qn[i] / m);
  }
  js = std::clamp(js, 0.0, 1.0);
  return std::sqrt(js);
}

}  // namespace dmri
