#include "dmri/sh.h"

#include <cmath>
#include <numbers>

namespace dmri {
namespace {

// Associated Legendre P_l^m(x) with Condon-Shortley phase, m >= 0.
double assoc_legendre(int l, int m, double x) {
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= -fact * somx2;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

double sh_norm(int l, int m) {
  double ratio = 1.0;
  for (int k = l - m + 1; k <= l + m; ++k) ratio *= k;
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) / ratio);
}

}  // namespace

int sh_coeff_count(int order) {
  if (order < 0 || order % 2 != 0)
    fail(errc::invalid_argument, "SH order must be even and non-negative");
  return (order + 1) * (order + 2) / 2;
}

std::vector<double> sh_basis_row(const Vec3& dir, int order) {
  const int ncoef = sh_coeff_count(order);
  std::vector<double> row(ncoef);
  const double ct = dir[2];
  const double phi = std::atan2(dir[1], dir[0]);
  int j = 0;
  for (int l = 0; l <= order; l += 2) {
    for (int m = -l; m <= l; ++m, ++j) {
      const int am = std::abs(m);
      const double base = sh_norm(l, am) * assoc_legendre(l, am, ct);
      if (m < 0)
        row[j] = std::numbers::sqrt2 * base * std::sin(am * phi);
      else if (m == 0)
        row[j] = base;
      else
        row[j] = std::numbers::sqrt2 * base * std::cos(am * phi);
    }
  }
  return row;
}

}  // namespace dmri
