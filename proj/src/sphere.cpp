#include "dmri/sphere.h"

#include <cmath>
#include <map>
#include <numbers>

namespace dmri {
namespace {

Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace

std::vector<Vec3> icosphere(int level) {
  if (level < 0 || level > 7) fail(errc::invalid_argument, "icosphere level out of range");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v = normalized(v);
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back(normalized({verts[a][0] + verts[b][0], verts[a][1] + verts[b][1],
                                  verts[a][2] + verts[b][2]}));
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& [a, b, c] : faces) {
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return verts;
}

std::vector<Vec3> fibonacci_hemisphere(int n) {
  if (n <= 0) fail(errc::invalid_argument, "point count must be positive");
  std::vector<Vec3> out(n);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden_angle * i;
    out[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return out;
}

const std::vector<Vec3>& hemisphere362() {
  static const std::vector<Vec3> dirs = [] {
    std::vector<Vec3> d = fibonacci_hemisphere(362);
    if (d.size() != 362) fail(errc::invalid_argument, "hemisphere count != 362");
    const double cos5deg = std::cos(5.0 * std::numbers::pi / 180.0);
    for (size_t i = 0; i < d.size(); ++i) {
      if (d[i][2] <= 0.0) fail(errc::invalid_argument, "hemisphere point with z <= 0");
      for (size_t j = i + 1; j < d.size(); ++j) {
        const double dot = d[i][0] * d[j][0] + d[i][1] * d[j][1] + d[i][2] * d[j][2];
        if (dot > cos5deg) fail(errc::invalid_argument, "hemisphere pair closer than 5 degrees");
        if (std::abs(dot) > 1.0 - 1e-12) fail(errc::invalid_argument, "antipodal hemisphere pair");
      }
    }
    return d;
  }();
  return dirs;
}

}  // namespace dmri
