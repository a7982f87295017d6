#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dmri/errors.h"

namespace dmri {

// 4D voxel grid, x fastest, then y, z, volume. Values held as float64.
struct Volume4D {
  int nx = 0, ny = 0, nz = 0, nv = 0;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 16> affine{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  std::vector<double> data;

  Volume4D() = default;
  Volume4D(int x, int y, int z, int v, double fill = 0.0)
      : nx(x), ny(y), nz(z), nv(v), data(static_cast<size_t>(x) * y * z * v, fill) {
    if (x <= 0 || y <= 0 || z <= 0 || v <= 0)
      fail(errc::invalid_argument, "volume dims must be positive");
  }

  size_t nvox() const { return static_cast<size_t>(nx) * ny * nz; }
  size_t size() const { return nvox() * nv; }
  size_t index(int x, int y, int z, int v) const {
    return static_cast<size_t>(x) + static_cast<size_t>(nx) * (y + static_cast<size_t>(ny) * (z + static_cast<size_t>(nz) * v));
  }
  double& at(int x, int y, int z, int v) { return data[index(x, y, z, v)]; }
  double at(int x, int y, int z, int v) const { return data[index(x, y, z, v)]; }

  bool same_spatial_grid(const Volume4D& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz;
  }
  bool same_grid(const Volume4D& o) const { return same_spatial_grid(o) && nv == o.nv; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

struct MaskVolume {
  int nx = 0, ny = 0, nz = 0;
  std::vector<uint8_t> data;

  MaskVolume() = default;
  MaskVolume(int x, int y, int z, uint8_t fill = 0)
      : nx(x), ny(y), nz(z), data(static_cast<size_t>(x) * y * z, fill) {}

  size_t size() const { return data.size(); }
  size_t index(int x, int y, int z) const {
    return static_cast<size_t>(x) + static_cast<size_t>(nx) * (y + static_cast<size_t>(ny) * z);
  }
  bool matches(const Volume4D& v) const { return nx == v.nx && ny == v.ny && nz == v.nz; }
  size_t count() const {
    size_t n = 0;
    for (uint8_t m : data) n += (m != 0);
    return n;
  }
};

// Label 0 is background.
struct LabelVolume {
  int nx = 0, ny = 0, nz = 0;
  std::vector<int32_t> data;

  LabelVolume() = default;
  LabelVolume(int x, int y, int z, int32_t fill = 0)
      : nx(x), ny(y), nz(z), data(static_cast<size_t>(x) * y * z, fill) {}

  size_t size() const { return data.size(); }
  size_t index(int x, int y, int z) const {
    return static_cast<size_t>(x) + static_cast<size_t>(nx) * (y + static_cast<size_t>(ny) * z);
  }
  bool matches(const Volume4D& v) const { return nx == v.nx && ny == v.ny && nz == v.nz; }

  MaskVolume as_mask(int32_t label) const {
    MaskVolume m(nx, ny, nz);
    for (size_t i = 0; i < data.size(); ++i) m.data[i] = data[i] == label ? 1 : 0;
    return m;
  }
};

inline MaskVolume full_mask(const Volume4D& v) { return MaskVolume(v.nx, v.ny, v.nz, 1); }

}  // namespace dmri
