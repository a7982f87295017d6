#include "dmri/gradients.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <iomanip>

namespace dmri {
namespace {

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(errc::io_error, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        fail(errc::non_numeric_token, path + ": token \"" + tok + "\"");
      }
      if (pos != tok.size()) fail(errc::non_numeric_token, path + ": token \"" + tok + "\"");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<int> GradientScheme::b0_indices() const {
  std::vector<int> out;
  for (int i = 0; i < nvolumes(); ++i)
    if (is_b0(i)) out.push_back(i);
  return out;
}

std::vector<int> GradientScheme::directed_indices() const {
  std::vector<int> out;
  for (int i = 0; i < nvolumes(); ++i)
    if (!is_b0(i)) out.push_back(i);
  return out;
}

GradientScheme GradientScheme::subset(const std::vector<int>& volumes) const {
  GradientScheme out;
  out.b0_threshold = b0_threshold;
  for (int i : volumes) {
    if (i < 0 || i >= nvolumes()) fail(errc::invalid_argument, "volume index out of range");
    out.bvals.push_back(bvals[i]);
    out.bvecs.push_back(bvecs[i]);
  }
  return out;
}

GradientScheme read_gradients(const std::string& bval_path, const std::string& bvec_path,
                              double b0_threshold) {
  auto bval_rows = read_numeric_rows(bval_path);
  if (bval_rows.size() != 1)
    fail(errc::bad_row_count, bval_path + ": expected 1 row, got " + std::to_string(bval_rows.size()));
  auto bvec_rows = read_numeric_rows(bvec_path);
  if (bvec_rows.size() != 3)
    fail(errc::bad_row_count, bvec_path + ": expected 3 rows, got " + std::to_string(bvec_rows.size()));

  const size_t n = bval_rows[0].size();
  for (const auto& r : bvec_rows)
    if (r.size() != n)
      fail(errc::length_mismatch, bvec_path + ": row length " + std::to_string(r.size()) +
                                      " vs " + std::to_string(n) + " b-values");

  GradientScheme scheme;
  scheme.b0_threshold = b0_threshold;
  scheme.bvals = bval_rows[0];
  scheme.bvecs.resize(n);
  for (size_t i = 0; i < n; ++i) {
    Vec3 g{bvec_rows[0][i], bvec_rows[1][i], bvec_rows[2][i]};
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (scheme.bvals[i] > b0_threshold) {
      if (norm < 0.9 || norm > 1.1)
        fail(errc::non_unit_direction, bvec_path + ": volume " + std::to_string(i) + " norm " +
                                           std::to_string(norm));
      for (double& c : g) c /= norm;
    }
    scheme.bvecs[i] = g;
  }
  return scheme;
}

void write_gradients(const GradientScheme& scheme, const std::string& bval_path,
                     const std::string& bvec_path) {
  std::ofstream fb(bval_path);
  if (!fb) fail(errc::unwritable_path, bval_path);
  fb << std::setprecision(17);
  for (int i = 0; i < scheme.nvolumes(); ++i) fb << (i ? " " : "") << scheme.bvals[i];
  fb << "\n";
  std::ofstream fg(bvec_path);
  if (!fg) fail(errc::unwritable_path, bvec_path);
  fg << std::setprecision(17);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < scheme.nvolumes(); ++i) fg << (i ? " " : "") << scheme.bvecs[i][c];
    fg << "\n";
  }
}

std::vector<Shell> shell_partition(const GradientScheme& scheme, double round_to) {
  if (round_to <= 0) fail(errc::invalid_argument, "round_to must be positive");
  std::map<double, std::vector<int>> groups;
  for (int i = 0; i < scheme.nvolumes(); ++i) {
    const double b = scheme.is_b0(i) ? 0.0 : std::round(scheme.bvals[i] / round_to) * round_to;
    groups[b].push_back(i);
  }
  std::vector<Shell> shells;
  for (auto& [b, volumes] : groups) shells.push_back({b, std::move(volumes)});
  return shells;
}

Volume4D mean_b0(const Volume4D& vol, const GradientScheme& scheme) {
  if (vol.nv != scheme.nvolumes())
    fail(errc::length_mismatch, "volume count " + std::to_string(vol.nv) + " vs scheme " +
                                    std::to_string(scheme.nvolumes()));
  const std::vector<int> b0s = scheme.b0_indices();
  if (b0s.empty()) fail(errc::no_b0_volumes, "scheme has no b0 volumes");
  Volume4D out(vol.nx, vol.ny, vol.nz, 1);
  out.spacing = vol.spacing;
  out.affine = vol.affine;
  const size_t nvox = vol.nvox();
  for (int v : b0s)
    for (size_t i = 0; i < nvox; ++i) out.data[i] += vol.data[static_cast<size_t>(v) * nvox + i];
  for (size_t i = 0; i < nvox; ++i) out.data[i] /= static_cast<double>(b0s.size());
  return out;
}

}  // namespace dmri
