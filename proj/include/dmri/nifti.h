#pragma once

#include <string>

#include "dmri/volume.h"

namespace dmri {

// NIfTI-1 single-file ".nii"(.gz). Datatypes accepted on read: uint8, int16,
// int32, float32, float64; scl_slope/scl_inter applied when slope != 0.
// Little- and big-endian files detected via sizeof_hdr.
Volume4D read_nifti(const std::string& path);

enum class nifti_dtype { float32, float64 };

void write_nifti(const Volume4D& vol, const std::string& path,
                 nifti_dtype dtype = nifti_dtype::float64);

// Integer-valued companions stored as NIfTI volumes.
LabelVolume read_labels(const std::string& path);
MaskVolume read_mask(const std::string& path);
void write_labels(const LabelVolume& labels, const std::string& path,
                  const std::array<double, 3>& spacing = {1.0, 1.0, 1.0});

}  // namespace dmri
