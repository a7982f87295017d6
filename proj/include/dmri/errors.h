#pragma once

#include <stdexcept>
#include <string>

namespace dmri {

enum class errc {
  malformed_header,
  unsupported_magic,
  unsupported_datatype,
  truncated_payload,
  dim_overflow,
  unwritable_path,
  io_error,
  bad_row_count,
  non_numeric_token,
  length_mismatch,
  non_unit_direction,
  no_b0_volumes,
  rank_deficient,
  insufficient_directions,
  singular_design,
  empty_mask,
  grid_mismatch,
  zero_variance_region,
  region_list_mismatch,
  zero_sum_pair,
  all_zero_distribution,
  region_conflict,
  external_denoiser_failed,
  invalid_argument,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_header: return "MalformedHeader";
    case errc::unsupported_magic: return "UnsupportedMagic";
    case errc::unsupported_datatype: return "UnsupportedDatatype";
    case errc::truncated_payload: return "TruncatedPayload";
    case errc::dim_overflow: return "DimOverflow";
    case errc::unwritable_path: return "UnwritablePath";
    case errc::io_error: return "IoError";
    case errc::bad_row_count: return "BadRowCount";
    case errc::non_numeric_token: return "NonNumericToken";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::non_unit_direction: return "NonUnitDirection";
    case errc::no_b0_volumes: return "NoB0Volumes";
    case errc::rank_deficient: return "RankDeficient";
    case errc::insufficient_directions: return "InsufficientDirections";
    case errc::singular_design: return "SingularDesign";
    case errc::empty_mask: return "EmptyMask";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::zero_variance_region: return "ZeroVarianceRegion";
    case errc::region_list_mismatch: return "RegionListMismatch";
    case errc::zero_sum_pair: return "ZeroSumPair";
    case errc::all_zero_distribution: return "AllZeroDistribution";
    case errc::region_conflict: return "RegionConflict";
    case errc::external_denoiser_failed: return "ExternalDenoiserFailed";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace dmri
