#include "dmri/nifti.h"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace dmri {
namespace {

#pragma pack(push, 1)
struct Nifti1Header {
  int32_t sizeof_hdr;
  char data_type[10];
  char db_name[18];
  int32_t extents;
  int16_t session_error;
  char regular;
  char dim_info;
  int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  int16_t intent_code;
  int16_t datatype;
  int16_t bitpix;
  int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  int16_t qform_code;
  int16_t sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

constexpr int16_t kDtUint8 = 2;
constexpr int16_t kDtInt16 = 4;
constexpr int16_t kDtInt32 = 8;
constexpr int16_t kDtFloat32 = 16;
constexpr int16_t kDtFloat64 = 64;

void swap_bytes(void* p, size_t width) {
  auto* b = static_cast<unsigned char*>(p);
  for (size_t i = 0; i < width / 2; ++i) std::swap(b[i], b[width - 1 - i]);
}

template <typename T>
void swap_value(T& v) {
  swap_bytes(&v, sizeof(T));
}

void swap_header(Nifti1Header& h) {
  swap_value(h.sizeof_hdr);
  swap_value(h.extents);
  swap_value(h.session_error);
  for (auto& d : h.dim) swap_value(d);
  swap_value(h.intent_p1);
  swap_value(h.intent_p2);
  swap_value(h.intent_p3);
  swap_value(h.intent_code);
  swap_value(h.datatype);
  swap_value(h.bitpix);
  swap_value(h.slice_start);
  for (auto& d : h.pixdim) swap_value(d);
  swap_value(h.vox_offset);
  swap_value(h.scl_slope);
  swap_value(h.scl_inter);
  swap_value(h.slice_end);
  swap_value(h.cal_max);
  swap_value(h.cal_min);
  swap_value(h.slice_duration);
  swap_value(h.toffset);
  swap_value(h.glmax);
  swap_value(h.glmin);
  swap_value(h.qform_code);
  swap_value(h.sform_code);
  swap_value(h.quatern_b);
  swap_value(h.quatern_c);
  swap_value(h.quatern_d);
  swap_value(h.qoffset_x);
  swap_value(h.qoffset_y);
  swap_value(h.qoffset_z);
  for (auto& v : h.srow_x) swap_value(v);
  for (auto& v : h.srow_y) swap_value(v);
  for (auto& v : h.srow_z) swap_value(v);
}

// gzread handles both plain and RFC 1952 gzip streams (0x1F 0x8B prefix).
std::vector<unsigned char> read_all_bytes(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) fail(errc::io_error, "cannot open " + path);
  std::vector<unsigned char> out;
  unsigned char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.insert(out.end(), buf, buf + n);
  bool bad = n < 0;
  gzclose(f);
  if (bad) fail(errc::io_error, "decompression failed for " + path);
  return out;
}

template <typename T>
double decode_at(const unsigned char* p, bool swap) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if (swap) swap_value(v);
  return static_cast<double>(v);
}

size_t dtype_width(int16_t dt) {
  switch (dt) {
    case kDtUint8: return 1;
    case kDtInt16: return 2;
    case kDtInt32: return 4;
    case kDtFloat32: return 4;
    case kDtFloat64: return 8;
    default: return 0;
  }
}

}  // namespace

Volume4D read_nifti(const std::string& path) {
  const std::vector<unsigned char> bytes = read_all_bytes(path);
  if (bytes.size() < sizeof(Nifti1Header))
    fail(errc::malformed_header, path + ": shorter than 348-byte header");

  Nifti1Header h;
  std::memcpy(&h, bytes.data(), sizeof(h));
  bool swap = false;
  if (h.sizeof_hdr != 348) {
    swap_header(h);
    if (h.sizeof_hdr != 348)
      fail(errc::malformed_header, path + ": sizeof_hdr is not 348 in either byte order");
    swap = true;
  }

  if (std::memcmp(h.magic, "n+1", 4) != 0) {
    std::string m(h.magic, h.magic + 3);
    fail(errc::unsupported_magic, path + ": magic \"" + m + "\" (only single-file n+1 supported)");
  }

  const size_t width = dtype_width(h.datatype);
  if (width == 0)
    fail(errc::unsupported_datatype, path + ": datatype code " + std::to_string(h.datatype));

  const int ndim = h.dim[0];
  if (ndim < 1 || ndim > 7) fail(errc::malformed_header, path + ": dim[0] out of range");
  int dims[4] = {1, 1, 1, 1};
  for (int i = 1; i <= ndim; ++i) {
    int d = h.dim[i];
    if (d < 1) {
      if (i > 3 && d == 0) { d = 1; }
      else fail(errc::malformed_header, path + ": dim[" + std::to_string(i) + "] not positive");
    }
    if (i <= 4) dims[i - 1] = d;
    else if (d != 1) fail(errc::malformed_header, path + ": dim[" + std::to_string(i) + "] > 1 unsupported");
  }

  Volume4D vol(dims[0], dims[1], dims[2], dims[3]);
  for (int i = 0; i < 3; ++i) {
    double s = h.pixdim[i + 1];
    vol.spacing[i] = s > 0 ? s : 1.0;
  }
  if (h.sform_code > 0) {
    const float* rows[3] = {h.srow_x, h.srow_y, h.srow_z};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) vol.affine[r * 4 + c] = rows[r][c];
    vol.affine[12] = vol.affine[13] = vol.affine[14] = 0.0;
    vol.affine[15] = 1.0;
  } else {
    vol.affine = {vol.spacing[0], 0, 0, 0, 0, vol.spacing[1], 0, 0,
                  0, 0, vol.spacing[2], 0, 0, 0, 0, 1};
  }

  size_t offset = static_cast<size_t>(h.vox_offset);
  if (offset < sizeof(Nifti1Header)) fail(errc::malformed_header, path + ": vox_offset < 348");
  const size_t need = vol.size() * width;
  if (bytes.size() < offset + need)
    fail(errc::truncated_payload, path + ": need " + std::to_string(need) + " payload bytes, have " +
                                      std::to_string(bytes.size() - std::min(bytes.size(), offset)));

  const double slope = (h.scl_slope != 0.0f) ? h.scl_slope : 1.0;
  const double inter = (h.scl_slope != 0.0f) ? h.scl_inter : 0.0;
  const unsigned char* p = bytes.data() + offset;
  for (size_t i = 0; i < vol.size(); ++i, p += width) {
    double raw;
    switch (h.datatype) {
      case kDtUint8: raw = decode_at<uint8_t>(p, false); break;
      case kDtInt16: raw = decode_at<int16_t>(p, swap); break;
      case kDtInt32: raw = decode_at<int32_t>(p, swap); break;
      case kDtFloat32: raw = decode_at<float>(p, swap); break;
      default: raw = decode_at<double>(p, swap); break;
    }
    vol.data[i] = slope * raw + inter;
  }

  if (!vol.all_finite()) fail(errc::malformed_header, path + ": non-finite values after load");
  return vol;
}

void write_nifti(const Volume4D& vol, const std::string& path, nifti_dtype dtype) {
  for (int d : {vol.nx, vol.ny, vol.nz, vol.nv})
    if (d > std::numeric_limits<int16_t>::max())
      fail(errc::dim_overflow, "dim " + std::to_string(d) + " exceeds NIfTI-1 int16 header field");

  Nifti1Header h{};
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = static_cast<int16_t>(vol.nv > 1 ? 4 : 3);
  h.dim[1] = static_cast<int16_t>(vol.nx);
  h.dim[2] = static_cast<int16_t>(vol.ny);
  h.dim[3] = static_cast<int16_t>(vol.nz);
  h.dim[4] = static_cast<int16_t>(vol.nv > 1 ? vol.nv : 1);
  for (int i = 5; i < 8; ++i) h.dim[i] = 1;
  h.datatype = dtype == nifti_dtype::float32 ? kDtFloat32 : kDtFloat64;
  h.bitpix = dtype == nifti_dtype::float32 ? 32 : 64;
  h.pixdim[0] = 1.0f;
  for (int i = 0; i < 3; ++i) h.pixdim[i + 1] = static_cast<float>(vol.spacing[i]);
  h.pixdim[4] = 1.0f;
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 10;  // mm | sec
  h.sform_code = 1;
  h.qform_code = 0;
  for (int c = 0; c < 4; ++c) {
    h.srow_x[c] = static_cast<float>(vol.affine[0 * 4 + c]);
    h.srow_y[c] = static_cast<float>(vol.affine[1 * 4 + c]);
    h.srow_z[c] = static_cast<float>(vol.affine[2 * 4 + c]);
  }
  std::memcpy(h.magic, "n+1", 4);

  std::vector<unsigned char> payload;
  if (dtype == nifti_dtype::float32) {
    payload.resize(vol.size() * 4);
    for (size_t i = 0; i < vol.size(); ++i) {
      float f = static_cast<float>(vol.data[i]);
      std::memcpy(payload.data() + i * 4, &f, 4);
    }
  } else {
    payload.resize(vol.size() * 8);
    std::memcpy(payload.data(), vol.data.data(), payload.size());
  }

  const unsigned char extension[4] = {0, 0, 0, 0};
  const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  if (gz) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) fail(errc::unwritable_path, path);
    bool ok = gzwrite(f, &h, sizeof(h)) == static_cast<int>(sizeof(h)) &&
              gzwrite(f, extension, 4) == 4 &&
              (payload.empty() ||
               gzwrite(f, payload.data(), static_cast<unsigned>(payload.size())) ==
                   static_cast<int>(payload.size()));
    gzclose(f);
    if (!ok) fail(errc::io_error, "short write to " + path);
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::unwritable_path, path);
    f.write(reinterpret_cast<const char*>(&h), sizeof(h));
    f.write(reinterpret_cast<const char*>(extension), 4);
    f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!f) fail(errc::io_error, "short write to " + path);
  }
}

LabelVolume read_labels(const std::string& path) {
  Volume4D v = read_nifti(path);
  if (v.nv != 1) fail(errc::invalid_argument, path + ": label volume must be 3D");
  LabelVolume out(v.nx, v.ny, v.nz);
  for (size_t i = 0; i < v.data.size(); ++i) {
    double r = std::round(v.data[i]);
    if (r < 0) fail(errc::invalid_argument, path + ": negative label");
    out.data[i] = static_cast<int32_t>(r);
  }
  return out;
}

MaskVolume read_mask(const std::string& path) {
  Volume4D v = read_nifti(path);
  if (v.nv != 1) fail(errc::invalid_argument, path + ": mask volume must be 3D");
  MaskVolume out(v.nx, v.ny, v.nz);
  for (size_t i = 0; i < v.data.size(); ++i) out.data[i] = v.data[i] != 0.0 ? 1 : 0;
  return out;
}

void write_labels(const LabelVolume& labels, const std::string& path,
                  const std::array<double, 3>& spacing) {
  Volume4D v(labels.nx, labels.ny, labels.nz, 1);
  v.spacing = spacing;
  v.affine = {spacing[0], 0, 0, 0, 0, spacing[1], 0, 0, 0, 0, spacing[2], 0, 0, 0, 0, 1};
  for (size_t i = 0; i < labels.data.size(); ++i) v.data[i] = labels.data[i];
  write_nifti(v, path, nifti_dtype::float64);
}

}  // namespace dmri
