#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "voxelrun/image.hpp"

namespace voxelrun::nifti {

namespace fs = std::filesystem;

inline constexpr std::size_t kHeaderSize = 348;
inline constexpr float kWriterVoxOffset = 352.0f;

enum class ByteOrder { little, big };

/// Datatype codes accepted by the reader.
enum class Datatype : std::int16_t {
  uint8 = 2,
  int16 = 4,
  int32 = 8,
  float32 = 16,
  float64 = 64,
};

/// The subset of NIfTI-1 header fields the toolkit reads and writes.
struct NiftiHeader {
  std::int32_t sizeof_hdr = 348;
  std::array<std::int16_t, 8> dim{};
  std::int16_t datatype = 16;
  std::int16_t bitpix = 32;
  std::array<float, 8> pixdim{};
  float vox_offset = kWriterVoxOffset;
  float scl_slope = 0.0f;
  float scl_inter = 0.0f;
  std::uint8_t xyzt_units = 0;
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  std::array<float, 4> srow_x{};
  std::array<float, 4> srow_y{};
  std::array<float, 4> srow_z{};
  std::array<char, 4> magic{'n', '+', '1', '\0'};
  ByteOrder byte_order = ByteOrder::little;

  int ndim() const noexcept { return dim[0]; }
  /// Four extents (i, j, k, t); missing trailing extents are 1.
  Shape4 shape() const noexcept;
  double tr_s() const noexcept { return pixdim[4]; }
  /// sform affine when sform_code > 0, otherwise diag(pixdim[1..3], 1).
  Affine affine() const;

  bool operator==(const NiftiHeader&) const = default;
};

/// Decodes the first 348 bytes. Byte order is detected from sizeof_hdr.
NiftiHeader parse_header(std::span<const std::byte> bytes);

/// Encodes a header as 348 bytes in the header's byte order.
std::vector<std::byte> encode_header(const NiftiHeader& header);

NiftiHeader read_header(const fs::path& path);

/// Loads a single-file .nii, promoting voxel values to double and applying
/// scl_slope/scl_inter when the slope is nonzero.
Image load_image(const fs::path& path);

/// Decodes an in-memory .nii file.
Image decode_image(std::span<const std::byte> file);

/// Little-endian float32 single-file .nii with sform_code 1 and
/// vox_offset 352.
std::vector<std::byte> encode_image(const Image& img);

/// Writes encode_image(img) atomically.
void save_image(const Image& img, const fs::path& path);

}  // namespace voxelrun::nifti
