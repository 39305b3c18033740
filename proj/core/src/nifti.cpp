#include "voxelrun/nifti.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"
#include "voxelrun/log.hpp"

namespace voxelrun::nifti {
namespace {

// Byte offsets of the NIfTI-1 header fields.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffXyztUnits = 123;
constexpr std::size_t kOffQformCode = 252;
constexpr std::size_t kOffSformCode = 254;
constexpr std::size_t kOffSrowX = 280;
constexpr std::size_t kOffSrowY = 296;
constexpr std::size_t kOffSrowZ = 312;
constexpr std::size_t kOffMagic = 344;

bool host_is_little() { return std::endian::native == std::endian::little; }

template <typename T>
T load(std::span<const std::byte> bytes, std::size_t offset, bool swap) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), bytes.data() + offset, sizeof(T));
  if (swap) std::reverse(raw.begin(), raw.end());
  T value;
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

template <typename T>
void store(std::span<std::byte> bytes, std::size_t offset, T value,
           bool swap) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  if (swap) std::reverse(raw.begin(), raw.end());
  std::memcpy(bytes.data() + offset, raw.data(), sizeof(T));
}

int expected_bitpix(std::int16_t datatype) {
  switch (static_cast<Datatype>(datatype)) {
    case Datatype::uint8: return 8;
    case Datatype::int16: return 16;
    case Datatype::int32: return 32;
    case Datatype::float32: return 32;
    case Datatype::float64: return 64;
  }
  return 0;
}

template <typename T>
void decode_values(std::span<const std::byte> raw, bool swap,
                   std::vector<double>& out) {
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = static_cast<double>(load<T>(raw, n * sizeof(T), swap));
  }
}

}  // namespace

Shape4 NiftiHeader::shape() const noexcept {
  Shape4 s{1, 1, 1, 1};
  for (int d = 1; d <= std::min<int>(dim[0], 4); ++d) {
    s[static_cast<std::size_t>(d - 1)] = static_cast<std::size_t>(dim[static_cast<std::size_t>(d)]);
  }
  return s;
}

Affine NiftiHeader::affine() const {
  Affine a = Affine::Identity();
  if (sform_code > 0) {
    for (int c = 0; c < 4; ++c) {
      a(0, c) = srow_x[static_cast<std::size_t>(c)];
      a(1, c) = srow_y[static_cast<std::size_t>(c)];
      a(2, c) = srow_z[static_cast<std::size_t>(c)];
    }
  } else {
    for (int d = 0; d < 3; ++d) {
      const double size = pixdim[static_cast<std::size_t>(d + 1)];
      a(d, d) = size > 0.0 ? size : 1.0;
    }
  }
  return a;
}

NiftiHeader parse_header(std::span<const std::byte> bytes) {
  if (bytes.size() < kHeaderSize) {
    fail(Errc::header_too_short, "need 348 bytes, got " +
                                     std::to_string(bytes.size()));
  }
  const bool native = load<std::int32_t>(bytes, kOffSizeofHdr, false) == 348;
  const bool swapped = load<std::int32_t>(bytes, kOffSizeofHdr, true) == 348;
  if (!native && !swapped) {
    fail(Errc::bad_sizeof_hdr, "sizeof_hdr is not 348 in either byte order");
  }
  const bool swap = !native;

  NiftiHeader h;
  h.byte_order = (host_is_little() != swap) ? ByteOrder::little : ByteOrder::big;
  h.sizeof_hdr = 348;
  for (std::size_t d = 0; d < 8; ++d) {
    h.dim[d] = load<std::int16_t>(bytes, kOffDim + 2 * d, swap);
    h.pixdim[d] = load<float>(bytes, kOffPixdim + 4 * d, swap);
  }
  h.datatype = load<std::int16_t>(bytes, kOffDatatype, swap);
  h.bitpix = load<std::int16_t>(bytes, kOffBitpix, swap);
  h.vox_offset = load<float>(bytes, kOffVoxOffset, swap);
  h.scl_slope = load<float>(bytes, kOffSclSlope, swap);
  h.scl_inter = load<float>(bytes, kOffSclInter, swap);
  h.xyzt_units = static_cast<std::uint8_t>(bytes[kOffXyztUnits]);
  h.qform_code = load<std::int16_t>(bytes, kOffQformCode, swap);
  h.sform_code = load<std::int16_t>(bytes, kOffSformCode, swap);
  for (std::size_t c = 0; c < 4; ++c) {
    h.srow_x[c] = load<float>(bytes, kOffSrowX + 4 * c, swap);
    h.srow_y[c] = load<float>(bytes, kOffSrowY + 4 * c, swap);
    h.srow_z[c] = load<float>(bytes, kOffSrowZ + 4 * c, swap);
  }
  std::memcpy(h.magic.data(), bytes.data() + kOffMagic, 4);

  if (std::memcmp(h.magic.data(), "n+1\0", 4) != 0) {
    fail(Errc::bad_magic, "magic is not \"n+1\"");
  }
  if (h.dim[0] < 1 || h.dim[0] > 7) {
    fail(Errc::invalid_header, "dim[0] = " + std::to_string(h.dim[0]) +
                                   " outside [1, 7]");
  }
  for (int d = 1; d <= h.dim[0]; ++d) {
    if (h.dim[static_cast<std::size_t>(d)] < 1) {
      fail(Errc::invalid_header, "dim[" + std::to_string(d) + "] must be >= 1");
    }
  }
  for (int d = 5; d <= h.dim[0]; ++d) {
    if (h.dim[static_cast<std::size_t>(d)] != 1) {
      fail(Errc::invalid_header, "images with more than 4 dimensions are not supported");
    }
  }
  const int bitpix = expected_bitpix(h.datatype);
  if (bitpix == 0) {
    fail(Errc::unsupported_datatype,
         "datatype code " + std::to_string(h.datatype));
  }
  if (h.bitpix != bitpix) {
    fail(Errc::invalid_header, "bitpix " + std::to_string(h.bitpix) +
                                   " does not match datatype " +
                                   std::to_string(h.datatype));
  }
  if (!(h.vox_offset >= static_cast<float>(kHeaderSize))) {
    fail(Errc::invalid_header, "vox_offset below 348");
  }
  return h;
}

std::vector<std::byte> encode_header(const NiftiHeader& h) {
  std::vector<std::byte> bytes(kHeaderSize, std::byte{0});
  const bool swap = (h.byte_order == ByteOrder::little) != host_is_little();
  store<std::int32_t>(bytes, kOffSizeofHdr, 348, swap);
  for (std::size_t d = 0; d < 8; ++d) {
    store<std::int16_t>(bytes, kOffDim + 2 * d, h.dim[d], swap);
    store<float>(bytes, kOffPixdim + 4 * d, h.pixdim[d], swap);
  }
  store<std::int16_t>(bytes, kOffDatatype, h.datatype, swap);
  store<std::int16_t>(bytes, kOffBitpix, h.bitpix, swap);
  store<float>(bytes, kOffVoxOffset, h.vox_offset, swap);
  store<float>(bytes, kOffSclSlope, h.scl_slope, swap);
  store<float>(bytes, kOffSclInter, h.scl_inter, swap);
  bytes[kOffXyztUnits] = static_cast<std::byte>(h.xyzt_units);
  store<std::int16_t>(bytes, kOffQformCode, h.qform_code, swap);
  store<std::int16_t>(bytes, kOffSformCode, h.sform_code, swap);
  for (std::size_t c = 0; c < 4; ++c) {
    store<float>(bytes, kOffSrowX + 4 * c, h.srow_x[c], swap);
    store<float>(bytes, kOffSrowY + 4 * c, h.srow_y[c], swap);
    store<float>(bytes, kOffSrowZ + 4 * c, h.srow_z[c], swap);
  }
  std::memcpy(bytes.data() + kOffMagic, h.magic.data(), 4);
  return bytes;
}

NiftiHeader read_header(const fs::path& path) {
  const std::string file = read_file(path);
  return parse_header(std::as_bytes(std::span(file.data(), file.size())));
}

Image decode_image(std::span<const std::byte> file) {
  const NiftiHeader h = parse_header(file);
  const Shape4 shape = h.shape();
  const std::size_t count = shape[0] * shape[1] * shape[2] * shape[3];
  const std::size_t width = static_cast<std::size_t>(h.bitpix) / 8;
  const auto offset = static_cast<std::size_t>(h.vox_offset);
  if (file.size() < offset || file.size() - offset < count * width) {
    fail(Errc::truncated_data, "expected " + std::to_string(count * width) +
                                   " data bytes at offset " +
                                   std::to_string(offset) + ", file has " +
                                   std::to_string(file.size()));
  }
  const auto raw = file.subspan(offset, count * width);
  const bool swap = (h.byte_order == ByteOrder::little) != host_is_little();

  std::vector<double> values(count);
  switch (static_cast<Datatype>(h.datatype)) {
    case Datatype::uint8: decode_values<std::uint8_t>(raw, swap, values); break;
    case Datatype::int16: decode_values<std::int16_t>(raw, swap, values); break;
    case Datatype::int32: decode_values<std::int32_t>(raw, swap, values); break;
    case Datatype::float32: decode_values<float>(raw, swap, values); break;
    case Datatype::float64: decode_values<double>(raw, swap, values); break;
  }
  if (h.scl_slope != 0.0f && std::isfinite(h.scl_slope)) {
    const double slope = h.scl_slope;
    const double inter = h.scl_inter;
    for (double& v : values) v = slope * v + inter;
  }
  if (h.sform_code <= 0) {
    log_warning("sform_code is 0; using pixdim diagonal affine (qform is not decoded)");
  }
  return Image(shape, std::move(values), h.affine(), h.tr_s());
}

Image load_image(const fs::path& path) {
  const std::string file = read_file(path);
  return decode_image(std::as_bytes(std::span(file.data(), file.size())));
}

std::vector<std::byte> encode_image(const Image& img) {
  check_affine(img.affine());
  const Shape4& s = img.shape();
  for (std::size_t d = 0; d < 4; ++d) {
    if (s[d] < 1 || s[d] > 32767) {
      fail(Errc::invalid_argument, "extent does not fit a NIfTI-1 dim field");
    }
  }
  NiftiHeader h;
  h.byte_order = ByteOrder::little;
  h.dim = {static_cast<std::int16_t>(s[3] > 1 ? 4 : 3),
           static_cast<std::int16_t>(s[0]),
           static_cast<std::int16_t>(s[1]),
           static_cast<std::int16_t>(s[2]),
           static_cast<std::int16_t>(s[3]),
           1, 1, 1};
  h.datatype = static_cast<std::int16_t>(Datatype::float32);
  h.bitpix = 32;
  h.pixdim = {1.0f, 1.0f, 1.0f, 1.0f, static_cast<float>(img.tr_s()), 1.0f, 1.0f, 1.0f};
  const Affine& a = img.affine();
  for (int d = 0; d < 3; ++d) {
    h.pixdim[static_cast<std::size_t>(d + 1)] =
        static_cast<float>(a.block<3, 1>(0, d).norm());
  }
  h.vox_offset = kWriterVoxOffset;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 2 | 8;  // mm, seconds
  h.qform_code = 0;
  h.sform_code = 1;
  for (int c = 0; c < 4; ++c) {
    h.srow_x[static_cast<std::size_t>(c)] = static_cast<float>(a(0, c));
    h.srow_y[static_cast<std::size_t>(c)] = static_cast<float>(a(1, c));
    h.srow_z[static_cast<std::size_t>(c)] = static_cast<float>(a(2, c));
  }

  std::vector<std::byte> file = encode_header(h);
  file.resize(static_cast<std::size_t>(kWriterVoxOffset) + 4 * img.size(),
              std::byte{0});
  const bool swap = !host_is_little();
  std::size_t offset = static_cast<std::size_t>(kWriterVoxOffset);
  for (double v : img.data()) {
    store<float>(file, offset, static_cast<float>(v), swap);
    offset += 4;
  }
  return file;
}

void save_image(const Image& img, const fs::path& path) {
  const auto bytes = encode_image(img);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                           bytes.size()));
}

}  // namespace voxelrun::nifti
