#include "voxelrun/image.hpp"

#include <algorithm>
#include <string>

#include "voxelrun/error.hpp"

namespace voxelrun {
namespace {

std::size_t product(const Shape4& s) { return s[0] * s[1] * s[2] * s[3]; }

std::string shape_text(const Shape4& s) {
  return "(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," +
         std::to_string(s[2]) + "," + std::to_string(s[3]) + ")";
}

}  // namespace

void check_affine(const Affine& affine) {
  if (affine(3, 0) != 0.0 || affine(3, 1) != 0.0 || affine(3, 2) != 0.0 ||
      affine(3, 3) != 1.0) {
    fail(Errc::invalid_argument, "affine last row must be (0, 0, 0, 1)");
  }
  const Eigen::Matrix3d block = affine.topLeftCorner<3, 3>();
  const double scale = block.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || std::abs(block.determinant()) <= 1e-12 * scale * scale * scale) {
    fail(Errc::singular_affine, "affine 3x3 block is not invertible");
  }
}

Image::Image(Shape4 shape, const Affine& affine, double tr_s)
    : Image(shape, std::vector<double>(product(shape), 0.0), affine, tr_s) {}

Image::Image(Shape4 shape, std::vector<double> data, const Affine& affine,
             double tr_s)
    : shape_(shape), data_(std::move(data)), affine_(affine), tr_s_(tr_s) {
  if (product(shape_) != data_.size()) {
    fail(Errc::invalid_argument, "shape " + shape_text(shape_) + " needs " +
                                     std::to_string(product(shape_)) +
                                     " values, got " +
                                     std::to_string(data_.size()));
  }
  check_affine(affine_);
}

double Image::at(std::size_t i, std::size_t j, std::size_t k,
                 std::size_t t) const {
  if (i >= shape_[0] || j >= shape_[1] || k >= shape_[2] || t >= shape_[3]) {
    fail(Errc::index_out_of_range, "voxel index outside " + shape_text(shape_));
  }
  return (*this)(i, j, k, t);
}

std::span<const double> Image::volume(std::size_t t) const {
  if (t >= shape_[3]) {
    fail(Errc::index_out_of_range, "volume " + std::to_string(t) +
                                       " outside " + shape_text(shape_));
  }
  const std::size_t n = voxels_per_volume();
  return std::span<const double>(data_).subspan(t * n, n);
}

std::span<double> Image::volume(std::size_t t) {
  if (t >= shape_[3]) {
    fail(Errc::index_out_of_range, "volume " + std::to_string(t) +
                                       " outside " + shape_text(shape_));
  }
  const std::size_t n = voxels_per_volume();
  return std::span<double>(data_).subspan(t * n, n);
}

Mask Mask::all(Shape3 shape) {
  return Mask{shape, std::vector<bool>(shape[0] * shape[1] * shape[2], true)};
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), true));
}

Image slice_volume(const Image& img, std::size_t t) {
  const auto vol = img.volume(t);
  const Shape4 shape{img.shape()[0], img.shape()[1], img.shape()[2], 1};
  return Image(shape, std::vector<double>(vol.begin(), vol.end()),
               img.affine(), img.tr_s());
}

Image drop_initial(const Image& img, std::size_t n) {
  if (n >= img.n_volumes()) {
    fail(Errc::drop_too_many, "cannot drop " + std::to_string(n) + " of " +
                                  std::to_string(img.n_volumes()) + " volumes");
  }
  const std::size_t per = img.voxels_per_volume();
  const auto data = img.data();
  Shape4 shape = img.shape();
  shape[3] -= n;
  return Image(shape, std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(n * per), data.end()),
               img.affine(), img.tr_s());
}

std::vector<double> voxel_timecourse(const Image& img, std::size_t i,
                                     std::size_t j, std::size_t k) {
  const auto& s = img.shape();
  if (i >= s[0] || j >= s[1] || k >= s[2]) {
    fail(Errc::index_out_of_range, "voxel index outside image");
  }
  std::vector<double> out(img.n_volumes());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = img(i, j, k, t);
  return out;
}

Eigen::MatrixXd voxel_matrix(const Image& img, const Mask* mask) {
  const std::size_t per = img.voxels_per_volume();
  if (mask != nullptr && mask->inside.size() != per) {
    fail(Errc::shape_mismatch, "mask does not match image volume size");
  }
  std::vector<std::size_t> columns;
  columns.reserve(per);
  for (std::size_t v = 0; v < per; ++v) {
    if (mask == nullptr || mask->inside[v]) columns.push_back(v);
  }
  const std::size_t n = img.n_volumes();
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(columns.size()));
  for (std::size_t t = 0; t < n; ++t) {
    const auto vol = img.volume(t);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      Y(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
          vol[columns[c]];
    }
  }
  return Y;
}

Image scatter(std::span<const double> values, const Mask& mask,
              const Affine& affine, double fill) {
  if (values.size() != mask.count()) {
    fail(Errc::length_mismatch, "value count does not match mask size");
  }
  Image out({mask.shape[0], mask.shape[1], mask.shape[2], 1}, affine);
  auto data = out.data();
  std::size_t next = 0;
  for (std::size_t v = 0; v < data.size(); ++v) {
    data[v] = mask.inside[v] ? values[next++] : fill;
  }
  return out;
}

}  // namespace voxelrun
