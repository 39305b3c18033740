#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace voxelrun {

using Shape4 = std::array<std::size_t, 4>;
using Shape3 = std::array<std::size_t, 3>;
using Affine = Eigen::Matrix4d;

/// A 3D or 4D voxel array with its voxel-to-mm affine.
///
/// Data is stored column-major with i fastest and t slowest, the NIfTI
/// on-disk order, so each volume is a contiguous block. 3D images have a
/// time extent of 1.
class Image {
 public:
  Image() = default;
  /// Zero-filled image. Throws singular_affine / invalid_argument when the
  /// affine violates the image invariants.
  explicit Image(Shape4 shape, const Affine& affine = Affine::Identity(),
                 double tr_s = 1.0);
  Image(Shape4 shape, std::vector<double> data,
        const Affine& affine = Affine::Identity(), double tr_s = 1.0);

  const Shape4& shape() const noexcept { return shape_; }
  Shape3 spatial_shape() const noexcept { return {shape_[0], shape_[1], shape_[2]}; }
  std::size_t n_volumes() const noexcept { return shape_[3]; }
  std::size_t voxels_per_volume() const noexcept {
    return shape_[0] * shape_[1] * shape_[2];
  }
  std::size_t size() const noexcept { return data_.size(); }

  const Affine& affine() const noexcept { return affine_; }
  double tr_s() const noexcept { return tr_s_; }
  void set_tr_s(double tr_s) noexcept { tr_s_ = tr_s; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k,
                    std::size_t t = 0) const noexcept {
    return i + shape_[0] * (j + shape_[1] * (k + shape_[2] * t));
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k,
                     std::size_t t = 0) noexcept {
    return data_[index(i, j, k, t)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k,
                    std::size_t t = 0) const noexcept {
    return data_[index(i, j, k, t)];
  }
  /// Bounds-checked access; throws index_out_of_range.
  double at(std::size_t i, std::size_t j, std::size_t k,
            std::size_t t = 0) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> volume(std::size_t t) const;
  std::span<double> volume(std::size_t t);

 private:
  Shape4 shape_{0, 0, 0, 0};
  std::vector<double> data_;
  Affine affine_ = Affine::Identity();
  double tr_s_ = 1.0;
};

/// Checks the affine invariants: last row (0,0,0,1) and an invertible
/// upper-left 3x3 block.
void check_affine(const Affine& affine);

/// Boolean voxel selection over a 3D grid, flattened in the same
/// column-major order as Image volumes.
struct Mask {
  Shape3 shape{0, 0, 0};
  std::vector<bool> inside;

  static Mask all(Shape3 shape);
  std::size_t count() const;
};

/// Returns volume `t` as a 3D image sharing the affine. Throws
/// index_out_of_range.
Image slice_volume(const Image& img, std::size_t t);

/// Removes the first `n` volumes. Throws drop_too_many when n >= T.
Image drop_initial(const Image& img, std::size_t n);

/// Time-course of one voxel, length T. Throws index_out_of_range.
std::vector<double> voxel_timecourse(const Image& img, std::size_t i,
                                     std::size_t j, std::size_t k);

/// n_volumes x n_voxels matrix of in-mask voxel time-courses (one column per
/// voxel, voxels in flattened order). A null mask selects every voxel.
Eigen::MatrixXd voxel_matrix(const Image& img, const Mask* mask = nullptr);

/// Places per-voxel values back into a 3D image; out-of-mask voxels are
/// `fill`.
Image scatter(std::span<const double> values, const Mask& mask,
              const Affine& affine, double fill = 0.0);

}  // namespace voxelrun
