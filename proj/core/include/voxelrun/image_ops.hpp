#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "voxelrun/image.hpp"

namespace voxelrun::image_ops {

/// sigma = fwhm / (2 sqrt(2 ln 2)). Throws non_positive.
double fwhm_to_sigma(double fwhm_mm);

struct SmoothSpec {
  double fwhm_mm = 0.0;
  double truncate_sigmas = 4.0;

  double sigma_mm() const { return fwhm_to_sigma(fwhm_mm); }
};

/// Voxel edge lengths in mm: norms of the affine's first three columns.
std::array<double, 3> voxel_sizes(const Affine& affine);

/// Normalized Gaussian sampled at integer offsets -r..r, where
/// r = floor(truncate * sigma + 0.5). sigma_vox == 0 gives {1}.
std::vector<double> gaussian_kernel(double sigma_vox, double truncate_sigmas);

/// Convolves one volume in place along `axis` (0 = i, 1 = j, 2 = k),
/// replicating the nearest edge value outside the grid.
void convolve_axis(std::span<double> volume, Shape3 shape, int axis,
                   std::span<const double> kernel);

/// Separable Gaussian smoothing of every volume along i, then j, then k.
/// Throws non_positive_voxel_size.
Image gaussian_smooth(const Image& img, const SmoothSpec& spec);

/// mm = A (i, j, k, 1).
Eigen::Vector3d voxel_to_mm(const Affine& affine, const Eigen::Vector3d& voxel);

/// voxel = A^-1 (x, y, z, 1), fractional. Throws singular_affine.
Eigen::Vector3d mm_to_voxel(const Affine& affine, const Eigen::Vector3d& mm);

/// Per-voxel mean over time, as a 3D image.
Image mean_volume(const Image& img);

/// Voxels with mean > fraction * max(mean).
Mask brain_mask(const Image& mean, double fraction = 0.2);

}  // namespace voxelrun::image_ops
