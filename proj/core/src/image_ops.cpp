#include "voxelrun/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "voxelrun/error.hpp"

namespace voxelrun::image_ops {

double fwhm_to_sigma(double fwhm_mm) {
  if (!(fwhm_mm > 0.0)) fail(Errc::non_positive, "FWHM must be positive");
  return fwhm_mm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

std::array<double, 3> voxel_sizes(const Affine& affine) {
  return {affine.block<3, 1>(0, 0).norm(), affine.block<3, 1>(0, 1).norm(),
          affine.block<3, 1>(0, 2).norm()};
}

std::vector<double> gaussian_kernel(double sigma_vox, double truncate_sigmas) {
  if (!(sigma_vox >= 0.0) || !(truncate_sigmas > 0.0)) {
    fail(Errc::invalid_argument, "kernel sigma must be >= 0 and truncation > 0");
  }
  const auto radius = static_cast<long>(std::floor(truncate_sigmas * sigma_vox + 0.5));
  if (radius == 0) return {1.0};
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long x = -radius; x <= radius; ++x) {
    const double v = std::exp(-0.5 * static_cast<double>(x * x) / (sigma_vox * sigma_vox));
    k[static_cast<std::size_t>(x + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

void convolve_axis(std::span<double> volume, Shape3 shape, int axis,
                   std::span<const double> kernel) {
  if (kernel.size() <= 1 && (kernel.empty() || kernel[0] == 1.0)) return;
  if (axis < 0 || axis > 2) fail(Errc::invalid_argument, "axis must be 0, 1 or 2");
  const std::size_t len = shape[static_cast<std::size_t>(axis)];
  if (len == 0) return;
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? shape[0] : shape[0] * shape[1];
  const auto radius = static_cast<long>(kernel.size() / 2);
  const std::size_t n_lines = volume.size() / len;
  std::vector<double> line(len);

  for (std::size_t l = 0; l < n_lines; ++l) {
    // Line start: enumerate all voxels with index 0 along `axis`.
    std::size_t base;
    if (axis == 0) {
      base = l * shape[0];
    } else if (axis == 1) {
      base = (l % shape[0]) + (l / shape[0]) * shape[0] * shape[1];
    } else {
      base = l;
    }
    for (std::size_t n = 0; n < len; ++n) line[n] = volume[base + n * stride];
    for (std::size_t n = 0; n < len; ++n) {
      double acc = 0.0;
      for (long o = -radius; o <= radius; ++o) {
        const long src = std::clamp<long>(static_cast<long>(n) - o, 0,
                                          static_cast<long>(len) - 1);
        acc += kernel[static_cast<std::size_t>(o + radius)] *
               line[static_cast<std::size_t>(src)];
      }
      volume[base + n * stride] = acc;
    }
  }
}

Image gaussian_smooth(const Image& img, const SmoothSpec& spec) {
  const double sigma_mm = spec.sigma_mm();
  const auto sizes = voxel_sizes(img.affine());
  for (double s : sizes) {
    if (!(s > 0.0)) fail(Errc::non_positive_voxel_size, "voxel size must be positive");
  }
  std::array<std::vector<double>, 3> kernels;
  for (std::size_t a = 0; a < 3; ++a) {
    kernels[a] = gaussian_kernel(sigma_mm / sizes[a], spec.truncate_sigmas);
  }
  Image out = img;
  const Shape3 shape = img.spatial_shape();
  for (std::size_t t = 0; t < out.n_volumes(); ++t) {
    auto vol = out.volume(t);
    for (int a = 0; a < 3; ++a) {
      convolve_axis(vol, shape, a, kernels[static_cast<std::size_t>(a)]);
    }
  }
  return out;
}

Eigen::Vector3d voxel_to_mm(const Affine& affine, const Eigen::Vector3d& voxel) {
  return affine.topLeftCorner<3, 3>() * voxel + affine.block<3, 1>(0, 3);
}

Eigen::Vector3d mm_to_voxel(const Affine& affine, const Eigen::Vector3d& mm) {
  const Eigen::Matrix3d block = affine.topLeftCorner<3, 3>();
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(block);
  if (!lu.isInvertible()) fail(Errc::singular_affine, "affine is not invertible");
  return lu.solve(mm - affine.block<3, 1>(0, 3));
}

Image mean_volume(const Image& img) {
  const auto s = img.shape();
  Image out({s[0], s[1], s[2], 1}, img.affine(), img.tr_s());
  auto mean = out.data();
  const std::size_t T = img.n_volumes();
  if (T == 0) return out;
  for (std::size_t t = 0; t < T; ++t) {
    const auto vol = img.volume(t);
    for (std::size_t v = 0; v < vol.size(); ++v) mean[v] += vol[v];
  }
  for (double& v : mean) v /= static_cast<double>(T);
  return out;
}

Mask brain_mask(const Image& mean, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    fail(Errc::invalid_argument, "mask fraction must lie in (0, 1)");
  }
  const auto values = mean.volume(0);
  Mask m{mean.spatial_shape(), std::vector<bool>(values.size(), false)};
  if (values.empty()) return m;
  const double threshold = fraction * *std::max_element(values.begin(), values.end());
  for (std::size_t v = 0; v < values.size(); ++v) m.inside[v] = values[v] > threshold;
  return m;
}

}  // namespace voxelrun::image_ops
