#pragma once

// Synthetic inputs shared by unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "voxelrun/design.hpp"
#include "voxelrun/image.hpp"

namespace fixture {

struct SpikeRun {
  voxelrun::Image image;
  voxelrun::design::DesignMatrix design;
  std::vector<std::size_t> spikes;  // sorted volume indices
};

/// 5x5x4 voxels over n_volumes scans: spatial gradient, a block task
/// response, unit Gaussian noise, and 1-3 spike volumes whose voxels get an
/// extra N(0, spike_sigma^2) disturbance.
SpikeRun spike_run(std::uint64_t seed, std::size_t n_volumes = 40, double spike_sigma = 20.0);

/// Pure N(0, 1) data over the given voxel count, plus an intercept + block
/// design with matching rows.
struct NullRun {
  Eigen::MatrixXd Y;
  voxelrun::design::DesignMatrix design;
};
NullRun null_run(std::uint64_t seed, std::size_t n_scans, std::size_t n_voxels);

/// All integer vectors over the alphabet with the given length, in
/// lexicographic order, passed one at a time to f.
template <class F>
void for_each_vector(const std::vector<int>& alphabet, std::size_t length, F&& f) {
  std::vector<std::size_t> digit(length, 0);
  std::vector<double> v(length);
  while (true) {
    for (std::size_t i = 0; i < length; ++i) v[i] = alphabet[digit[i]];
    f(v);
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++digit[i] < alphabet.size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

}  // namespace fixture
