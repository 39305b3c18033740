#include "fixtures.hpp"

#include <algorithm>
#include <random>

namespace fixture {

using namespace voxelrun;

SpikeRun spike_run(std::uint64_t seed, std::size_t n_volumes, double spike_sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const Shape4 shape{5, 5, 4, n_volumes};
  SpikeRun run{Image(shape), {}, {}};

  std::vector<double> task(n_volumes);
  for (std::size_t t = 0; t < n_volumes; ++t) task[t] = (t / 5) % 2 == 1 ? 1.0 : 0.0;
  run.design = design::assemble_design({{"task", task}}, {}, n_volumes, 2.0);

  std::uniform_int_distribution<std::size_t> count(1, 3), where(0, n_volumes - 1);
  const std::size_t n_spikes = count(rng);
  while (run.spikes.size() < n_spikes) {
    const std::size_t s = where(rng);
    if (std::find(run.spikes.begin(), run.spikes.end(), s) == run.spikes.end()) {
      run.spikes.push_back(s);
    }
  }
  std::sort(run.spikes.begin(), run.spikes.end());

  for (std::size_t t = 0; t < n_volumes; ++t) {
    const bool spike = std::binary_search(run.spikes.begin(), run.spikes.end(), t);
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 5; ++i) {
          double v = 100.0 + 3.0 * static_cast<double>(i) + 2.0 * static_cast<double>(j) +
                     2.0 * task[t] + n01(rng);
          if (spike) v += spike_sigma * n01(rng);
          run.image(i, j, k, t) = v;
        }
  }
  return run;
}

NullRun null_run(std::uint64_t seed, std::size_t n_scans, std::size_t n_voxels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  NullRun run{Eigen::MatrixXd(static_cast<Eigen::Index>(n_scans),
                              static_cast<Eigen::Index>(n_voxels)),
              {}};
  for (Eigen::Index i = 0; i < run.Y.size(); ++i) run.Y.data()[i] = n01(rng);
  std::vector<double> task(n_scans);
  for (std::size_t t = 0; t < n_scans; ++t) task[t] = (t / 8) % 2 == 1 ? 1.0 : 0.0;
  run.design = design::assemble_design({{"task", task}}, design::drift_columns(n_scans, 1),
                                       n_scans, 2.0);
  return run;
}

}  // namespace fixture
