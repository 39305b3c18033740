#include <benchmark/benchmark.h>

#include <random>

#include "voxelrun/design.hpp"
#include "voxelrun/glm.hpp"
#include "voxelrun/image_ops.hpp"
#include "voxelrun/manifest.hpp"
#include "voxelrun/stats.hpp"

namespace {

using namespace voxelrun;

void BM_GlmFit(benchmark::State& state) {
  const auto voxels = static_cast<Eigen::Index>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd X(160, 4), Y(160, voxels);
  for (Eigen::Index r = 0; r < X.size(); ++r) X.data()[r] = n01(rng);
  X.col(0).setOnes();
  for (Eigen::Index r = 0; r < Y.size(); ++r) Y.data()[r] = n01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit(Y, X));
  state.SetItemsProcessed(state.iterations() * voxels);
}
BENCHMARK(BM_GlmFit)->Arg(1000)->Arg(10000);

void BM_HemodynamicRegressor(benchmark::State& state) {
  const design::EventList events{{10, 20, 1}, {50, 20, 1}, {90, 20, 1}, {130, 20, 1}};
  const double dt_frac = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(design::hemodynamic_regressor(events, 68, 2.5, {}, dt_frac));
  }
}
BENCHMARK(BM_HemodynamicRegressor)->Arg(16)->Arg(100);

void BM_GaussianSmooth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Affine a = Affine::Identity();
  a.diagonal().head<3>().setConstant(3.0);
  Image img({n, n, n, 4}, a);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u;
  for (double& v : img.data()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(image_ops::gaussian_smooth(img, {5.0}));
}
BENCHMARK(BM_GaussianSmooth)->Arg(16)->Arg(32);

void BM_Sha256(benchmark::State& state) {
  const std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(manifest::sha256_hex(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(1 << 20);

void BM_TToP(benchmark::State& state) {
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::t_to_p(t, 60));
    t = t > 8.0 ? 0.1 : t + 0.37;
  }
}
BENCHMARK(BM_TToP);

}  // namespace

BENCHMARK_MAIN();
