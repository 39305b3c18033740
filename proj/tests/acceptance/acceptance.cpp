// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Paths to the built CLI, the demo directory, the README and
// the coverage summary come from compile definitions.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "graphs.hpp"
#include "oracles.hpp"
#include "voxelrun/design.hpp"
#include "voxelrun/diagnostics.hpp"
#include "voxelrun/error.hpp"
#include "voxelrun/glm.hpp"
#include "voxelrun/image_ops.hpp"
#include "voxelrun/io.hpp"
#include "voxelrun/nifti.hpp"
#include "voxelrun/pipeline.hpp"
#include "voxelrun/stats.hpp"

namespace {

using namespace voxelrun;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome glm_oracle() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst_beta = 0.0, worst_ortho = 0.0;
  const auto start = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 3;
    Eigen::MatrixXd X(20, p);
    X.col(0).setOnes();
    for (int c = 1; c < p; ++c)
      for (int r = 0; r < 20; ++r) X(r, c) = z(rng);
    Eigen::MatrixXd Y(20, 1);
    for (int r = 0; r < 20; ++r) Y(r, 0) = z(rng) * 3.0 + X(r, p - 1);
    const auto f = glm::fit(Y, X);
    const auto ref = oracle::normal_equations(X, Y.col(0));
    for (int c = 0; c < p; ++c) worst_beta = std::max(worst_beta, std::abs(f.beta(c, 0) - ref[c]));
    const Eigen::VectorXd e = Y.col(0) - X * f.beta.col(0);
    worst_ortho = std::max(worst_ortho, (X.transpose() * e).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  o.check(worst_beta < 1e-10, "max |beta - oracle| = " + sci(worst_beta));
  o.check(worst_ortho < 1e-9, "max |X'e| = " + sci(worst_ortho));
  o.check(elapsed < 1.0, "runtime " + sci(elapsed) + " s");
  o.note("max |dbeta| " + sci(worst_beta) + ", |X'e| " + sci(worst_ortho) + ", " +
         sci(elapsed) + " s");
  return o;
}

Outcome pooled_t_equivalence() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int na = 5 + trial % 7, nb = 4 + trial % 5;
    std::vector<double> a(na), b(nb);
    for (double& v : a) v = 1.0 + z(rng);
    for (double& v : b) v = z(rng) * 1.5;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(na + nb, 2);
    Eigen::MatrixXd Y(na + nb, 1);
    for (int i = 0; i < na; ++i) X(i, 0) = 1.0, Y(i, 0) = a[i];
    for (int i = 0; i < nb; ++i) X(na + i, 1) = 1.0, Y(na + i, 0) = b[i];
    const auto t = glm::contrast_t(glm::fit(Y, X), glm::Contrast(Eigen::Vector2d(1.0, -1.0)));
    worst = std::max(worst, std::abs(t.t[0] - oracle::pooled_t(a, b)));
  }
  o.check(worst < 1e-10, "max |t - pooled t| = " + sci(worst));
  o.note("max |t - pooled t| " + sci(worst));
  return o;
}

Outcome p_value_accuracy() {
  Outcome o;
  double worst = 0.0;
  for (int df : {1, 5, 10, 30}) {
    for (double t : {0.0, 0.5, 1.0, 2.5, 5.0}) {
      worst = std::max(worst, std::abs(stats::t_to_p(t, df) - oracle::simpson_two_sided_p(t, df)));
    }
  }
  o.check(worst < 1e-8, "max |p - simpson| = " + sci(worst));
  o.note("max |p - simpson| " + sci(worst));
  return o;
}

Outcome lti_convolution() {
  Outcome o;
  const double dt = 0.125;
  const auto h = design::hrf_samples({}, dt);
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double super = 0.0, shift = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    design::SampledSignal a{0.0, dt, std::vector<double>(480)}, b = a, ab = a;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      a.values[i] = u(rng);
      b.values[i] = u(rng);
      ab.values[i] = a.values[i] + b.values[i];
    }
    const double c = 2.0 + u(rng);
    design::SampledSignal ca = a;
    for (double& v : ca.values) v *= c;
    const auto ya = design::convolve(a, h).values, yb = design::convolve(b, h).values;
    const auto yab = design::convolve(ab, h).values, yca = design::convolve(ca, h).values;
    for (std::size_t i = 0; i < ya.size(); ++i) {
      super = std::max(super, std::abs(yab[i] - ya[i] - yb[i]));
      super = std::max(super, std::abs(yca[i] - c * ya[i]));
    }
    const std::size_t m = 1 + static_cast<std::size_t>(trial) * 7;
    design::SampledSignal shifted{0.0, dt, std::vector<double>(a.values.size(), 0.0)};
    for (std::size_t i = m; i < a.values.size(); ++i) shifted.values[i] = a.values[i - m];
    const auto ys = design::convolve(shifted, h).values;
    for (std::size_t i = m; i < ys.size(); ++i) shift = std::max(shift, std::abs(ys[i] - ya[i - m]));
    for (std::size_t i = 0; i < m; ++i) shift = std::max(shift, std::abs(ys[i]));
  }
  o.check(super < 1e-12, "superposition error " + sci(super));
  o.check(shift < 1e-12, "shift error " + sci(shift));

  double single = 0.0;
  for (double amp : {1.0, 2.5, -0.75}) {
    const design::EventList ev{{2.5, dt, amp}};
    const auto y = design::convolve(design::neural_signal(ev, dt, 60.0), h).values;
    const std::size_t n0 = 20;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double expect = i >= n0 && i - n0 < h.values.size() ? amp * dt * h.values[i - n0] : 0.0;
      single = std::max(single, std::abs(y[i] - expect));
    }
  }
  o.check(single < 1e-12, "single-event error " + sci(single));
  o.note("superposition " + sci(super) + ", shift " + sci(shift) + ", single event " + sci(single));
  return o;
}

Outcome high_res_sampling() {
  Outcome o;
  const auto h = design::hrf_samples({}, 0.025);
  std::vector<double> knots;
  for (std::size_t m = 0; m < h.values.size(); m += 3) knots.push_back(static_cast<double>(m) * 0.025);
  const auto at = design::sample_at(h, knots);
  bool exact = true;
  for (std::size_t q = 0; q < knots.size(); ++q) exact = exact && at[q] == h.values[q * 3];
  o.check(exact, "sample_at is not exact at knots");

  const double tr = 2.5;
  const auto events = design::parse_events("10 20 1\n50 20 1\n90 20 1\n130 20 1\n");
  const auto r100 = design::hemodynamic_regressor(events, 68, tr, {}, 100.0);
  const auto r200 = design::hemodynamic_regressor(events, 68, tr, {}, 200.0);
  const double diff = max_abs_diff(r100, r200);
  o.check(diff < 1e-3, "TR/100 vs TR/200 max abs diff " + sci(diff) + " at TR " + sci(tr) +
                           " (limit 1e-3)");
  o.note("knots exact, TR/100 vs TR/200 diff " + sci(diff));
  return o;
}

Outcome diagnostics_recovery() {
  Outcome o;
  int missed = 0, not_reduced = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto run = fixture::spike_run(seed);
    const auto rep = diagnostics::iqr_outliers(diagnostics::vol_std(run.image));
    const std::set<std::size_t> found(rep.outlier_indices.begin(), rep.outlier_indices.end());
    for (std::size_t s : run.spikes) missed += found.count(s) == 0 ? 1 : 0;
    const auto m = diagnostics::mrss_compare(run.image, run.design, rep.outlier_indices,
                                             Mask::all(run.image.spatial_shape()));
    if (!(m.mrss_dropped < m.mrss_all)) ++not_reduced;
  }
  o.check(missed == 0, std::to_string(missed) + " injected spikes missed");
  o.check(not_reduced == 0, std::to_string(not_reduced) + " fixtures without MRSS reduction");

  std::size_t vectors = 0, mismatches = 0;
  for (std::size_t len = 4; len <= 12; ++len) {
    fixture::for_each_vector({0, 1, 9}, len, [&](const std::vector<double>& v) {
      ++vectors;
      const auto rep = diagnostics::iqr_outliers(v, 1.5);
      const auto ref = oracle::brute_force_fences(v, 1.5);
      if (rep.outlier_indices != ref.outliers || std::abs(rep.lo_thresh - ref.lo) > 1e-12 ||
          std::abs(rep.hi_thresh - ref.hi) > 1e-12) {
        ++mismatches;
      }
    });
  }
  bool short_rejected = true;
  for (std::size_t len = 0; len < 4; ++len) {
    try {
      diagnostics::iqr_outliers(std::vector<double>(len, 1.0));
      short_rejected = false;
    } catch (const Error&) {
    }
  }
  o.check(mismatches == 0, std::to_string(mismatches) + " fence mismatches");
  o.check(short_rejected, "vectors shorter than 4 accepted");
  o.note("20 spike fixtures recovered, " + std::to_string(vectors) + " exhaustive vectors agree");
  return o;
}

Outcome smoothing() {
  Outcome o;
  Affine a = Affine::Identity();
  a.diagonal() << 3.0, 2.5, 4.0, 1.0;
  Image constant({9, 8, 7, 2}, std::vector<double>(9 * 8 * 7 * 2, 42.5), a);
  const Image s = image_ops::gaussian_smooth(constant, {5.0});
  double worst = 0.0;
  for (double v : s.data()) worst = std::max(worst, std::abs(v - 42.5));

  Image impulse({21, 21, 21, 1}, a);
  impulse(10, 10, 10) = 1.0;
  double sum = 0.0;
  for (double v : image_ops::gaussian_smooth(impulse, {5.0}).data()) sum += v;
  const double sigma = image_ops::fwhm_to_sigma(5.0);
  o.check(worst < 1e-12, "constant image changed by " + sci(worst));
  o.check(std::abs(sum - 1.0) < 1e-12, "impulse response sums to " + sci(sum));
  o.check(std::abs(sigma - 2.1233) < 1e-4, "sigma(5 mm) = " + sci(sigma));
  o.note("constant error " + sci(worst) + ", kernel sum - 1 = " + sci(sum - 1.0) +
         ", sigma(5 mm) = " + std::to_string(sigma));
  return o;
}

Outcome affine_round_trip() {
  Outcome o;
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int built = 0;
  while (built < 100) {
    Affine A = Affine::Identity();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) A(r, c) = (r == c ? 3.0 : 0.0) + u(rng) * (c == 3 ? 50.0 : 1.0);
    if (std::abs(A.topLeftCorner<3, 3>().determinant()) < 0.1) continue;
    ++built;
    for (int q = 0; q < 5; ++q) {
      const Eigen::Vector3d v(u(rng) * 30, u(rng) * 30, u(rng) * 30);
      const Eigen::Vector3d back = image_ops::mm_to_voxel(A, image_ops::voxel_to_mm(A, v));
      worst = std::max(worst, (back - v).cwiseAbs().maxCoeff());
    }
  }
  o.check(worst < 1e-12, "round trip error " + sci(worst));
  o.note("max round trip error " + sci(worst));
  return o;
}

// Reverses every multi-byte field of a NIfTI-1 header using the offsets of
// the format's field table.
std::vector<std::byte> swap_header(std::vector<std::byte> b) {
  const auto rev = [&](std::size_t off, std::size_t width, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i)
      std::reverse(b.begin() + static_cast<std::ptrdiff_t>(off + i * width),
                   b.begin() + static_cast<std::ptrdiff_t>(off + (i + 1) * width));
  };
  rev(0, 4, 1);     // sizeof_hdr
  rev(40, 2, 8);    // dim
  rev(70, 2, 2);    // datatype, bitpix
  rev(76, 4, 8);    // pixdim
  rev(108, 4, 3);   // vox_offset, scl_slope, scl_inter
  rev(252, 2, 2);   // qform_code, sform_code
  rev(280, 4, 12);  // srow_x, srow_y, srow_z
  return b;
}

Outcome nifti_contract() {
  Outcome o;
  nifti::NiftiHeader h;
  h.dim = {4, 7, 6, 5, 9, 1, 1, 1};
  h.pixdim = {1.0f, 2.0f, 2.5f, 3.0f, 1.5f, 0, 0, 0};
  h.scl_slope = 2.0f;
  h.scl_inter = -1.0f;
  h.sform_code = 1;
  h.srow_x = {2.0f, 0.1f, 0.0f, -10.0f};
  h.srow_y = {0.0f, 2.5f, 0.0f, -12.0f};
  h.srow_z = {0.0f, 0.0f, 3.0f, 4.0f};
  const auto little_bytes = nifti::encode_header(h);
  const auto little = nifti::parse_header(little_bytes);
  auto big = nifti::parse_header(swap_header(little_bytes));
  const bool big_detected = big.byte_order == nifti::ByteOrder::big;
  big.byte_order = nifti::ByteOrder::little;
  o.check(big_detected && big == little, "byte-swapped header decodes differently");

  oracle::TempDir dir;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  double worst_rel = 0.0;
  bool affine_exact = true;
  for (int trial = 0; trial < 20; ++trial) {
    const Shape4 shape{1 + rng() % 5, 1 + rng() % 5, 1 + rng() % 4, 1 + rng() % 3};
    Affine A = Affine::Identity();
    A.diagonal() << 1.0 + trial % 3, 2.0, 0.5 * (1 + trial % 4), 1.0;
    A(0, 3) = -static_cast<double>(trial);
    Image img(shape, A, 2.0);
    for (double& v : img.data()) v = u(rng);
    const fs::path p = dir / ("img" + std::to_string(trial) + ".nii");
    nifti::save_image(img, p);
    const Image back = nifti::load_image(p);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double rel = std::abs(back.data()[i] - img.data()[i]) / std::max(1.0, std::abs(img.data()[i]));
      worst_rel = std::max(worst_rel, rel);
    }
    affine_exact = affine_exact && back.affine() == img.affine() && back.shape() == shape;
  }
  o.check(worst_rel <= std::ldexp(1.0, -23), "round trip relative error " + sci(worst_rel));
  o.check(affine_exact, "affine or shape changed in round trip");

  nifti::save_image(Image({2, 2, 2, 1}), dir / "small.nii");
  const auto size = fs::file_size(dir / "small.nii");
  o.check(size == 384, "(2,2,2,1) file is " + std::to_string(size) + " bytes");
  o.note("byte-swap symmetric, 20 round trips rel err " + sci(worst_rel) + ", 384-byte file");
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (!fs::exists(root)) return files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return files;
}

fs::path copy_demo(const fs::path& dest) {
  const fs::path src = VOXELRUN_DEMO_DIR;
  fs::create_directories(dest);
  for (const char* name : {"Pipeline", "hashes.json", "cond001.txt"}) fs::copy_file(src / name, dest / name);
  fs::copy(src / "raw", dest / "raw", fs::copy_options::recursive);
  return dest;
}

int run_demo(const fs::path& demo, const fs::path& log) {
  const std::string cmd = "cd '" + demo.string() + "' && '" + std::string(VOXELRUN_EXE) +
                          "' run report -f Pipeline > '" + log.string() + "' 2>&1";
  return std::system(cmd.c_str());
}

Outcome pipeline_contract() {
  Outcome o;
  oracle::TempDir dir;
  std::mt19937 rng(1010);
  int order_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (rng() % 3 == 0) adj[i].push_back(j);
    const std::size_t goal = rng() % n;
    const auto steps = pipeline::plan(fixture::graph_from(adj), fixture::node_name(goal), {dir.path()});
    std::map<std::string, std::size_t> pos;
    for (std::size_t k = 0; k < steps.size(); ++k)
      if (!pos.emplace(steps[k].target, k).second) ++order_violations;
    for (std::size_t v = 0; v < n; ++v) {
      const auto it = pos.find(fixture::node_name(v));
      if (it == pos.end()) continue;
      for (std::size_t p : adj[v]) {
        const auto pp = pos.find(fixture::node_name(p));
        if (pp == pos.end() || pp->second > it->second) ++order_violations;
      }
    }
  }
  o.check(order_violations == 0, std::to_string(order_violations) + " topological violations");

  int cycle_errors = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    std::vector<std::vector<std::size_t>> adj(3);
    for (std::size_t e = 0; e < 9; ++e)
      if (mask & (1u << e)) adj[e / 3].push_back(e % 3);
    const auto g = fixture::graph_from(adj);
    for (std::size_t s = 0; s < 3; ++s) {
      bool threw = false;
      try {
        pipeline::plan(g, fixture::node_name(s), {dir.path()});
      } catch (const Error& e) {
        threw = e.code() == Errc::cycle_detected;
      }
      if (threw != fixture::cycle_reachable(adj, s)) ++cycle_errors;
    }
  }
  o.check(cycle_errors == 0, std::to_string(cycle_errors) + " cycle detection errors");

  const fs::path a = copy_demo(dir / "demo_a"), b = copy_demo(dir / "demo_b");
  const auto start = Clock::now();
  const int first = run_demo(a, dir / "first.log");
  const double elapsed = seconds_since(start);
  o.check(first == 0, "first demo run failed: " + read_file(dir / "first.log"));
  o.check(elapsed < 30.0, "demo took " + sci(elapsed) + " s");
  const int second = run_demo(a, dir / "second.log");
  const std::string second_log = read_file(dir / "second.log");
  o.check(second == 0 && second_log == "voxelrun: 'report' is up to date\n",
          "second run was not a no-op: " + second_log);
  o.check(run_demo(b, dir / "clean.log") == 0, "clean rerun failed");
  const auto tree_a = read_tree(a / "out"), tree_b = read_tree(b / "out");
  o.check(!tree_a.empty() && tree_a == tree_b, "out trees differ between clean runs");
  o.note("DAG order and 3-node cycles exhaustive, demo " + sci(elapsed) + " s, second run 0 recipes, " +
         std::to_string(tree_a.size()) + " out files byte-identical");
  return o;
}

Outcome null_calibration() {
  Outcome o;
  int good = 0;
  std::size_t total_hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto run = fixture::null_run(seed, 60, 10000);
    const auto f = glm::fit(run.Y, run.design);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(run.design.n_columns());
    w[1] = 1.0;
    const auto t = glm::contrast_t(f, glm::Contrast(w));
    const auto p = glm::t_to_p(t.t, t.df);
    const std::size_t hits = glm::count_below(p, glm::bonferroni_threshold(0.05, 10000));
    total_hits += hits;
    if (hits <= 1) ++good;
  }
  o.check(good >= 95, std::to_string(good) + " of 100 simulations with at most 1 hit");
  o.note(std::to_string(good) + " of 100 simulations with at most 1 hit, " +
         std::to_string(total_hits) + " hits in total");
  return o;
}

Outcome repo_contract() {
  Outcome o;
  const fs::path summary = VOXELRUN_COVERAGE_SUMMARY;
  double percent = -1.0;
  if (fs::exists(summary)) {
    std::istringstream in(read_file(summary));
    std::string key;
    while (in >> key) {
      if (key == "line_coverage_percent:") in >> percent;
    }
  }
  o.check(percent >= 90.0, percent < 0 ? "no coverage summary at " + summary.string()
                                       : "core line coverage " + sci(percent) + "%");
  const fs::path readme = fs::path(VOXELRUN_SOURCE_DIR) / "README.md";
  const std::string text = fs::exists(readme) ? read_file(readme) : "";
  for (const char* needle : {"cmake -S . -B build", "cmake --build build",
                             "cd demo && ../build/tools/voxelrun run report -f Pipeline"}) {
    o.check(text.find(needle) != std::string::npos, std::string("README lacks '") + needle + "'");
  }
  o.note("core line coverage " + std::to_string(percent) + "%, README rebuild steps present");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"GLM oracle equivalence", glm_oracle},
      {"t-test equivalence", pooled_t_equivalence},
      {"p-value accuracy", p_value_accuracy},
      {"LTI convolution", lti_convolution},
      {"High-res sampling", high_res_sampling},
      {"Diagnostics", diagnostics_recovery},
      {"Smoothing", smoothing},
      {"Affine", affine_round_trip},
      {"NIfTI", nifti_contract},
      {"Pipeline", pipeline_contract},
      {"Null calibration", null_calibration},
      {"Coverage and README", repo_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
