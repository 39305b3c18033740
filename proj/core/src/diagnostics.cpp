#include "voxelrun/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxelrun/error.hpp"
#include "voxelrun/figures.hpp"
#include "voxelrun/glm.hpp"
#include "voxelrun/io.hpp"

namespace voxelrun::diagnostics {

const char* to_string(Metric metric) noexcept {
  return metric == Metric::vol_std ? "vol_std" : "rms_diff";
}

std::vector<double> vol_std(const Image& img) {
  const std::size_t T = img.n_volumes();
  const std::size_t n = img.voxels_per_volume();
  std::vector<double> out(T, 0.0);
  if (n == 0) return out;
  for (std::size_t t = 0; t < T; ++t) {
    const auto vol = img.volume(t);
    const double mean = std::accumulate(vol.begin(), vol.end(), 0.0) /
                        static_cast<double>(n);
    double ss = 0.0;
    for (double v : vol) ss += (v - mean) * (v - mean);
    out[t] = std::sqrt(ss / static_cast<double>(n));
  }
  return out;
}

std::vector<double> rms_diff(const Image& img) {
  const std::size_t T = img.n_volumes();
  if (T < 2) fail(Errc::too_few_volumes, "RMS difference needs >= 2 volumes");
  const std::size_t n = img.voxels_per_volume();
  std::vector<double> out(T - 1, 0.0);
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const auto a = img.volume(t);
    const auto b = img.volume(t + 1);
    double ss = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double d = b[v] - a[v];
      ss += d * d;
    }
    out[t] = std::sqrt(ss / static_cast<double>(n));
  }
  return out;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) fail(Errc::too_few_values, "percentile of empty data");
  if (!(q >= 0.0 && q <= 100.0)) fail(Errc::invalid_argument, "q outside [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

OutlierReport iqr_outliers(std::span<const double> values, double scale,
                           Metric metric) {
  if (values.size() < 4) {
    fail(Errc::too_few_values, "IQR outlier detection needs >= 4 values, got " +
                                   std::to_string(values.size()));
  }
  if (!(scale >= 0.0)) fail(Errc::invalid_argument, "scale must be >= 0");
  OutlierReport r;
  r.metric = metric;
  r.values.assign(values.begin(), values.end());
  const double q1 = percentile(values, 25.0);
  const double q3 = percentile(values, 75.0);
  const double iqr = q3 - q1;
  r.lo_thresh = q1 - scale * iqr;
  r.hi_thresh = q3 + scale * iqr;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < r.lo_thresh || values[i] > r.hi_thresh) {
      r.outlier_indices.push_back(i);
    }
  }
  return r;
}

MrssComparison mrss_compare(const Image& img, const design::DesignMatrix& X,
                            std::span<const std::size_t> outliers,
                            const Mask& mask) {
  const std::size_t T = img.n_volumes();
  if (static_cast<std::size_t>(X.n_scans()) != T) {
    fail(Errc::shape_mismatch, "design rows do not match image volumes");
  }
  std::vector<std::size_t> drop(outliers.begin(), outliers.end());
  std::sort(drop.begin(), drop.end());
  drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
  for (std::size_t t : drop) {
    if (t >= T) fail(Errc::index_out_of_range, "outlier index " + std::to_string(t));
  }

  const Eigen::MatrixXd Y = voxel_matrix(img, &mask);
  if (Y.cols() == 0) fail(Errc::invalid_argument, "mask selects no voxels");
  const glm::GlmFit all = glm::fit(Y, X);

  std::vector<bool> keep(T, true);
  for (std::size_t t : drop) keep[t] = false;
  const auto kept = static_cast<Eigen::Index>(T - drop.size());
  Eigen::MatrixXd Y_kept(kept, Y.cols());
  Eigen::Index next = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (keep[t]) Y_kept.row(next++) = Y.row(static_cast<Eigen::Index>(t));
  }
  const design::DesignMatrix X_kept = design::drop_rows(X, drop);

  glm::GlmFit dropped;
  try {
    dropped = glm::fit(Y_kept, X_kept);
  } catch (const Error& e) {
    if (e.code() != Errc::degenerate_design) throw;
    fail(Errc::degenerate_after_drop, "too few scans remain after dropping " +
                                          std::to_string(drop.size()) + " outliers");
  }
  return MrssComparison{all.mrss.mean(), dropped.mrss.mean(), all.df, dropped.df};
}

std::string format_indices(std::span<const std::size_t> indices) {
  std::string out;
  for (std::size_t i : indices) {
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

std::vector<std::string> write_diagnostic_outputs(const OutlierReport& std_report,
                                                  const OutlierReport& rms_report,
                                                  const fs::path& out_dir) {
  auto plot = [&](const OutlierReport& r, const fs::path& path,
                  const std::string& title) {
    std::vector<figures::Marker> markers;
    for (std::size_t i : r.outlier_indices) markers.push_back({static_cast<double>(i), r.values[i]});
    figures::write_svg_lines({r.values}, markers, {r.lo_thresh, r.hi_thresh},
                             path, title);
  };
  write_file_atomic(out_dir / "vol_std_values.txt", format_lines(std_report.values));
  write_file_atomic(out_dir / "vol_std_outliers.txt",
                    format_indices(std_report.outlier_indices));
  plot(std_report, out_dir / "vol_std.svg", "Volume standard deviation");
  write_file_atomic(out_dir / "vol_rms_values.txt", format_lines(rms_report.values));
  write_file_atomic(out_dir / "vol_rms_outliers.txt",
                    format_indices(rms_report.outlier_indices));
  plot(rms_report, out_dir / "vol_rms_outliers.svg", "RMS difference");
  return {"vol_std_values.txt", "vol_std_outliers.txt", "vol_std.svg",
          "vol_rms_values.txt", "vol_rms_outliers.txt", "vol_rms_outliers.svg"};
}

}  // namespace voxelrun::diagnostics
