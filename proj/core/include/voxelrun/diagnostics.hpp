#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxelrun/design.hpp"
#include "voxelrun/image.hpp"

namespace voxelrun::diagnostics {

namespace fs = std::filesystem;

enum class Metric { vol_std, rms_diff };

const char* to_string(Metric metric) noexcept;

struct OutlierReport {
  Metric metric = Metric::vol_std;
  std::vector<double> values;
  double lo_thresh = 0.0;
  double hi_thresh = 0.0;
  std::vector<std::size_t> outlier_indices;  // strictly increasing
};

/// Population standard deviation over the voxels of each volume.
std::vector<double> vol_std(const Image& img);

/// sqrt(mean((vol[t+1] - vol[t])^2)) for each consecutive pair; length T-1.
/// Throws too_few_volumes.
std::vector<double> rms_diff(const Image& img);

/// Percentile with linear interpolation at position (q/100)(n-1).
double percentile(std::span<const double> values, double q);

/// Tukey fences Q1 - scale*IQR, Q3 + scale*IQR; indices of values strictly
/// outside. Throws too_few_values (fewer than 4 values).
OutlierReport iqr_outliers(std::span<const double> values, double scale = 1.5,
                           Metric metric = Metric::vol_std);

struct MrssComparison {
  double mrss_all = 0.0;
  double mrss_dropped = 0.0;
  int df_all = 0;
  int df_dropped = 0;
};

/// Fits the design to all volumes and to the volumes left after removing
/// `outliers` (rows of both data and design), returning the in-mask mean
/// MRSS of each fit. Throws degenerate_after_drop.
MrssComparison mrss_compare(const Image& img, const design::DesignMatrix& X,
                            std::span<const std::size_t> outliers,
                            const Mask& mask);

/// Writes the diagnostic artifact set into out_dir:
///   vol_std_values.txt, vol_std_outliers.txt, vol_std.svg,
///   vol_rms_values.txt, vol_rms_outliers.txt, vol_rms_outliers.svg
/// Returns the written file names.
std::vector<std::string> write_diagnostic_outputs(const OutlierReport& std_report,
                                                  const OutlierReport& rms_report,
                                                  const fs::path& out_dir);

std::string format_indices(std::span<const std::size_t> indices);

}  // namespace voxelrun::diagnostics
