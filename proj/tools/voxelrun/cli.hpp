#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voxelrun/design.hpp"
#include "voxelrun/report.hpp"
#include "voxelrun/stats.hpp"

namespace voxelrun::cli {

namespace fs = std::filesystem;

/// Parameters for one single-run analysis.
struct RunConfig {
  fs::path image_path;
  std::vector<fs::path> events_paths;
  std::vector<fs::path> parametric_paths;  // third column is the modulator
  double tr_s = 0.0;                       // 0 means "take from the header"
  design::HrfParams hrf;
  double dt_frac = 100.0;
  int drift_order = 0;
  std::size_t drop = 0;
  std::optional<double> smooth_fwhm_mm;
  std::vector<std::pair<std::string, std::vector<double>>> contrasts;
  double alpha = 0.05;
  stats::Tail tail = stats::Tail::two_sided;
  double mask_fraction = 0.2;
  fs::path out_dir = "out";

  void validate() const;
};

/// Task regressors over the full run, named after the event files.
std::vector<design::Column> task_columns(const RunConfig& config, std::size_t n_scans,
                                         double tr_s);

/// Fits the GLM and writes maps, design.txt, results.txt and results.json.
report::AnalysisSummary glm_command(const RunConfig& config);

struct DiagnoseConfig {
  fs::path image_path;
  std::size_t drop = 0;
  double scale = 1.5;
  std::vector<fs::path> events_paths;
  double tr_s = 0.0;
  int drift_order = 0;
  double mask_fraction = 0.2;
  fs::path out_dir = "out";
};

/// Volume diagnostics, outlier fences and (with events) the MRSS comparison.
report::DiagnosticsSummary diagnose_command(const DiagnoseConfig& config);

/// Parses a contrast such as "0 1 -1".
std::vector<double> parse_weights(const std::string& text);

/// Entry point; args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace voxelrun::cli
