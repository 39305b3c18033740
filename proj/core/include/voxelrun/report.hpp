#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "voxelrun/diagnostics.hpp"

namespace voxelrun::report {

namespace fs = std::filesystem;

struct FenceSummary {
  std::string metric;
  std::size_t n_values = 0;
  double lo_thresh = 0.0;
  double hi_thresh = 0.0;
  std::vector<std::size_t> outliers;

  static FenceSummary from(const diagnostics::OutlierReport& r);
};

/// What `diagnose` leaves behind (diagnostics.json).
struct DiagnosticsSummary {
  std::string image;
  std::size_t n_volumes = 0;  // before dropping
  std::size_t dropped = 0;
  FenceSummary vol_std;
  FenceSummary rms_diff;
  std::optional<diagnostics::MrssComparison> mrss;
  std::vector<std::string> figures;  // relative to the summary's directory
};

struct ContrastSummary {
  std::string name;
  std::vector<double> weights;
  std::string tail;  // "two-sided" or "one-sided"
  double alpha = 0.05;
  double threshold = 0.0;  // Bonferroni per-voxel alpha
  std::size_t n_tests = 0;
  std::size_t n_significant = 0;
  double max_abs_t = 0.0;
  std::vector<std::string> files;
};

/// What `glm` leaves behind (results.json).
struct AnalysisSummary {
  std::string image;
  std::size_t n_scans = 0;
  std::size_t dropped = 0;
  double tr_s = 0.0;
  std::vector<std::string> columns;
  int df = 0;
  int rank = 0;
  std::optional<double> fwhm_mm;
  double mask_fraction = 0.0;
  std::size_t mask_voxels = 0;
  std::vector<ContrastSummary> contrasts;
  std::vector<std::string> figures;  // relative to the summary's directory
};

std::string to_json(const DiagnosticsSummary& s);
std::string to_json(const AnalysisSummary& s);
DiagnosticsSummary diagnostics_from_json(const std::string& text);
AnalysisSummary analysis_from_json(const std::string& text);

/// Inputs to the final report; figure paths are relative to the report
/// directory.
struct ReportArtifacts {
  std::optional<DiagnosticsSummary> diagnostics;
  std::optional<AnalysisSummary> analysis;
};

/// Deterministic Markdown. The analysis section is omitted when no
/// contrasts were configured.
std::string render_report(const ReportArtifacts& artifacts);

/// Writes out_dir/report.md atomically and returns its path.
fs::path write_report(const fs::path& out_dir, const ReportArtifacts& artifacts);

}  // namespace voxelrun::report
