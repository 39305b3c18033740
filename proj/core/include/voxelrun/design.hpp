#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voxelrun::design {

namespace fs = std::filesystem;

struct Event {
  double onset_s = 0.0;
  double duration_s = 0.0;
  double amplitude = 1.0;
};

using EventList = std::vector<Event>;

/// Uniformly sampled signal: values[m] is the signal at start_s + m * dt_s.
struct SampledSignal {
  double start_s = 0.0;
  double dt_s = 1.0;
  std::vector<double> values;
};

/// Double-gamma hemodynamic response parameters. Defaults are the usual
/// canonical shape: peak near 5 s, undershoot near 15 s.
struct HrfParams {
  double peak_shape = 6.0;
  double undershoot_shape = 16.0;
  double peak_scale = 1.0;
  double undershoot_scale = 1.0;
  double undershoot_ratio = 1.0 / 6.0;
  double duration_s = 30.0;
};

struct Column {
  std::string name;
  std::vector<double> values;
};

struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;
  double tr_s = 1.0;

  Eigen::Index n_scans() const noexcept { return X.rows(); }
  Eigen::Index n_columns() const noexcept { return X.cols(); }
};

/// Parses "onset duration amplitude" lines; blank lines and lines starting
/// with '#' are skipped.
EventList parse_events(std::string_view text);
EventList load_events(const fs::path& path);

/// Box-car neural model on a grid of ceil(total_s / dt_s) samples starting
/// at 0. Overlapping events add; zero-duration events put their amplitude
/// on the single sample containing the onset.
SampledSignal neural_signal(const EventList& events, double dt_s,
                            double total_s);

/// Gamma density t^(a-1) e^(-t/b) / (b^a Gamma(a)), zero for t <= 0.
double gamma_density(double t, double shape, double scale);

/// Double-gamma HRF sampled at m * dt_s over [0, duration_s), scaled to a
/// maximum of exactly 1.
SampledSignal hrf_samples(const HrfParams& params, double dt_s);

/// out[m] = dt * sum_k signal[m-k] * kernel[k], truncated to the signal
/// length. Throws dt_mismatch.
SampledSignal convolve(const SampledSignal& signal,
                       const SampledSignal& kernel);

/// Linear interpolation at arbitrary times; 0 outside the sampled span.
std::vector<double> sample_at(const SampledSignal& signal,
                              std::span<const double> times_s);

/// Copy of `events` with amplitudes replaced by the mean-centered
/// modulators. Throws length_mismatch.
EventList parametric_regressor(const EventList& events,
                               std::span<const double> modulators);

/// Mean-centered polynomial drift columns t^1..t^order with t spanning
/// [-1, 1] across scans. Columns are named "drift1", "drift2".
std::vector<Column> drift_columns(std::size_t n_scans, int order);

/// Scan onset times n * tr_s + offset_s for n in [0, n_scans).
std::vector<double> scan_times(std::size_t n_scans, double tr_s,
                               double offset_s = 0.0);

/// Convolved regressor for `events` sampled at scan onsets, built on a
/// grid of tr_s / dt_frac.
std::vector<double> hemodynamic_regressor(const EventList& events,
                                          std::size_t n_scans, double tr_s,
                                          const HrfParams& hrf = {},
                                          double dt_frac = 100.0,
                                          double offset_s = 0.0);

/// [intercept | task | confounds]. Throws length_mismatch, all_zero_column.
DesignMatrix assemble_design(const std::vector<Column>& task_columns,
                             const std::vector<Column>& confound_columns,
                             std::size_t n_scans, double tr_s);

/// "# name1 name2 ...\n" followed by one row per scan, 17 significant
/// digits, space separated.
std::string format_design(const DesignMatrix& design);

/// Design with the listed rows removed.
DesignMatrix drop_rows(const DesignMatrix& design,
                       std::span<const std::size_t> rows);

}  // namespace voxelrun::design
