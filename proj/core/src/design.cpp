#include "voxelrun/design.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"

namespace voxelrun::design {
namespace {

// Grid comparisons tolerate accumulated rounding in m * dt.
constexpr double kGridTol = 1e-9;

std::size_t grid_length(double span_s, double dt_s) {
  return static_cast<std::size_t>(std::ceil(span_s / dt_s - kGridTol));
}

bool parse_double(std::string_view token, double& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

EventList parse_events(std::string_view text) {
  EventList events;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty() || fields.front().front() == '#') continue;

    Event e;
    if (fields.size() != 3 || !parse_double(fields[0], e.onset_s) ||
        !parse_double(fields[1], e.duration_s) ||
        !parse_double(fields[2], e.amplitude)) {
      fail(Errc::malformed_line, "line " + std::to_string(line_no) +
                                     ": expected 'onset duration amplitude'");
    }
    if (e.onset_s < 0.0) {
      fail(Errc::negative_onset, "line " + std::to_string(line_no));
    }
    if (e.duration_s < 0.0) {
      fail(Errc::malformed_line, "line " + std::to_string(line_no) +
                                     ": negative duration");
    }
    events.push_back(e);
    if (end == text.size()) break;
  }
  return events;
}

EventList load_events(const fs::path& path) {
  return parse_events(read_file(path));
}

SampledSignal neural_signal(const EventList& events, double dt_s,
                            double total_s) {
  if (!(dt_s > 0.0) || !(total_s > 0.0)) {
    fail(Errc::invalid_argument, "dt and total duration must be positive");
  }
  SampledSignal out{0.0, dt_s, std::vector<double>(grid_length(total_s, dt_s), 0.0)};
  const std::size_t n = out.values.size();
  const double tol = kGridTol * dt_s;
  for (const Event& e : events) {
    if (e.duration_s == 0.0) {
      const auto m = static_cast<std::size_t>(std::floor(e.onset_s / dt_s + kGridTol));
      if (m < n) out.values[m] += e.amplitude;
      continue;
    }
    const double stop = e.onset_s + e.duration_s;
    auto m = static_cast<std::size_t>(std::max(0.0, std::floor(e.onset_s / dt_s) - 1.0));
    for (; m < n; ++m) {
      const double t = static_cast<double>(m) * dt_s + tol;
      if (t >= stop) break;
      if (t >= e.onset_s) out.values[m] += e.amplitude;
    }
  }
  return out;
}

double gamma_density(double t, double shape, double scale) {
  if (t <= 0.0) return 0.0;
  return std::exp((shape - 1.0) * std::log(t) - t / scale -
                  shape * std::log(scale) - std::lgamma(shape));
}

SampledSignal hrf_samples(const HrfParams& p, double dt_s) {
  if (!(dt_s > 0.0)) fail(Errc::invalid_argument, "dt must be positive");
  if (!(p.peak_shape > 1.0) || !(p.undershoot_shape > 1.0) ||
      !(p.peak_scale > 0.0) || !(p.undershoot_scale > 0.0) ||
      !(p.undershoot_ratio >= 0.0 && p.undershoot_ratio < 1.0) ||
      !(p.duration_s > 0.0)) {
    fail(Errc::invalid_argument, "HRF parameters out of range");
  }
  SampledSignal out{0.0, dt_s, std::vector<double>(grid_length(p.duration_s, dt_s))};
  for (std::size_t m = 0; m < out.values.size(); ++m) {
    const double t = static_cast<double>(m) * dt_s;
    out.values[m] = gamma_density(t, p.peak_shape, p.peak_scale) -
                    p.undershoot_ratio *
                        gamma_density(t, p.undershoot_shape, p.undershoot_scale);
  }
  const double peak = *std::max_element(out.values.begin(), out.values.end());
  if (peak > 0.0) {
    for (double& v : out.values) v /= peak;
  }
  return out;
}

SampledSignal convolve(const SampledSignal& signal,
                       const SampledSignal& kernel) {
  if (std::abs(signal.dt_s - kernel.dt_s) >
      1e-12 * std::max(signal.dt_s, kernel.dt_s)) {
    fail(Errc::dt_mismatch, "signal and kernel sampling intervals differ");
  }
  const std::size_t n = signal.values.size();
  const std::size_t k_len = kernel.values.size();
  SampledSignal out{signal.start_s, signal.dt_s, std::vector<double>(n, 0.0)};
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t k_max = std::min(m + 1, k_len);
    double acc = 0.0;
    for (std::size_t k = 0; k < k_max; ++k) {
      acc += signal.values[m - k] * kernel.values[k];
    }
    out.values[m] = signal.dt_s * acc;
  }
  return out;
}

std::vector<double> sample_at(const SampledSignal& signal,
                              std::span<const double> times_s) {
  std::vector<double> out(times_s.size(), 0.0);
  const std::size_t n = signal.values.size();
  if (n == 0) return out;
  const double last = static_cast<double>(n - 1);
  for (std::size_t q = 0; q < times_s.size(); ++q) {
    double u = (times_s[q] - signal.start_s) / signal.dt_s;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < kGridTol) u = nearest;
    if (!(u >= 0.0) || u > last) continue;
    const auto i = static_cast<std::size_t>(std::floor(u));
    const double frac = u - static_cast<double>(i);
    if (frac == 0.0 || i + 1 >= n) {
      out[q] = signal.values[i];
    } else {
      out[q] = signal.values[i] + frac * (signal.values[i + 1] - signal.values[i]);
    }
  }
  return out;
}

EventList parametric_regressor(const EventList& events,
                               std::span<const double> modulators) {
  if (modulators.size() != events.size()) {
    fail(Errc::length_mismatch, std::to_string(events.size()) + " events but " +
                                    std::to_string(modulators.size()) +
                                    " modulators");
  }
  EventList out = events;
  if (out.empty()) return out;
  const double mean = std::accumulate(modulators.begin(), modulators.end(), 0.0) /
                      static_cast<double>(modulators.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].amplitude = modulators[i] - mean;
  }
  return out;
}

std::vector<Column> drift_columns(std::size_t n_scans, int order) {
  if (order != 1 && order != 2) {
    fail(Errc::unsupported_order, "drift order must be 1 or 2, got " +
                                      std::to_string(order));
  }
  if (n_scans < 3) fail(Errc::invalid_argument, "drift needs at least 3 scans");
  std::vector<Column> cols;
  for (int power = 1; power <= order; ++power) {
    Column c{"drift" + std::to_string(power), std::vector<double>(n_scans)};
    for (std::size_t n = 0; n < n_scans; ++n) {
      const double t = -1.0 + 2.0 * static_cast<double>(n) /
                                  static_cast<double>(n_scans - 1);
      c.values[n] = std::pow(t, power);
    }
    const double mean = std::accumulate(c.values.begin(), c.values.end(), 0.0) /
                        static_cast<double>(n_scans);
    for (double& v : c.values) v -= mean;
    cols.push_back(std::move(c));
  }
  return cols;
}

std::vector<double> scan_times(std::size_t n_scans, double tr_s,
                               double offset_s) {
  std::vector<double> t(n_scans);
  for (std::size_t n = 0; n < n_scans; ++n) {
    t[n] = offset_s + static_cast<double>(n) * tr_s;
  }
  return t;
}

std::vector<double> hemodynamic_regressor(const EventList& events,
                                          std::size_t n_scans, double tr_s,
                                          const HrfParams& hrf,
                                          double dt_frac, double offset_s) {
  if (!(tr_s > 0.0) || !(dt_frac >= 1.0) || n_scans == 0) {
    fail(Errc::invalid_argument, "need TR > 0, dt fraction >= 1 and scans > 0");
  }
  const double dt = tr_s / dt_frac;
  const double total = offset_s + static_cast<double>(n_scans) * tr_s;
  const SampledSignal neural = neural_signal(events, dt, total);
  const SampledSignal response = convolve(neural, hrf_samples(hrf, dt));
  const auto times = scan_times(n_scans, tr_s, offset_s);
  return sample_at(response, times);
}

DesignMatrix assemble_design(const std::vector<Column>& task_columns,
                             const std::vector<Column>& confound_columns,
                             std::size_t n_scans, double tr_s) {
  const std::size_t p = 1 + task_columns.size() + confound_columns.size();
  DesignMatrix d;
  d.tr_s = tr_s;
  d.X.resize(static_cast<Eigen::Index>(n_scans), static_cast<Eigen::Index>(p));
  d.X.col(0).setOnes();
  d.column_names.push_back("intercept");

  Eigen::Index c = 1;
  auto add = [&](const Column& col) {
    if (col.values.size() != n_scans) {
      fail(Errc::length_mismatch, "column '" + col.name + "' has " +
                                      std::to_string(col.values.size()) +
                                      " rows, expected " + std::to_string(n_scans));
    }
    if (std::all_of(col.values.begin(), col.values.end(),
                    [](double v) { return v == 0.0; })) {
      fail(Errc::all_zero_column, "column '" + col.name + "' is all zeros");
    }
    for (std::size_t n = 0; n < n_scans; ++n) {
      d.X(static_cast<Eigen::Index>(n), c) = col.values[n];
    }
    d.column_names.push_back(col.name);
    ++c;
  };
  for (const auto& col : task_columns) add(col);
  for (const auto& col : confound_columns) add(col);
  return d;
}

std::string format_design(const DesignMatrix& design) {
  std::string out = "#";
  for (const auto& name : design.column_names) out += " " + name;
  out += '\n';
  for (Eigen::Index r = 0; r < design.X.rows(); ++r) {
    for (Eigen::Index c = 0; c < design.X.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_real(design.X(r, c));
    }
    out += '\n';
  }
  return out;
}

DesignMatrix drop_rows(const DesignMatrix& design,
                       std::span<const std::size_t> rows) {
  std::vector<bool> drop(static_cast<std::size_t>(design.X.rows()), false);
  for (std::size_t r : rows) {
    if (r >= drop.size()) fail(Errc::index_out_of_range, "row " + std::to_string(r));
    drop[r] = true;
  }
  const auto kept = static_cast<Eigen::Index>(std::count(drop.begin(), drop.end(), false));
  DesignMatrix out{Eigen::MatrixXd(kept, design.X.cols()), design.column_names, design.tr_s};
  Eigen::Index next = 0;
  for (Eigen::Index r = 0; r < design.X.rows(); ++r) {
    if (!drop[static_cast<std::size_t>(r)]) out.X.row(next++) = design.X.row(r);
  }
  return out;
}

}  // namespace voxelrun::design
