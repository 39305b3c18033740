#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "voxelrun/diagnostics.hpp"
#include "voxelrun/error.hpp"
#include "voxelrun/fetch.hpp"
#include "voxelrun/figures.hpp"
#include "voxelrun/glm.hpp"
#include "voxelrun/image_ops.hpp"
#include "voxelrun/io.hpp"
#include "voxelrun/log.hpp"
#include "voxelrun/manifest.hpp"
#include "voxelrun/nifti.hpp"
#include "voxelrun/pipeline.hpp"

namespace voxelrun::cli {
namespace {

double resolve_tr(double requested, const Image& img) {
  const double tr = requested > 0.0 ? requested : img.tr_s();
  if (!(tr > 0.0)) fail(Errc::non_positive, "image has no TR; pass --tr");
  return tr;
}

void drop_leading(std::vector<design::Column>& columns, std::size_t n) {
  for (auto& c : columns) {
    c.values.erase(c.values.begin(), c.values.begin() + static_cast<std::ptrdiff_t>(n));
  }
}

design::DesignMatrix analysis_design(const RunConfig& config, std::size_t n_full,
                                     double tr) {
  auto tasks = task_columns(config, n_full, tr);
  if (config.drop >= n_full) fail(Errc::drop_too_many, "cannot drop every volume");
  drop_leading(tasks, config.drop);
  const std::size_t n = n_full - config.drop;
  std::vector<design::Column> confounds;
  if (config.drift_order > 0) confounds = design::drift_columns(n, config.drift_order);
  return design::assemble_design(tasks, confounds, n, tr);
}

std::size_t mosaic_cols(std::size_t k) {
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
}

void write_map_pgm(const Image& map, const fs::path& path) {
  Image finite = map;
  for (double& v : finite.data()) {
    if (!std::isfinite(v)) v = 0.0;
  }
  figures::write_pgm(figures::slice_mosaic(finite, mosaic_cols(map.shape()[2])), path);
}

std::string join_weights(const std::vector<double>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += format_real(w[i]);
  }
  return s;
}

std::string join_indices(const std::vector<std::size_t>& idx) {
  if (idx.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(idx[i]);
  }
  return s;
}

std::string results_text(const report::AnalysisSummary& s) {
  std::ostringstream os;
  os << "image: " << s.image << '\n'
     << "scans: " << s.n_scans << " (dropped " << s.dropped << ")\n"
     << "tr_s: " << format_real(s.tr_s) << '\n'
     << "columns:";
  for (const auto& c : s.columns) os << ' ' << c;
  os << '\n'
     << "rank: " << s.rank << '\n'
     << "df: " << s.df << '\n'
     << "fwhm_mm: " << (s.fwhm_mm ? format_real(*s.fwhm_mm) : std::string("none")) << '\n'
     << "mask_voxels: " << s.mask_voxels << '\n';
  for (const auto& c : s.contrasts) {
    os << c.name << ": weights [" << join_weights(c.weights) << "] " << c.tail
       << " alpha " << format_real(c.alpha) << " threshold " << format_real(c.threshold)
       << " significant " << c.n_significant << " of " << c.n_tests
       << " max_abs_t " << format_real(c.max_abs_t) << '\n';
  }
  return os.str();
}

fs::path self_dir() {
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::path{} : exe.parent_path();
}

fs::path rebase(const fs::path& from_dir, const std::string& name, const fs::path& to_dir) {
  const fs::path target = fs::absolute(from_dir / name).lexically_normal();
  return target.lexically_relative(fs::absolute(to_dir).lexically_normal());
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (drift_order < 0 || drift_order > 2) {
    fail(Errc::unsupported_order, "drift order must be 0, 1 or 2");
  }
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    fail(Errc::invalid_argument, "mask fraction must lie in (0, 1)");
  }
  if (tr_s < 0.0) fail(Errc::non_positive, "TR must be positive");
  if (smooth_fwhm_mm && !(*smooth_fwhm_mm > 0.0)) {
    fail(Errc::non_positive, "FWHM must be positive");
  }
  if (events_paths.empty() && parametric_paths.empty()) {
    fail(Errc::invalid_argument, "at least one events file is required");
  }
}

std::vector<design::Column> task_columns(const RunConfig& config, std::size_t n_scans,
                                         double tr_s) {
  std::vector<design::Column> cols;
  for (const auto& path : config.events_paths) {
    const auto events = design::load_events(path);
    cols.push_back({path.stem().string(),
                    design::hemodynamic_regressor(events, n_scans, tr_s, config.hrf,
                                                  config.dt_frac)});
  }
  for (const auto& path : config.parametric_paths) {
    auto events = design::load_events(path);
    std::vector<double> modulators;
    modulators.reserve(events.size());
    for (auto& e : events) {
      modulators.push_back(e.amplitude);
      e.amplitude = 1.0;
    }
    const auto modulated = design::parametric_regressor(events, modulators);
    cols.push_back({path.stem().string(),
                    design::hemodynamic_regressor(events, n_scans, tr_s, config.hrf,
                                                  config.dt_frac)});
    cols.push_back({path.stem().string() + "_pm",
                    design::hemodynamic_regressor(modulated, n_scans, tr_s, config.hrf,
                                                  config.dt_frac)});
  }
  return cols;
}

report::AnalysisSummary glm_command(const RunConfig& config) {
  config.validate();
  Image img = nifti::load_image(config.image_path);
  const double tr = resolve_tr(config.tr_s, img);
  const design::DesignMatrix X = analysis_design(config, img.n_volumes(), tr);
  if (config.drop > 0) img = drop_initial(img, config.drop);

  std::vector<glm::Contrast> contrasts;
  for (const auto& [name, weights] : config.contrasts) {
    if (static_cast<Eigen::Index>(weights.size()) != X.n_columns()) {
      fail(Errc::length_mismatch, "contrast " + name + " has " +
                                      std::to_string(weights.size()) + " weights for " +
                                      std::to_string(X.n_columns()) + " design columns");
    }
    contrasts.emplace_back(std::span<const double>(weights));
  }

  const Image analysed = config.smooth_fwhm_mm
                             ? image_ops::gaussian_smooth(img, {*config.smooth_fwhm_mm})
                             : img;
  const Mask mask = image_ops::brain_mask(image_ops::mean_volume(img), config.mask_fraction);
  if (mask.count() == 0) fail(Errc::invalid_argument, "brain mask is empty");
  const glm::GlmFit fitted = glm::fit(voxel_matrix(analysed, &mask), X);

  const fs::path& out = config.out_dir;
  fs::create_directories(out);
  write_file_atomic(out / "design.txt", design::format_design(X));

  report::AnalysisSummary s;
  s.image = config.image_path.string();
  s.n_scans = static_cast<std::size_t>(X.n_scans());
  s.dropped = config.drop;
  s.tr_s = tr;
  s.columns = X.column_names;
  s.df = fitted.df;
  s.rank = fitted.rank;
  s.fwhm_mm = config.smooth_fwhm_mm;
  s.mask_fraction = config.mask_fraction;
  s.mask_voxels = mask.count();

  std::vector<std::vector<double>> series;
  for (Eigen::Index c = 1; c < X.n_columns(); ++c) {
    series.emplace_back(X.X.col(c).data(), X.X.col(c).data() + X.n_scans());
  }
  figures::write_svg_lines(series, {}, {}, out / "design.svg", "design columns");
  s.figures.push_back("design.svg");

  const std::size_t n_tasks = config.events_paths.size() + 2 * config.parametric_paths.size();
  for (std::size_t c = 1; c <= n_tasks; ++c) {
    const auto col = X.X.col(static_cast<Eigen::Index>(c));
    const std::vector<double> regressor(col.data(), col.data() + col.size());
    const glm::StatMap r = glm::correlation_map(analysed, regressor, &mask);
    nifti::save_image(r.values, out / (X.column_names[c] + "_r.nii"));
  }

  const double threshold = glm::bonferroni_threshold(config.alpha, mask.count());
  for (std::size_t i = 0; i < contrasts.size(); ++i) {
    const std::string& name = config.contrasts[i].first;
    const glm::TResult t = glm::contrast_t(fitted, contrasts[i]);
    const Eigen::VectorXd p = glm::t_to_p(t.t, t.df, config.tail);
    const Image tmap = scatter(std::span<const double>(t.t.data(), t.t.size()), mask,
                               img.affine(), 0.0);
    const Image pmap =
        scatter(std::span<const double>(p.data(), p.size()), mask, img.affine(), 1.0);
    nifti::save_image(tmap, out / (name + "_t.nii"));
    nifti::save_image(pmap, out / (name + "_p.nii"));
    write_map_pgm(tmap, out / (name + "_t.pgm"));

    report::ContrastSummary cs;
    cs.name = name;
    cs.weights = config.contrasts[i].second;
    cs.tail = config.tail == stats::Tail::two_sided ? "two-sided" : "one-sided";
    cs.alpha = config.alpha;
    cs.threshold = threshold;
    cs.n_tests = mask.count();
    cs.n_significant = glm::count_below(p, threshold);
    for (Eigen::Index v = 0; v < t.t.size(); ++v) {
      if (std::isfinite(t.t[v])) cs.max_abs_t = std::max(cs.max_abs_t, std::abs(t.t[v]));
    }
    cs.files = {name + "_t.nii", name + "_p.nii", name + "_t.pgm"};
    s.figures.push_back(name + "_t.pgm");
    s.contrasts.push_back(std::move(cs));
  }

  write_file_atomic(out / "results.txt", results_text(s));
  write_file_atomic(out / "results.json", report::to_json(s));
  return s;
}

report::DiagnosticsSummary diagnose_command(const DiagnoseConfig& config) {
  const Image full = nifti::load_image(config.image_path);
  const Image img = config.drop > 0 ? drop_initial(full, config.drop) : full;
  const auto std_report = diagnostics::iqr_outliers(diagnostics::vol_std(img), config.scale,
                                                    diagnostics::Metric::vol_std);
  const auto rms_report = diagnostics::iqr_outliers(diagnostics::rms_diff(img), config.scale,
                                                    diagnostics::Metric::rms_diff);
  fs::create_directories(config.out_dir);
  const auto written =
      diagnostics::write_diagnostic_outputs(std_report, rms_report, config.out_dir);

  report::DiagnosticsSummary s;
  s.image = config.image_path.string();
  s.n_volumes = full.n_volumes();
  s.dropped = config.drop;
  s.vol_std = report::FenceSummary::from(std_report);
  s.rms_diff = report::FenceSummary::from(rms_report);
  for (const auto& name : written) {
    if (fs::path(name).extension() == ".svg") s.figures.push_back(name);
  }

  if (!config.events_paths.empty()) {
    RunConfig rc;
    rc.events_paths = config.events_paths;
    rc.drift_order = config.drift_order;
    rc.drop = config.drop;
    const double tr = resolve_tr(config.tr_s, full);
    const design::DesignMatrix X = analysis_design(rc, full.n_volumes(), tr);
    const Mask mask = image_ops::brain_mask(image_ops::mean_volume(img), config.mask_fraction);
    s.mrss = diagnostics::mrss_compare(img, X, std_report.outlier_indices, mask);
  }
  write_file_atomic(config.out_dir / "diagnostics.json", report::to_json(s));
  return s;
}

std::vector<double> parse_weights(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<double> w;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) fail(Errc::invalid_argument, "bad contrast weight '" + token + "'");
    w.push_back(v);
  }
  if (w.empty()) fail(Errc::invalid_argument, "empty contrast");
  return w;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"Reproducible single-run FMRI analysis", "voxelrun"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  bool quiet = false;
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--quiet,-q", quiet, "Suppress progress and warnings");

  auto* info = app.add_subcommand("info", "Print NIfTI header, shape and affine");
  std::string info_image;
  info->add_option("image", info_image, "NIfTI-1 file")->required();

  auto* fetch_cmd = app.add_subcommand("fetch", "Download files listed in a hash manifest");
  std::string fetch_manifest, base_url, dest = ".";
  fetch_cmd->add_option("manifest", fetch_manifest, "JSON manifest path->sha256")->required();
  fetch_cmd->add_option("--base-url", base_url, "URL the manifest paths are relative to")
      ->required();
  fetch_cmd->add_option("--dest", dest, "Destination directory");

  auto* validate_cmd = app.add_subcommand("validate", "Check files against a hash manifest");
  std::string validate_manifest, root = ".";
  validate_cmd->add_option("manifest", validate_manifest, "JSON manifest")->required();
  validate_cmd->add_option("--root", root, "Directory the manifest paths are relative to");

  auto* design_cmd = app.add_subcommand("design", "Build a design matrix from event files");
  RunConfig dcfg;
  std::size_t n_scans = 0;
  std::vector<std::string> design_events;
  design_cmd->add_option("events", design_events, "Event files (onset duration amplitude)")
      ->required();
  design_cmd->add_option("--tr", dcfg.tr_s, "Repetition time in seconds")->required();
  design_cmd->add_option("--n-scans", n_scans, "Number of scans")->required();
  design_cmd->add_option("--drift", dcfg.drift_order, "Polynomial drift order")
      ->check(CLI::IsMember({0, 1, 2}));
  design_cmd->add_option("--dt-frac", dcfg.dt_frac, "Time steps per TR for convolution")
      ->check(CLI::PositiveNumber);

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Volume std / RMS outlier diagnostics");
  DiagnoseConfig qcfg;
  std::string diag_image;
  std::vector<std::string> diag_events;
  diagnose_cmd->add_option("image", diag_image, "4D NIfTI-1 file")->required();
  diagnose_cmd->add_option("--drop", qcfg.drop, "Initial volumes to discard");
  diagnose_cmd->add_option("--scale", qcfg.scale, "IQR multiplier")
      ->check(CLI::PositiveNumber);
  diagnose_cmd->add_option("--events", diag_events, "Event files for the MRSS comparison");
  diagnose_cmd->add_option("--tr", qcfg.tr_s, "Override the header TR");
  diagnose_cmd->add_option("--drift", qcfg.drift_order, "Polynomial drift order")
      ->check(CLI::IsMember({0, 1, 2}));
  diagnose_cmd->add_option("--mask-fraction", qcfg.mask_fraction, "Mask threshold fraction");

  auto* smooth_cmd = app.add_subcommand("smooth", "Gaussian-smooth every volume");
  std::string smooth_image;
  double smooth_fwhm = 0.0;
  smooth_cmd->add_option("image", smooth_image, "NIfTI-1 file")->required();
  smooth_cmd->add_option("--fwhm", smooth_fwhm, "Kernel FWHM in mm")->required();

  auto* glm_cmd = app.add_subcommand("glm", "Fit the voxelwise GLM and threshold contrasts");
  RunConfig gcfg;
  std::string glm_image;
  std::vector<std::string> glm_events, glm_parametric, glm_contrasts;
  std::optional<double> glm_fwhm;
  bool one_sided = false;
  glm_cmd->add_option("image", glm_image, "4D NIfTI-1 file")->required();
  glm_cmd->add_option("--events", glm_events, "Event files, one task column each");
  glm_cmd->add_option("--parametric", glm_parametric,
                      "Event files whose third column is a parametric modulator");
  glm_cmd->add_option("--contrast", glm_contrasts, "Contrast weights, e.g. \"0 1 0 0\"");
  glm_cmd->add_option("--alpha", gcfg.alpha, "Family-wise alpha");
  glm_cmd->add_option("--fwhm", glm_fwhm, "Smoothing FWHM in mm");
  glm_cmd->add_option("--mask-fraction", gcfg.mask_fraction, "Mask threshold fraction");
  glm_cmd->add_option("--drift", gcfg.drift_order, "Polynomial drift order")
      ->check(CLI::IsMember({0, 1, 2}));
  glm_cmd->add_option("--drop", gcfg.drop, "Initial volumes to discard");
  glm_cmd->add_option("--tr", gcfg.tr_s, "Override the header TR");
  glm_cmd->add_option("--dt-frac", gcfg.dt_frac, "Time steps per TR for convolution")
      ->check(CLI::PositiveNumber);
  glm_cmd->add_flag("--one-sided", one_sided, "Upper-tail p-values");

  auto* run_cmd = app.add_subcommand("run", "Bring a pipeline target up to date");
  std::string target, pipeline_file = pipeline::kDefaultPipelineFile;
  bool use_hash = false;
  run_cmd->add_option("target", target, "Target (default: first rule)");
  run_cmd->add_option("-f,--file", pipeline_file, "Pipeline file");
  run_cmd->add_flag("--hash", use_hash, "Content-hash staleness instead of mtimes");

  auto* report_cmd = app.add_subcommand("report", "Write report.md from stage summaries");
  std::string eda_dir, analysis_dir;
  report_cmd->add_option("--eda", eda_dir, "Directory holding diagnostics.json");
  report_cmd->add_option("--analysis", analysis_dir, "Directory holding results.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "voxelrun: " << e.what() << '\n'
        << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  set_log_sink([&err](LogLevel level, std::string_view msg) {
    err << "voxelrun: " << (level == LogLevel::error ? "error" : "warning") << ": " << msg
        << '\n';
  });
  const LogLevel saved_level = log_level();
  if (quiet) set_log_level(LogLevel::error);
  struct Restore {
    LogLevel level;
    ~Restore() {
      set_log_sink(nullptr);
      set_log_level(level);
    }
  } restore{saved_level};

  const auto out_or = [&](const std::string& fallback) {
    return fs::path(out_dir.empty() ? fallback : out_dir);
  };

  try {
    if (info->parsed()) {
      const auto h = nifti::read_header(info_image);
      const Image img = nifti::load_image(info_image);
      const auto sh = img.shape();
      out << "file: " << info_image << '\n'
          << "shape: " << sh[0] << ' ' << sh[1] << ' ' << sh[2] << ' ' << sh[3] << '\n'
          << "datatype: " << h.datatype << " (bitpix " << h.bitpix << ")\n"
          << "byte_order: " << (h.byte_order == nifti::ByteOrder::little ? "little" : "big")
          << '\n'
          << "voxel_mm: " << format_real(h.pixdim[1]) << ' ' << format_real(h.pixdim[2])
          << ' ' << format_real(h.pixdim[3]) << '\n'
          << "tr_s: " << format_real(img.tr_s()) << '\n'
          << "scl: " << format_real(h.scl_slope) << ' ' << format_real(h.scl_inter) << '\n'
          << "sform_code: " << h.sform_code << '\n'
          << "affine:\n";
      for (int r = 0; r < 4; ++r) {
        out << ' ';
        for (int c = 0; c < 4; ++c) out << ' ' << format_real(img.affine()(r, c));
        out << '\n';
      }
    } else if (fetch_cmd->parsed()) {
      const auto m = manifest::load_manifest(fetch_manifest);
      const fs::path dest_dir = out_dir.empty() ? fs::path(dest) : fs::path(out_dir);
      for (const auto& [path, digest] : m.entries) {
        const auto outcome =
            fetch::fetch(fetch::join_url(base_url, path), dest_dir / path, digest);
        if (!quiet) {
          out << path << ": "
              << (outcome == fetch::FetchOutcome::cached ? "cached" : "downloaded") << '\n';
        }
      }
    } else if (validate_cmd->parsed()) {
      const auto m = manifest::load_manifest(validate_manifest);
      const auto results = manifest::validate_files(m, root);
      const std::string text = manifest::format_results(results);
      out << text;
      if (!out_dir.empty()) write_file_atomic(fs::path(out_dir) / "validate.txt", text);
      if (!manifest::all_ok(results)) {
        err << "voxelrun: validation failed\n";
        return 1;
      }
    } else if (design_cmd->parsed()) {
      for (const auto& e : design_events) dcfg.events_paths.emplace_back(e);
      if (!(dcfg.tr_s > 0.0)) fail(Errc::non_positive, "TR must be positive");
      auto tasks = task_columns(dcfg, n_scans, dcfg.tr_s);
      std::vector<design::Column> confounds;
      if (dcfg.drift_order > 0) confounds = design::drift_columns(n_scans, dcfg.drift_order);
      const auto X = design::assemble_design(tasks, confounds, n_scans, dcfg.tr_s);
      const std::string text = design::format_design(X);
      if (out_dir.empty()) {
        out << text;
      } else {
        write_file_atomic(fs::path(out_dir) / "design.txt", text);
      }
    } else if (diagnose_cmd->parsed()) {
      qcfg.image_path = diag_image;
      for (const auto& e : diag_events) qcfg.events_paths.emplace_back(e);
      qcfg.out_dir = out_or("out");
      const auto s = diagnose_command(qcfg);
      if (!quiet) {
        out << "vol_std outliers: " << join_indices(s.vol_std.outliers) << '\n'
            << "rms_diff outliers: " << join_indices(s.rms_diff.outliers) << '\n';
        if (s.mrss) {
          out << "mrss all: " << format_real(s.mrss->mrss_all)
              << " dropped: " << format_real(s.mrss->mrss_dropped) << '\n';
        }
      }
    } else if (smooth_cmd->parsed()) {
      const Image img = nifti::load_image(smooth_image);
      const fs::path dir = out_or(".");
      const fs::path dest_path = dir / (fs::path(smooth_image).stem().string() + "_smooth.nii");
      nifti::save_image(image_ops::gaussian_smooth(img, {smooth_fwhm}), dest_path);
      if (!quiet) out << dest_path.string() << '\n';
    } else if (glm_cmd->parsed()) {
      gcfg.image_path = glm_image;
      for (const auto& e : glm_events) gcfg.events_paths.emplace_back(e);
      for (const auto& e : glm_parametric) gcfg.parametric_paths.emplace_back(e);
      for (std::size_t i = 0; i < glm_contrasts.size(); ++i) {
        gcfg.contrasts.emplace_back("con" + std::to_string(i + 1),
                                    parse_weights(glm_contrasts[i]));
      }
      gcfg.smooth_fwhm_mm = glm_fwhm;
      gcfg.tail = one_sided ? stats::Tail::one_sided : stats::Tail::two_sided;
      gcfg.out_dir = out_or("out");
      const auto s = glm_command(gcfg);
      if (!quiet) {
        for (const auto& c : s.contrasts) {
          out << c.name << ": " << c.n_significant << " of " << c.n_tests
              << " voxels below " << format_real(c.threshold) << '\n';
        }
      }
    } else if (run_cmd->parsed()) {
      pipeline::RunOptions opts;
      opts.staleness = use_hash ? pipeline::Staleness::content_hash : pipeline::Staleness::mtime;
      const fs::path dir = self_dir();
      if (!dir.empty()) opts.execute.path_prepend.push_back(dir);
      opts.execute.log = quiet ? nullptr : &out;
      const auto report = pipeline::run(pipeline_file, target, opts);
      if (!quiet && report.commands_run() == 0) {
        out << "voxelrun: '" << (target.empty() ? "default target" : target)
            << "' is up to date\n";
      }
    } else if (report_cmd->parsed()) {
      if (eda_dir.empty() && analysis_dir.empty()) {
        err << "voxelrun: report needs --eda and/or --analysis\n" << report_cmd->help();
        return 2;
      }
      const fs::path dir = out_or("out");
      report::ReportArtifacts artifacts;
      if (!eda_dir.empty()) {
        auto d = report::diagnostics_from_json(read_file(fs::path(eda_dir) / "diagnostics.json"));
        for (auto& f : d.figures) f = rebase(eda_dir, f, dir).generic_string();
        artifacts.diagnostics = std::move(d);
      }
      if (!analysis_dir.empty()) {
        auto a = report::analysis_from_json(read_file(fs::path(analysis_dir) / "results.json"));
        for (auto& f : a.figures) f = rebase(analysis_dir, f, dir).generic_string();
        artifacts.analysis = std::move(a);
      }
      const fs::path path = report::write_report(dir, artifacts);
      if (!quiet) out << path.string() << '\n';
    }
  } catch (const RecipeFailed& e) {
    err << "voxelrun: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "voxelrun: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "voxelrun: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace voxelrun::cli
