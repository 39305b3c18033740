#include "voxelrun/report.hpp"

#include <cstdio>
#include <json.hpp>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"

namespace voxelrun::report {
namespace {

using json = nlohmann::json;

json fences_json(const FenceSummary& f) {
  return {{"metric", f.metric},
          {"n_values", f.n_values},
          {"lo_thresh", f.lo_thresh},
          {"hi_thresh", f.hi_thresh},
          {"outliers", f.outliers}};
}

FenceSummary fences_from(const json& j) {
  FenceSummary f;
  f.metric = j.at("metric").get<std::string>();
  f.n_values = j.at("n_values").get<std::size_t>();
  f.lo_thresh = j.at("lo_thresh").get<double>();
  f.hi_thresh = j.at("hi_thresh").get<double>();
  f.outliers = j.at("outliers").get<std::vector<std::size_t>>();
  return f;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::invalid_argument, std::string("summary is not valid JSON: ") + e.what());
  }
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits + 2, v);
  return buf;
}

std::string index_list(const std::vector<std::size_t>& idx) {
  if (idx.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(idx[i]);
  }
  return out;
}

}  // namespace

FenceSummary FenceSummary::from(const diagnostics::OutlierReport& r) {
  return FenceSummary{diagnostics::to_string(r.metric), r.values.size(), r.lo_thresh,
                      r.hi_thresh, r.outlier_indices};
}

std::string to_json(const DiagnosticsSummary& s) {
  json j = {{"image", s.image},
            {"n_volumes", s.n_volumes},
            {"dropped", s.dropped},
            {"vol_std", fences_json(s.vol_std)},
            {"rms_diff", fences_json(s.rms_diff)},
            {"figures", s.figures}};
  if (s.mrss) {
    j["mrss"] = {{"mrss_all", s.mrss->mrss_all},
                 {"mrss_dropped", s.mrss->mrss_dropped},
                 {"df_all", s.mrss->df_all},
                 {"df_dropped", s.mrss->df_dropped}};
  }
  return j.dump(2) + "\n";
}

std::string to_json(const AnalysisSummary& s) {
  json contrasts = json::array();
  for (const auto& c : s.contrasts) {
    contrasts.push_back({{"name", c.name},
                         {"weights", c.weights},
                         {"tail", c.tail},
                         {"alpha", c.alpha},
                         {"threshold", c.threshold},
                         {"n_tests", c.n_tests},
                         {"n_significant", c.n_significant},
                         {"max_abs_t", c.max_abs_t},
                         {"files", c.files}});
  }
  json j = {{"image", s.image},
            {"n_scans", s.n_scans},
            {"dropped", s.dropped},
            {"tr_s", s.tr_s},
            {"columns", s.columns},
            {"df", s.df},
            {"rank", s.rank},
            {"mask_fraction", s.mask_fraction},
            {"mask_voxels", s.mask_voxels},
            {"contrasts", contrasts},
            {"figures", s.figures}};
  j["fwhm_mm"] = s.fwhm_mm ? json(*s.fwhm_mm) : json(nullptr);
  return j.dump(2) + "\n";
}

DiagnosticsSummary diagnostics_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    DiagnosticsSummary s;
    s.image = j.at("image").get<std::string>();
    s.n_volumes = j.at("n_volumes").get<std::size_t>();
    s.dropped = j.at("dropped").get<std::size_t>();
    s.vol_std = fences_from(j.at("vol_std"));
    s.rms_diff = fences_from(j.at("rms_diff"));
    s.figures = j.at("figures").get<std::vector<std::string>>();
    if (j.contains("mrss")) {
      const auto& m = j.at("mrss");
      s.mrss = diagnostics::MrssComparison{m.at("mrss_all").get<double>(),
                                           m.at("mrss_dropped").get<double>(),
                                           m.at("df_all").get<int>(),
                                           m.at("df_dropped").get<int>()};
    }
    return s;
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("bad diagnostics summary: ") + e.what());
  }
}

AnalysisSummary analysis_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    AnalysisSummary s;
    s.image = j.at("image").get<std::string>();
    s.n_scans = j.at("n_scans").get<std::size_t>();
    s.dropped = j.at("dropped").get<std::size_t>();
    s.tr_s = j.at("tr_s").get<double>();
    s.columns = j.at("columns").get<std::vector<std::string>>();
    s.df = j.at("df").get<int>();
    s.rank = j.at("rank").get<int>();
    s.mask_fraction = j.at("mask_fraction").get<double>();
    s.mask_voxels = j.at("mask_voxels").get<std::size_t>();
    if (!j.at("fwhm_mm").is_null()) s.fwhm_mm = j.at("fwhm_mm").get<double>();
    for (const auto& c : j.at("contrasts")) {
      ContrastSummary cs;
      cs.name = c.at("name").get<std::string>();
      cs.weights = c.at("weights").get<std::vector<double>>();
      cs.tail = c.at("tail").get<std::string>();
      cs.alpha = c.at("alpha").get<double>();
      cs.threshold = c.at("threshold").get<double>();
      cs.n_tests = c.at("n_tests").get<std::size_t>();
      cs.n_significant = c.at("n_significant").get<std::size_t>();
      cs.max_abs_t = c.at("max_abs_t").get<double>();
      cs.files = c.at("files").get<std::vector<std::string>>();
      s.contrasts.push_back(std::move(cs));
    }
    s.figures = j.at("figures").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("bad analysis summary: ") + e.what());
  }
}

std::string render_report(const ReportArtifacts& a) {
  std::string md = "# Single-run FMRI analysis report\n\n";

  md += "## Dataset\n\n";
  const std::string image = a.analysis ? a.analysis->image
                            : a.diagnostics ? a.diagnostics->image
                                            : std::string("(none)");
  md += "- Image: `" + image + "`\n";
  if (a.diagnostics) {
    md += "- Volumes: " + std::to_string(a.diagnostics->n_volumes) + " (first " +
          std::to_string(a.diagnostics->dropped) + " dropped, " +
          std::to_string(a.diagnostics->n_volumes - a.diagnostics->dropped) +
          " analysed)\n";
  }
  md += "\n";

  if (a.diagnostics) {
    const auto& d = *a.diagnostics;
    md += "## Diagnostics\n\n";
    md += "Outlier indices are relative to the series after dropping the first " +
          std::to_string(d.dropped) + " volumes.\n\n";
    md += "| Metric | Values | Lower fence | Upper fence | Outliers |\n";
    md += "|---|---|---|---|---|\n";
    for (const FenceSummary* f : {&d.vol_std, &d.rms_diff}) {
      md += "| " + f->metric + " | " + std::to_string(f->n_values) + " | " +
            fixed(f->lo_thresh) + " | " + fixed(f->hi_thresh) + " | " +
            index_list(f->outliers) + " |\n";
    }
    md += "\n";
    if (d.mrss) {
      md += "Residual variance with and without the volume-std outlier scans:\n\n";
      md += "| Fit | Mean MRSS | df |\n|---|---|---|\n";
      md += "| All scans | " + fixed(d.mrss->mrss_all) + " | " +
            std::to_string(d.mrss->df_all) + " |\n";
      md += "| Outliers removed | " + fixed(d.mrss->mrss_dropped) + " | " +
            std::to_string(d.mrss->df_dropped) + " |\n\n";
    }
    for (const auto& fig : d.figures) md += "![" + fig + "](" + fig + ")\n\n";
  }

  if (a.analysis && !a.analysis->contrasts.empty()) {
    const auto& s = *a.analysis;
    md += "## General linear model\n\n";
    md += "- Scans: " + std::to_string(s.n_scans) + ", TR " + fixed(s.tr_s) + " s\n";
    md += "- Design columns:";
    for (const auto& c : s.columns) md += " `" + c + "`";
    md += "\n- Rank " + std::to_string(s.rank) + ", residual df " + std::to_string(s.df) + "\n";
    md += "- Smoothing FWHM: " + (s.fwhm_mm ? fixed(*s.fwhm_mm) + " mm" : std::string("none")) + "\n";
    md += "- Mask: " + std::to_string(s.mask_voxels) + " voxels (mean > " +
          fixed(s.mask_fraction) + " x max)\n\n";
    md += "| Contrast | Weights | Tail | Bonferroni alpha | Significant voxels | max abs t |\n";
    md += "|---|---|---|---|---|---|\n";
    for (const auto& c : s.contrasts) {
      std::string w;
      for (std::size_t i = 0; i < c.weights.size(); ++i) {
        if (i) w += ' ';
        w += fixed(c.weights[i]);
      }
      md += "| " + c.name + " | " + w + " | " + c.tail + " | " + fixed(c.threshold) +
            " (" + fixed(c.alpha) + " / " + std::to_string(c.n_tests) + ") | " +
            std::to_string(c.n_significant) + " | " + fixed(c.max_abs_t) + " |\n";
    }
    md += "\n";
    for (const auto& fig : s.figures) md += "![" + fig + "](" + fig + ")\n\n";
  }
  return md;
}

fs::path write_report(const fs::path& out_dir, const ReportArtifacts& artifacts) {
  const fs::path path = out_dir / "report.md";
  write_file_atomic(path, render_report(artifacts));
  return path;
}

}  // namespace voxelrun::report
