#include "voxelrun/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"

namespace voxelrun::figures {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd slice_mosaic(const Image& volume, std::size_t cols) {
  if (cols < 1) fail(Errc::invalid_argument, "mosaic needs at least one column");
  const auto s = volume.shape();
  const std::size_t rows = (s[2] + cols - 1) / cols;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows * s[1]),
                                              static_cast<Eigen::Index>(cols * s[0]));
  for (std::size_t k = 0; k < s[2]; ++k) {
    const std::size_t r0 = (k / cols) * s[1];
    const std::size_t c0 = (k % cols) * s[0];
    for (std::size_t j = 0; j < s[1]; ++j) {
      for (std::size_t i = 0; i < s[0]; ++i) {
        out(static_cast<Eigen::Index>(r0 + j), static_cast<Eigen::Index>(c0 + i)) =
            volume(i, j, k, 0);
      }
    }
  }
  return out;
}

std::string encode_pgm(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) fail(Errc::invalid_argument, "PGM input must be finite");
  std::string out = "P5\n" + std::to_string(m.cols()) + " " +
                    std::to_string(m.rows()) + "\n255\n";
  const double lo = m.size() ? m.minCoeff() : 0.0;
  const double hi = m.size() ? m.maxCoeff() : 0.0;
  const double range = hi - lo;
  out.reserve(out.size() + static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double scaled = range > 0.0 ? (m(r, c) - lo) / range * 255.0 : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(
          std::clamp(std::lround(scaled), 0L, 255L)));
    }
  }
  return out;
}

void write_pgm(const Eigen::MatrixXd& matrix, const fs::path& path) {
  write_file_atomic(path, encode_pgm(matrix));
}

std::string render_svg_lines(const std::vector<std::vector<double>>& series,
                             const std::vector<Marker>& markers,
                             const std::vector<double>& hlines,
                             const std::string& title) {
  double x_max = 1.0;
  double y_lo = 0.0, y_hi = 0.0;
  bool any = false;
  auto include = [&](double y) {
    if (!std::isfinite(y)) return;
    if (!any) { y_lo = y_hi = y; any = true; }
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  };
  for (const auto& s : series) {
    if (s.size() > 1) x_max = std::max(x_max, static_cast<double>(s.size() - 1));
    for (double y : s) include(y);
  }
  for (const auto& m : markers) {
    x_max = std::max(x_max, m.x);
    include(m.y);
  }
  for (double y : hlines) include(y);
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto px = [&](double x) { return kMargin + x / x_max * (kWidth - 2 * kMargin); };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  };

  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
      "width=\"800\" height=\"600\">\n"
      "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kHeight - kMargin) +
         "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" + num(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kMargin) + "\" x2=\"" +
         num(kMargin) + "\" y2=\"" + num(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  out += "<text x=\"5\" y=\"" + num(py(y_hi - pad) + 4) + "\" font-size=\"10\">" +
         num(y_hi - pad) + "</text>\n";
  out += "<text x=\"5\" y=\"" + num(py(y_lo + pad) + 4) + "\" font-size=\"10\">" +
         num(y_lo + pad) + "</text>\n";
  if (!title.empty()) {
    out += "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" +
           escape_xml(title) + "</text>\n";
  }
  for (double y : hlines) {
    if (!std::isfinite(y)) continue;
    out += "<line class=\"fence\" x1=\"" + num(kMargin) + "\" y1=\"" + num(py(y)) +
           "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" + num(py(y)) +
           "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  }
  static const char* kColors[] = {"steelblue", "darkorange", "seagreen", "purple"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += kColors[s % 4];
    out += "\" points=\"";
    for (std::size_t i = 0; i < series[s].size(); ++i) {
      if (!std::isfinite(series[s][i])) continue;
      if (i > 0) out += ' ';
      out += num(px(static_cast<double>(i))) + "," + num(py(series[s][i]));
    }
    out += "\"/>\n";
  }
  for (const auto& m : markers) {
    if (!std::isfinite(m.y)) continue;
    out += "<circle class=\"outlier\" cx=\"" + num(px(m.x)) + "\" cy=\"" +
           num(py(m.y)) + "\" r=\"5\" fill=\"none\" stroke=\"red\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg_lines(const std::vector<std::vector<double>>& series,
                     const std::vector<Marker>& markers,
                     const std::vector<double>& hlines, const fs::path& path,
                     const std::string& title) {
  write_file_atomic(path, render_svg_lines(series, markers, hlines, title));
}

}  // namespace voxelrun::figures
