#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle {

std::vector<double> normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += X(i, r) * X(i, c);
      a[r][c] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += X(i, r) * y(i);
    a[r][p] = s;
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular normal equations");
    std::swap(a[col], a[pivot]);
    const double d = a[col][col];
    for (double& v : a[col]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t c = 0; c <= p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> b(p);
  for (std::size_t r = 0; r < p; ++r) b[r] = a[r][p];
  return b;
}

double simpson_two_sided_p(double t, int df, int intervals) {
  const double nu = df;
  const double log_norm = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) -
                          0.5 * std::log(nu * M_PI);
  const auto f = [&](double x) {
    return std::exp(log_norm - (nu + 1) / 2 * std::log1p(x * x / nu));
  };
  const double b = std::abs(t);
  if (b == 0.0) return 1.0;
  if (intervals % 2) ++intervals;
  const double h = b / intervals;
  double s = f(0.0) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 1.0 - 2.0 * s * h / 3.0;
}

double pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double ma = mean(a), mb = mean(b);
  double ss = 0.0;
  for (double x : a) ss += (x - ma) * (x - ma);
  for (double x : b) ss += (x - mb) * (x - mb);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sp2 = ss / (na + nb - 2.0);
  return (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
}

Fences brute_force_fences(const std::vector<double>& values, double scale) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  const auto q = [&](double pct) {
    const double pos = pct / 100.0 * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  const double q1 = q(25), q3 = q(75);
  Fences f{q1 - scale * (q3 - q1), q3 + scale * (q3 - q1), {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < f.lo || values[i] > f.hi) f.outliers.push_back(i);
  }
  return f;
}

std::vector<double> direct_convolve(const std::vector<double>& s, const std::vector<double>& k,
                                    double dt) {
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t m = 0; m < s.size(); ++m) {
    for (std::size_t j = 0; j < k.size() && j <= m; ++j) out[m] += s[m - j] * k[j];
    out[m] *= dt;
  }
  return out;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "voxelrun-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
