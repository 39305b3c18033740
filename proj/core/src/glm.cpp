#include "voxelrun/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "voxelrun/error.hpp"

namespace voxelrun::glm {
namespace {

constexpr double kRoundoff = 1e3 * std::numeric_limits<double>::epsilon();

}  // namespace

Contrast::Contrast(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0 || (weights_.array() == 0.0).all()) {
    fail(Errc::zero_contrast, "contrast vector is zero");
  }
  if (!weights_.allFinite()) {
    fail(Errc::invalid_argument, "contrast vector has non-finite weights");
  }
}

Contrast::Contrast(std::span<const double> weights)
    : Contrast(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
          weights.data(), static_cast<Eigen::Index>(weights.size())))) {}

GlmFit fit(const Eigen::MatrixXd& Y, const design::DesignMatrix& X) {
  GlmFit out = fit(Y, X.X);
  out.design_names = X.column_names;
  return out;
}

GlmFit fit(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X) {
  if (Y.rows() != X.rows()) {
    fail(Errc::shape_mismatch, "data has " + std::to_string(Y.rows()) +
                                   " scans, design has " +
                                   std::to_string(X.rows()));
  }
  if (X.cols() == 0) fail(Errc::shape_mismatch, "design has no columns");

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
  GlmFit out;
  out.rank = static_cast<int>(cod.rank());
  out.df = static_cast<int>(X.rows()) - out.rank;
  if (out.df < 1) {
    fail(Errc::degenerate_design, "no residual degrees of freedom (n = " +
                                      std::to_string(X.rows()) + ", rank = " +
                                      std::to_string(out.rank) + ")");
  }
  const Eigen::MatrixXd pinv = cod.pseudoInverse();
  out.beta = pinv * Y;
  out.xtx_pinv = pinv * pinv.transpose();
  const Eigen::MatrixXd residuals = Y - X * out.beta;
  out.mrss = residuals.colwise().squaredNorm().transpose() / out.df;
  // An exact fit leaves residuals at rounding level; call those zero.
  const double tol = kRoundoff * static_cast<double>(X.rows());
  for (Eigen::Index v = 0; v < Y.cols(); ++v) {
    if (residuals.col(v).norm() <= tol * Y.col(v).norm()) out.mrss(v) = 0.0;
  }
  out.design_names.reserve(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    out.design_names.push_back("x" + std::to_string(c));
  }
  return out;
}

TResult contrast_t(const GlmFit& fit, const Contrast& c) {
  if (c.size() != fit.beta.rows()) {
    fail(Errc::length_mismatch, "contrast has " + std::to_string(c.size()) +
                                    " weights, design has " +
                                    std::to_string(fit.beta.rows()) + " columns");
  }
  if (fit.df < 1) fail(Errc::degenerate_design, "df < 1");
  const Eigen::VectorXd& w = c.weights();
  const double design_var = w.dot(fit.xtx_pinv * w);
  const double scale = fit.xtx_pinv.cwiseAbs().maxCoeff() * w.squaredNorm();
  if (!(design_var > 1e-14 * scale)) {
    fail(Errc::zero_variance, "contrast has no variance under this design");
  }
  const Eigen::VectorXd effect = fit.beta.transpose() * w;
  TResult out{Eigen::VectorXd(effect.size()), fit.df};
  const double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index v = 0; v < effect.size(); ++v) {
    const double se2 = fit.mrss(v) * design_var;
    if (se2 > 0.0) {
      out.t(v) = effect(v) / std::sqrt(se2);
    } else if (std::abs(effect(v)) <= kRoundoff * w.norm() * fit.beta.col(v).norm()) {
      out.t(v) = 0.0;
    } else {
      out.t(v) = effect(v) > 0.0 ? inf : -inf;
    }
  }
  return out;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    fail(Errc::length_mismatch, "pearson_r needs equal, nonzero lengths");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

StatMap correlation_map(const Image& data, std::span<const double> regressor,
                        const Mask* mask) {
  const std::size_t T = data.n_volumes();
  if (regressor.size() != T) {
    fail(Errc::length_mismatch, "regressor has " + std::to_string(regressor.size()) +
                                    " values, image has " + std::to_string(T) +
                                    " volumes");
  }
  if (std::all_of(regressor.begin(), regressor.end(),
                  [&](double v) { return v == regressor[0]; })) {
    fail(Errc::constant_regressor, "regressor is constant");
  }
  const std::size_t per = data.voxels_per_volume();
  if (mask != nullptr && mask->inside.size() != per) {
    fail(Errc::shape_mismatch, "mask does not match image");
  }
  const auto s = data.shape();
  StatMap out{StatKind::r, Image({s[0], s[1], s[2], 1}, data.affine(), data.tr_s()),
              std::nullopt};
  auto values = out.values.data();
  std::vector<double> course(T);
  for (std::size_t v = 0; v < per; ++v) {
    if (mask != nullptr && !mask->inside[v]) continue;
    for (std::size_t t = 0; t < T; ++t) course[t] = data.data()[t * per + v];
    values[v] = pearson_r(regressor, course);
  }
  return out;
}

double bonferroni_threshold(double alpha, std::size_t n_tests) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (n_tests < 1) fail(Errc::invalid_argument, "need at least one test");
  return alpha / static_cast<double>(n_tests);
}

Eigen::VectorXd t_to_p(const Eigen::VectorXd& t, int df, stats::Tail tail) {
  Eigen::VectorXd p(t.size());
  for (Eigen::Index v = 0; v < t.size(); ++v) p(v) = stats::t_to_p(t(v), df, tail);
  return p;
}

std::size_t count_below(const Eigen::VectorXd& p, double threshold) {
  return static_cast<std::size_t>((p.array() < threshold).count());
}

}  // namespace voxelrun::glm
