#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxelrun/design.hpp"
#include "voxelrun/image.hpp"
#include "voxelrun/stats.hpp"

namespace voxelrun::glm {

/// Voxelwise least-squares fit. Columns of `beta` and entries of `mrss`
/// follow the column order of Y.
struct GlmFit {
  Eigen::MatrixXd beta;       // p x v
  Eigen::VectorXd mrss;       // residual sum of squares / df, per voxel
  int df = 0;                 // n - rank(X)
  int rank = 0;
  Eigen::MatrixXd xtx_pinv;   // (X'X)^+
  std::vector<std::string> design_names;
};

/// Weight vector over design columns. Construction rejects the zero vector.
class Contrast {
 public:
  explicit Contrast(Eigen::VectorXd weights);
  explicit Contrast(std::span<const double> weights);

  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  Eigen::Index size() const noexcept { return weights_.size(); }

 private:
  Eigen::VectorXd weights_;
};

struct TResult {
  Eigen::VectorXd t;
  int df = 0;
};

enum class StatKind { t, p, r, beta };

struct StatMap {
  StatKind kind = StatKind::t;
  Image values;  // 3D
  std::optional<int> df;
};

/// beta = X^+ Y via a complete orthogonal decomposition, so rank-deficient
/// designs get the minimum-norm solution. Throws shape_mismatch and
/// degenerate_design (df == 0).
GlmFit fit(const Eigen::MatrixXd& Y, const design::DesignMatrix& X);
GlmFit fit(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X);

/// t = c'beta / sqrt(mrss * c'(X'X)^+ c). A voxel with no residual variance
/// gets 0 when its effect is 0 and a signed infinity otherwise; both are
/// judged at rounding level.
TResult contrast_t(const GlmFit& fit, const Contrast& c);

/// Pearson r per in-mask voxel; constant voxel time-courses give 0 and
/// out-of-mask voxels are 0. Throws length_mismatch, constant_regressor.
StatMap correlation_map(const Image& data, std::span<const double> regressor,
                        const Mask* mask = nullptr);

double pearson_r(std::span<const double> x, std::span<const double> y);

/// alpha / n_tests.
double bonferroni_threshold(double alpha, std::size_t n_tests);

/// Per-voxel p values for a t vector.
Eigen::VectorXd t_to_p(const Eigen::VectorXd& t, int df,
                       stats::Tail tail = stats::Tail::two_sided);

/// Number of entries strictly below `threshold`.
std::size_t count_below(const Eigen::VectorXd& p, double threshold);

}  // namespace voxelrun::glm
