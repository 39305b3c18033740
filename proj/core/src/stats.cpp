#include "voxelrun/stats.hpp"

#include <cmath>
#include <limits>

#include "voxelrun/error.hpp"

namespace voxelrun::stats {
namespace {

constexpr double kEps = 1e-12;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

// Continued fraction for I_x(a, b), valid (fast) for x < (a + 1)/(a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(Errc::invalid_argument, "incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(Errc::invalid_argument, "incomplete beta needs x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_to_p(double t, int df, Tail tail) {
  if (df < 1) fail(Errc::invalid_argument, "t_to_p needs df >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();

  double two_tail;  // P(|T| >= |t|)
  if (std::isinf(t)) {
    two_tail = 0.0;
  } else {
    const double nu = df;
    const double x = nu / (nu + t * t);
    two_tail = incomplete_beta(nu / 2.0, 0.5, x);
  }
  if (tail == Tail::two_sided) return std::min(1.0, two_tail);
  const double upper = 0.5 * two_tail;
  return t >= 0.0 ? upper : 1.0 - upper;
}

}  // namespace voxelrun::stats
