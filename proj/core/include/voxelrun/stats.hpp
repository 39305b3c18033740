#pragma once

namespace voxelrun::stats {

enum class Tail { one_sided, two_sided };

/// Regularized incomplete beta I_x(a, b), evaluated with Lentz's continued
/// fraction to a relative convergence of 1e-12.
double incomplete_beta(double a, double b, double x);

/// Student-t tail probability. One-sided returns the upper tail P(T >= t);
/// two-sided returns P(|T| >= |t|). Infinite t maps to 0 (or 1 for the
/// one-sided lower end).
double t_to_p(double t, int df, Tail tail = Tail::two_sided);

}  // namespace voxelrun::stats
