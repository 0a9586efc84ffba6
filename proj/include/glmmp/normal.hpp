#pragma once

// Numerically stable standard-normal primitives. Tail quantities are carried
// through Mills ratios so that truncated moments stay accurate far from the
// mean, where naive CDF differences cancel to zero.

namespace glmmp::normal {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_pdf(double x) noexcept;
double log_pdf(double x, double mean, double var) noexcept;
double pdf(double x) noexcept;

/// Phi(x).
double cdf(double x) noexcept;
/// log Phi(x), accurate for large negative x.
double log_cdf(double x) noexcept;

/// Mills ratio (1 - Phi(x)) / phi(x) for x >= 0.
double mills_ratio(double x) noexcept;

struct Truncated {
  double log_mass; // log P(lo < X < hi)
  double mean;
  double variance;
};

/// Moments of X ~ N(mean, var) restricted to (lo, hi). Either bound may be
/// infinite. An empty interval yields log_mass = -inf.
Truncated truncate(double mean, double var, double lo, double hi) noexcept;

} // namespace glmmp::normal
