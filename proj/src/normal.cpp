#include "glmmp/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace glmmp::normal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standardized truncation on (alpha, beta), alpha < beta.
Truncated truncate_standard(double alpha, double beta) noexcept {
  if (!(alpha < beta)) return {-kInf, 0.0, 0.0};

  // Keep the bulk of the interval on the right of the mean by reflection, so
  // that one-tail cases only ever evaluate Mills ratios at positive arguments.
  if (beta <= 0.0) {
    Truncated r = truncate_standard(-beta, -alpha);
    r.mean = -r.mean;
    return r;
  }

  if (alpha >= 0.0) {
    const double m_alpha = mills_ratio(alpha);
    double r = 0.0;        // phi(beta) / phi(alpha)
    double r_m_beta = 0.0; // r * M(beta)
    double beta_r = 0.0;   // beta * r
    if (std::isfinite(beta)) {
      r = std::exp(-0.5 * (beta - alpha) * (beta + alpha));
      r_m_beta = r * mills_ratio(beta);
      beta_r = beta * r;
    }
    const double z = m_alpha - r_m_beta; // mass / phi(alpha)
    const double d1 = (1.0 - r) / z;
    const double d2 = (alpha - beta_r) / z;
    const double var = std::max(1.0 + d2 - d1 * d1, 0.0);
    return {log_pdf(alpha) + std::log(z), d1, var};
  }

  // alpha < 0 < beta: the interval contains the mode.
  const double mass = cdf(beta) - cdf(alpha);
  const double phi_a = std::isfinite(alpha) ? pdf(alpha) : 0.0;
  const double phi_b = std::isfinite(beta) ? pdf(beta) : 0.0;
  const double a_phi_a = std::isfinite(alpha) ? alpha * phi_a : 0.0;
  const double b_phi_b = std::isfinite(beta) ? beta * phi_b : 0.0;
  const double mean = (phi_a - phi_b) / mass;
  const double var = std::max(1.0 + (a_phi_a - b_phi_b) / mass - mean * mean, 0.0);
  return {std::log(mass), mean, var};
}

} // namespace

double log_pdf(double x) noexcept { return -0.5 * x * x - kLogSqrt2Pi; }

double log_pdf(double x, double mean, double var) noexcept {
  const double d = x - mean;
  return -0.5 * d * d / var - 0.5 * std::log(var) - kLogSqrt2Pi;
}

double pdf(double x) noexcept { return std::exp(log_pdf(x)); }

double cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_cdf(double x) noexcept {
  if (x >= 0.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  return log_pdf(x) + std::log(mills_ratio(-x));
}

double mills_ratio(double x) noexcept {
  if (x == kInf) return 0.0;
  if (x < 20.0) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2) / pdf(x);
  }
  // Laplace continued fraction, evaluated backwards.
  double t = x;
  for (int k = 40; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

Truncated truncate(double mean, double var, double lo, double hi) noexcept {
  const double sd = std::sqrt(var);
  const double alpha = (lo - mean) / sd;
  const double beta = (hi - mean) / sd;
  const Truncated s = truncate_standard(alpha, beta);
  return {s.log_mass, mean + sd * s.mean, var * s.variance};
}

} // namespace glmmp::normal
