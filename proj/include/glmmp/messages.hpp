#pragma once

#include <limits>

namespace glmmp {

inline constexpr double kDefaultVarianceFloor = 1e-12;
inline constexpr double kDefaultVarianceCap = 1e6;

/// Scalar Gaussian message N(mean, variance). An infinite variance encodes
/// an uninformative message.
struct GaussianMessage {
  double mean = 0.0;
  double variance = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool uninformative() const noexcept {
    return variance == std::numeric_limits<double>::infinity();
  }
  [[nodiscard]] double precision() const noexcept { return 1.0 / variance; }
};

/// EP extrinsic update: removes `input` from `post` in the precision domain.
/// The raw variance may come out negative or infinite; run the result through
/// sanitize_variance (or use ep_extrinsic_sanitized) before reusing it.
/// Throws InvalidMessage on non-finite means or non-positive variances.
GaussianMessage ep_extrinsic(const GaussianMessage& post, const GaussianMessage& input);

/// Product of two Gaussian densities (normalized). Both uninformative gives
/// an uninformative result with mean 0.
GaussianMessage gaussian_product(const GaussianMessage& a, const GaussianMessage& b);

/// clamp(v, floor, cap) for finite positive v; cap for v <= 0 or non-finite.
double sanitize_variance(double v, double floor, double cap) noexcept;

/// ep_extrinsic followed by sanitization. A non-positive or non-finite raw
/// variance marks the extrinsic message as uninformative: variance = cap and
/// mean = input.mean, so downstream residuals against the input vanish.
GaussianMessage ep_extrinsic_sanitized(const GaussianMessage& post, const GaussianMessage& input,
                                       double floor, double cap);

} // namespace glmmp
