#include "glmmp/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "glmmp/error.hpp"
#include "glmmp/normal.hpp"

namespace glmmp {

namespace {

ChannelMoments awgn_moments(double noise_var, double y, double zp, double vp) {
  const double var = 1.0 / (1.0 / noise_var + 1.0 / vp);
  return {var * (y / noise_var + zp / vp), var};
}

// The posterior splits over the three branches of Q. On the two saturated
// branches the likelihood is constant in z, leaving a truncated pseudo-prior;
// on the linear branch it is a Gaussian product truncated to (-theta, theta).
ChannelMoments clipped_moments(double noise_var, double theta, double y, double zp, double vp) {
  constexpr double inf = std::numeric_limits<double>::infinity();

  const auto lower = normal::truncate(zp, vp, -inf, -theta);
  const auto upper = normal::truncate(zp, vp, theta, inf);

  const double mid_var = vp * noise_var / (vp + noise_var);
  const double mid_mean = (zp * noise_var + y * vp) / (vp + noise_var);
  const auto middle = normal::truncate(mid_mean, mid_var, -theta, theta);

  const std::array<normal::Truncated, 3> parts{lower, middle, upper};
  const std::array<double, 3> log_w{
      normal::log_pdf(y, -theta, noise_var) + lower.log_mass,
      normal::log_pdf(y, zp, vp + noise_var) + middle.log_mass,
      normal::log_pdf(y, theta, noise_var) + upper.log_mass,
  };

  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::array<double, 3> w{};
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    w[i] = std::exp(log_w[i] - top);
    total += w[i];
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    w[i] /= total;
    if (w[i] > 0.0) mean += w[i] * parts[i].mean;
  }
  double var = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (w[i] == 0.0) continue;
    const double d = parts[i].mean - mean;
    var += w[i] * (parts[i].variance + d * d);
  }
  return {mean, var};
}

} // namespace

void ChannelSpec::validate() const {
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw DomainError("channel noise variance must be positive and finite, got " + std::to_string(noise_var));
  }
  if (kind == ChannelKind::clipped_awgn && !(clip_threshold > 0.0 && std::isfinite(clip_threshold))) {
    throw DomainError("clip threshold must be positive and finite, got " + std::to_string(clip_threshold));
  }
}

ChannelMoments channel_moments(const ChannelSpec& spec, double y, double z_pseudo, double v_pseudo) {
  if (!(v_pseudo > 0.0) || std::isnan(z_pseudo)) {
    throw DomainError("channel_moments: pseudo variance must be positive, got " + std::to_string(v_pseudo));
  }
  if (spec.kind == ChannelKind::awgn) return awgn_moments(spec.noise_var, y, z_pseudo, v_pseudo);
  return clipped_moments(spec.noise_var, spec.clip_threshold, y, z_pseudo, v_pseudo);
}

double clip(double z, double theta) noexcept {
  if (z <= -theta) return -theta;
  if (z >= theta) return theta;
  return z;
}

std::vector<double> channel_sample(const ChannelSpec& spec, std::span<const double> z, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xc4a7u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_var));

  std::vector<double> y(z.size());
  for (std::size_t m = 0; m < z.size(); ++m) {
    const double q = spec.kind == ChannelKind::clipped_awgn ? clip(z[m], spec.clip_threshold) : z[m];
    y[m] = q + noise(rng);
  }
  return y;
}

LStats l_stats(const ChannelSpec& spec, double y, double z_pseudo, double v_pseudo) {
  const ChannelMoments post = channel_moments(spec, y, z_pseudo, v_pseudo);
  return {(post.mean - z_pseudo) / v_pseudo, (1.0 - post.variance / v_pseudo) / v_pseudo};
}

double noise_var_from_snr_db(double snr_db) noexcept { return std::pow(10.0, -snr_db / 10.0); }

std::string_view to_string(ChannelKind kind) {
  return kind == ChannelKind::awgn ? "awgn" : "clipped_awgn";
}

} // namespace glmmp
