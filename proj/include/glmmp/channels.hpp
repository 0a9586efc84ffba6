#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace glmmp {

enum class ChannelKind { awgn, clipped_awgn };

/// Measurement channel y = Q(z) + n, n ~ N(0, noise_var). Q is the identity
/// for awgn and saturates at +/- clip_threshold for clipped_awgn.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::awgn;
  double noise_var = 1.0;
  double clip_threshold = std::numeric_limits<double>::infinity();

  static ChannelSpec awgn(double noise_var) { return {ChannelKind::awgn, noise_var}; }
  static ChannelSpec clipped(double noise_var, double theta) {
    return {ChannelKind::clipped_awgn, noise_var, theta};
  }

  void validate() const;
};

struct ChannelMoments {
  double mean;
  double variance;
};

/// Posterior moments of z given y under the pseudo-prior z ~ N(z_pseudo, v_pseudo).
/// Throws DomainError for v_pseudo <= 0.
ChannelMoments channel_moments(const ChannelSpec& spec, double y, double z_pseudo, double v_pseudo);

/// Saturation at +/- theta.
double clip(double z, double theta) noexcept;

/// y_m = Q(z_m) + N(0, noise_var), deterministic in `seed`.
std::vector<double> channel_sample(const ChannelSpec& spec, std::span<const double> z, std::uint64_t seed);

struct LStats {
  double l_prime;
  double l_doubleprime;
};

/// Score statistics of the output node:
///   l' = (E{z|..} - z_pseudo) / v_pseudo,  l'' = (1 - var{z|..} / v_pseudo) / v_pseudo.
LStats l_stats(const ChannelSpec& spec, double y, double z_pseudo, double v_pseudo);

/// Noise variance for a transmit SNR in dB with a unit-power signal.
double noise_var_from_snr_db(double snr_db) noexcept;

std::string_view to_string(ChannelKind kind);

} // namespace glmmp
