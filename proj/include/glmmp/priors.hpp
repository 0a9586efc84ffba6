#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace glmmp {

enum class PriorKind { bernoulli_gaussian, gaussian, point_mass };

/// Signal prior p(x | q). One spec is shared by every component.
///
/// bernoulli_gaussian: x = 0 with probability 1 - lambda, otherwise
/// N(mean0, var0 / lambda). With mean0 = 0 and var0 = 1 the marginal variance
/// is 1 for every lambda.
struct PriorSpec {
  PriorKind kind = PriorKind::bernoulli_gaussian;
  double lambda = 0.5;
  double mean0 = 0.0;
  double var0 = 1.0;

  static PriorSpec bernoulli_gaussian(double lambda) { return {PriorKind::bernoulli_gaussian, lambda, 0.0, 1.0}; }
  static PriorSpec gaussian(double mean, double var) { return {PriorKind::gaussian, 1.0, mean, var}; }
  static PriorSpec point_mass(double at) { return {PriorKind::point_mass, 1.0, at, 1.0}; }

  /// Throws DomainError on lambda outside (0, 1] or non-positive var0.
  void validate() const;
};

/// Posterior moments of x given the pseudo-observation r = x + N(0, v).
struct DenoiserOutput {
  double mean;
  double variance;
  double derivative; // d mean / d r
};

/// Prior moments E{x | q}, var{x | q}.
struct PriorMoments {
  double mean;
  double variance;
};

PriorMoments prior_moments(const PriorSpec& spec);

/// Closed-form denoiser. Evidence ratios are evaluated in the log domain.
/// Throws DomainError for pseudo_var <= 0.
DenoiserOutput prior_moments(const PriorSpec& spec, double pseudo_obs, double pseudo_var);

/// I.i.d. draws from the prior, deterministic in `seed`.
std::vector<double> prior_sample(const PriorSpec& spec, std::size_t n, std::uint64_t seed);

std::string_view to_string(PriorKind kind);

} // namespace glmmp
