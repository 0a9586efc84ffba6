#include "glmmp/priors.hpp"

#include <cmath>
#include <random>
#include <string>

#include "glmmp/error.hpp"
#include "glmmp/normal.hpp"

namespace glmmp {

namespace {

DenoiserOutput gaussian_denoiser(double mean0, double var0, double r, double v) {
  const double denom = var0 + v;
  return {(r * var0 + mean0 * v) / denom, var0 * v / denom, var0 / denom};
}

// Spike at 0 with weight 1 - lambda, slab N(mu, s) with weight lambda.
DenoiserOutput spike_slab_denoiser(double lambda, double mu, double s, double r, double v) {
  if (lambda >= 1.0) return gaussian_denoiser(mu, s, r, v);

  const double log_slab = std::log(lambda) + normal::log_pdf(r, mu, s + v);
  const double log_spike = std::log1p(-lambda) + normal::log_pdf(r, 0.0, v);
  // Posterior slab responsibility and its complement, both without overflow.
  const double pi = 1.0 / (1.0 + std::exp(log_spike - log_slab));
  const double one_minus_pi = 1.0 / (1.0 + std::exp(log_slab - log_spike));

  const double gain = s / (s + v);
  const double slab_mean = (r * s + mu * v) / (s + v);
  const double slab_var = s * v / (s + v);

  const double mean = pi * slab_mean;
  const double var = pi * slab_var + pi * one_minus_pi * slab_mean * slab_mean;
  // d(log-odds)/dr for slab vs spike
  const double dlogit = r / v - (r - mu) / (s + v);
  const double deriv = pi * one_minus_pi * dlogit * slab_mean + pi * gain;
  return {mean, var, deriv};
}

} // namespace

void PriorSpec::validate() const {
  if (kind == PriorKind::bernoulli_gaussian && !(lambda > 0.0 && lambda <= 1.0)) {
    throw DomainError("bernoulli_gaussian prior needs lambda in (0, 1], got " + std::to_string(lambda));
  }
  if (kind != PriorKind::point_mass && !(var0 > 0.0 && std::isfinite(var0))) {
    throw DomainError("prior variance must be positive and finite, got " + std::to_string(var0));
  }
  if (!std::isfinite(mean0)) throw DomainError("prior mean must be finite");
}

PriorMoments prior_moments(const PriorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
  case PriorKind::gaussian:
    return {spec.mean0, spec.var0};
  case PriorKind::point_mass:
    return {spec.mean0, 0.0};
  case PriorKind::bernoulli_gaussian: {
    const double s = spec.var0 / spec.lambda;
    const double mean = spec.lambda * spec.mean0;
    return {mean, spec.lambda * (s + spec.mean0 * spec.mean0) - mean * mean};
  }
  }
  return {0.0, 0.0};
}

DenoiserOutput prior_moments(const PriorSpec& spec, double pseudo_obs, double pseudo_var) {
  if (!(pseudo_var > 0.0) || std::isnan(pseudo_obs)) {
    throw DomainError("prior_moments: pseudo variance must be positive, got " + std::to_string(pseudo_var));
  }
  switch (spec.kind) {
  case PriorKind::gaussian:
    return gaussian_denoiser(spec.mean0, spec.var0, pseudo_obs, pseudo_var);
  case PriorKind::point_mass:
    return {spec.mean0, 0.0, 0.0};
  case PriorKind::bernoulli_gaussian:
    return spike_slab_denoiser(spec.lambda, spec.mean0, spec.var0 / spec.lambda, pseudo_obs, pseudo_var);
  }
  return {0.0, 0.0, 0.0};
}

std::vector<double> prior_sample(const PriorSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::vector<double> x(n, spec.mean0);

  switch (spec.kind) {
  case PriorKind::point_mass:
    break;
  case PriorKind::gaussian: {
    std::normal_distribution<double> gauss(spec.mean0, std::sqrt(spec.var0));
    for (auto& xi : x) xi = gauss(rng);
    break;
  }
  case PriorKind::bernoulli_gaussian: {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> slab(spec.mean0, std::sqrt(spec.var0 / spec.lambda));
    for (auto& xi : x) {
      const bool active = unif(rng) < spec.lambda;
      const double draw = slab(rng); // always drawn so the stream layout is lambda-independent
      xi = active ? draw : 0.0;
    }
    break;
  }
  }
  return x;
}

std::string_view to_string(PriorKind kind) {
  switch (kind) {
  case PriorKind::bernoulli_gaussian: return "bernoulli_gaussian";
  case PriorKind::gaussian: return "gaussian";
  case PriorKind::point_mass: return "point_mass";
  }
  return "unknown";
}

} // namespace glmmp
