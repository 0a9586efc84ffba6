#pragma once

// Brute-force posterior moments by adaptive Gauss-Kronrod quadrature. This is
// a reference implementation for tests and development; solvers never call it.

#include <functional>
#include <limits>
#include <vector>

#include "glmmp/channels.hpp"
#include "glmmp/priors.hpp"

namespace glmmp {

class ProblemInstance;

/// A nonnegative factor f(x) = sum_k w_k delta(x - a_k) + g(x), where g is
/// given through its log-density (return -inf where g vanishes).
struct FactorFn {
  struct Atom {
    double location;
    double weight;
  };

  std::function<double(double)> log_density; // continuous part; empty means none
  std::vector<Atom> atoms;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  /// Points where g is non-smooth or sharply peaked; used as panel edges.
  std::vector<double> breakpoints;

  static FactorFn constant();
  static FactorFn gaussian(double mean, double var);
  /// Bernoulli-Gaussian prior density with the spike as an exact atom.
  static FactorFn prior(const PriorSpec& spec);
  /// Likelihood slice z -> p(y | z) for a fixed observation.
  static FactorFn likelihood(const ChannelSpec& spec, double y);
};

struct QuadMoments {
  double mean;
  double variance;
};

/// Moments of the density proportional to f(x) N(x; gauss_mean, gauss_var).
/// The continuous part is integrated over gauss_mean +/- 12 sd, widened to
/// include the factor's breakpoints and intersected with the support.
/// Throws DomainError for bad arguments and DegeneratePosterior if the
/// normalizer vanishes.
QuadMoments quad_moments(const FactorFn& f, double gauss_mean, double gauss_var, double tol = 1e-10);

/// One sweep of the edgewise EP message schedule on a tiny instance with
/// every posterior moment taken from quad_moments instead of closed forms.
/// Returns x_hat after the first iteration.
std::vector<double> epmpa_first_iteration_reference(const ProblemInstance& problem);

} // namespace glmmp
