#include <cmath>

#include "glmmp/kernels.hpp"
#include "glmmp/solvers.hpp"
#include "solver_driver.hpp"

namespace glmmp {

AmpState amp_init(const ProblemInstance& problem, const SolverConfig& config) {
  config.validate();
  if (problem.channel().kind != ChannelKind::awgn) {
    throw UnsupportedChannel("AMP requires an awgn channel, got " + std::string(to_string(problem.channel().kind)));
  }
  const PriorMoments start = prior_moments(problem.prior());
  AmpState s;
  s.x_hat.assign(problem.cols(), start.mean);
  s.v_hat_x = start.variance;
  s.z_t.assign(problem.rows(), 0.0);
  s.x_v.assign(problem.cols(), 0.0);
  s.z_hat.assign(problem.rows(), 0.0);
  return s;
}

void amp_step(const ProblemInstance& problem, const SolverConfig& config, AmpState& s) {
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const double ratio = static_cast<double>(cols) / static_cast<double>(rows);
  const double noise_var = problem.channel().noise_var;

  const double v_s = sanitize_variance(ratio * s.v_hat_x, config.variance_floor, config.variance_cap);
  const double v_v = noise_var + v_s;

  // Onsager coefficient from the previous denoiser's average slope, and the
  // same quantity from the variance recursion as a cross-check.
  s.onsager_coeff = s.first ? 0.0 : ratio * s.eta_prime_avg;
  s.onsager_check = s.first ? kNaN : v_s / s.v_v_prev;

  std::vector<double> ax(rows);
  kernels::matvec(problem.a(), s.x_hat, ax);
  const auto y = problem.y();
  for (std::size_t m = 0; m < rows; ++m) s.z_t[m] = y[m] - ax[m] + s.onsager_coeff * s.z_t[m];

  std::vector<double> corr(cols);
  kernels::matvec_transposed(problem.a(), s.z_t, corr);
  double slope = 0.0;
  double v_sum = 0.0;
  for (std::size_t n = 0; n < cols; ++n) {
    s.x_v[n] = s.x_hat[n] + corr[n];
    const DenoiserOutput post = prior_moments(problem.prior(), s.x_v[n], v_v);
    s.x_hat[n] = config.damping * post.mean + (1.0 - config.damping) * s.x_hat[n];
    slope += post.derivative;
    v_sum += post.variance;
  }

  // Output-side estimate at the pseudo-prior z^s = y - z_t.
  for (std::size_t m = 0; m < rows; ++m) {
    s.z_hat[m] = channel_moments(problem.channel(), y[m], y[m] - s.z_t[m], v_s).mean;
  }

  s.eta_prime_avg = slope / static_cast<double>(cols);
  s.v_hat_x = v_sum / static_cast<double>(cols);
  s.v_s = v_s;
  s.v_v_prev = v_v;
  s.v_v = v_v;
  s.first = false;
}

RunResult amp_run(const ProblemInstance& problem, const SolverConfig& config) {
  AmpState s = amp_init(problem, config);
  detail::Driver driver(problem, config, problem.cols());
  const bool watch_pseudo = detail::resolve_stop(config, StopOn::estimate) == StopOn::pseudo_observation;

  while (true) {
    detail::guarded(driver, [&] { amp_step(problem, config, s); });
    IterationRecord rec;
    rec.mean_v_x = s.v_hat_x;
    rec.mean_v_s = s.v_s;
    rec.onsager_from_derivative = s.onsager_coeff;
    rec.onsager_from_variance = s.onsager_check;
    if (driver.finish_iteration(rec, s.x_hat, watch_pseudo ? s.x_v : s.x_hat)) break;
  }
  return std::move(driver).result(std::move(s.x_hat), std::move(s.z_hat));
}

} // namespace glmmp
