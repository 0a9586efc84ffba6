#include <cmath>
#include <string>

#include "glmmp/kernels.hpp"
#include "glmmp/solvers.hpp"
#include "solver_driver.hpp"

namespace glmmp {

GampSimplifiedState gamp_simplified_init(const ProblemInstance& problem, const SolverConfig& config) {
  config.validate();
  const PriorMoments start = prior_moments(problem.prior());
  GampSimplifiedState s;
  s.x_hat.assign(problem.cols(), start.mean);
  s.v_hat_x = start.variance;
  s.v_hat_x_prev = start.variance;
  s.s_prev.assign(problem.rows(), 0.0);
  s.z.assign(problem.rows(), 0.0);
  s.x_v.assign(problem.cols(), 0.0);
  s.z_hat.assign(problem.rows(), 0.0);
  return s;
}

void gamp_simplified_step(const ProblemInstance& problem, const SolverConfig& config, GampSimplifiedState& s) {
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const double ratio = static_cast<double>(cols) / static_cast<double>(rows);

  s.v_s = sanitize_variance(ratio * s.v_hat_x, config.variance_floor, config.variance_cap);
  const double memory = s.v_hat_x_prev > 0.0 ? s.v_hat_x / s.v_hat_x_prev : 0.0;

  kernels::matvec(problem.a(), s.x_hat, s.z);
  std::vector<double> resid(rows);
  double phi_prime = 0.0;
  for (std::size_t m = 0; m < rows; ++m) {
    s.z[m] -= memory * s.s_prev[m];
    const ChannelMoments post = channel_moments(problem.channel(), problem.y()[m], s.z[m], s.v_s);
    s.z_hat[m] = post.mean;
    resid[m] = post.mean - s.z[m];
    phi_prime += post.variance / s.v_s;
  }
  s.phi_prime_avg = phi_prime / static_cast<double>(rows);
  if (!(s.phi_prime_avg < 1.0)) {
    throw detail::StepDiverged("simplified GAMP: <phi'> = " + std::to_string(s.phi_prime_avg) + " >= 1");
  }

  const double gain = 1.0 / (1.0 - s.phi_prime_avg);
  s.v_v = sanitize_variance(s.v_s * gain, config.variance_floor, config.variance_cap);
  std::vector<double> corr(cols);
  kernels::matvec_transposed(problem.a(), resid, corr);

  double v_sum = 0.0;
  for (std::size_t n = 0; n < cols; ++n) {
    s.x_v[n] = s.x_hat[n] + gain * corr[n];
    const DenoiserOutput post = prior_moments(problem.prior(), s.x_v[n], s.v_v);
    s.x_hat[n] = config.damping * post.mean + (1.0 - config.damping) * s.x_hat[n];
    v_sum += post.variance;
  }
  s.v_hat_x_prev = s.v_hat_x;
  s.v_hat_x = v_sum / static_cast<double>(cols);
  s.s_prev = std::move(resid);
}

RunResult gamp_simplified_run(const ProblemInstance& problem, const SolverConfig& config) {
  GampSimplifiedState s = gamp_simplified_init(problem, config);
  detail::Driver driver(problem, config, problem.cols());
  const bool watch_pseudo = detail::resolve_stop(config, StopOn::estimate) == StopOn::pseudo_observation;

  while (true) {
    detail::guarded(driver, [&] { gamp_simplified_step(problem, config, s); });
    IterationRecord rec;
    rec.mean_v_x = s.v_hat_x;
    rec.mean_v_s = s.v_s;
    if (driver.finish_iteration(rec, s.x_hat, watch_pseudo ? s.x_v : s.x_hat)) break;
  }
  return std::move(driver).result(std::move(s.x_hat), std::move(s.z_hat));
}

} // namespace glmmp
