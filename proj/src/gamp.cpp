#include <algorithm>
#include <cmath>

#include "glmmp/kernels.hpp"
#include "glmmp/solvers.hpp"
#include "solver_driver.hpp"

namespace glmmp {

GampState gamp_init(const ProblemInstance& problem, const SolverConfig& config) {
  config.validate();
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const PriorMoments start = prior_moments(problem.prior());

  GampState s;
  s.x_hat.assign(cols, start.mean);
  s.v_hat_x.assign(cols, start.variance);
  s.x_v.assign(cols, 0.0);
  s.v_v.assign(cols, 0.0);
  s.z_s.assign(rows, 0.0);
  s.v_s.assign(rows, 0.0);
  s.l_prime.assign(rows, 0.0);
  s.l_dprime.assign(rows, 0.0);
  s.l_prime_prev.assign(rows, 0.0);
  s.z_hat.assign(rows, 0.0);
  return s;
}

void gamp_step(const ProblemInstance& problem, const SolverConfig& config, GampState& s) {
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const double floor = config.variance_floor;
  const double cap = config.variance_cap;

  // Output side.
  kernels::matvec(problem.a_sq(), s.v_hat_x, s.v_s);
  kernels::matvec(problem.a(), s.x_hat, s.z_s);
  for (std::size_t m = 0; m < rows; ++m) {
    const double v_s = sanitize_variance(s.v_s[m], floor, cap);
    s.z_s[m] -= s.v_s[m] * s.l_prime_prev[m];
    const ChannelMoments post = channel_moments(problem.channel(), problem.y()[m], s.z_s[m], v_s);
    s.z_hat[m] = post.mean;
    s.l_prime[m] = (post.mean - s.z_s[m]) / v_s;
    s.l_dprime[m] = (1.0 - post.variance / v_s) / v_s;
  }

  // Input side.
  std::vector<double> prec(cols), corr(cols);
  kernels::matvec_transposed(problem.a_sq(), s.l_dprime, prec);
  kernels::matvec_transposed(problem.a(), s.l_prime, corr);
  for (std::size_t n = 0; n < cols; ++n) {
    const double v = prec[n] > 0.0 ? sanitize_variance(1.0 / prec[n], floor, cap) : cap;
    s.v_v[n] = v;
    s.x_v[n] = s.x_hat[n] + v * corr[n];
    const DenoiserOutput post = prior_moments(problem.prior(), s.x_v[n], v);
    s.x_hat[n] = config.damping * post.mean + (1.0 - config.damping) * s.x_hat[n];
    s.v_hat_x[n] = post.variance;
  }
  s.l_prime_prev = s.l_prime;
}

RunResult gamp_run(const ProblemInstance& problem, const SolverConfig& config) {
  GampState s = gamp_init(problem, config);
  detail::Driver driver(problem, config, problem.cols());
  const bool watch_pseudo = detail::resolve_stop(config, StopOn::estimate) == StopOn::pseudo_observation;

  while (true) {
    detail::guarded(driver, [&] { gamp_step(problem, config, s); });
    IterationRecord rec;
    rec.mean_v_x = detail::mean_of(s.v_hat_x);
    rec.mean_v_s = detail::mean_of(s.v_s);
    if (driver.finish_iteration(rec, s.x_hat, watch_pseudo ? s.x_v : s.x_hat)) break;
  }
  return std::move(driver).result(std::move(s.x_hat), std::move(s.z_hat));
}

} // namespace glmmp
