#include <cmath>

#include "glmmp/kernels.hpp"
#include "glmmp/solvers.hpp"
#include "solver_driver.hpp"

namespace glmmp {

EpmpaState epmpa_init(const ProblemInstance& problem, const SolverConfig& config) {
  config.validate();
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const PriorMoments start = prior_moments(problem.prior());

  EpmpaState s;
  s.x_v = Matrix(rows, cols, start.mean);
  // A point-mass prior has zero variance; keep the edge variances positive.
  s.v_v = Matrix(rows, cols, std::max(start.variance, config.variance_floor));
  s.prec_s = Matrix(rows, cols);
  s.wmean_s = Matrix(rows, cols);
  s.z_s.assign(rows, 0.0);
  s.v_s.assign(rows, 0.0);
  s.z_tilde.assign(rows, 0.0);
  s.v_tilde_z.assign(rows, 0.0);
  s.z_hat.assign(rows, 0.0);
  s.x_v_node.assign(cols, 0.0);
  s.v_v_node.assign(cols, 0.0);
  s.x_hat.assign(cols, start.mean);
  s.v_hat_x.assign(cols, start.variance);
  return s;
}

void epmpa_step(const ProblemInstance& problem, const SolverConfig& config, EpmpaState& s) {
  const std::size_t rows = problem.rows();
  const std::size_t cols = problem.cols();
  const double floor = config.variance_floor;
  const double cap = config.variance_cap;

  // Step I: sum node -> output node, by the central limit theorem.
  kernels::rowwise_dot(problem.a(), s.x_v, s.z_s);
  kernels::rowwise_dot(problem.a_sq(), s.v_v, s.v_s);

  // Step II: EP at the output node.
  std::vector<double> c(rows), r(rows);
  for (std::size_t m = 0; m < rows; ++m) {
    const double v_s = sanitize_variance(s.v_s[m], floor, cap);
    const ChannelMoments post = channel_moments(problem.channel(), problem.y()[m], s.z_s[m], v_s);
    s.z_hat[m] = post.mean;
    const GaussianMessage ext = ep_extrinsic_sanitized({post.mean, sanitize_variance(post.variance, floor, cap)},
                                                       {s.z_s[m], v_s}, floor, cap);
    s.z_tilde[m] = ext.mean;
    s.v_tilde_z[m] = ext.variance;
    c[m] = 1.0 / (ext.variance + v_s);
    r[m] = ext.mean - s.z_s[m];
  }

  // Steps III and IV: sum node -> variable node on every edge, then the
  // Gaussian product over all incoming edges of each variable node.
  std::vector<double> col_prec(cols), col_wmean(cols);
  kernels::edge_sum_to_variable(problem.a(), problem.a_sq(), s.x_v, c, r, s.prec_s, s.wmean_s, col_prec, col_wmean);
  for (std::size_t n = 0; n < cols; ++n) {
    const double v = col_prec[n] > 0.0 ? sanitize_variance(1.0 / col_prec[n], floor, cap) : cap;
    s.v_v_node[n] = v;
    s.x_v_node[n] = v * col_wmean[n];
  }

  // Steps V and VI merged: EP at the input node, then variable -> sum edges
  // with the edge's own incoming message removed.
  std::vector<double> edge_var(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    const DenoiserOutput post = prior_moments(problem.prior(), s.x_v_node[n], s.v_v_node[n]);
    s.x_hat[n] = post.mean;
    s.v_hat_x[n] = post.variance;
    edge_var[n] = std::max(post.variance, floor);
  }
  kernels::edge_variable_to_sum(s.wmean_s, s.x_hat, edge_var, config.damping, s.x_v, s.v_v);
  s.variance_excess = kernels::panel_max_excess(s.v_v, s.v_v_node);
}

RunResult epmpa_run(const ProblemInstance& problem, const SolverConfig& config) {
  EpmpaState s = epmpa_init(problem, config);
  detail::Driver driver(problem, config, problem.cols());
  const bool watch_pseudo = detail::resolve_stop(config, StopOn::pseudo_observation) == StopOn::pseudo_observation;

  while (true) {
    detail::guarded(driver, [&] { epmpa_step(problem, config, s); });
    IterationRecord rec;
    rec.mean_v_x = detail::mean_of(s.v_hat_x);
    rec.mean_v_s = detail::mean_of(s.v_s);
    rec.variance_excess = s.variance_excess;
    if (driver.finish_iteration(rec, s.x_hat, watch_pseudo ? s.x_v_node : s.x_hat)) break;
  }
  return std::move(driver).result(std::move(s.x_hat), std::move(s.z_hat));
}

} // namespace glmmp
