#include <algorithm>
#include <cmath>
#include <numeric>

#include "glmmp/solvers.hpp"
#include "solver_driver.hpp"

namespace glmmp {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("solver epsilon must be positive");
  if (max_iters < 1) throw DomainError("solver max_iters must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("solver damping must lie in (0, 1]");
  if (!(variance_floor > 0.0 && variance_cap >= variance_floor)) {
    throw DomainError("solver variance bounds need 0 < floor <= cap");
  }
}

bool stop_check(std::span<const double> now, std::span<const double> prev, double epsilon) {
  double change = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) {
    change += std::abs(now[i] - prev[i]);
    scale += std::abs(now[i]);
  }
  if (scale == 0.0) return true;
  return change <= epsilon * scale;
}

RunResult run_solver(SolverKind kind, const ProblemInstance& problem, const SolverConfig& config) {
  switch (kind) {
  case SolverKind::epmpa: return epmpa_run(problem, config);
  case SolverKind::gamp: return gamp_run(problem, config);
  case SolverKind::gamp_simplified: return gamp_simplified_run(problem, config);
  case SolverKind::amp: return amp_run(problem, config);
  }
  throw ValidationError("unknown solver kind");
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
  case SolverKind::epmpa: return "epmpa";
  case SolverKind::gamp: return "gamp";
  case SolverKind::gamp_simplified: return "gamp_simplified";
  case SolverKind::amp: return "amp";
  }
  return "unknown";
}

SolverKind solver_from_string(std::string_view name) {
  for (auto kind : {SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified, SolverKind::amp}) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown solver '" + std::string(name) + "'");
}

namespace detail {

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

StopOn resolve_stop(const SolverConfig& config, StopOn solver_default) {
  return config.stop_on == StopOn::automatic ? solver_default : config.stop_on;
}

Driver::Driver(const ProblemInstance& problem, const SolverConfig& config, std::size_t stop_len)
    : problem_(problem), config_(config), prev_stop_(stop_len, 0.0) {}

bool Driver::finish_iteration(IterationRecord record, std::span<const double> x_hat,
                              std::span<const double> stop_vec) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x_hat.begin(), x_hat.end(), finite) || !std::all_of(stop_vec.begin(), stop_vec.end(), finite)) {
    diverged("non-finite estimate at iteration " + std::to_string(iteration_ + 1));
  }

  ++iteration_;
  record.iter = iteration_;
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();

  double change = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < stop_vec.size(); ++i) {
    change += std::abs(stop_vec[i] - prev_stop_[i]);
    scale += std::abs(stop_vec[i]);
  }
  record.stop_metric = scale > 0.0 ? change / scale : 0.0;
  const bool stop_now = stop_check(stop_vec, prev_stop_, config_.epsilon);
  std::copy(stop_vec.begin(), stop_vec.end(), prev_stop_.begin());

  if (const auto& truth = problem_.x_true()) {
    double se = 0.0;
    for (std::size_t n = 0; n < x_hat.size(); ++n) {
      const double d = x_hat[n] - (*truth)[n];
      se += d * d;
    }
    record.mse = se / static_cast<double>(x_hat.size());
  }
  if (config_.record_trajectory) trajectory_.push_back(record);
  last_x_hat_.assign(x_hat.begin(), x_hat.end());

  converged_ = stop_now;
  return stop_now || iteration_ >= config_.max_iters;
}

void Driver::diverged(const std::string& why) const {
  RunResult partial;
  partial.x_hat = last_x_hat_;
  partial.iterations_run = iteration_;
  partial.trajectory = trajectory_;
  throw DivergenceError(why, std::move(partial));
}

RunResult Driver::result(std::vector<double> x_hat, std::vector<double> z_hat) && {
  RunResult out;
  out.x_hat = std::move(x_hat);
  out.z_hat = std::move(z_hat);
  out.iterations_run = iteration_;
  out.trajectory = std::move(trajectory_);
  out.converged = converged_;
  return out;
}

} // namespace detail
} // namespace glmmp
