#pragma once

// Shared iteration bookkeeping: trajectory recording, the relative-change
// stopping rule and divergence detection.

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "glmmp/solvers.hpp"

namespace glmmp::detail {

/// Thrown by a step when its own guard trips; turned into DivergenceError.
class StepDiverged : public Error {
public:
  using Error::Error;
};

double mean_of(std::span<const double> v);

class Driver {
public:
  Driver(const ProblemInstance& problem, const SolverConfig& config, std::size_t stop_len);

  /// Records the iteration; returns true when the run should stop.
  /// Throws DivergenceError if x_hat or the stop vector is non-finite.
  bool finish_iteration(IterationRecord record, std::span<const double> x_hat, std::span<const double> stop_vec);

  [[noreturn]] void diverged(const std::string& why) const;

  RunResult result(std::vector<double> x_hat, std::vector<double> z_hat) &&;

  [[nodiscard]] int iteration() const noexcept { return iteration_ + 1; }

private:
  const ProblemInstance& problem_;
  const SolverConfig& config_;
  std::vector<double> prev_stop_;
  std::vector<double> last_x_hat_;
  std::vector<IterationRecord> trajectory_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  int iteration_ = 0;
  bool converged_ = false;
};

/// Runs `step` and converts its failures into iteration-tagged errors.
template <class Step>
void guarded(Driver& driver, Step&& step) {
  try {
    step();
  } catch (const StepDiverged& e) {
    driver.diverged(e.what());
  } catch (const DomainError& e) {
    throw DomainError("iteration " + std::to_string(driver.iteration()) + ": " + e.what());
  }
}

StopOn resolve_stop(const SolverConfig& config, StopOn solver_default);

} // namespace glmmp::detail
