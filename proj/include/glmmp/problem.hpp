#pragma once

#include <optional>
#include <span>
#include <vector>

#include "glmmp/channels.hpp"
#include "glmmp/matrix.hpp"
#include "glmmp/priors.hpp"

namespace glmmp {

/// Immutable generalized-linear-model instance: y ~ p(y | A x), x ~ prior.
/// Safe to share between concurrent solver runs.
class ProblemInstance {
public:
  /// Validates dimensions and specs; precomputes the elementwise squares of A.
  ProblemInstance(Matrix a, std::vector<double> y, PriorSpec prior, ChannelSpec channel,
                  std::optional<std::vector<double>> x_true = std::nullopt);

  [[nodiscard]] const Matrix& a() const noexcept { return a_; }
  [[nodiscard]] const Matrix& a_sq() const noexcept { return a_sq_; }
  [[nodiscard]] std::span<const double> y() const noexcept { return y_; }
  [[nodiscard]] const PriorSpec& prior() const noexcept { return prior_; }
  [[nodiscard]] const ChannelSpec& channel() const noexcept { return channel_; }
  /// Ground truth, used only to score estimates.
  [[nodiscard]] const std::optional<std::vector<double>>& x_true() const noexcept { return x_true_; }

  [[nodiscard]] std::size_t rows() const noexcept { return a_.rows(); }
  [[nodiscard]] std::size_t cols() const noexcept { return a_.cols(); }

private:
  Matrix a_;
  Matrix a_sq_;
  std::vector<double> y_;
  PriorSpec prior_;
  ChannelSpec channel_;
  std::optional<std::vector<double>> x_true_;
};

} // namespace glmmp
