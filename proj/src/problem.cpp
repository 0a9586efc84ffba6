#include "glmmp/problem.hpp"

#include <string>

#include "glmmp/error.hpp"
#include "glmmp/kernels.hpp"

namespace glmmp {

ProblemInstance::ProblemInstance(Matrix a, std::vector<double> y, PriorSpec prior, ChannelSpec channel,
                                 std::optional<std::vector<double>> x_true)
    : a_(std::move(a)), y_(std::move(y)), prior_(prior), channel_(channel), x_true_(std::move(x_true)) {
  if (a_.rows() == 0 || a_.cols() == 0) throw DomainError("measurement matrix must be non-empty");
  if (y_.size() != a_.rows()) {
    throw DomainError("y has length " + std::to_string(y_.size()) + ", expected " + std::to_string(a_.rows()));
  }
  if (x_true_ && x_true_->size() != a_.cols()) {
    throw DomainError("x_true has length " + std::to_string(x_true_->size()) + ", expected " +
                      std::to_string(a_.cols()));
  }
  prior_.validate();
  channel_.validate();
  a_sq_ = kernels::squared(a_);
}

} // namespace glmmp
