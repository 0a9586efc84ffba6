#include "glmmp/messages.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glmmp/error.hpp"

namespace glmmp {

namespace {

void require_valid(const GaussianMessage& msg, const char* what) {
  if (!std::isfinite(msg.mean) || std::isnan(msg.variance) || !(msg.variance > 0.0)) {
    throw InvalidMessage(std::string(what) + ": mean must be finite and variance positive (got " +
                         std::to_string(msg.mean) + ", " + std::to_string(msg.variance) + ")");
  }
}

} // namespace

GaussianMessage ep_extrinsic(const GaussianMessage& post, const GaussianMessage& input) {
  require_valid(post, "ep_extrinsic post");
  require_valid(input, "ep_extrinsic input");
  if (input.uninformative()) return post;

  const double post_prec = post.precision();
  const double in_prec = input.precision();
  const double out_var = 1.0 / (post_prec - in_prec);
  const double out_mean = out_var * (post_prec * post.mean - in_prec * input.mean);
  return {out_mean, out_var};
}

GaussianMessage gaussian_product(const GaussianMessage& a, const GaussianMessage& b) {
  require_valid(a, "gaussian_product lhs");
  require_valid(b, "gaussian_product rhs");

  if (a.uninformative() && b.uninformative()) {
    return {0.0, a.variance};
  }
  if (a.uninformative()) return b;
  if (b.uninformative()) return a;

  const double prec = a.precision() + b.precision();
  const double var = 1.0 / prec;
  return {var * (a.precision() * a.mean + b.precision() * b.mean), var};
}

double sanitize_variance(double v, double floor, double cap) noexcept {
  if (!std::isfinite(v) || v <= 0.0) return cap;
  return std::clamp(v, floor, cap);
}

GaussianMessage ep_extrinsic_sanitized(const GaussianMessage& post, const GaussianMessage& input,
                                       double floor, double cap) {
  const GaussianMessage raw = ep_extrinsic(post, input);
  if (!std::isfinite(raw.variance) || raw.variance <= 0.0 || !std::isfinite(raw.mean)) {
    return {input.mean, cap};
  }
  return {raw.mean, sanitize_variance(raw.variance, floor, cap)};
}

} // namespace glmmp
