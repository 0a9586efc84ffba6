#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "glmmp/error.hpp"
#include "glmmp/matrix.hpp"
#include "glmmp/messages.hpp"
#include "glmmp/problem.hpp"

namespace glmmp {

enum class SolverKind { epmpa, gamp, gamp_simplified, amp };

/// Which per-node vector the relative-change stopping rule watches.
/// `automatic` watches the pseudo-observation x^v for EP-MPA and the
/// estimate x_hat for the GAMP family and AMP.
enum class StopOn { automatic, pseudo_observation, estimate };

struct SolverConfig {
  double epsilon = 1e-6;
  int max_iters = 50;
  double variance_floor = kDefaultVarianceFloor;
  double variance_cap = kDefaultVarianceCap;
  double damping = 1.0; // 1 disables damping
  bool record_trajectory = true;
  StopOn stop_on = StopOn::automatic;

  void validate() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct IterationRecord {
  int iter = 0;
  double mse = kNaN;         // of x_hat after this iteration; NaN without ground truth
  double mean_v_x = kNaN;    // average posterior variance of x after this iteration
  double mean_v_s = kNaN;    // average output-side pseudo-prior variance v^s
  double stop_metric = kNaN; // sum|x(t) - x(t-1)| / sum|x(t)|
  double elapsed_ms = 0.0;   // wall time since the run started
  // AMP only: the Onsager coefficient computed two ways.
  double onsager_from_derivative = kNaN; // (N/M) <eta'_{t-1}>
  double onsager_from_variance = kNaN;   // v^s(t) / v^v(t-1)
  // EP-MPA only: max over edges of v^v_mn(t+1) - v^v_n(t).
  double variance_excess = kNaN;
};

struct RunResult {
  std::vector<double> x_hat;
  std::vector<double> z_hat;
  int iterations_run = 0;
  std::vector<IterationRecord> trajectory;
  bool converged = false;
};

/// A solver state went non-finite (or, for the simplified GAMP, the
/// <phi'> >= 1 guard tripped). Carries everything recorded up to the last
/// finite iteration.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, RunResult partial) : Error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const RunResult& partial() const noexcept { return partial_; }

private:
  RunResult partial_;
};

/// True (stop) iff sum|now - prev| <= epsilon * sum|now|. An all-zero `now`
/// stops.
bool stop_check(std::span<const double> now, std::span<const double> prev, double epsilon);

// ---------------------------------------------------------------------------
// Edgewise EP message passing. Every edge carries its own message, so the
// state holds four M x N panels. The sum-to-variable panels are kept in
// information form (precision and precision-weighted mean) so that an edge
// with A_mn = 0 is simply silent instead of dividing by zero.

struct EpmpaState {
  Matrix x_v, v_v;         // variable -> sum messages x^v_mn, v^v_mn
  Matrix prec_s, wmean_s;  // sum -> variable messages 1/v^s_mn, x^s_mn/v^s_mn
  std::vector<double> z_s, v_s;             // z^s_m, v^s_m
  std::vector<double> z_tilde, v_tilde_z;   // output-node extrinsic messages
  std::vector<double> x_v_node, v_v_node;   // x^v_n, v^v_n
  std::vector<double> x_hat, v_hat_x;       // E / var {x_n | x^v_n, v^v_n}
  std::vector<double> z_hat;                // E {z_m | z^s_m, v^s_m; y_m}
  double variance_excess = kNaN;
};

EpmpaState epmpa_init(const ProblemInstance& problem, const SolverConfig& config);
/// Runs steps I-VI once.
void epmpa_step(const ProblemInstance& problem, const SolverConfig& config, EpmpaState& state);
RunResult epmpa_run(const ProblemInstance& problem, const SolverConfig& config);

// ---------------------------------------------------------------------------
// Node-wise MMSE GAMP.

struct GampState {
  std::vector<double> x_hat, v_hat_x;   // estimate and its variance, per column
  std::vector<double> x_v, v_v;         // pseudo-observations fed to the prior
  std::vector<double> z_s, v_s;         // output pseudo-prior per row
  std::vector<double> l_prime, l_dprime;
  std::vector<double> l_prime_prev;     // L'(t-1); zero before the first iteration
  std::vector<double> z_hat;
};

GampState gamp_init(const ProblemInstance& problem, const SolverConfig& config);
void gamp_step(const ProblemInstance& problem, const SolverConfig& config, GampState& state);
RunResult gamp_run(const ProblemInstance& problem, const SolverConfig& config);

// ---------------------------------------------------------------------------
// GAMP with all variances replaced by their averages.

struct GampSimplifiedState {
  std::vector<double> x_hat;
  double v_hat_x = 1.0;      // <v^x>(t)
  double v_hat_x_prev = 1.0; // <v^x>(t-1); equal to v_hat_x before the first iteration
  std::vector<double> s_prev; // phi(z_{t-1}) - z_{t-1}; zero before the first iteration
  std::vector<double> z;      // z_t
  std::vector<double> x_v;    // pseudo-observation x_{t+1}
  double v_s = kNaN;
  double v_v = kNaN;
  double phi_prime_avg = kNaN;
  std::vector<double> z_hat;
};

GampSimplifiedState gamp_simplified_init(const ProblemInstance& problem, const SolverConfig& config);
void gamp_simplified_step(const ProblemInstance& problem, const SolverConfig& config, GampSimplifiedState& state);
RunResult gamp_simplified_run(const ProblemInstance& problem, const SolverConfig& config);

// ---------------------------------------------------------------------------
// AMP for the AWGN channel, with the Onsager-corrected residual.

struct AmpState {
  std::vector<double> x_hat;
  std::vector<double> z_t;       // corrected residual z_t
  std::vector<double> x_v;       // pseudo-observation x_hat + A^T z_t
  double v_hat_x = 1.0;          // <v^x>(t)
  double v_s = kNaN;             // (N/M) <v^x>(t)
  double v_v = kNaN;             // sigma^2 + v^s(t)
  double v_v_prev = kNaN;        // v^v(t-1)
  double eta_prime_avg = kNaN;   // <eta'> from the latest denoiser call
  double onsager_coeff = 0.0;    // (N/M) <eta'_{t-1}> used in the latest step
  double onsager_check = kNaN;   // v^s(t) / v^v(t-1) for the latest step
  bool first = true;
  std::vector<double> z_hat;
};

AmpState amp_init(const ProblemInstance& problem, const SolverConfig& config);
void amp_step(const ProblemInstance& problem, const SolverConfig& config, AmpState& state);
/// Throws UnsupportedChannel unless the channel is awgn.
RunResult amp_run(const ProblemInstance& problem, const SolverConfig& config);

RunResult run_solver(SolverKind kind, const ProblemInstance& problem, const SolverConfig& config);

std::string_view to_string(SolverKind kind);
/// Throws ValidationError on an unknown name.
SolverKind solver_from_string(std::string_view name);

} // namespace glmmp
