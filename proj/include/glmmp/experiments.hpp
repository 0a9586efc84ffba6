#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "glmmp/problem.hpp"
#include "glmmp/solvers.hpp"

namespace glmmp {

/// One experiment: a grid of (SNR, seed) instances, each solved by every
/// listed solver.
struct ExperimentConfig {
  std::string name = "experiment";
  std::size_t m = 2000;
  std::size_t n = 2000;
  double lambda = 0.5;
  double theta = 1.0; // +inf selects the awgn channel
  std::vector<double> snr_db_list{10.0, 15.0, 20.0, 25.0, 30.0};
  std::vector<SolverKind> solvers{SolverKind::epmpa, SolverKind::gamp};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SolverConfig solver_config{};
  std::filesystem::path output_dir;
  bool record_timing = false; // wall_ms is written as 0 unless set

  /// Throws ValidationError.
  void validate() const;
};

struct ResultRecord {
  SolverKind solver;
  std::uint64_t seed;
  double snr_db;
  int iter;
  double mse;
  double stop_metric;
  double wall_ms;
  bool diverged;
};

/// A ~ N(0, 1/M) i.i.d., x ~ Bernoulli-Gaussian(lambda), z = A x,
/// y = Q(z) + n with noise variance 10^(-snr_db/10). theta = +inf gives awgn.
/// Every random stream is derived from `seed`.
ProblemInstance generate_problem(std::size_t m, std::size_t n, double lambda, double theta, double snr_db,
                                 std::uint64_t seed);

/// (1/N) ||x_hat - x_true||^2. Throws DomainError on a length mismatch.
double mse(std::span<const double> x_hat, std::span<const double> x_true);

/// Runs one solver and converts its trajectory to records. A DivergenceError
/// is caught: the finite part of the trajectory is kept with `diverged` set,
/// and a run that diverged before its first iteration yields one iter-0 row
/// scoring the prior mean.
std::vector<ResultRecord> record_run(SolverKind kind, const ProblemInstance& problem, const SolverConfig& config,
                                     std::uint64_t seed, double snr_db, bool record_timing);

/// Runs every (solver, snr, seed) cell and returns the per-iteration records
/// sorted by (solver, snr, seed, iter). A diverged run contributes its last
/// finite records flagged `diverged` and does not abort the batch. When
/// output_dir is set, also writes results.csv, median.csv and plot.gp there.
/// `max_parallel_cells` caps concurrently running cells (0 reads the
/// GLM_MP_THREADS environment variable, defaulting to 1).
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config, unsigned max_parallel_cells = 0);

/// CSV with header solver,seed,snr_db,iter,mse,stop_metric,wall_ms,diverged.
void write_results_csv(std::ostream& out, std::span<const ResultRecord> records);
/// Median MSE per (solver, snr, iteration) across seeds; runs that stopped
/// early hold their final value.
void write_median_csv(std::ostream& out, std::span<const ResultRecord> records);
/// gnuplot script drawing median.csv on a log-MSE axis.
void write_plot_script(std::ostream& out, const ExperimentConfig& config);
void write_outputs(const ExperimentConfig& config, std::span<const ResultRecord> records);

/// Key = value file with one [section] per experiment.
std::vector<ExperimentConfig> load_configs(const std::filesystem::path& file);
std::vector<ExperimentConfig> parse_configs(std::istream& in);
void save_config(std::ostream& out, const ExperimentConfig& config);
/// "1, 2, 5-8" -> {1, 2, 5, 6, 7, 8}.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Named presets: "fig3" (M = N = 2000 scaled replication), "fig3-full"
/// (M = N = 10^4, node-wise solvers only), "awgn" (theta = inf, all solvers),
/// "smoke" (tiny, seconds). Throws ValidationError for unknown names.
ExperimentConfig preset(const std::string& name);

} // namespace glmmp
