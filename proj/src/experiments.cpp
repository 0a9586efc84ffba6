#include "glmmp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "glmmp/kernels.hpp"
#include "glmmp/omp.hpp"

namespace glmmp {

namespace {

// Independent sub-seeds for the matrix, signal and noise streams.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + stream * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

unsigned cells_from_env() {
  if (const char* env = std::getenv("GLM_MP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

struct Cell {
  double snr_db;
  std::uint64_t seed;
};

std::vector<ResultRecord> run_cell(const ExperimentConfig& config, const Cell& cell) {
  const ProblemInstance problem =
      generate_problem(config.m, config.n, config.lambda, config.theta, cell.snr_db, cell.seed);
  std::vector<ResultRecord> rows;
  for (SolverKind kind : config.solvers) {
    auto part = record_run(kind, problem, config.solver_config, cell.seed, cell.snr_db, config.record_timing);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::size_t solver_rank(const ExperimentConfig& config, SolverKind kind) {
  return static_cast<std::size_t>(std::find(config.solvers.begin(), config.solvers.end(), kind) -
                                  config.solvers.begin());
}

} // namespace

std::vector<ResultRecord> record_run(SolverKind kind, const ProblemInstance& problem, const SolverConfig& config,
                                     std::uint64_t seed, double snr_db, bool record_timing) {
  RunResult result;
  bool diverged = false;
  try {
    result = run_solver(kind, problem, config);
  } catch (const DivergenceError& e) {
    result = e.partial();
    diverged = true;
  }
  const auto score = [&](std::span<const double> x) { return problem.x_true() ? mse(x, *problem.x_true()) : kNaN; };

  std::vector<ResultRecord> rows;
  if (result.trajectory.empty()) {
    // Nothing finite was recorded; score the starting point.
    const std::vector<double> x0(problem.cols(), prior_moments(problem.prior()).mean);
    rows.push_back({kind, seed, snr_db, 0, score(x0), kNaN, 0.0, diverged});
    return rows;
  }
  for (const IterationRecord& rec : result.trajectory) {
    rows.push_back({kind, seed, snr_db, rec.iter, rec.mse, rec.stop_metric, record_timing ? rec.elapsed_ms : 0.0,
                    diverged});
  }
  return rows;
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1) throw ValidationError("M and N must be at least 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in (0, 1]");
  if (!(theta > 0.0)) throw ValidationError("theta must be positive (or inf for awgn)");
  if (snr_db_list.empty()) throw ValidationError("snr list must not be empty");
  if (seeds.empty()) throw ValidationError("seed list must not be empty");
  if (solvers.empty()) throw ValidationError("solver list must not be empty");
  for (double snr : snr_db_list) {
    if (!std::isfinite(snr)) throw ValidationError("snr values must be finite");
  }
  const bool awgn = theta == std::numeric_limits<double>::infinity();
  if (!awgn && std::find(solvers.begin(), solvers.end(), SolverKind::amp) != solvers.end()) {
    throw ValidationError("amp is only available for theta = inf (awgn channel)");
  }
  try {
    solver_config.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

ProblemInstance generate_problem(std::size_t m, std::size_t n, double lambda, double theta, double snr_db,
                                 std::uint64_t seed) {
  if (m < 1 || n < 1) throw ValidationError("M and N must be at least 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in (0, 1]");
  if (!(theta > 0.0)) throw ValidationError("theta must be positive");

  Matrix a(m, n);
  kernels::fill_gaussian(a, 1.0 / std::sqrt(static_cast<double>(m)), sub_seed(seed, 1));

  const PriorSpec prior = PriorSpec::bernoulli_gaussian(lambda);
  std::vector<double> x = prior_sample(prior, n, sub_seed(seed, 2));

  std::vector<double> z(m);
  kernels::matvec(a, x, z);

  const double noise_var = noise_var_from_snr_db(snr_db);
  const ChannelSpec channel = std::isinf(theta) ? ChannelSpec::awgn(noise_var) : ChannelSpec::clipped(noise_var, theta);
  std::vector<double> y = channel_sample(channel, z, sub_seed(seed, 3));

  return ProblemInstance(std::move(a), std::move(y), prior, channel, std::move(x));
}

double mse(std::span<const double> x_hat, std::span<const double> x_true) {
  if (x_hat.size() != x_true.size()) throw DomainError("mse: length mismatch");
  if (x_hat.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x_hat.size(); ++i) {
    const double d = x_hat[i] - x_true[i];
    s += d * d;
  }
  return s / static_cast<double>(x_hat.size());
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config, unsigned max_parallel_cells) {
  config.validate();
  std::vector<Cell> cells;
  for (double snr : config.snr_db_list) {
    for (std::uint64_t seed : config.seeds) cells.push_back({snr, seed});
  }

  const unsigned workers =
      std::max(1u, std::min<unsigned>(max_parallel_cells ? max_parallel_cells : cells_from_env(),
                                      static_cast<unsigned>(cells.size())));

  std::vector<ResultRecord> records;
  std::mutex collect;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&](int omp_threads) {
    omp_set_num_threads(omp_threads);
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        auto rows = run_cell(config, cells[i]);
        const std::lock_guard lock(collect);
        records.insert(records.end(), rows.begin(), rows.end());
      } catch (...) {
        const std::lock_guard lock(collect);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    worker(omp_get_max_threads());
  } else {
    const int per_worker = std::max(1, omp_get_max_threads() / static_cast<int>(workers));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, per_worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(records.begin(), records.end(), [&](const ResultRecord& a, const ResultRecord& b) {
    const auto ka = solver_rank(config, a.solver);
    const auto kb = solver_rank(config, b.solver);
    if (ka != kb) return ka < kb;
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.iter < b.iter;
  });

  if (!config.output_dir.empty()) write_outputs(config, records);
  return records;
}

} // namespace glmmp
