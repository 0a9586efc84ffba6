// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "glmmp/channels.hpp"
#include "glmmp/experiments.hpp"
#include "glmmp/messages.hpp"
#include "glmmp/oracle.hpp"
#include "glmmp/priors.hpp"
#include "glmmp/solvers.hpp"

namespace {

using namespace glmmp;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kRoundTripTol = 1e-12;
constexpr double kRoundTripBudgetS = 1.0;
constexpr double kPriorOracleTol = 1e-8;
constexpr double kChannelOracleTol = 1e-7;
constexpr double kOracleBudgetS = 30.0;
constexpr double kGapTol = 0.10;
constexpr int kGapIters = 20;
constexpr double kEquivalenceBudgetS = 600.0;
constexpr double kOnsagerTol = 1e-10;
constexpr double kVarianceOrderTol = 1e-10;
constexpr double kScaleBudgetS = 300.0;

constexpr std::size_t kDim = 2000;
constexpr std::size_t kLargeDim = 10000;
constexpr double kLambda = 0.5;
constexpr double kTheta = 1.0;
constexpr int kMaxIters = 50;
constexpr double kEpsilon = 1e-6;
const std::vector<double> kSnrs{10.0, 20.0, 30.0};
const std::vector<double> kSnrGrid{10.0, 15.0, 20.0, 25.0, 30.0};
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

SolverConfig run_config() {
  SolverConfig c;
  c.max_iters = kMaxIters;
  c.epsilon = kEpsilon;
  return c;
}

// MSE after iteration t, holding the final value once a run has stopped.
double mse_at(const RunResult& r, int t) {
  double last = kNaN;
  for (const auto& rec : r.trajectory) {
    if (rec.iter > t) break;
    last = rec.mse;
  }
  return last;
}

double final_mse(const RunResult& r) { return r.trajectory.empty() ? kNaN : r.trajectory.back().mse; }

struct RunSet {
  // runs[snr][solver] holds one result per seed.
  std::map<double, std::map<SolverKind, std::vector<RunResult>>> runs;
  double seconds = 0.0;
};

RunSet run_grid(double theta, const std::vector<double>& snrs, const std::vector<SolverKind>& solvers) {
  RunSet out;
  const auto t0 = Clock::now();
  const SolverConfig config = run_config();
  for (double snr : snrs) {
    for (std::uint64_t seed : kSeeds) {
      const ProblemInstance problem = generate_problem(kDim, kDim, kLambda, theta, snr, seed);
      for (SolverKind kind : solvers) {
        RunResult r;
        try {
          r = run_solver(kind, problem, config);
        } catch (const DivergenceError& e) {
          r = e.partial();
          r.converged = false;
          std::printf("    note: %s diverged at snr %g seed %llu\n", std::string(to_string(kind)).c_str(), snr,
                      static_cast<unsigned long long>(seed));
        }
        out.runs[snr][kind].push_back(std::move(r));
      }
    }
  }
  out.seconds = seconds_since(t0);
  return out;
}

double rel_gap_to(double a, double ref) { return std::abs(a - ref) / ref; }
double rel_gap_sym(double a, double b) { return std::abs(a - b) / std::min(a, b); }

struct GapSummary {
  double worst_iter_median = 0.0; // worst over (snr, t) of the median over seeds
  double worst_final_median = 0.0;
  std::string where;
};

GapSummary gaps(const RunSet& set, SolverKind a, SolverKind b, const std::function<double(double, double)>& gap) {
  GapSummary s;
  for (const auto& [snr, by_solver] : set.runs) {
    const auto& ra = by_solver.at(a);
    const auto& rb = by_solver.at(b);
    for (int t = 1; t <= kGapIters; ++t) {
      std::vector<double> g;
      for (std::size_t i = 0; i < ra.size(); ++i) g.push_back(gap(mse_at(ra[i], t), mse_at(rb[i], t)));
      const double med = median(g);
      if (!(med <= s.worst_iter_median)) {
        s.worst_iter_median = med;
        s.where = "snr " + std::to_string(static_cast<int>(snr)) + " iter " + std::to_string(t);
      }
    }
    std::vector<double> g;
    for (std::size_t i = 0; i < ra.size(); ++i) g.push_back(gap(final_mse(ra[i]), final_mse(rb[i])));
    const double med = median(g);
    if (!(med <= s.worst_final_median)) s.worst_final_median = med;
  }
  return s;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs) {
  std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome round_trip() {
  std::mt19937_64 rng(101);
  // Variances within two decades of each other; see the unit test for why.
  std::uniform_real_distribution<double> mean(-10.0, 10.0), logvar(-1.0, 1.0);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GaussianMessage a{mean(rng), std::pow(10.0, logvar(rng))};
    const GaussianMessage b{mean(rng), std::pow(10.0, logvar(rng))};
    const GaussianMessage back = ep_extrinsic(gaussian_product(a, b), b);
    worst = std::max({worst, std::abs(back.mean - a.mean) / std::max(1.0, std::abs(a.mean)),
                      std::abs(back.variance - a.variance) / a.variance});
  }
  const double secs = seconds_since(t0);
  return {worst <= kRoundTripTol && secs < kRoundTripBudgetS,
          "10000 cases, worst relative error " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s"};
}

Outcome oracle_agreement() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_prior = 0.0, worst_channel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto spec = PriorSpec::bernoulli_gaussian(0.05 + 0.95 * u(rng));
    const double r = -10.0 + 20.0 * u(rng), v = std::pow(10.0, -3.0 + 6.0 * u(rng));
    const auto o = prior_moments(spec, r, v);
    const auto q = quad_moments(FactorFn::prior(spec), r, v);
    worst_prior = std::max({worst_prior, std::abs(o.mean - q.mean), std::abs(o.variance - q.variance)});
  }
  for (int i = 0; i < 1000; ++i) {
    const double theta = 0.2 + 2.8 * u(rng);
    const auto spec = ChannelSpec::clipped(std::pow(10.0, -4.0 + 4.0 * u(rng)), theta);
    const double y = -2.0 * theta + 4.0 * theta * u(rng);
    const double zs = -3.0 + 6.0 * u(rng), vs = std::pow(10.0, -3.0 + 4.0 * u(rng));
    const auto c = channel_moments(spec, y, zs, vs);
    const auto q = quad_moments(FactorFn::likelihood(spec, y), zs, vs);
    worst_channel = std::max({worst_channel, std::abs(c.mean - q.mean), std::abs(c.variance - q.variance)});
  }
  const double secs = seconds_since(t0);
  return {worst_prior <= kPriorOracleTol && worst_channel <= kChannelOracleTol && secs < kOracleBudgetS,
          "worst prior deviation " + fmt("%.2e", worst_prior) + ", worst channel deviation " +
              fmt("%.2e", worst_channel) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome clipped_equivalence(const RunSet& set) {
  const auto s = gaps(set, SolverKind::epmpa, SolverKind::gamp, rel_gap_to);
  const bool ok = s.worst_iter_median <= kGapTol && s.worst_final_median <= kGapTol && set.seconds < kEquivalenceBudgetS;
  return {ok, "worst median per-iteration gap " + fmt("%.4f", s.worst_iter_median) + " (" + s.where +
                  "), worst median final gap " + fmt("%.4f", s.worst_final_median) + ", " +
                  fmt("%.0f", set.seconds) + " s"};
}

Outcome awgn_equivalence(const RunSet& set) {
  const std::vector<SolverKind> all{SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified, SolverKind::amp};
  double worst_iter = 0.0, worst_final = 0.0;
  std::string where;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const auto s = gaps(set, all[i], all[j], rel_gap_sym);
      if (!(s.worst_iter_median <= worst_iter)) {
        worst_iter = s.worst_iter_median;
        where = std::string(to_string(all[i])) + "/" + std::string(to_string(all[j])) + " " + s.where;
      }
      worst_final = std::max(worst_final, s.worst_final_median);
    }
  }
  const bool ok = worst_iter <= kGapTol && worst_final <= kGapTol && set.seconds < kEquivalenceBudgetS;
  return {ok, "worst pairwise median per-iteration gap " + fmt("%.4f", worst_iter) + " (" + where +
                  "), worst pairwise median final gap " + fmt("%.4f", worst_final) + ", " +
                  fmt("%.0f", set.seconds) + " s"};
}

Outcome onsager_identity(const RunSet& set) {
  double worst = 0.0;
  std::size_t checked = 0;
  bool every_run_checked = true;
  for (const auto& [snr, by_solver] : set.runs) {
    for (const RunResult& r : by_solver.at(SolverKind::amp)) {
      std::size_t here = 0;
      for (const auto& rec : r.trajectory) {
        if (rec.iter < 2) continue; // no previous iteration to compare with
        const double d = rec.onsager_from_derivative, v = rec.onsager_from_variance;
        const double err = std::abs(d - v) / std::abs(v);
        worst = std::isfinite(err) ? std::max(worst, err) : kNaN;
        if (std::isnan(worst)) return {false, "non-finite Onsager coefficient"};
        ++here;
      }
      every_run_checked = every_run_checked && (here + 1 == r.trajectory.size());
      checked += here;
    }
  }
  return {worst <= kOnsagerTol && every_run_checked && checked > 0,
          std::to_string(checked) + " iterations, worst relative difference " + fmt("%.2e", worst)};
}

// Per-node count of v_hat_x(t+1) > v^v_n(t) on one instance, stepped by hand.
std::string variance_order_census() {
  const ProblemInstance problem = generate_problem(kDim, kDim, kLambda, kTheta, 20.0, 1);
  const SolverConfig config = run_config();
  EpmpaState state = epmpa_init(problem, config);
  std::size_t violations = 0, total = 0;
  double worst_ratio = 1.0;
  for (int t = 1; t <= kGapIters; ++t) {
    epmpa_step(problem, config, state);
    for (std::size_t n = 0; n < problem.cols(); ++n) {
      ++total;
      if (state.v_hat_x[n] > state.v_v_node[n] + kVarianceOrderTol) {
        ++violations;
        worst_ratio = std::max(worst_ratio, state.v_hat_x[n] / state.v_v_node[n]);
      }
    }
  }
  return std::to_string(violations) + " of " + std::to_string(total) + " node-iterations violate on snr 20 seed 1" +
         ", worst ratio " + fmt("%.3f", worst_ratio);
}

Outcome variance_ordering(const std::vector<const RunSet*>& sets) {
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t iters = 0, bad_iters = 0;
  for (const RunSet* set : sets) {
    for (const auto& [snr, by_solver] : set->runs) {
      for (const RunResult& r : by_solver.at(SolverKind::epmpa)) {
        for (const auto& rec : r.trajectory) {
          ++iters;
          if (!(rec.variance_excess <= kVarianceOrderTol)) ++bad_iters;
          worst = std::max(worst, rec.variance_excess);
        }
      }
    }
  }
  return {bad_iters == 0 && iters > 0, std::to_string(bad_iters) + " of " + std::to_string(iters) +
                                           " iterations violate, worst excess " + fmt("%.4f", worst) + "; " +
                                           variance_order_census()};
}

Outcome snr_ordering(const RunSet& set) {
  bool ok = true;
  std::string detail;
  for (SolverKind kind : {SolverKind::epmpa, SolverKind::gamp}) {
    detail += std::string(to_string(kind)) + ":";
    double prev = std::numeric_limits<double>::infinity();
    for (double snr : kSnrGrid) {
      std::vector<double> finals;
      for (const RunResult& r : set.runs.at(snr).at(kind)) finals.push_back(final_mse(r));
      const double med = median(finals);
      ok = ok && med < prev;
      prev = med;
      detail += " " + fmt("%.4g", med);
    }
    detail += kind == SolverKind::epmpa ? "; " : "";
  }
  return {ok, "median final mse over snr 10..30 dB, " + detail};
}

struct Timed {
  double seconds;
  int iterations;
  bool diverged;
};

Timed timed_run(SolverKind kind, const ProblemInstance& problem) {
  SolverConfig c;
  c.max_iters = kMaxIters;
  c.epsilon = 1e-300; // run every iteration
  c.record_trajectory = false;
  const auto t0 = Clock::now();
  try {
    const RunResult r = run_solver(kind, problem, c);
    return {seconds_since(t0), r.iterations_run, false};
  } catch (const DivergenceError& e) {
    return {seconds_since(t0), e.partial().iterations_run, true};
  }
}

Outcome scale_check() {
  std::string detail;
  bool ok = true;
  auto check = [&](const char* label, const Timed& t) {
    ok = ok && !t.diverged && t.iterations == kMaxIters && t.seconds < kScaleBudgetS;
    detail += std::string(label) + " " + std::to_string(t.iterations) + " iters in " + fmt("%.1f", t.seconds) +
              " s" + (t.diverged ? " (diverged)" : "") + "; ";
  };
  {
    const ProblemInstance p = generate_problem(kLargeDim, kLargeDim, kLambda, kTheta, 20.0, 1);
    check("gamp 10^4", timed_run(SolverKind::gamp, p));
  }
  {
    const ProblemInstance p = generate_problem(kLargeDim, kLargeDim, kLambda, std::numeric_limits<double>::infinity(),
                                               20.0, 1);
    check("amp 10^4", timed_run(SolverKind::amp, p));
  }
  {
    const ProblemInstance p = generate_problem(kDim, kDim, kLambda, kTheta, 20.0, 1);
    check("epmpa 2000", timed_run(SolverKind::epmpa, p));
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / ("glmmp-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  ExperimentConfig a = preset("fig3");
  ExperimentConfig b = a;
  a.output_dir = root / "a";
  b.output_dir = root / "b";
  run_experiment(a, 1);
  run_experiment(b, 2); // different cell scheduling
  const std::string ra = slurp(a.output_dir / "results.csv"), rb = slurp(b.output_dir / "results.csv");
  const std::string ma = slurp(a.output_dir / "median.csv"), mb = slurp(b.output_dir / "median.csv");
  std::filesystem::remove_all(root);
  const bool ok = !ra.empty() && ra == rb && ma == mb;
  return {ok, "results.csv " + std::to_string(ra.size()) + " bytes " + (ra == rb ? "identical" : "DIFFER") +
                  ", median.csv " + (ma == mb ? "identical" : "DIFFER")};
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto want = [&](std::initializer_list<int> ids) {
    if (only.empty()) return true;
    return std::any_of(ids.begin(), ids.end(), [&](int id) { return only.count(id) > 0; });
  };

  auto timed = [](int id, const std::string& name, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o, seconds_since(t0));
  };

  if (want({1})) timed(1, "gaussian message round trip", round_trip);
  if (want({2})) timed(2, "closed-form moments match quadrature", oracle_agreement);

  RunSet clipped, clipped_extra, awgn;
  if (want({3, 6, 7})) clipped = run_grid(kTheta, kSnrs, {SolverKind::epmpa, SolverKind::gamp});
  if (want({4, 5, 6}))
    awgn = run_grid(std::numeric_limits<double>::infinity(), kSnrs,
                    {SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified, SolverKind::amp});

  if (want({3})) timed(3, "edgewise EP and GAMP agree on the clipped channel", [&] { return clipped_equivalence(clipped); });
  if (want({4})) timed(4, "all four solvers agree on the awgn channel", [&] { return awgn_equivalence(awgn); });
  if (want({5})) timed(5, "AMP Onsager coefficient matches the variance ratio", [&] { return onsager_identity(awgn); });
  if (want({6}))
    timed(6, "edgewise EP posterior variance never exceeds v^v", [&] { return variance_ordering({&clipped, &awgn}); });
  if (want({7})) {
    timed(7, "median final mse decreases with snr", [&] {
      clipped_extra = run_grid(kTheta, {15.0, 25.0}, {SolverKind::epmpa, SolverKind::gamp});
      RunSet grid = clipped;
      for (auto& [snr, runs] : clipped_extra.runs) grid.runs[snr] = runs;
      return snr_ordering(grid);
    });
  }
  if (want({8})) timed(8, "large instances finish within budget", scale_check);
  if (want({9})) timed(9, "fig3 preset output is byte-identical across runs", determinism);

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
