#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

#include "glmmp/experiments.hpp"

namespace glmmp {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

} // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRecord> records) {
  out << "solver,seed,snr_db,iter,mse,stop_metric,wall_ms,diverged\n";
  for (const auto& r : records) {
    out << to_string(r.solver) << ',' << r.seed << ',' << num(r.snr_db) << ',' << r.iter << ',' << num(r.mse) << ','
        << num(r.stop_metric) << ',' << num(r.wall_ms) << ',' << (r.diverged ? 1 : 0) << '\n';
  }
}

void write_median_csv(std::ostream& out, std::span<const ResultRecord> records) {
  // (solver, snr) -> seed -> trajectory
  std::map<std::tuple<std::string, double>, std::map<std::uint64_t, std::vector<double>>> curves;
  for (const auto& r : records) {
    curves[{std::string(to_string(r.solver)), r.snr_db}][r.seed].push_back(r.mse);
  }

  out << "solver,snr_db,iter,median_mse\n";
  for (const auto& [key, by_seed] : curves) {
    std::size_t longest = 0;
    for (const auto& [seed, traj] : by_seed) longest = std::max(longest, traj.size());
    for (std::size_t i = 0; i < longest; ++i) {
      std::vector<double> at;
      for (const auto& [seed, traj] : by_seed) at.push_back(traj[std::min(i, traj.size() - 1)]);
      out << std::get<0>(key) << ',' << num(std::get<1>(key)) << ',' << i + 1 << ',' << num(median(at)) << '\n';
    }
  }
}

void write_plot_script(std::ostream& out, const ExperimentConfig& config) {
  out << "# gnuplot -persist plot.gp\n"
      << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set format y '10^{%L}'\n"
      << "set xlabel 'iteration'\n"
      << "set ylabel 'MSE (median over seeds)'\n"
      << "set key outside right\n"
      << "set title '" << config.name << ": M = " << config.m << ", N = " << config.n << ", lambda = " << config.lambda
      << ", theta = " << num(config.theta) << "'\n"
      << "plot \\\n";
  bool first = true;
  for (SolverKind kind : config.solvers) {
    for (double snr : config.snr_db_list) {
      if (!first) out << ", \\\n";
      first = false;
      out << "  'median.csv' every ::1 using (strcol(1) eq '" << to_string(kind) << "' && $2 == " << num(snr)
          << " ? $3 : NaN):4 with linespoints title '" << to_string(kind) << " " << num(snr) << " dB'";
    }
  }
  out << "\n";
}

void write_outputs(const ExperimentConfig& config, std::span<const ResultRecord> records) {
  std::filesystem::create_directories(config.output_dir);
  {
    std::ofstream f(config.output_dir / "results.csv");
    write_results_csv(f, records);
  }
  {
    std::ofstream f(config.output_dir / "median.csv");
    write_median_csv(f, records);
  }
  std::ofstream f(config.output_dir / "plot.gp");
  write_plot_script(f, config);
}

} // namespace glmmp
