#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "glmmp/error.hpp"
#include "glmmp/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDiverged = 3;

struct Overrides {
  std::optional<std::size_t> m, n;
  std::optional<double> lambda, theta, epsilon;
  std::optional<std::string> snr, solver, seeds, out;
  std::optional<int> max_iters;
  bool timing = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    auto item = s.substr(start, end - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void apply(const Overrides& o, glmmp::ExperimentConfig& c, bool many) {
  if (o.m) c.m = *o.m;
  if (o.n) c.n = *o.n;
  if (o.lambda) c.lambda = *o.lambda;
  if (o.theta) c.theta = *o.theta;
  if (o.epsilon) c.solver_config.epsilon = *o.epsilon;
  if (o.max_iters) c.solver_config.max_iters = *o.max_iters;
  if (o.snr) {
    c.snr_db_list.clear();
    for (const auto& s : split_list(*o.snr)) {
      try {
        c.snr_db_list.push_back(std::stod(s));
      } catch (const std::exception&) {
        throw glmmp::ValidationError("--snr: not a number: '" + s + "'");
      }
    }
  }
  if (o.solver) {
    c.solvers.clear();
    for (const auto& s : split_list(*o.solver)) c.solvers.push_back(glmmp::solver_from_string(s));
  }
  if (o.seeds) c.seeds = glmmp::parse_seed_list(*o.seeds);
  if (o.out) c.output_dir = many ? std::filesystem::path(*o.out) / c.name : std::filesystem::path(*o.out);
  if (o.timing) c.record_timing = true;
}

int run(const std::string& config_file, const Overrides& o) {
  auto configs = glmmp::load_configs(config_file);
  for (auto& c : configs) {
    apply(o, c, configs.size() > 1);
    c.validate();
  }
  bool any_diverged = false;
  for (const auto& c : configs) {
    std::cerr << "[" << c.name << "] M=" << c.m << " N=" << c.n << " cells="
              << c.snr_db_list.size() * c.seeds.size() << " solvers=" << c.solvers.size() << "\n";
    const auto records = glmmp::run_experiment(c);
    std::size_t diverged = 0;
    for (const auto& r : records) diverged += r.diverged;
    if (diverged) {
      any_diverged = true;
      std::cerr << "[" << c.name << "] " << diverged << " records flagged diverged\n";
    }
    if (!c.output_dir.empty()) std::cerr << "[" << c.name << "] wrote " << c.output_dir.string() << "\n";
    else glmmp::write_results_csv(std::cout, records);
  }
  return any_diverged ? kExitDiverged : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Message passing for generalized linear models"};
  app.require_subcommand(1);

  Overrides o;
  std::string config_file;
  auto* run_cmd = app.add_subcommand("run", "Run the experiments described in a config file");
  run_cmd->add_option("--config", config_file, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--m", o.m, "Measurements");
  run_cmd->add_option("--n", o.n, "Unknowns");
  run_cmd->add_option("--lambda", o.lambda, "Sparsity rate");
  run_cmd->add_option("--theta", o.theta, "Clipping threshold (inf for awgn)");
  run_cmd->add_option("--snr", o.snr, "Comma-separated SNR list in dB");
  run_cmd->add_option("--solver", o.solver, "Comma-separated solver list");
  run_cmd->add_option("--seeds", o.seeds, "Seeds, e.g. 1-10 or 1,4,7");
  run_cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
  run_cmd->add_option("--epsilon", o.epsilon, "Convergence tolerance");
  run_cmd->add_option("--out", o.out, "Output directory");
  run_cmd->add_flag("--timing", o.timing, "Record wall-clock time per iteration");

  std::string preset_name;
  auto* gen_cmd = app.add_subcommand("gen-config", "Print a preset config file");
  gen_cmd->add_option("--preset", preset_name, "fig3, fig3-full, awgn or smoke")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen_cmd) {
      glmmp::save_config(std::cout, glmmp::preset(preset_name));
      return kExitOk;
    }
    return run(config_file, o);
  } catch (const glmmp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const glmmp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
