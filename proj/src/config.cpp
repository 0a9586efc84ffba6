#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "glmmp/experiments.hpp"

namespace glmmp {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ValidationError("'" + key + "': not a number: '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto u = std::stoull(v, &used);
    if (used == v.size() && v.find('-') == std::string::npos) return u;
  } catch (const std::exception&) {
  }
  throw ValidationError("'" + key + "': not a non-negative integer: '" + v + "'");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

ExperimentConfig from_section(const std::string& name, const pt::ptree& section) {
  static const std::set<std::string> known{"M", "N", "lambda", "theta", "snr_db", "solvers", "seeds",
                                           "max_iters", "epsilon", "damping", "variance_floor",
                                           "variance_cap", "output_dir", "timing"};
  ExperimentConfig c;
  c.name = name;
  for (const auto& [key, node] : section) {
    if (!known.contains(key)) throw ValidationError("[" + name + "]: unknown key '" + key + "'");
    const std::string v = trim(node.get_value<std::string>());
    if (key == "M") c.m = to_u64(key, v);
    else if (key == "N") c.n = to_u64(key, v);
    else if (key == "lambda") c.lambda = to_double(key, v);
    else if (key == "theta") c.theta = to_double(key, v);
    else if (key == "snr_db") {
      c.snr_db_list.clear();
      for (const auto& s : split(v)) c.snr_db_list.push_back(to_double(key, s));
    } else if (key == "solvers") {
      c.solvers.clear();
      for (const auto& s : split(v)) c.solvers.push_back(solver_from_string(s));
    } else if (key == "seeds") {
      c.seeds = parse_seed_list(v);
    } else if (key == "max_iters") c.solver_config.max_iters = static_cast<int>(to_u64(key, v));
    else if (key == "epsilon") c.solver_config.epsilon = to_double(key, v);
    else if (key == "damping") c.solver_config.damping = to_double(key, v);
    else if (key == "variance_floor") c.solver_config.variance_floor = to_double(key, v);
    else if (key == "variance_cap") c.solver_config.variance_cap = to_double(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "timing") {
      if (v != "true" && v != "false") throw ValidationError("'timing' must be true or false");
      c.record_timing = v == "true";
    }
  }
  return c;
}

} // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      seeds.push_back(to_u64("seeds", item));
      continue;
    }
    const auto lo = to_u64("seeds", trim(item.substr(0, dash)));
    const auto hi = to_u64("seeds", trim(item.substr(dash + 1)));
    if (hi < lo) throw ValidationError("seeds: empty range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<ExperimentConfig> parse_configs(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  for (const auto& [name, section] : tree) {
    if (section.empty()) throw ValidationError("config: key '" + name + "' outside of a [section]");
    out.push_back(from_section(name, section));
  }
  if (out.empty()) throw ValidationError("config: no [experiment] sections");
  return out;
}

std::vector<ExperimentConfig> load_configs(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file " + file.string());
  return parse_configs(in);
}

void save_config(std::ostream& out, const ExperimentConfig& c) {
  out << '[' << c.name << "]\n"
      << "M = " << c.m << '\n'
      << "N = " << c.n << '\n'
      << "lambda = " << fmt(c.lambda) << '\n'
      << "theta = " << fmt(c.theta) << '\n'
      << "snr_db = " << join(c.snr_db_list, fmt) << '\n'
      << "solvers = " << join(c.solvers, [](SolverKind k) { return std::string(to_string(k)); }) << '\n'
      << "seeds = " << join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n'
      << "max_iters = " << c.solver_config.max_iters << '\n'
      << "epsilon = " << fmt(c.solver_config.epsilon) << '\n'
      << "damping = " << fmt(c.solver_config.damping) << '\n'
      << "variance_floor = " << fmt(c.solver_config.variance_floor) << '\n'
      << "variance_cap = " << fmt(c.solver_config.variance_cap) << '\n';
  if (!c.output_dir.empty()) out << "output_dir = " << c.output_dir.string() << '\n';
  out << "timing = " << (c.record_timing ? "true" : "false") << '\n';
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.solver_config.max_iters = 50;
  c.solver_config.epsilon = 1e-6;
  if (name == "fig3") {
    c.solvers = {SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified};
    c.output_dir = "out/fig3";
  } else if (name == "fig3-full") {
    c.m = c.n = 10000;
    c.solvers = {SolverKind::gamp, SolverKind::gamp_simplified};
    c.output_dir = "out/fig3-full";
  } else if (name == "awgn") {
    c.theta = std::numeric_limits<double>::infinity();
    c.snr_db_list = {10.0, 20.0, 30.0};
    c.solvers = {SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified, SolverKind::amp};
    c.output_dir = "out/awgn";
  } else if (name == "smoke") {
    c.m = c.n = 200;
    c.snr_db_list = {10.0, 20.0};
    c.seeds = {1, 2};
    c.solver_config.max_iters = 15;
    c.solvers = {SolverKind::epmpa, SolverKind::gamp, SolverKind::gamp_simplified};
    c.output_dir = "out/smoke";
  } else {
    throw ValidationError("unknown preset '" + name + "' (fig3, fig3-full, awgn, smoke)");
  }
  return c;
}

} // namespace glmmp
