#include "lplab/lab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lplab;
using namespace lplab::lab;

namespace {

struct Flags {
  std::optional<double> p;
  std::optional<Index> dim;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<double> eps;
  std::optional<Index> r;
  std::string out;
  std::string format = "json";
  std::string config;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--p", f.p, "exponent, 1 < p < inf");
  cmd->add_option("--dim", f.dim, "problem size");
  cmd->add_option("--seed", f.seed, "random seed (default: LAB_SEED, then 1)");
  cmd->add_option("--trials", f.trials, "number of random instances");
  cmd->add_option("--eps", f.eps, "tolerances, comma separated")->delimiter(',');
  cmd->add_option("--r", f.r, "secondary size (sign count, staircase range)");
  cmd->add_option("--out", f.out, "result file (default: <subcommand>.<format>)");
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--config", f.config, "key = value file; flags take precedence")->check(CLI::ExistingFile);
}

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) throw FlagError("bad value for '" + key + "': " + text);
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_value<double>(key, item));
  return out;
}

Settings resolve(const Flags& f) {
  Settings s;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    std::stringstream buf;
    buf << in.rdbuf();
    std::map<std::string, std::string> kv;
    try {
      kv = parse_config(buf.str());
    } catch (const LabError& e) {
      throw FlagError(f.config + ": " + e.what());
    }
    for (const auto& [k, v] : kv) {
      if (k == "p") s.p = parse_value<double>(k, v);
      else if (k == "dim") s.dim = parse_value<Index>(k, v);
      else if (k == "seed") s.seed = parse_value<std::uint64_t>(k, v);
      else if (k == "trials") s.trials = parse_value<int>(k, v);
      else if (k == "eps") s.eps = parse_list(k, v);
      else if (k == "r") s.r = parse_value<Index>(k, v);
      else if (!s.tol.set(k, parse_value<double>(k, v))) throw FlagError(f.config + ": unknown key '" + k + "'");
    }
  }
  if (f.p) s.p = f.p;
  if (f.dim) s.dim = f.dim;
  if (f.trials) s.trials = f.trials;
  if (!f.eps.empty()) s.eps = f.eps;
  if (f.r) s.r = f.r;
  if (f.seed) s.seed = f.seed;
  if (!s.seed) {
    if (const char* env = std::getenv("LAB_SEED"); env && *env) s.seed = parse_value<std::uint64_t>("LAB_SEED", env);
  }
  if (!s.seed) s.seed = 1;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l^p operator laboratory"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> names = experiment_names();
  names.push_back("selftest");
  for (const auto& n : names) add_flags(app.add_subcommand(n, n == "selftest" ? "run every property check" : "run the " + n + " experiment"), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  Table table;
  try {
    Settings s = resolve(flags);
    table = name == "selftest" ? selftest(*s.seed, s.tol) : run_experiment(name, s);
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LabError& e) {
    // settings outside a routine's domain are flag errors
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string path = flags.out.empty() ? name + "." + flags.format : flags.out;
  std::ofstream out(path, std::ios::binary);
  out << (flags.format == "csv" ? to_csv(table) : to_json(table));
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  std::cout << name << ": " << table.rows.size() << " rows, " << table.violations.size() << " violations -> " << path
            << "\n";
  for (const auto& v : table.violations) std::cerr << "  violation: " << v << "\n";
  return table.violations.empty() ? 0 : 1;
}
