#pragma once

#include "lplab/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lplab::lab {

using Json = nlohmann::ordered_json;

// Comparison slacks; a config file may override any of them by name.
struct Tolerances {
  double slack = 1e-9;       // bracket comparisons against constants
  double identity = 1e-12;   // EV = I, RL = I, EW = I, sum f = 1
  double idempotent = 1e-10; // ||Q^2 - Q||
  double similarity = 1e-10; // S(T2+K)S^{-1} = T1 (+) T3
  double condition = 1e-6;   // condition <= 7 beta^6
  double spectral = 1e-8;    // p = 2 circulant bracket
  double fixman = 1e-6;      // p = 2 ratio and the frozen regression
  double commutator = 1e-12;

  bool set(const std::string& key, double value);
};

struct Settings {
  std::optional<double> p;
  std::optional<Index> dim;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::vector<double>> eps;
  std::optional<Index> r;
  Tolerances tol;
};

struct Table {
  std::string experiment;
  Json params = Json::object();
  std::vector<Json> rows;
  std::vector<std::string> violations;
};

const std::vector<std::string>& experiment_names();
// Throws LabError(invalid_argument) for unknown names or out-of-range settings.
Table run_experiment(const std::string& name, const Settings& s);

struct Criterion {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};
// Criteria 1-9; criterion 10 (cross-process determinism) lives with the CLI.
std::vector<Criterion> acceptance_criteria(std::uint64_t seed, const Tolerances& tol);
Table selftest(std::uint64_t seed, const Tolerances& tol);

// Deterministic emitters: fixed key order, floats with 17 significant digits.
std::string to_json(const Table& t);
std::string to_csv(const Table& t);
std::string format_double(double x);

// key = value lines; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace lplab::lab
