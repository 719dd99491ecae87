#include "lplab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lplab::lab {

bool Tolerances::set(const std::string& key, double value) {
  static const std::map<std::string, double Tolerances::*> fields = {
      {"slack", &Tolerances::slack},           {"identity", &Tolerances::identity},
      {"idempotent", &Tolerances::idempotent}, {"similarity", &Tolerances::similarity},
      {"condition", &Tolerances::condition},   {"spectral", &Tolerances::spectral},
      {"fixman", &Tolerances::fixman},         {"commutator", &Tolerances::commutator},
  };
  auto it = fields.find(key);
  if (it == fields.end()) return false;
  this->*(it->second) = value;
  return true;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        emit(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        emit(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string csv_cell(const Json& j) {
  switch (j.type()) {
    case Json::value_t::number_float: {
      std::string s = format_double(j.get<double>());
      return s.front() == '"' ? s.substr(1, s.size() - 2) : s;
    }
    case Json::value_t::string: {
      std::string s = j.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
      return out + "\"";
    }
    case Json::value_t::null:
      return "";
    default:
      return j.dump();
  }
}

}  // namespace

std::string to_json(const Table& t) {
  Json doc = Json::object();
  doc["experiment"] = t.experiment;
  doc["params"] = t.params;
  doc["rows"] = Json::array();
  for (const auto& r : t.rows) doc["rows"].push_back(r);
  doc["violations"] = Json::array();
  for (const auto& v : t.violations) doc["violations"].push_back(v);
  std::ostringstream os;
  emit(os, doc, 0);
  os << "\n";
  return os.str();
}

std::string to_csv(const Table& t) {
  std::vector<std::string> keys;
  for (const auto& r : t.rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) keys.push_back(it.key());
  std::ostringstream os;
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) os << ",";
      if (r.contains(keys[i])) os << csv_cell(r[keys[i]]);
    }
    os << "\n";
  }
  return os.str();
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw LabError(ErrorKind::invalid_argument, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw LabError(ErrorKind::invalid_argument, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace lplab::lab
