#include <charconv>
#include <istream>
#include <sstream>

#include "stablewalk/errors.hpp"
#include "stablewalk/experiments.hpp"
#include "stablewalk/format.hpp"

namespace stablewalk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("invalid value for '" + key + "': '" + value + "'");
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int v{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) bad_value(key, value);
  return v;
}

std::vector<int> to_levels(const std::string& key, const std::string& value) {
  std::vector<int> out;
  const auto dots = value.find("..");
  if (dots != std::string::npos) {
    const int a = to_int<int>(key, trim(value.substr(0, dots)));
    const int b = to_int<int>(key, trim(value.substr(dots + 2)));
    if (b < a) bad_value(key, value);
    for (int k = a; k <= b; ++k) out.push_back(k);
    return out;
  }
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int<int>(key, trim(item)));
  if (out.empty()) bad_value(key, value);
  return out;
}

}  // namespace

void apply_config_value(ExperimentConfig& c, const std::string& raw_key, const std::string& raw) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw);
  if (key == "alpha") c.alpha = to_real(key, value);
  else if (key == "eta") c.eta = to_real(key, value);
  else if (key == "p") c.p = to_real(key, value);
  else if (key == "gamma") c.gamma = to_real(key, value);
  else if (key == "A") c.A = to_real(key, value);
  else if (key == "K") c.K = to_real(key, value);
  else if (key == "n_values") c.n_values = to_levels(key, value);
  else if (key == "reps") c.reps = to_int<std::size_t>(key, value);
  else if (key == "n_ref_offset") c.n_ref_offset = to_int<int>(key, value);
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "pool_size") c.pool_size = to_int<std::size_t>(key, value);
  else if (key == "table_tail") c.table_tail = to_real(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "alpha = " << format_real(c.alpha) << '\n'
      << "eta = " << format_real(c.eta) << '\n'
      << "p = " << format_real(c.p) << '\n'
      << "gamma = " << format_real(c.gamma) << '\n'
      << "A = " << format_real(c.A) << '\n'
      << "K = " << format_real(c.K) << '\n'
      << "n_values = ";
  for (std::size_t i = 0; i < c.n_values.size(); ++i) out << (i ? "," : "") << c.n_values[i];
  out << '\n'
      << "reps = " << c.reps << '\n'
      << "n_ref_offset = " << c.n_ref_offset << '\n'
      << "seed = " << c.seed << '\n'
      << "pool_size = " << c.pool_size << '\n'
      << "table_tail = " << format_real(c.table_tail) << '\n';
  return out.str();
}

}  // namespace stablewalk
