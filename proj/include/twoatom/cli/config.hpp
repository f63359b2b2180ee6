#pragma once

/// \file config.hpp
/// Flat key=value run configuration. A config file holds one assignment per
/// line ('#' starts a comment); command-line overrides are applied after the
/// file, so the last assignment of a key wins.

#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twoatom/rates.hpp"

namespace twoatom::cli {

/// Bad configuration. `key` names the offending entry (empty if none).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { StaticFreeSpace, Thermal, Accelerated, CustomRates };

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::StaticFreeSpace: return "static-free-space";
    case Scenario::Thermal: return "thermal";
    case Scenario::Accelerated: return "accelerated";
    case Scenario::CustomRates: return "custom-rates";
  }
  return "unknown";
}

inline const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "scenario", "R",        "r",       "omega0",      "g11_down", "g11_up",
      "g12_down", "g12_up",   "v",       "s",           "theta",    "n",
      "omega0_beta", "alpha", "tau_max", "num_points",  "tau",      "epsilon",
      "output",   "sweep",    "values",  "threads"};
  return keys;
}

using ConfigMap = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace detail

/// Applies one `key=value` assignment to `map`.
inline void apply_assignment(ConfigMap& map, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(detail::trim(assignment), "expected key=value");
  }
  std::string key = detail::trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("", "empty key in assignment");
  if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  map[key] = detail::trim(assignment.substr(eq + 1));
}

inline void parse_config_text(ConfigMap& map, std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (detail::trim(line).empty()) continue;
    apply_assignment(map, line);
  }
}

inline void load_config_file(ConfigMap& map, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  parse_config_text(map, in);
}

/// Everything a subcommand needs, resolved and range-checked.
struct RunConfig {
  Scenario scenario = Scenario::StaticFreeSpace;
  std::optional<double> separation;  // R, given directly or from r and omega0
  std::optional<double> r_meters;
  std::optional<double> omega0_hz;
  RateSet custom;                    // used when scenario == CustomRates
  double theta = 0.0;
  std::optional<double> occupation;  // n
  std::optional<double> omega0_beta;
  std::optional<double> alpha;
  double tau_max = 20.0;
  std::size_t num_points = 2001;
  double tau = 10.0;
  double epsilon = kDefaultFrozenTolerance;
  std::string output;
  std::string sweep_key;
  std::vector<double> sweep_values;
  bool has_sweep_values = false;
  unsigned threads = 1;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key, "missing value");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value)) {
    throw ConfigError(key, "'" + text + "' is not a finite number");
  }
  return value;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key, "missing value");
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key, "'" + text + "' is not an integer");
  }
  return value;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    out.push_back(parse_double(key, t));
  }
  return out;
}

}  // namespace detail

inline RunConfig resolve(const ConfigMap& map) {
  RunConfig cfg;
  const auto get = [&](std::string_view key) -> const std::string* {
    const auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
  };
  const auto number = [&](const char* key) -> std::optional<double> {
    if (const std::string* v = get(key)) return detail::parse_double(key, *v);
    return std::nullopt;
  };

  if (const std::string* s = get("scenario")) {
    if (*s == "static-free-space") cfg.scenario = Scenario::StaticFreeSpace;
    else if (*s == "thermal") cfg.scenario = Scenario::Thermal;
    else if (*s == "accelerated") cfg.scenario = Scenario::Accelerated;
    else if (*s == "custom-rates") cfg.scenario = Scenario::CustomRates;
    else throw ConfigError("scenario", "unknown scenario '" + *s + "'");
  }

  // Rate source: R-based or explicit rates, never both.
  static constexpr const char* kCustomKeys[] = {"g11_down", "g11_up", "g12_down",
                                                 "g12_up",   "v",      "s"};
  const char* custom_key = nullptr;
  for (const char* k : kCustomKeys) {
    if (get(k)) {
      custom_key = k;
      break;
    }
  }
  cfg.separation = number("R");
  cfg.r_meters = number("r");
  cfg.omega0_hz = number("omega0");
  const bool physical = cfg.r_meters || cfg.omega0_hz;
  const char* r_key = cfg.separation ? "R" : physical ? (cfg.r_meters ? "r" : "omega0") : nullptr;

  if (cfg.scenario == Scenario::CustomRates) {
    if (r_key) throw ConfigError(r_key, "not allowed with scenario=custom-rates");
    if (!custom_key) throw ConfigError("g11_down", "custom-rates needs explicit rates");
    cfg.custom.g11_down = number("g11_down").value_or(0.0);
    cfg.custom.g11_up = number("g11_up").value_or(0.0);
    cfg.custom.g12_down = number("g12_down").value_or(0.0);
    cfg.custom.g12_up = number("g12_up").value_or(0.0);
    cfg.custom.v = number("v").value_or(0.0);
    cfg.custom.s = number("s").value_or(0.0);
    try {
      validate(cfg.custom);
    } catch (const std::exception& e) {
      throw ConfigError(custom_key, e.what());
    }
  } else {
    if (custom_key) {
      throw ConfigError(custom_key, "explicit rates need scenario=custom-rates");
    }
    if (cfg.separation && physical) {
      throw ConfigError("R", "give either R or r and omega0, not both");
    }
    if (physical) {
      if (!cfg.r_meters) throw ConfigError("r", "omega0 given without r");
      if (!cfg.omega0_hz) throw ConfigError("omega0", "r given without omega0");
      try {
        cfg.separation = physical_to_reduced(*cfg.r_meters, *cfg.omega0_hz).value();
      } catch (const std::exception& e) {
        throw ConfigError(*cfg.r_meters < 0.0 ? "r" : "omega0", e.what());
      }
    }
    if (!cfg.separation) throw ConfigError("R", "no separation given");
    if (!(*cfg.separation > 0.0)) throw ConfigError("R", "separation must be > 0");
  }

  cfg.occupation = number("n");
  cfg.omega0_beta = number("omega0_beta");
  cfg.alpha = number("alpha");
  if (cfg.scenario == Scenario::Thermal) {
    if (cfg.occupation && cfg.omega0_beta) {
      throw ConfigError("n", "give either n or omega0_beta, not both");
    }
    if (!cfg.occupation && !cfg.omega0_beta) throw ConfigError("n", "thermal needs n or omega0_beta");
  } else {
    if (cfg.occupation) throw ConfigError("n", "only valid with scenario=thermal");
    if (cfg.omega0_beta) throw ConfigError("omega0_beta", "only valid with scenario=thermal");
  }
  if (cfg.scenario == Scenario::Accelerated) {
    if (!cfg.alpha) throw ConfigError("alpha", "accelerated needs alpha");
  } else if (cfg.alpha) {
    throw ConfigError("alpha", "only valid with scenario=accelerated");
  }

  cfg.theta = number("theta").value_or(0.0);
  cfg.tau_max = number("tau_max").value_or(cfg.tau_max);
  if (!(cfg.tau_max > 0.0)) throw ConfigError("tau_max", "must be > 0");
  if (const std::string* v = get("num_points")) {
    const long long n = detail::parse_integer("num_points", *v);
    if (n < 2) throw ConfigError("num_points", "must be >= 2");
    cfg.num_points = static_cast<std::size_t>(n);
  }
  cfg.tau = number("tau").value_or(cfg.tau);
  if (cfg.tau < 0.0) throw ConfigError("tau", "must be >= 0");
  cfg.epsilon = number("epsilon").value_or(cfg.epsilon);
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
  if (const std::string* v = get("output")) cfg.output = *v;
  if (const std::string* v = get("sweep")) cfg.sweep_key = *v;
  if (const std::string* v = get("values")) {
    cfg.sweep_values = detail::parse_list("values", *v);
    cfg.has_sweep_values = true;
  }
  if (const std::string* v = get("threads")) {
    const long long n = detail::parse_integer("threads", *v);
    if (n < 1 || n > 1024) throw ConfigError("threads", "must be in [1, 1024]");
    cfg.threads = static_cast<unsigned>(n);
  }
  return cfg;
}

/// The environment selected by the scenario.
inline Environment environment_of(const RunConfig& cfg) {
  try {
    switch (cfg.scenario) {
      case Scenario::Thermal:
        return cfg.occupation ? Environment::thermal(*cfg.occupation)
                              : Environment::thermal_from_beta(*cfg.omega0_beta);
      case Scenario::Accelerated:
        return Environment::accelerated(*cfg.alpha);
      default:
        return Environment::vacuum();
    }
  } catch (const std::exception& e) {
    const char* key = cfg.scenario == Scenario::Accelerated ? "alpha"
                      : cfg.occupation                      ? "n"
                                                            : "omega0_beta";
    throw ConfigError(key, e.what());
  }
}

/// Rate set for the configured scenario with its environment applied.
inline RateSet rates_of(const RunConfig& cfg) {
  if (cfg.scenario == Scenario::CustomRates) return cfg.custom;
  RateSet base;
  try {
    base = static_free_space_rates(ReducedSeparation{*cfg.separation});
  } catch (const std::exception& e) {
    throw ConfigError("R", e.what());
  }
  return apply_environment(base, environment_of(cfg));
}

}  // namespace twoatom::cli
