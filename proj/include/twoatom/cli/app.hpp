#pragma once

/// \file app.hpp
/// Subcommands of the `twoatom` command-line tool.
///
/// Exit codes: 0 success, 1 verification failure, 2 configuration error,
/// 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twoatom/analysis.hpp"
#include "twoatom/cli/config.hpp"
#include "twoatom/dynamics.hpp"
#include "twoatom/oracle.hpp"
#include "twoatom/rates.hpp"
#include "twoatom/trace.hpp"

namespace twoatom::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

/// Twelve significant digits, the precision of every CSV and table value.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

/// Writes `text` to `path`, or to `fallback` when `path` is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline std::string render_rates(const RunConfig& cfg) {
  const RateSet rates = rates_of(cfg);
  const CollectiveRates c = collective(rates);
  std::ostringstream os;
  const auto row = [&os](const std::string& name, const std::string& value) {
    os << name << std::string(name.size() < 20 ? 20 - name.size() : 1, ' ') << value << '\n';
  };
  row("scenario", to_string(cfg.scenario));
  if (cfg.scenario != Scenario::CustomRates) {
    if (cfg.r_meters) row("r_m", format_number(*cfg.r_meters));
    if (cfg.omega0_hz) row("omega0_hz", format_number(*cfg.omega0_hz));
    row("R", format_number(*cfg.separation));
  }
  const Environment env = environment_of(cfg);
  row("environment", to_string(env.kind()));
  if (env.kind() == EnvironmentKind::Thermal) row("n", format_number(env.occupation()));
  if (env.kind() == EnvironmentKind::Accelerated) row("alpha", format_number(env.alpha()));
  row("g11_down", format_number(rates.g11_down));
  row("g11_up", format_number(rates.g11_up));
  row("g12_down", format_number(rates.g12_down));
  row("g12_up", format_number(rates.g12_up));
  row("v", format_number(rates.v));
  row("s", format_number(rates.s));
  row("gamma_plus_down", format_number(c.gamma_plus_down));
  row("gamma_minus_down", format_number(c.gamma_minus_down));
  row("gamma_plus_up", format_number(c.gamma_plus_up));
  row("gamma_minus_up", format_number(c.gamma_minus_up));
  row("gamma11_total", format_number(c.gamma11_total));
  row("gamma12_total", format_number(c.gamma12_total));
  return os.str();
}

inline constexpr const char* kTraceHeader = "tau,coherence,p1,p2,concurrence,subradiant_overlap";

inline std::string render_trace(const CoherenceTrace& t) {
  std::string text = kTraceHeader;
  text += '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    text += format_number(t.taus[i]) + ',' + format_number(t.coherence[i]) + ',' +
            format_number(t.p1[i]) + ',' + format_number(t.p2[i]) + ',' +
            format_number(t.concurrence[i]) + ',' + format_number(t.subradiant_overlap[i]) +
            '\n';
  }
  return text;
}

inline CoherenceTrace trace_of(const RunConfig& cfg) {
  const RateSet rates = rates_of(cfg);
  const std::vector<double> grid = linear_grid(cfg.tau_max, cfg.num_points);
  return trace(InitialState{cfg.theta}, rates, grid);
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json frozen_json(const FrozenReport& r, double theta) {
  ordered_json j;
  j["theta"] = theta;
  j["subradiant_decay"] = r.subradiant_decay;
  j["superradiant_decay"] = r.superradiant_decay;
  j["classification"] = to_string(r.classification);
  j["epsilon"] = r.epsilon;
  j["asymptotic_value"] = r.asymptotic_value;
  return j;
}

inline std::string render_frozen(const RunConfig& cfg) {
  const FrozenReport r = check_frozen(rates_of(cfg), cfg.theta, cfg.epsilon);
  return frozen_json(r, cfg.theta).dump() + '\n';
}

inline const char* kSweepKeys[] = {"R", "theta", "n", "alpha"};

/// One configuration per sweep value, validated up front so that errors do
/// not depend on execution order.
inline std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
  const std::string& key = cfg.sweep_key;
  if (key.empty()) throw ConfigError("sweep", "no sweep key given");
  if (std::find(std::begin(kSweepKeys), std::end(kSweepKeys), key) == std::end(kSweepKeys)) {
    throw ConfigError("sweep", "cannot sweep '" + key + "' (use R, theta, n or alpha)");
  }
  if (cfg.sweep_values.empty()) throw ConfigError("values", "empty value list");
  if (key == "R" && cfg.scenario == Scenario::CustomRates) {
    throw ConfigError("sweep", "R cannot be swept with scenario=custom-rates");
  }
  if (key == "n" && cfg.scenario != Scenario::Thermal) {
    throw ConfigError("sweep", "sweeping n needs scenario=thermal");
  }
  if (key == "alpha" && cfg.scenario != Scenario::Accelerated) {
    throw ConfigError("sweep", "sweeping alpha needs scenario=accelerated");
  }

  std::vector<RunConfig> points;
  points.reserve(cfg.sweep_values.size());
  for (double value : cfg.sweep_values) {
    RunConfig p = cfg;
    if (key == "R") {
      p.separation = value;
      p.r_meters.reset();
      p.omega0_hz.reset();
      if (!(value > 0.0)) throw ConfigError("values", "R must be > 0");
    } else if (key == "theta") {
      p.theta = value;
    } else if (key == "n") {
      p.occupation = value;
      p.omega0_beta.reset();
    } else {
      p.alpha = value;
    }
    try {
      (void)rates_of(p);
      (void)InitialState{p.theta};
    } catch (const ConfigError& e) {
      throw ConfigError("values", e.what());
    } catch (const std::exception& e) {
      throw ConfigError("values", e.what());
    }
    points.push_back(std::move(p));
  }
  return points;
}

inline std::string sweep_line(const RunConfig& p, double value) {
  const RateSet rates = rates_of(p);
  const InitialState init{p.theta};
  const FrozenReport frozen = check_frozen(rates, p.theta, p.epsilon);
  const AtomicState state = amplitudes(init, rates, p.tau);
  const XStateMatrix rho = reduced_density_matrix(state);
  const bool decayed = state.b1 == complex{} && state.b2 == complex{};

  ordered_json j;
  j["key"] = p.sweep_key;
  j["value"] = value;
  j["scenario"] = to_string(p.scenario);
  j["theta"] = p.theta;
  j["tau"] = p.tau;
  j["rates"] = ordered_json{{"g11_down", rates.g11_down}, {"g11_up", rates.g11_up},
                            {"g12_down", rates.g12_down}, {"g12_up", rates.g12_up},
                            {"v", rates.v},               {"s", rates.s}};
  ordered_json fj = frozen_json(frozen, p.theta);
  fj.erase("theta");
  j["frozen"] = std::move(fj);
  j["plateau_timescale"] = plateau_timescale(rates);  // inf -> null
  j["coherence"] = coherence_l1(init, rates, p.tau);
  j["p1"] = rho.rho33;
  j["p2"] = rho.rho22;
  j["concurrence"] = concurrence(rho);
  if (decayed) {
    j["subradiant_overlap"] = nullptr;
  } else {
    j["subradiant_overlap"] = subradiant_overlap(state);
  }
  return j.dump();
}

/// Evaluates the sweep on up to `threads` workers. Each worker owns a
/// disjoint set of output slots, so the result is independent of scheduling.
inline std::string render_sweep(const RunConfig& cfg, unsigned threads) {
  const std::vector<RunConfig> points = expand_sweep(cfg);
  std::vector<std::string> lines(points.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      lines[i] = sweep_line(points[i], cfg.sweep_values[i]);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < points.size(); i += workers) {
            lines[i] = sweep_line(points[i], cfg.sweep_values[i]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::string text;
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  return text;
}

inline std::string render_verification(const VerificationReport& r) {
  const auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  std::ostringstream os;
  os << "verify seed=" << r.seed << " samples=" << r.samples << '\n';
  os << "amplitude_residual    max=" << format_sci(r.max_amplitude_residual)
     << " threshold=" << format_sci(kAmplitudeTolerance) << ' ' << verdict(r.amplitudes_pass())
     << '\n';
  os << "convergence_order     order=" << format_sci(r.convergence_order)
     << " errors=" << format_sci(r.convergence_error_coarse) << '/'
     << format_sci(r.convergence_error_fine) << " range=[" << kMinConvergenceOrder << ','
     << kMaxConvergenceOrder << "] " << verdict(r.convergence_pass()) << '\n';
  os << "eigen_residual        max=" << format_sci(r.max_eigen_residual)
     << " threshold=" << format_sci(kEigenTolerance) << ' ' << verdict(r.eigen_pass()) << '\n';
  os << "series_remainder      excess=" << format_sci(r.max_series_excess) << ' '
     << verdict(r.series_pass()) << '\n';
  os << "modulation_agreement  max=" << format_sci(r.max_modulation_disagreement)
     << " threshold=" << format_sci(kModulationAgreement) << ' '
     << verdict(r.modulation_pass()) << '\n';
  os << "result " << verdict(r.passed()) << '\n';
  return os.str();
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collective radiative dynamics and coherence of two atoms"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_path;
  std::uint64_t seed = 42;
  int samples = 200;
  unsigned threads = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--set", overrides, "override a key (key=value), repeatable");
    sub->add_option("--output", output_path, "write results to this file");
    sub->add_option("--seed", seed, "seed for pseudo-random sampling");
  };
  CLI::App* rates_cmd = app.add_subcommand("rates", "print rate coefficients");
  CLI::App* trace_cmd = app.add_subcommand("trace", "coherence trace as CSV");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep as JSON lines");
  CLI::App* frozen_cmd = app.add_subcommand("frozen", "frozen-coherence report as JSON");
  CLI::App* verify_cmd = app.add_subcommand("verify", "check closed forms against the oracle");
  for (CLI::App* sub : {rates_cmd, trace_cmd, sweep_cmd, frozen_cmd, verify_cmd}) {
    add_common(sub);
  }
  sweep_cmd->add_option("--threads", threads, "worker threads for the sweep");
  verify_cmd->add_option("--samples", samples, "number of random parameter sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (verify_cmd->parsed()) {
      if (samples < 1) throw ConfigError("samples", "must be >= 1");
      const VerificationReport report = run_verification(seed, samples);
      emit(output_path, render_verification(report), out);
      return report.passed() ? kExitOk : kExitVerificationFailed;
    }

    ConfigMap map;
    if (!config_path.empty()) load_config_file(map, config_path);
    for (const auto& o : overrides) apply_assignment(map, o);
    RunConfig cfg = resolve(map);
    if (!output_path.empty()) cfg.output = output_path;
    if (threads > 0) cfg.threads = threads;

    if (rates_cmd->parsed()) {
      emit(cfg.output, render_rates(cfg), out);
    } else if (trace_cmd->parsed()) {
      emit(cfg.output, render_trace(trace_of(cfg)), out);
    } else if (sweep_cmd->parsed()) {
      emit(cfg.output, render_sweep(cfg, cfg.threads), out);
    } else if (frozen_cmd->parsed()) {
      emit(cfg.output, render_frozen(cfg), out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace twoatom::cli
