#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "twoatom/cli/app.hpp"

namespace twoatom::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"twoatom"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("twoatom_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

double rate_row(const std::string& table, const std::string& name) {
  for (const auto& line : lines_of(table)) {
    std::stringstream ss(line);
    std::string key;
    std::string value;
    ss >> key >> value;
    if (key == name) return std::strtod(value.c_str(), nullptr);
  }
  ADD_FAILURE() << "row " << name << " missing";
  return NAN;
}

TEST(CliConfig, FileAndOverrides) {
  TempDir dir;
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# static pair\nscenario = static-free-space\nR = 1\n\ntheta=0.5\n";
  const Result a = run_cli({"frozen", "--config", cfg.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)["theta"], 0.5);

  const Result b = run_cli({"frozen", "--config", cfg.string(), "--set", "R=0.14", "--set",
                            "epsilon=0.01", "--set", "theta=0"});
  ASSERT_EQ(b.code, 0) << b.err;
  const auto j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["classification"], "SubradiantFrozen");
  EXPECT_EQ(j["theta"], 0.0);
}

TEST(CliConfig, Errors) {
  const Result unknown = run_cli({"rates", "--set", "R=1", "--set", "bogus=3"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("bogus"), std::string::npos) << unknown.err;

  const Result bad_number = run_cli({"rates", "--set", "R=abc"});
  EXPECT_EQ(bad_number.code, 2);
  EXPECT_NE(bad_number.err.find("R"), std::string::npos);

  EXPECT_EQ(run_cli({"rates"}).code, 2);
  EXPECT_EQ(run_cli({"rates", "--set", "R=0"}).code, 2);
  EXPECT_EQ(run_cli({"rates", "--set", "R=1", "--set", "g11_down=1"}).code, 2);
  EXPECT_EQ(run_cli({"rates", "--set", "scenario=thermal", "--set", "R=1"}).code, 2);
  EXPECT_EQ(run_cli({"rates", "--set", "scenario=accelerated", "--set", "R=1", "--set",
                     "alpha=0.5"})
                .code,
            2);
  EXPECT_EQ(run_cli({"rates", "--set", "noequals"}).code, 2);
  EXPECT_EQ(run_cli({"trace", "--set", "R=1", "--set", "num_points=1"}).code, 2);
  EXPECT_EQ(run_cli({"rates", "--config", "/nonexistent/dir/x.cfg"}).code, 3);
  EXPECT_EQ(run_cli({"nosuchcommand"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(CliRates, StaticTable) {
  const Result r = run_cli({"rates", "--set", "R=0.14"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(rate_row(r.out, "g12_down"), 0.998041, 1e-6);
  EXPECT_NEAR(rate_row(r.out, "v"), -551.978, 1e-3);
  EXPECT_EQ(rate_row(r.out, "g11_down"), 1.0);
}

TEST(CliRates, ThermalScaling) {
  const Result r = run_cli({"rates", "--set", "scenario=thermal", "--set", "R=0.14", "--set", "n=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(rate_row(r.out, "gamma11_total"), 3.0);
  EXPECT_DOUBLE_EQ(rate_row(r.out, "g11_up"), 1.0);
}

TEST(CliRates, ZeroAccelerationIsStatic) {
  const Result a = run_cli({"rates", "--set", "scenario=accelerated", "--set", "R=0.14",
                            "--set", "alpha=0"});
  const Result s = run_cli({"rates", "--set", "R=0.14"});
  ASSERT_EQ(a.code, 0) << a.err;
  for (const char* k : {"g11_down", "g11_up", "g12_down", "g12_up", "v", "s", "gamma11_total",
                        "gamma12_total"}) {
    EXPECT_EQ(rate_row(a.out, k), rate_row(s.out, k)) << k;
  }
}

TEST(CliRates, PhysicalUnits) {
  const Result r = run_cli({"rates", "--set", "r=1e-6", "--set", "omega0=4.21e13"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(rate_row(r.out, "R"), 0.140, 1e-3);
}

TEST(CliTrace, HeaderAndPlateau) {
  const Result r = run_cli({"trace", "--set", "R=0.14"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 2002u);
  EXPECT_EQ(rows[0], "tau,coherence,p1,p2,concurrence,subradiant_overlap");
  double prev_tau = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 6u);
    EXPECT_GT(f[0], prev_tau);
    prev_tau = f[0];
    if (f[0] >= 8.0) {
      EXPECT_GE(f[1], f[0] <= 15.0 ? 0.485 : 0.48) << rows[i];
      EXPECT_LE(f[1], 0.495) << rows[i];
    }
  }
}

TEST(CliTrace, FrozenSubradiantStateIsConstant) {
  const Result r = run_cli({"trace", "--set", "scenario=custom-rates", "--set", "g11_down=1",
                            "--set", "g12_down=1", "--set", "v=0", "--set",
                            "theta=-1.5707963267948966", "--set", "num_points=101"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 102u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i])[1], 1.0) << rows[i];
}

TEST(CliTrace, UnitSeparationShape) {
  const Result r = run_cli({"trace", "--set", "R=1", "--set", "tau_max=40", "--set",
                            "num_points=401"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  double peak = 0.0;
  double late_peak = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    peak = std::max(peak, f[1]);
    if (f[0] >= 5.0) late_peak = std::max(late_peak, f[1]);
    if (f[0] >= 24.0) {
      EXPECT_LT(f[1], 0.05);
    }
  }
  EXPECT_LT(peak, 0.75);
  EXPECT_LT(late_peak, 0.31);
}

TEST(CliTrace, OutputFile) {
  TempDir dir;
  const fs::path out = dir / "trace.csv";
  const Result r = run_cli({"trace", "--set", "R=1", "--set", "num_points=11", "--output",
                            out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(lines_of(slurp(out)).size(), 12u);

  const Result bad = run_cli({"trace", "--set", "R=1", "--output",
                              (dir / "missing" / "trace.csv").string()});
  EXPECT_EQ(bad.code, 3);
}

TEST(CliTrace, MatchesGoldenFiles) {
  for (const auto& [r, name] : {std::pair{"0.14", "trace_R0.14.csv"}, std::pair{"1", "trace_R1.csv"},
                                std::pair{"0.014", "trace_R0.014.csv"}}) {
    const Result res = run_cli({"trace", "--set", std::string("R=") + r, "--set", "num_points=201"});
    ASSERT_EQ(res.code, 0) << res.err;
    const auto got = lines_of(res.out);
    const auto want = lines_of(slurp(fs::path(TWOATOM_GOLDEN_DIR) / name));
    ASSERT_EQ(got.size(), want.size()) << name;
    EXPECT_EQ(got[0], want[0]);
    for (std::size_t i = 1; i < got.size(); ++i) {
      const auto g = fields(got[i]);
      const auto w = fields(want[i]);
      ASSERT_EQ(g.size(), w.size());
      EXPECT_EQ(g[0], w[0]) << name << " row " << i;
      for (std::size_t c = 1; c < g.size(); ++c) {
        EXPECT_NEAR(g[c], w[c], 1e-8) << name << " row " << i << " col " << c;
      }
    }
  }
}

TEST(CliTrace, EmittedValuesAreStable) {
  const Result r = run_cli({"trace", "--set", "R=0.5", "--set", "theta=0.4", "--set",
                            "num_points=301"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      EXPECT_EQ(format_number(std::strtod(cell.c_str(), nullptr)), cell);
    }
  }
}

TEST(CliSweep, AccelerationValues) {
  const Result r = run_cli({"sweep", "--set", "scenario=accelerated", "--set", "R=0.14",
                            "--set", "alpha=0", "--set", "sweep=alpha", "--set",
                            "values=0,0.01,0.05", "--set", "tau=10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 3u);
  std::vector<double> c;
  for (const auto& row : rows) c.push_back(nlohmann::json::parse(row)["coherence"]);
  EXPECT_NEAR(c[0], 0.49030213900850085819, 1e-12);
  EXPECT_NEAR(c[1], 0.49020611662834858831, 1e-12);
  EXPECT_NEAR(c[2], 0.48982221483732725317, 1e-12);
  EXPECT_GT(c[0], c[1]);
  EXPECT_GT(c[1], c[2]);
}

TEST(CliSweep, PlateauShrinksWithSeparation) {
  const Result r = run_cli({"sweep", "--set", "R=1", "--set", "sweep=R", "--set",
                            "values=0.014,0.14,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<double> t;
  for (const auto& row : lines_of(r.out)) t.push_back(nlohmann::json::parse(row)["plateau_timescale"]);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_GT(t[0], t[1]);
  EXPECT_GT(t[1], t[2]);
}

TEST(CliSweep, KeyOrder) {
  const Result r = run_cli({"sweep", "--set", "R=0.14", "--set", "sweep=theta", "--set",
                            "values=0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(lines_of(r.out).at(0));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{"key",      "value",       "scenario",
                                          "theta",    "tau",         "rates",
                                          "frozen",   "plateau_timescale", "coherence",
                                          "p1",       "p2",          "concurrence",
                                          "subradiant_overlap"};
  EXPECT_EQ(keys, expected);
  std::vector<std::string> frozen_keys;
  for (const auto& [k, v] : j["frozen"].items()) frozen_keys.push_back(k);
  EXPECT_EQ(frozen_keys, (std::vector<std::string>{"subradiant_decay", "superradiant_decay",
                                                   "classification", "epsilon",
                                                   "asymptotic_value"}));
  EXPECT_EQ(j["theta"], 0.3);
  EXPECT_EQ(j["value"], 0.3);
}

TEST(CliSweep, InfinitePlateauIsNull) {
  const Result r = run_cli({"sweep", "--set", "scenario=custom-rates", "--set", "g11_down=1",
                            "--set", "g12_down=1", "--set", "sweep=theta", "--set", "values=0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out)["plateau_timescale"].is_null());
}

TEST(CliSweep, Errors) {
  EXPECT_EQ(run_cli({"sweep", "--set", "R=1", "--set", "sweep=R", "--set", "values="}).code, 2);
  EXPECT_EQ(run_cli({"sweep", "--set", "R=1", "--set", "sweep=R"}).code, 2);
  const Result bad = run_cli({"sweep", "--set", "R=1", "--set", "sweep=v", "--set", "values=1"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("sweep"), std::string::npos);
  EXPECT_EQ(run_cli({"sweep", "--set", "R=1", "--set", "sweep=n", "--set", "values=1"}).code, 2);
  EXPECT_EQ(run_cli({"sweep", "--set", "R=1", "--set", "sweep=R", "--set", "values=1,-1"}).code,
            2);
  EXPECT_EQ(run_cli({"sweep", "--set", "scenario=accelerated", "--set", "R=1", "--set",
                     "alpha=0", "--set", "sweep=alpha", "--set", "values=0.1,0.3"})
                .code,
            2);
}

TEST(CliSweep, DeterministicAcrossThreadCounts) {
  TempDir dir;
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "4", "4", "7"}) {
    const fs::path out = dir / (std::string("sweep_") + threads + ".jsonl");
    const Result r = run_cli({"sweep", "--set", "R=0.14", "--set", "sweep=R", "--set",
                              "values=0.01,0.05,0.1,0.14,0.3,0.5,1,2,3,5,8", "--seed", "42",
                              "--threads", threads, "--output", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    outputs.push_back(slurp(out));
  }
  for (const auto& o : outputs) EXPECT_EQ(o, outputs[0]);
  EXPECT_EQ(lines_of(outputs[0]).size(), 11u);
}

TEST(CliFrozen, Examples) {
  const auto classify = [](std::initializer_list<std::string> args) {
    const Result r = run_cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out)["classification"].get<std::string>();
  };
  EXPECT_EQ(classify({"frozen", "--set", "R=0.14", "--set", "epsilon=0.01"}), "SubradiantFrozen");
  EXPECT_EQ(classify({"frozen", "--set", "scenario=custom-rates", "--set", "g11_down=0"}),
            "FullyFrozen");
  EXPECT_EQ(classify({"frozen", "--set", "R=1", "--set", "epsilon=1e-3"}), "NotFrozen");
}

TEST(CliVerify, PassesAndIsDeterministic) {
  const Result a = run_cli({"verify", "--seed", "42", "--samples", "200"});
  const Result b = run_cli({"verify", "--seed", "42", "--samples", "200"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("result PASS"), std::string::npos);
  EXPECT_EQ(run_cli({"verify", "--seed", "123456789", "--samples", "1"}).code, 0);
  EXPECT_EQ(run_cli({"verify", "--samples", "0"}).code, 2);
}

}  // namespace
}  // namespace twoatom::cli
