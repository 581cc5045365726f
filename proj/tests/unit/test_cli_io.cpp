#include "icflow/cli_io.hpp"
#include "icflow/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace icflow;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string &name) {
  const char *env = std::getenv("ICFLOW_TEST_TMP");
  fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "icflow_tests";
  fs::path dir = base / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ConfigIssue> issues_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError &e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<ConfigIssue> &issues, ConfigIssue::Kind kind,
               const std::string &key) {
  for (const auto &i : issues) {
    if (i.kind == kind && i.key == key) {
      return true;
    }
  }
  return false;
}

RunConfig small_run(const std::string &name, int m, double eps) {
  RunConfig cfg;
  cfg.name = name;
  cfg.grid_size = 64;
  cfg.initial.kind = InitialData::Kind::perturbed;
  cfg.initial.modes = {Mode{m, eps, 0.0}};
  // Small enough that BDF2 stays non-oscillatory for m <= 5.
  cfg.integrator.dt = 1e-5;
  cfg.integrator.stop.t_max = 5e-4;
  cfg.output_stride = 7;
  return cfg;
}

const char *kMinimal = R"({
  "L0": 6.283185307179586, "omega": 1, "N": 64,
  "initial": {"kind": "perturbed", "modes": [{"m": 2, "amplitude": 0.001}]},
  "integrator": {"dt": 0.001, "t_max": 0.1}
})";

} // namespace

TEST(ParseConfig, MinimalDocument) {
  const RunConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.grid_size, 64u);
  EXPECT_EQ(cfg.omega, 1);
  ASSERT_EQ(cfg.initial.modes.size(), 1u);
  EXPECT_EQ(cfg.initial.modes[0], (Mode{2, 0.001, 0.0}));
  EXPECT_EQ(cfg.integrator.scheme, Scheme::imex_bdf2);
  EXPECT_DOUBLE_EQ(cfg.integrator.stop.blowup_cap, 1e3);
}

TEST(ParseConfig, ZeroOmegaIsOutOfRange) {
  const auto issues = issues_of(R"({
    "L0": 6.28, "omega": 0, "N": 64, "initial": {"kind": "circle"},
    "integrator": {"dt": 0.001, "t_max": 0.1}})");
  EXPECT_TRUE(has_issue(issues, ConfigIssue::Kind::OutOfRange, "omega"));
}

TEST(ParseConfig, CollectsEveryIssue) {
  const auto issues = issues_of(R"({
    "omega": "one", "N": 63, "colour": "red",
    "initial": {"kind": "perturbed", "modes": [{"amplitude": 0.1}], "extra": 1},
    "integrator": {"dt": -1, "scheme": "leapfrog"},
    "diagnostics": {"winding_tol": 0}})");
  using K = ConfigIssue::Kind;
  EXPECT_TRUE(has_issue(issues, K::TypeMismatch, "omega"));
  EXPECT_TRUE(has_issue(issues, K::OutOfRange, "N"));
  EXPECT_TRUE(has_issue(issues, K::UnknownKey, "colour"));
  EXPECT_TRUE(has_issue(issues, K::UnknownKey, "initial.extra"));
  EXPECT_TRUE(has_issue(issues, K::MissingRequired, "initial.modes[0].m"));
  EXPECT_TRUE(has_issue(issues, K::OutOfRange, "integrator.dt"));
  EXPECT_TRUE(has_issue(issues, K::OutOfRange, "integrator.scheme"));
  EXPECT_TRUE(has_issue(issues, K::OutOfRange, "diagnostics.winding_tol"));
  EXPECT_TRUE(has_issue(issues, K::MissingRequired, "L0"));
  EXPECT_TRUE(has_issue(issues, K::MissingRequired, "integrator.t_max"));
  EXPECT_GE(issues.size(), 10u);
}

TEST(ParseConfig, MalformedJson) {
  const auto issues = issues_of("{not json");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].kind, ConfigIssue::Kind::TypeMismatch);
}

TEST(ParseConfig, ModeAboveNyquist) {
  const auto issues = issues_of(R"({
    "L0": 6.28, "omega": 1, "N": 16,
    "initial": {"kind": "perturbed", "modes": [{"m": 8, "amplitude": 0.1}]},
    "integrator": {"dt": 0.001, "t_max": 0.1}})");
  EXPECT_TRUE(has_issue(issues, ConfigIssue::Kind::OutOfRange, "initial.modes[0].m"));
}

TEST(ParseConfig, PresetWithOverrides) {
  const RunConfig cfg = parse_config(R"({"preset": "theorem1-demo", "N": 128,
    "integrator": {"t_max": 0.5}, "name": "custom"})");
  RunConfig expected = preset("theorem1-demo");
  expected.grid_size = 128;
  expected.integrator.stop.t_max = 0.5;
  expected.name = "custom";
  EXPECT_EQ(cfg, expected);
}

TEST(ParseConfig, BlowupCapFollowsGeometry) {
  const RunConfig cfg = parse_config(R"({"preset": "circle", "omega": 2})");
  EXPECT_DOUBLE_EQ(cfg.integrator.stop.blowup_cap, default_blowup_cap(2 * kPi, 2));
  const RunConfig explicit_cap =
      parse_config(R"({"preset": "circle", "omega": 2, "integrator": {"blowup_cap": 7}})");
  EXPECT_DOUBLE_EQ(explicit_cap.integrator.stop.blowup_cap, 7.0);
}

TEST(ParseConfig, UnknownPreset) {
  const auto issues = issues_of(R"({"preset": "nope"})");
  EXPECT_TRUE(has_issue(issues, ConfigIssue::Kind::OutOfRange, "preset"));
  EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(SerializeConfig, RoundTripsEveryPreset) {
  for (const std::string &name : preset_names()) {
    const RunConfig cfg = preset(name);
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg) << name;
    EXPECT_FALSE(preset_description(name).empty());
  }
}

TEST(SerializeConfig, RoundTripsAwkwardValues) {
  RunConfig cfg = small_run("x y/z", 3, 0.1 + 0.2);
  cfg.length = 1.0 / 3.0;
  cfg.omega = -2;
  cfg.integrator.stop.blowup_cap = 1e300;
  cfg.integrator.scheme = Scheme::explicit_rk4;
  cfg.integrator.dealias = false;
  cfg.tolerances.smallness_energy = 0.0;
  cfg.seed = 18446744073709551615ull;
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);

  RunConfig random = cfg;
  random.initial = InitialData{};
  random.initial.kind = InitialData::Kind::random;
  random.initial.max_mode = 5;
  random.initial.amplitude = {AmplitudeLaw::Kind::decaying, 0.3, 1.5};
  EXPECT_EQ(parse_config(serialize_config(random)), random);
}

TEST(Presets, ExpectedCatalog) {
  const auto names = preset_names();
  for (const char *name : {"theorem1-demo", "circle", "conservation", "identity-check",
                           "decay-m2", "decay-m3", "decay-m4", "attractor-omega2",
                           "attractor-long", "stress-blowup"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), name), names.end()) << name;
  }
  const RunConfig demo = preset("theorem1-demo");
  EXPECT_EQ(demo.grid_size, 256u);
  EXPECT_DOUBLE_EQ(demo.integrator.dt, 1e-4);
  EXPECT_EQ(demo.initial.modes.at(0), (Mode{2, 1e-3, 0.0}));
}

TEST(FormatNumber, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.283185307179586, 1e22, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(ParseBatch, ArrayAndRunsObject) {
  const std::string one = kMinimal;
  EXPECT_EQ(parse_batch("[" + one + "," + one + "]").size(), 2u);
  EXPECT_EQ(parse_batch(R"({"runs": [{"preset": "circle"}]})").size(), 1u);
  try {
    parse_batch(R"([{"preset": "circle"}, {"preset": "circle", "N": 3}])");
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_TRUE(has_issue(e.issues(), ConfigIssue::Kind::OutOfRange, "runs[1].N"));
  }
}

TEST(Artifacts, HeadersAndRowCounts) {
  const ExperimentResult result = execute(small_run("hdr", 2, 1e-3));
  const std::string series = timeseries_csv(result);
  EXPECT_EQ(series.substr(0, series.find('\n')),
            "t,E,h,winding_integral,constraint_integral,k_sup,sup_deviation,kss_l2sq,"
            "closure_defect");
  // 51 rows at stride 7: indices 0, 7, ..., 49 plus the last.
  EXPECT_EQ(std::count(series.begin(), series.end(), '\n'), 1 + 8 + 1);
  const std::string curve = final_curve_csv(result);
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "s,x,y,theta,k");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 1 + 65);
  const auto summary = nlohmann::ordered_json::parse(summary_json(result));
  EXPECT_EQ(summary.at("config"), to_json(result.config, false));
  EXPECT_TRUE(summary.at("hard_assertions_passed").get<bool>());
  EXPECT_TRUE(summary.contains("invariants"));
  EXPECT_TRUE(summary.contains("decay_fit"));
}

TEST(RunExperiment, CirclePresetPasses) {
  RunConfig cfg = preset("circle");
  cfg.integrator.stop.t_max = 0.1;
  const fs::path dir = scratch("circle");
  EXPECT_EQ(run_experiment(cfg, dir), 0);
  std::istringstream series(slurp(dir / "timeseries.csv"));
  std::string line;
  std::getline(series, line);
  while (std::getline(series, line)) {
    const std::size_t a = line.find(',');
    const double e = std::stod(line.substr(a + 1, line.find(',', a + 1) - a - 1));
    EXPECT_LE(e, 1e-20);
  }
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "final_curve.csv"));
}

TEST(RunExperiment, UnwritableOutputThrowsWithoutSummary) {
  const fs::path dir = scratch("unwritable");
  std::ofstream(dir / "blocker") << "x";
  const fs::path target = dir / "blocker" / "out";
  EXPECT_THROW(run_experiment(small_run("bad", 2, 1e-3), target), IoError);
  EXPECT_FALSE(fs::exists(target / "summary.json"));
}

TEST(RunExperiment, FailedMonitorGivesNonzeroExit) {
  RunConfig cfg = preset("stress-blowup");
  const fs::path dir = scratch("stress");
  EXPECT_EQ(run_experiment(cfg, dir), 1);
  const auto summary = nlohmann::ordered_json::parse(slurp(dir / "summary.json"));
  EXPECT_FALSE(summary.at("failed_monitors").empty());
  EXPECT_EQ(summary.at("status"), "Blowup");
}

TEST(RunExperiment, DeterministicBytes) {
  const RunConfig cfg = small_run("det", 3, 0.01);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_experiment(cfg, a);
  run_experiment(cfg, b);
  for (const char *file : {"timeseries.csv", "summary.json", "final_curve.csv"}) {
    EXPECT_EQ(slurp(a / file), slurp(b / file)) << file;
  }
}

TEST(InitialData, FileRoundTrip) {
  const RunConfig source = small_run("src", 2, 0.05);
  const fs::path dir = scratch("file_init");
  run_experiment(source, dir);
  RunConfig cfg = source;
  cfg.initial = InitialData{};
  cfg.initial.kind = InitialData::Kind::file;
  cfg.initial.path = (dir / "final_curve.csv").string();
  const auto k = read_curvature_csv(cfg.initial.path, cfg.length);
  ASSERT_EQ(k.size(), 64u);
  const CurvatureProfile p = build_initial_profile(cfg);
  const ExperimentResult prior = execute(source);
  for (std::size_t j = 0; j < 64; ++j) {
    EXPECT_EQ(p.k()[j], prior.record.final_curvature[j]);
  }
  cfg.grid_size = 32;
  EXPECT_THROW(build_initial_profile(cfg), ConfigError);
  cfg.initial.path = (dir / "missing.csv").string();
  EXPECT_THROW(build_initial_profile(cfg), IoError);
}

TEST(InitialData, RandomDependsOnSeed) {
  RunConfig cfg = small_run("rnd", 2, 0.0);
  cfg.initial = InitialData{};
  cfg.initial.kind = InitialData::Kind::random;
  cfg.seed = 1;
  const auto a = build_initial_profile(cfg);
  const auto b = build_initial_profile(cfg);
  cfg.seed = 2;
  const auto c = build_initial_profile(cfg);
  EXPECT_EQ(a.k()[5], b.k()[5]);
  EXPECT_NE(a.k()[5], c.k()[5]);
  EXPECT_NEAR(winding(a), 1.0, 1e-12);
}

TEST(RunBatch, BatchOfOneMatchesSingleRun) {
  const RunConfig cfg = small_run("solo", 2, 0.01);
  const fs::path single = scratch("solo_single"), batch = scratch("solo_batch");
  run_experiment(cfg, single);
  const BatchResult result = run_batch({cfg}, 1, batch);
  EXPECT_EQ(result.exit_code, 0);
  const fs::path run_dir = batch / batch_run_dirname(0, cfg);
  for (const char *file : {"timeseries.csv", "summary.json", "final_curve.csv"}) {
    EXPECT_EQ(slurp(single / file), slurp(run_dir / file)) << file;
  }
  EXPECT_TRUE(fs::exists(batch / "batch_summary.csv"));
}

TEST(RunBatch, ParallelismDoesNotChangeBytes) {
  std::vector<RunConfig> configs;
  for (int m = 2; m <= 5; ++m) {
    configs.push_back(small_run("m" + std::to_string(m), m, 1e-3));
  }
  const fs::path serial = scratch("par1"), parallel = scratch("par4");
  const auto r1 = run_batch(configs, 1, serial);
  const auto r4 = run_batch(configs, 4, parallel);
  EXPECT_EQ(r1.exit_code, 0);
  EXPECT_EQ(r4.exit_code, 0);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::string d = batch_run_dirname(i, configs[i]);
    for (const char *file : {"timeseries.csv", "summary.json", "final_curve.csv"}) {
      EXPECT_EQ(slurp(serial / d / file), slurp(parallel / d / file)) << d << file;
    }
  }
  EXPECT_EQ(slurp(serial / "batch_summary.csv"), slurp(parallel / "batch_summary.csv"));
}

TEST(RunBatch, CollectsFailures) {
  RunConfig broken = small_run("broken", 2, 0.0);
  broken.initial = InitialData{};
  broken.initial.kind = InitialData::Kind::file;
  broken.initial.path = "/nonexistent/curvature.csv";
  const std::vector<RunConfig> configs{small_run("ok", 2, 1e-3), broken};
  const BatchResult result = run_batch(configs, 2, scratch("failures"));
  EXPECT_NE(result.exit_code, 0);
  EXPECT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.runs.size(), 1u);
}

TEST(InequalitySuites, ReportShape) {
  const auto report = run_inequality_suites({7, 120});
  EXPECT_EQ(report.at("violations").get<std::size_t>(), 0u);
  ASSERT_EQ(report.at("suites").size(), 4u);
  EXPECT_EQ(report.at("suites")[0].at("id"), "psw");
  EXPECT_EQ(report.at("suites")[1].at("id"), "ksup");
  EXPECT_EQ(report.dump(), run_inequality_suites({7, 120}).dump());
}
