#pragma once

// Run configuration, presets, experiment execution and artifact writing.
//
// Config schema (JSON object; every key optional when "preset" is given,
// otherwise L0, omega, N, initial, integrator.dt and integrator.t_max are
// required):
//
//   name         string
//   preset       string, expanded first; other keys override it
//   L0           number > 0
//   omega        nonzero integer
//   N            even integer >= 16
//   seed         unsigned integer (used by initial.kind = "random")
//   output_stride  integer >= 1, every k-th step goes to timeseries.csv
//   output_dir   string
//   initial      { kind: "circle" | "perturbed" | "file" | "random",
//                  modes: [{m, amplitude, phase}],          (perturbed)
//                  path: string,                            (file; CSV with a k column)
//                  max_mode, law: "uniform"|"decaying", a_max, p }  (random)
//   integrator   { scheme: "imex_euler"|"imex_bdf2"|"explicit_rk4", dt,
//                  dealias, t_max, energy_tol, blowup_cap }
//   diagnostics  { winding_tol, constraint_tol, monotone_slack, bound_slack,
//                  closure_tol, h_identity_tol, smallness_energy }

#include "icflow/curve_model.hpp"
#include "icflow/diagnostics.hpp"
#include "icflow/inequality_lab.hpp"
#include "icflow/run_record.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace icflow {

struct InitialData {
  enum class Kind { circle, perturbed, file, random };
  Kind kind = Kind::circle;
  std::vector<Mode> modes;
  std::string path;
  int max_mode = 8;
  AmplitudeLaw amplitude{AmplitudeLaw::Kind::uniform, 1e-3, 2.0};

  bool operator==(const InitialData &) const = default;
};

struct RunConfig {
  std::string name = "run";
  InitialData initial;
  double length = 6.283185307179586;
  int omega = 1;
  std::size_t grid_size = 256;
  IntegratorConfig integrator;
  MonitorTolerances tolerances;
  std::size_t output_stride = 100;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  bool operator==(const RunConfig &) const = default;
};

/// Parse and validate. Throws ConfigError listing every problem found.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::ordered_json &doc);

/// Full explicit form (no preset key). parse_config(serialize_config(c)) == c.
nlohmann::ordered_json to_json(const RunConfig &cfg, bool include_output_dir = true);
std::string serialize_config(const RunConfig &cfg);

std::vector<std::string> preset_names();
/// One-line description of a preset.
std::string preset_description(const std::string &name);
/// Throws ConfigError(UnknownKey "preset") for unknown names.
RunConfig preset(const std::string &name);

/// Curvature samples from a CSV file with a "k" column. Rows with an "s"
/// column value >= length (closing point) are skipped.
std::vector<double> read_curvature_csv(const std::filesystem::path &path,
                                       double length);

CurvatureProfile build_initial_profile(const RunConfig &cfg);

/// Outcome of one run after diagnostics.
struct ExperimentResult {
  RunConfig config;
  RunRecord record;
  InvariantReport report;
  std::optional<DecayFit> decay_fit;
  std::string decay_fit_error;
  ReconstructedCurve final_curve;

  bool passed() const { return report.hard_passed(); }
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Run the flow and the diagnostics; no I/O.
ExperimentResult execute(const RunConfig &cfg);

/// Artifact contents, byte-for-byte what write_artifacts() puts on disk.
std::string timeseries_csv(const ExperimentResult &result);
std::string final_curve_csv(const ExperimentResult &result);
std::string summary_json(const ExperimentResult &result);

/// Write timeseries.csv, final_curve.csv and then summary.json into dir,
/// each via write-temp-then-rename. Throws IoError.
void write_artifacts(const ExperimentResult &result,
                     const std::filesystem::path &dir);

/// execute + write_artifacts into out_dir (cfg.output_dir when empty).
/// Returns 0 iff every hard assertion passed. Throws IoError.
int run_experiment(const RunConfig &cfg, const std::filesystem::path &out_dir = {});

struct BatchResult {
  std::vector<ExperimentResult> runs;
  std::vector<std::string> errors; ///< per-run failures that prevented output
  int exit_code = 0;
};

/// Subdirectory used for run i of a batch.
std::string batch_run_dirname(std::size_t index, const RunConfig &cfg);

/// Runs with at most `parallelism` threads. Each run writes into
/// out_dir/batch_run_dirname(i); batch_summary.csv aggregates them.
BatchResult run_batch(const std::vector<RunConfig> &configs,
                      std::size_t parallelism,
                      const std::filesystem::path &out_dir);

/// Parse a batch file: a JSON array of configs or {"runs": [...]}.
std::vector<RunConfig> parse_batch(std::string_view text);

struct InequalityOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
};

/// PSW, L||k||_inf, G^2 and interpolation suites as one JSON report.
nlohmann::ordered_json run_inequality_suites(const InequalityOptions &options);

/// 17 significant digits; reads back to the same double.
std::string format_number(double value);

} // namespace icflow
