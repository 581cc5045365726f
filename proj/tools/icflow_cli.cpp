// icflow: run the curve flow, batches of runs, and the inequality suites.

#include "icflow/cli_io.hpp"
#include "icflow/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw icflow::IoError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_issues(const icflow::ConfigError &e) {
  std::cerr << "invalid configuration:\n";
  for (const auto &issue : e.issues()) {
    std::cerr << "  " << icflow::to_string(issue.kind) << ": " << issue.key;
    if (!issue.detail.empty()) {
      std::cerr << " (" << issue.detail << ")";
    }
    std::cerr << "\n";
  }
}

icflow::RunConfig load_config(const std::string &config_path,
                              const std::string &preset_name) {
  if (!config_path.empty()) {
    return icflow::parse_config(slurp(config_path));
  }
  return icflow::preset(preset_name);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Length-constrained curve flow simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t parallelism = 1;
  std::size_t samples = 1000;

  auto *run_cmd = app.add_subcommand("run", "run one experiment");
  auto *cfg_opt = run_cmd->add_option("--config", config_path, "config JSON file");
  auto *preset_opt = run_cmd->add_option("--preset", preset_name, "named preset");
  cfg_opt->excludes(preset_opt);
  run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
  run_cmd->add_option("--seed", seed, "seed for random initial data")
      ->each([&](const std::string &) { seed_given = true; });

  auto *batch_cmd = app.add_subcommand("batch", "run a batch file");
  batch_cmd->add_option("--config", config_path, "batch JSON file")->required();
  batch_cmd->add_option("--out", out_dir, "output directory")->default_val("out");
  batch_cmd->add_option("--parallelism", parallelism, "worker threads")
      ->check(CLI::PositiveNumber);

  auto *ineq_cmd = app.add_subcommand("ineq", "inequality suites");
  ineq_cmd->add_option("--seed", seed, "sampler seed");
  ineq_cmd->add_option("--samples", samples, "samples per suite")
      ->check(CLI::PositiveNumber);
  ineq_cmd->add_option("--out", out_dir, "directory for inequality_report.json");

  app.add_subcommand("presets", "list presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "run needs --config or --preset\n";
        return 2;
      }
      icflow::RunConfig cfg = load_config(config_path, preset_name);
      if (seed_given) {
        cfg.seed = seed;
      }
      const std::filesystem::path dir = out_dir.empty() ? cfg.output_dir : out_dir;
      const icflow::ExperimentResult result = icflow::execute(cfg);
      icflow::write_artifacts(result, dir);
      std::cout << cfg.name << ": " << icflow::to_string(result.record.status);
      if (result.decay_fit) {
        std::cout << ", decay rate " << icflow::format_number(result.decay_fit->rate);
      }
      std::cout << "\n";
      for (const std::string &name : result.report.failures()) {
        std::cerr << "hard assertion failed: " << name << "\n";
      }
      return result.exit_code();
    }
    if (batch_cmd->parsed()) {
      const auto configs = icflow::parse_batch(slurp(config_path));
      const icflow::BatchResult batch = icflow::run_batch(configs, parallelism, out_dir);
      for (const auto &r : batch.runs) {
        std::cout << r.config.name << ": " << icflow::to_string(r.record.status)
                  << (r.passed() ? "" : " (assertion failure)") << "\n";
      }
      for (const std::string &e : batch.errors) {
        std::cerr << e << "\n";
      }
      return batch.exit_code;
    }
    if (ineq_cmd->parsed()) {
      const auto report = icflow::run_inequality_suites({seed, samples});
      const std::string text = report.dump(2) + "\n";
      if (out_dir.empty()) {
        std::cout << text;
      } else {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "inequality_report.json");
        if (!(out << text)) {
          throw icflow::IoError("cannot write inequality report");
        }
      }
      return report.at("violations").get<std::size_t>() == 0 ? 0 : 1;
    }
    for (const std::string &name : icflow::preset_names()) {
      std::cout << name << "\t" << icflow::preset_description(name) << "\n";
    }
    return 0;
  } catch (const icflow::ConfigError &e) {
    print_issues(e);
    return 2;
  } catch (const icflow::IoError &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
