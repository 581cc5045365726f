#include "icflow/cli_io.hpp"

#include "icflow/errors.hpp"
#include "icflow/flow_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace icflow {

namespace {

using json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void write_atomically(const std::filesystem::path &path, const std::string &contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

void ensure_directory(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

json number_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

json monitor_json(const MonitorResult &m) {
  return json{{"name", m.name},     {"value", number_or_null(m.value)},
              {"limit", m.limit},   {"active", m.active},
              {"hard", m.hard},     {"passed", m.passed}};
}

json report_json(const ConstantFitReport &r) {
  return json{{"id", r.id},
              {"samples", r.samples},
              {"worst_ratio", number_or_null(r.worst_ratio)},
              {"fitted_constant", number_or_null(r.fitted_constant)},
              {"paired_constant", number_or_null(r.paired_constant)},
              {"violations", r.violations},
              {"slack", r.slack}};
}

std::string join(const std::vector<std::string> &items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += items[i];
  }
  return out;
}

} // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ExperimentResult execute(const RunConfig &cfg) {
  const CurvatureProfile initial = build_initial_profile(cfg);
  RunRecord record = run(initial, cfg.integrator);
  InvariantReport report = invariant_report(record, cfg.tolerances);

  std::optional<DecayFit> fit;
  std::string fit_error;
  try {
    fit = fit_decay(record);
  } catch (const FitError &e) {
    fit_error = e.what();
  }

  const CurvatureProfile last(GridFunction(record.final_curvature, cfg.length),
                              cfg.length, cfg.omega);
  ReconstructedCurve curve = reconstruct(last);
  return ExperimentResult{cfg,          std::move(record), std::move(report),
                          fit,          std::move(fit_error), std::move(curve)};
}

std::string timeseries_csv(const ExperimentResult &result) {
  std::ostringstream out;
  out << "t,E,h,winding_integral,constraint_integral,k_sup,sup_deviation,kss_l2sq,"
         "closure_defect\n";
  const auto &rows = result.record.rows;
  const std::size_t stride = std::max<std::size_t>(result.config.output_stride, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % stride != 0 && i + 1 != rows.size()) {
      continue;
    }
    const RunRow &r = rows[i];
    out << format_number(r.t) << ',' << format_number(r.energy) << ','
        << format_number(r.h) << ',' << format_number(r.winding_integral) << ','
        << format_number(r.constraint_integral) << ',' << format_number(r.k_sup) << ','
        << format_number(r.sup_deviation) << ',' << format_number(r.kss_l2sq) << ','
        << format_number(r.closure_defect) << '\n';
  }
  return out.str();
}

std::string final_curve_csv(const ExperimentResult &result) {
  std::ostringstream out;
  out << "s,x,y,theta,k\n";
  const ReconstructedCurve &c = result.final_curve;
  const auto &k = result.record.final_curvature;
  const std::size_t n = k.size();
  const double ds = result.config.length / static_cast<double>(n);
  for (std::size_t j = 0; j <= n; ++j) {
    const bool closing = j == n;
    const double s = closing ? result.config.length : ds * static_cast<double>(j);
    const double theta = closing ? c.theta[0] + c.total_turning : c.theta[j];
    out << format_number(s) << ',' << format_number(c.points[j].x) << ','
        << format_number(c.points[j].y) << ',' << format_number(theta) << ','
        << format_number(k[closing ? 0 : j]) << '\n';
  }
  return out.str();
}

std::string summary_json(const ExperimentResult &result) {
  const RunRecord &rec = result.record;
  const InvariantReport &rep = result.report;

  json fit = nullptr;
  if (result.decay_fit) {
    const DecayFit &f = *result.decay_fit;
    fit = json{{"rate", number_or_null(f.rate)},
               {"intercept", number_or_null(f.intercept)},
               {"r_squared", number_or_null(f.r_squared)},
               {"t_lo", f.window.t_lo},
               {"t_hi", f.window.t_hi},
               {"points", f.points}};
  }
  json monitors = json::array();
  for (const MonitorResult &m : rep.monitors) {
    monitors.push_back(monitor_json(m));
  }
  const ReconstructedCurve &c = result.final_curve;
  const double expected_radius =
      result.config.length / (kTwoPi * std::abs(result.config.omega));

  json doc{
      {"config", to_json(result.config, false)},
      {"status", to_string(rec.status)},
      {"message", rec.message},
      {"steps", rec.rows.empty() ? 0 : rec.rows.size() - 1},
      {"t_final", rec.rows.empty() ? 0.0 : rec.rows.back().t},
      {"energy_initial", rec.initial_energy()},
      {"energy_final", rec.rows.empty() ? 0.0 : rec.rows.back().energy},
      {"decay_fit", fit},
      {"decay_fit_error", result.decay_fit_error},
      {"invariants",
       {{"max_winding_drift", rep.max_winding_drift},
        {"max_constraint_integral", rep.max_constraint_integral},
        {"max_k_sup", rep.max_k_sup},
        {"max_kss_l2sq", rep.max_kss_l2sq},
        {"max_abs_h", rep.max_abs_h},
        {"max_h_identity_residual", rep.max_h_identity_residual},
        {"max_closure_defect", rep.max_closure_defect},
        {"final_sup_deviation", rep.final_sup_deviation},
        {"final_closure_defect", rep.final_closure_defect},
        {"final_abs_h", rep.final_abs_h},
        {"max_dedt_identity_residual", max_dedt_identity_residual(rec)},
        {"small_energy", rep.small_energy},
        {"monitors", monitors}}},
      {"final_curve",
       {{"closure_defect", c.closure_defect},
        {"total_turning", c.total_turning},
        {"best_fit_center", {c.best_fit_center.x, c.best_fit_center.y}},
        {"best_fit_radius", c.best_fit_radius},
        {"expected_radius", expected_radius}}},
      {"hard_assertions_passed", rep.hard_passed()},
      {"failed_monitors", rep.failures()},
      {"failed_soft_monitors", [&] {
         std::vector<std::string> soft;
         for (const MonitorResult &m : rep.monitors) {
           if (!m.hard && !m.passed) {
             soft.push_back(m.name);
           }
         }
         return soft;
       }()}};
  return doc.dump(2) + "\n";
}

void write_artifacts(const ExperimentResult &result, const std::filesystem::path &dir) {
  ensure_directory(dir);
  const std::string series = timeseries_csv(result);
  const std::string curve = final_curve_csv(result);
  const std::string summary = summary_json(result);
  write_atomically(dir / "timeseries.csv", series);
  write_atomically(dir / "final_curve.csv", curve);
  write_atomically(dir / "summary.json", summary);
}

int run_experiment(const RunConfig &cfg, const std::filesystem::path &out_dir) {
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(cfg.output_dir) : out_dir;
  // Fail on an unusable directory before spending time on the run.
  ensure_directory(dir);
  const ExperimentResult result = execute(cfg);
  write_artifacts(result, dir);
  return result.exit_code();
}

std::string batch_run_dirname(std::size_t index, const RunConfig &cfg) {
  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "%03zu_", index);
  std::string name;
  for (char c : cfg.name) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    name += safe ? c : '_';
  }
  return prefix + (name.empty() ? std::string("run") : name);
}

BatchResult run_batch(const std::vector<RunConfig> &configs, std::size_t parallelism,
                      const std::filesystem::path &out_dir) {
  ensure_directory(out_dir);
  std::vector<std::optional<ExperimentResult>> slots(configs.size());
  std::vector<std::string> slot_errors(configs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        ExperimentResult result = execute(configs[i]);
        write_artifacts(result, out_dir / batch_run_dirname(i, configs[i]));
        slots[i] = std::move(result);
      } catch (const std::exception &e) {
        slot_errors[i] = e.what();
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(configs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread &t : pool) {
    t.join();
  }

  BatchResult batch;
  std::ostringstream csv;
  csv << "index,name,status,hard_passed,decay_rate,r_squared,energy_final,"
         "failed_monitors\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    csv << i << ',' << batch_run_dirname(i, configs[i]).substr(4) << ',';
    if (!slots[i]) {
      batch.errors.push_back("run " + std::to_string(i) + ": " + slot_errors[i]);
      batch.exit_code = 2;
      csv << "error,false,,,,\n";
      continue;
    }
    const ExperimentResult &r = *slots[i];
    if (!r.passed() && batch.exit_code == 0) {
      batch.exit_code = 1;
    }
    csv << to_string(r.record.status) << ',' << (r.passed() ? "true" : "false") << ',';
    if (r.decay_fit) {
      csv << format_number(r.decay_fit->rate) << ','
          << format_number(r.decay_fit->r_squared);
    } else {
      csv << ',';
    }
    csv << ',' << format_number(r.record.rows.back().energy) << ','
        << join(r.report.failures(), ';') << '\n';
    batch.runs.push_back(std::move(*slots[i]));
  }
  write_atomically(out_dir / "batch_summary.csv", csv.str());
  return batch;
}

json run_inequality_suites(const InequalityOptions &options) {
  const std::size_t n = options.samples;
  SamplerSettings wide{options.seed, 32, {AmplitudeLaw::Kind::uniform, 0.5, 2.0},
                       kTwoPi, 1, 256};

  ProfileSampler psw_sampler(wide);
  const ConstantFitReport psw = psw_suite(psw_sampler, n);

  SamplerSettings ksup_settings = wide;
  ksup_settings.seed = options.seed + 1;
  ProfileSampler ksup_sampler(ksup_settings);
  const ConstantFitReport ksup = ksup_suite(ksup_sampler, n);

  SamplerSettings smooth{options.seed + 2, 8, {AmplitudeLaw::Kind::decaying, 0.2, 2.0},
                         kTwoPi, 1, 256};
  ProfileSampler g2_sampler(smooth);
  const ConstantFitReport g2 = empirical_g2_study(g2_sampler, std::max<std::size_t>(n, 100));

  smooth.seed = options.seed + 3;
  ProfileSampler interp_sampler(smooth);
  const Monomial term{{0, 1, 1}};
  const ConstantFitReport interp = interpolation_report(interp_sampler, term, 2, n);

  const std::size_t violations = psw.violations + ksup.violations;
  return json{{"seed", options.seed},
              {"samples", n},
              {"suites", {report_json(psw), report_json(ksup), report_json(g2),
                          report_json(interp)}},
              {"interpolation_term", {{"orders", term.orders}, {"l", 2}}},
              {"violations", violations}};
}

} // namespace icflow
