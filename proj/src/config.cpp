#include "icflow/cli_io.hpp"

#include "icflow/errors.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace icflow {

namespace {

using json = nlohmann::ordered_json;
using Kind = ConfigIssue::Kind;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Collects every issue while walking a document.
class Reader {
public:
  void issue(Kind kind, std::string key, std::string detail = {}) {
    issues_.push_back({kind, std::move(key), std::move(detail)});
  }

  const std::vector<ConfigIssue> &issues() const { return issues_; }

  void reject_unknown(const json &obj, const std::string &prefix,
                      const std::set<std::string> &known) {
    for (const auto &item : obj.items()) {
      if (!known.contains(item.key())) {
        issue(Kind::UnknownKey, prefix + item.key());
      }
    }
  }

  bool object(const json &value, const std::string &key) {
    if (!value.is_object()) {
      issue(Kind::TypeMismatch, key, "expected an object");
      return false;
    }
    return true;
  }

  // Reads obj[name] into out when present; returns true if it was present
  // and valid.
  bool real(const json &obj, const std::string &name, const std::string &key,
            double &out, const std::function<bool(double)> &ok,
            const char *range) {
    if (!obj.contains(name)) {
      return false;
    }
    const json &v = obj.at(name);
    if (!v.is_number()) {
      issue(Kind::TypeMismatch, key, "expected a number");
      return false;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || !ok(x)) {
      issue(Kind::OutOfRange, key, range);
      return false;
    }
    out = x;
    return true;
  }

  bool integer(const json &obj, const std::string &name, const std::string &key,
               long long &out, const std::function<bool(long long)> &ok,
               const char *range) {
    if (!obj.contains(name)) {
      return false;
    }
    const json &v = obj.at(name);
    if (!v.is_number_integer()) {
      issue(Kind::TypeMismatch, key, "expected an integer");
      return false;
    }
    const long long x = v.get<long long>();
    if (!ok(x)) {
      issue(Kind::OutOfRange, key, range);
      return false;
    }
    out = x;
    return true;
  }

  bool text(const json &obj, const std::string &name, const std::string &key,
            std::string &out) {
    if (!obj.contains(name)) {
      return false;
    }
    const json &v = obj.at(name);
    if (!v.is_string()) {
      issue(Kind::TypeMismatch, key, "expected a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

  bool flag(const json &obj, const std::string &name, const std::string &key,
            bool &out) {
    if (!obj.contains(name)) {
      return false;
    }
    const json &v = obj.at(name);
    if (!v.is_boolean()) {
      issue(Kind::TypeMismatch, key, "expected true or false");
      return false;
    }
    out = v.get<bool>();
    return true;
  }

private:
  std::vector<ConfigIssue> issues_;
};

bool positive(double x) { return x > 0.0; }
bool nonnegative(double x) { return x >= 0.0; }
bool any_real(double) { return true; }

std::string initial_kind_name(InitialData::Kind kind) {
  switch (kind) {
  case InitialData::Kind::circle:
    return "circle";
  case InitialData::Kind::perturbed:
    return "perturbed";
  case InitialData::Kind::file:
    return "file";
  case InitialData::Kind::random:
    return "random";
  }
  return "circle";
}

struct PresetEntry {
  std::string description;
  std::function<RunConfig()> make;
};

RunConfig perturbed(std::string name, int omega, double length, std::size_t n,
                    int m, double amplitude, double dt, double t_max,
                    double energy_tol) {
  RunConfig cfg;
  cfg.name = std::move(name);
  cfg.omega = omega;
  cfg.length = length;
  cfg.grid_size = n;
  cfg.initial.kind = InitialData::Kind::perturbed;
  cfg.initial.modes = {Mode{m, amplitude, 0.0}};
  cfg.integrator.scheme = Scheme::imex_bdf2;
  cfg.integrator.dt = dt;
  cfg.integrator.stop.t_max = t_max;
  cfg.integrator.stop.energy_tol = energy_tol;
  cfg.integrator.stop.blowup_cap = default_blowup_cap(length, omega);
  return cfg;
}

const std::map<std::string, PresetEntry> &preset_table() {
  static const std::map<std::string, PresetEntry> table = [] {
    std::map<std::string, PresetEntry> t;
    t["theorem1-demo"] = {
        "omega=1, L0=2pi, N=256, m=2 mode of amplitude 1e-3, imex_bdf2, "
        "dt=1e-4, runs to E <= 1e-16",
        [] {
          return perturbed("theorem1-demo", 1, kTwoPi, 256, 2, 1e-3, 1e-4, 1.0, 1e-16);
        }};
    t["circle"] = {"exact unit circle, N=128, 10^4 steps of imex_bdf2",
                   [] {
                     RunConfig cfg;
                     cfg.name = "circle";
                     cfg.grid_size = 128;
                     cfg.integrator.dt = 1e-4;
                     cfg.integrator.stop.t_max = 1.0;
                     cfg.integrator.stop.energy_tol = 1e-16;
                     cfg.integrator.stop.blowup_cap = default_blowup_cap(kTwoPi, 1);
                     return cfg;
                   }};
    t["conservation"] = {
        "m=2 mode of amplitude 0.05 to t=0.2; monotonicity checks enabled "
        "(E0 = 0.005pi)",
        [] {
          RunConfig cfg =
              perturbed("conservation", 1, kTwoPi, 256, 2, 0.05, 1e-4, 0.2, 0.0);
          cfg.tolerances.smallness_energy = 2e-2;
          return cfg;
        }};
    t["identity-check"] = {
        "conservation run at dt=1e-5 for the dE/dt identity",
        [] {
          RunConfig cfg =
              perturbed("identity-check", 1, kTwoPi, 256, 2, 0.05, 1e-5, 0.2, 0.0);
          cfg.tolerances.smallness_energy = 2e-2;
          cfg.output_stride = 1000;
          return cfg;
        }};
    t["decay-m2"] = {"m=2 decay, expected energy rate 72", [] {
                       return perturbed("decay-m2", 1, kTwoPi, 256, 2, 1e-3, 1e-4,
                                        1.0, 1e-16);
                     }};
    t["decay-m3"] = {"m=3 decay, expected energy rate 1152", [] {
                       return perturbed("decay-m3", 1, kTwoPi, 256, 3, 1e-3, 1e-4,
                                        1.0, 1e-16);
                     }};
    t["decay-m4"] = {"m=4 decay at dt=2e-5, expected energy rate 7200", [] {
                       return perturbed("decay-m4", 1, kTwoPi, 256, 4, 1e-3, 2e-5,
                                        1.0, 1e-16);
                     }};
    t["attractor-omega2"] = {
        "doubly covered circle, L0=2pi, m=3 mode, runs to E <= 1e-16 "
        "(radius 0.5)",
        [] {
          return perturbed("attractor-omega2", 2, kTwoPi, 256, 3, 1e-3, 1e-4, 1.0,
                           1e-16);
        }};
    t["attractor-long"] = {
        "omega=1, L0=4pi, m=2 mode, dt=1e-3, runs to E <= 1e-16 (radius 2)",
        [] {
          RunConfig cfg = perturbed("attractor-long", 1, 2.0 * kTwoPi, 256, 2, 1e-3,
                                    1e-3, 100.0, 1e-16);
          cfg.output_stride = 1000;
          return cfg;
        }};
    t["stress-blowup"] = {
        "large multi-mode perturbation far outside the small-energy regime; "
        "expected to be flagged",
        [] {
          RunConfig cfg =
              perturbed("stress-blowup", 1, kTwoPi, 128, 3, 2.5, 1e-3, 0.05, 0.0);
          cfg.initial.modes.push_back(Mode{7, 1.5, 0.3});
          cfg.output_stride = 1;
          return cfg;
        }};
    return t;
  }();
  return table;
}

json mode_to_json(const Mode &mode) {
  return json{{"m", mode.m}, {"amplitude", mode.amplitude}, {"phase", mode.phase}};
}

void read_initial(Reader &r, const json &obj, RunConfig &cfg) {
  const std::string prefix = "initial.";
  r.reject_unknown(obj, prefix,
                   {"kind", "modes", "path", "max_mode", "law", "a_max", "p"});
  InitialData &init = cfg.initial;
  std::string kind;
  if (r.text(obj, "kind", prefix + "kind", kind)) {
    if (kind == "circle") {
      init.kind = InitialData::Kind::circle;
    } else if (kind == "perturbed") {
      init.kind = InitialData::Kind::perturbed;
    } else if (kind == "file") {
      init.kind = InitialData::Kind::file;
    } else if (kind == "random") {
      init.kind = InitialData::Kind::random;
    } else {
      r.issue(Kind::OutOfRange, prefix + "kind",
              "expected circle, perturbed, file or random");
    }
  } else if (!obj.contains("kind")) {
    r.issue(Kind::MissingRequired, prefix + "kind");
  }

  if (obj.contains("modes")) {
    const json &modes = obj.at("modes");
    if (!modes.is_array()) {
      r.issue(Kind::TypeMismatch, prefix + "modes", "expected an array");
    } else {
      init.modes.clear();
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const std::string key = prefix + "modes[" + std::to_string(i) + "].";
        if (!r.object(modes[i], key.substr(0, key.size() - 1))) {
          continue;
        }
        r.reject_unknown(modes[i], key, {"m", "amplitude", "phase"});
        Mode mode;
        long long m = 0;
        if (r.integer(modes[i], "m", key + "m", m,
                      [](long long x) { return x >= 1 && x < 1'000'000; },
                      "must be an integer >= 1")) {
          mode.m = static_cast<int>(m);
        } else if (!modes[i].contains("m")) {
          r.issue(Kind::MissingRequired, key + "m");
        }
        if (!r.real(modes[i], "amplitude", key + "amplitude", mode.amplitude,
                    any_real, "must be finite") &&
            !modes[i].contains("amplitude")) {
          r.issue(Kind::MissingRequired, key + "amplitude");
        }
        r.real(modes[i], "phase", key + "phase", mode.phase, any_real,
               "must be finite");
        init.modes.push_back(mode);
      }
    }
  }
  r.text(obj, "path", prefix + "path", init.path);
  long long max_mode = init.max_mode;
  if (r.integer(obj, "max_mode", prefix + "max_mode", max_mode,
                [](long long x) { return x >= 2 && x < 1'000'000; },
                "must be an integer >= 2")) {
    init.max_mode = static_cast<int>(max_mode);
  }
  std::string law;
  if (r.text(obj, "law", prefix + "law", law)) {
    if (law == "uniform") {
      init.amplitude.kind = AmplitudeLaw::Kind::uniform;
    } else if (law == "decaying") {
      init.amplitude.kind = AmplitudeLaw::Kind::decaying;
    } else {
      r.issue(Kind::OutOfRange, prefix + "law", "expected uniform or decaying");
    }
  }
  r.real(obj, "a_max", prefix + "a_max", init.amplitude.a_max, nonnegative,
         "must be >= 0");
  r.real(obj, "p", prefix + "p", init.amplitude.p, nonnegative, "must be >= 0");
}

void read_integrator(Reader &r, const json &obj, RunConfig &cfg,
                     bool &cap_given, std::set<std::string> &seen) {
  const std::string prefix = "integrator.";
  r.reject_unknown(obj, prefix,
                   {"scheme", "dt", "dealias", "t_max", "energy_tol", "blowup_cap"});
  IntegratorConfig &ic = cfg.integrator;
  std::string scheme;
  if (r.text(obj, "scheme", prefix + "scheme", scheme)) {
    try {
      ic.scheme = scheme_from_string(scheme);
    } catch (const InvalidArgument &) {
      r.issue(Kind::OutOfRange, prefix + "scheme",
              "expected imex_euler, imex_bdf2 or explicit_rk4");
    }
  }
  if (obj.contains("dt")) {
    seen.insert("integrator.dt");
  }
  if (obj.contains("t_max")) {
    seen.insert("integrator.t_max");
  }
  r.real(obj, "dt", prefix + "dt", ic.dt, positive, "must be > 0");
  r.flag(obj, "dealias", prefix + "dealias", ic.dealias);
  r.real(obj, "t_max", prefix + "t_max", ic.stop.t_max, nonnegative, "must be >= 0");
  r.real(obj, "energy_tol", prefix + "energy_tol", ic.stop.energy_tol, nonnegative,
         "must be >= 0");
  if (r.real(obj, "blowup_cap", prefix + "blowup_cap", ic.stop.blowup_cap, positive,
             "must be > 0")) {
    cap_given = true;
  }
}

void read_diagnostics(Reader &r, const json &obj, RunConfig &cfg) {
  const std::string prefix = "diagnostics.";
  r.reject_unknown(obj, prefix,
                   {"winding_tol", "constraint_tol", "monotone_slack", "bound_slack",
                    "closure_tol", "h_identity_tol", "smallness_energy"});
  MonitorTolerances &t = cfg.tolerances;
  r.real(obj, "winding_tol", prefix + "winding_tol", t.winding, positive, "must be > 0");
  r.real(obj, "constraint_tol", prefix + "constraint_tol", t.constraint, positive,
         "must be > 0");
  r.real(obj, "monotone_slack", prefix + "monotone_slack", t.monotone_slack,
         nonnegative, "must be >= 0");
  r.real(obj, "bound_slack", prefix + "bound_slack", t.bound_slack, nonnegative,
         "must be >= 0");
  r.real(obj, "closure_tol", prefix + "closure_tol", t.closure, positive,
         "must be > 0");
  r.real(obj, "h_identity_tol", prefix + "h_identity_tol", t.h_identity, positive,
         "must be > 0");
  r.real(obj, "smallness_energy", prefix + "smallness_energy", t.smallness_energy,
         nonnegative, "must be >= 0");
}

} // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto &[name, entry] : preset_table()) {
    names.push_back(name);
  }
  return names;
}

std::string preset_description(const std::string &name) {
  const auto &table = preset_table();
  auto it = table.find(name);
  return it == table.end() ? std::string{} : it->second.description;
}

RunConfig preset(const std::string &name) {
  const auto &table = preset_table();
  auto it = table.find(name);
  if (it == table.end()) {
    throw ConfigError({{Kind::UnknownKey, "preset", "no preset named '" + name + "'"}});
  }
  return it->second.make();
}

RunConfig config_from_json(const json &doc) {
  Reader r;
  RunConfig cfg;
  if (!doc.is_object()) {
    throw ConfigError({{Kind::TypeMismatch, "<root>", "expected a JSON object"}});
  }
  r.reject_unknown(doc, "",
                   {"name", "preset", "initial", "L0", "omega", "N", "integrator",
                    "diagnostics", "output_stride", "output_dir", "seed"});

  bool from_preset = false;
  std::string preset_name;
  if (r.text(doc, "preset", "preset", preset_name)) {
    const auto &table = preset_table();
    auto it = table.find(preset_name);
    if (it == table.end()) {
      r.issue(Kind::OutOfRange, "preset", "no preset named '" + preset_name + "'");
    } else {
      cfg = it->second.make();
      from_preset = true;
    }
  }

  std::set<std::string> seen;
  for (const char *key : {"initial", "L0", "omega", "N"}) {
    if (doc.contains(key)) {
      seen.insert(key);
    }
  }
  r.text(doc, "name", "name", cfg.name);
  r.real(doc, "L0", "L0", cfg.length, positive, "must be > 0");
  long long omega = cfg.omega;
  if (r.integer(doc, "omega", "omega", omega,
                [](long long x) { return x != 0 && x > -1'000'000 && x < 1'000'000; },
                "must be a nonzero integer")) {
    cfg.omega = static_cast<int>(omega);
  }
  long long n = static_cast<long long>(cfg.grid_size);
  if (r.integer(doc, "N", "N", n,
                [](long long x) { return x >= 16 && x % 2 == 0 && x <= (1 << 24); },
                "must be an even integer >= 16")) {
    cfg.grid_size = static_cast<std::size_t>(n);
  }
  long long stride = static_cast<long long>(cfg.output_stride);
  if (r.integer(doc, "output_stride", "output_stride", stride,
                [](long long x) { return x >= 1; }, "must be >= 1")) {
    cfg.output_stride = static_cast<std::size_t>(stride);
  }
  r.text(doc, "output_dir", "output_dir", cfg.output_dir);
  if (doc.contains("seed")) {
    const json &v = doc.at("seed");
    if (v.is_number_unsigned()) {
      cfg.seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer()) {
      r.issue(Kind::OutOfRange, "seed", "must be >= 0");
    } else {
      r.issue(Kind::TypeMismatch, "seed", "expected an unsigned integer");
    }
  }

  if (doc.contains("initial") && r.object(doc.at("initial"), "initial")) {
    read_initial(r, doc.at("initial"), cfg);
  }
  bool cap_given = false;
  if (doc.contains("integrator") && r.object(doc.at("integrator"), "integrator")) {
    read_integrator(r, doc.at("integrator"), cfg, cap_given, seen);
  }
  if (doc.contains("diagnostics") && r.object(doc.at("diagnostics"), "diagnostics")) {
    read_diagnostics(r, doc.at("diagnostics"), cfg);
  }

  if (!from_preset) {
    for (const char *key :
         {"L0", "omega", "N", "initial", "integrator.dt", "integrator.t_max"}) {
      if (!seen.contains(key)) {
        r.issue(Kind::MissingRequired, key);
      }
    }
  }

  // Cross-field checks on the merged result.
  const InitialData &init = cfg.initial;
  if (init.kind == InitialData::Kind::perturbed) {
    for (std::size_t i = 0; i < init.modes.size(); ++i) {
      if (2 * static_cast<std::size_t>(init.modes[i].m) >= cfg.grid_size) {
        r.issue(Kind::OutOfRange, "initial.modes[" + std::to_string(i) + "].m",
                "must be below N/2");
      }
    }
  }
  if (init.kind == InitialData::Kind::file && init.path.empty()) {
    r.issue(Kind::MissingRequired, "initial.path");
  }
  if (init.kind == InitialData::Kind::random &&
      3 * static_cast<std::size_t>(init.max_mode) > cfg.grid_size) {
    r.issue(Kind::OutOfRange, "initial.max_mode", "must be at most N/3");
  }

  if (!r.issues().empty()) {
    throw ConfigError(r.issues());
  }
  if (!cap_given && (!from_preset || seen.contains("L0") || seen.contains("omega"))) {
    cfg.integrator.stop.blowup_cap = default_blowup_cap(cfg.length, cfg.omega);
  }
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError({{Kind::TypeMismatch, "<root>", e.what()}});
  }
  return config_from_json(doc);
}

json to_json(const RunConfig &cfg, bool include_output_dir) {
  json initial{{"kind", initial_kind_name(cfg.initial.kind)}};
  switch (cfg.initial.kind) {
  case InitialData::Kind::perturbed: {
    json modes = json::array();
    for (const Mode &mode : cfg.initial.modes) {
      modes.push_back(mode_to_json(mode));
    }
    initial["modes"] = modes;
    break;
  }
  case InitialData::Kind::file:
    initial["path"] = cfg.initial.path;
    break;
  case InitialData::Kind::random:
    initial["max_mode"] = cfg.initial.max_mode;
    initial["law"] = cfg.initial.amplitude.kind == AmplitudeLaw::Kind::uniform
                         ? "uniform"
                         : "decaying";
    initial["a_max"] = cfg.initial.amplitude.a_max;
    initial["p"] = cfg.initial.amplitude.p;
    break;
  case InitialData::Kind::circle:
    break;
  }
  const IntegratorConfig &ic = cfg.integrator;
  const MonitorTolerances &t = cfg.tolerances;
  json doc{{"name", cfg.name},
           {"initial", initial},
           {"L0", cfg.length},
           {"omega", cfg.omega},
           {"N", cfg.grid_size},
           {"integrator",
            {{"scheme", to_string(ic.scheme)},
             {"dt", ic.dt},
             {"dealias", ic.dealias},
             {"t_max", ic.stop.t_max},
             {"energy_tol", ic.stop.energy_tol},
             {"blowup_cap", ic.stop.blowup_cap}}},
           {"diagnostics",
            {{"winding_tol", t.winding},
             {"constraint_tol", t.constraint},
             {"monotone_slack", t.monotone_slack},
             {"bound_slack", t.bound_slack},
             {"closure_tol", t.closure},
             {"h_identity_tol", t.h_identity},
             {"smallness_energy", t.smallness_energy}}},
           {"output_stride", cfg.output_stride},
           {"seed", cfg.seed}};
  if (include_output_dir) {
    doc["output_dir"] = cfg.output_dir;
  }
  return doc;
}

std::string serialize_config(const RunConfig &cfg) { return to_json(cfg).dump(2) + "\n"; }

std::vector<RunConfig> parse_batch(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError({{Kind::TypeMismatch, "<root>", e.what()}});
  }
  if (doc.is_object() && doc.contains("runs")) {
    doc = doc.at("runs");
  }
  if (!doc.is_array()) {
    throw ConfigError({{Kind::TypeMismatch, "<root>",
                        "expected an array of configs or {\"runs\": [...]}"}});
  }
  std::vector<RunConfig> configs;
  std::vector<ConfigIssue> issues;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      configs.push_back(config_from_json(doc[i]));
    } catch (const ConfigError &e) {
      for (ConfigIssue issue : e.issues()) {
        issue.key = "runs[" + std::to_string(i) + "]." + issue.key;
        issues.push_back(std::move(issue));
      }
    }
  }
  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  return configs;
}

std::vector<double> read_curvature_csv(const std::filesystem::path &path,
                                       double length) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open curvature file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("curvature file is empty: " + path.string());
  }
  auto split = [](const std::string &text) {
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
        cell.pop_back();
      }
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  std::optional<std::size_t> k_col;
  std::optional<std::size_t> s_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "k") {
      k_col = i;
    } else if (header[i] == "s") {
      s_col = i;
    }
  }
  if (!k_col) {
    throw IoError("curvature file has no 'k' column: " + path.string());
  }
  std::vector<double> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line);
    try {
      if (s_col && std::stod(cells.at(*s_col)) >= length * (1.0 - 1e-12)) {
        continue;
      }
      samples.push_back(std::stod(cells.at(*k_col)));
    } catch (const std::exception &) {
      throw IoError("malformed row " + std::to_string(line_no) + " in " +
                    path.string());
    }
  }
  return samples;
}

CurvatureProfile build_initial_profile(const RunConfig &cfg) {
  switch (cfg.initial.kind) {
  case InitialData::Kind::circle:
    return make_circle(cfg.length, cfg.omega, cfg.grid_size);
  case InitialData::Kind::perturbed:
    return make_perturbed_circle(cfg.length, cfg.omega, cfg.grid_size,
                                 cfg.initial.modes);
  case InitialData::Kind::file: {
    auto samples = read_curvature_csv(cfg.initial.path, cfg.length);
    if (samples.size() != cfg.grid_size) {
      throw ConfigError({{Kind::OutOfRange, "N",
                          "file has " + std::to_string(samples.size()) +
                              " samples, config says " +
                              std::to_string(cfg.grid_size)}});
    }
    return CurvatureProfile(GridFunction(std::move(samples), cfg.length), cfg.length,
                            cfg.omega);
  }
  case InitialData::Kind::random: {
    ProfileSampler sampler(SamplerSettings{cfg.seed, cfg.initial.max_mode,
                                           cfg.initial.amplitude, cfg.length,
                                           cfg.omega, cfg.grid_size});
    return sampler.next_profile();
  }
  }
  throw InvalidArgument("unknown initial data kind");
}

} // namespace icflow
