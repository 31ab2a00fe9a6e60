#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qmeas/nonmarkov.hpp"
#include "qmeas/sweep.hpp"

namespace qmeas::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

Environment Environment::from_process() {
  Environment env;
  if (const char* dir = std::getenv("QMEAS_OUTPUT_DIR"); dir && *dir) env.output_dir = dir;
  return env;
}

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StrictAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("'" + std::string(s) + "' is not a finite number");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

ParamValue make_range(double min, double max, double count) {
  if (!(count >= 2.0) || count != std::floor(count) || count > 1e7)
    throw std::invalid_argument("range count must be an integer >= 2");
  if (!(min < max)) throw std::invalid_argument("range needs min < max");
  ParamValue v;
  v.kind = ParamValue::Kind::Range;
  v.min = min;
  v.max = max;
  v.count = static_cast<std::size_t>(count);
  return v;
}

// Kernel parameters whose CLI flag differs from the parameter name.
std::string flag_name(const std::string& param) {
  std::string f = param;
  for (char& ch : f)
    if (ch == '_') ch = '-';
  return f;
}

std::string normalize_key(std::string key) {
  for (char& ch : key)
    if (ch == '-') ch = '_';
  return key;
}

struct RunConfig {
  std::string subcommand;
  std::map<std::string, ParamValue> params;
  std::optional<ReductionMode> mode;
  int threads = 0;
  bool strict = false;
  bool plot = false;
  bool companion = false;
  OptimizerSettings optimizer;
  std::optional<std::string> output;
};

bool has_mode(const std::string& sub) {
  return sub == "correlations" || sub == "tradeoff" || sub == "nonmarkov";
}
bool has_optimizer(const std::string& sub) { return sub == "correlations" || sub == "audit"; }

ParamValue param_from_json(const std::string& name, const nlohmann::json& j) {
  if (j.is_number()) {
    ParamValue v;
    v.values = {j.get<double>()};
    if (!std::isfinite(v.values[0])) throw ConfigError("config value for '" + name + "' is not finite");
    return v;
  }
  if (j.is_string()) return parse_param_value(j.get<std::string>());
  if (j.is_array()) {
    ParamValue v;
    v.kind = ParamValue::Kind::List;
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError("config list for '" + name + "' must hold numbers");
      v.values.push_back(e.get<double>());
    }
    if (v.values.empty()) throw ConfigError("config list for '" + name + "' is empty");
    if (v.values.size() == 1) v.kind = ParamValue::Kind::Fixed;
    return v;
  }
  if (j.is_object() && j.contains("min") && j.contains("max") && j.contains("count"))
    return make_range(j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<double>());
  throw ConfigError("config value for '" + name + "' has an unsupported type");
}

ordered_json param_to_json(const ParamValue& v) {
  switch (v.kind) {
    case ParamValue::Kind::Fixed:
      return v.values[0];
    case ParamValue::Kind::List:
      return v.values;
    case ParamValue::Kind::Range: {
      ordered_json j;
      j["min"] = v.min;
      j["max"] = v.max;
      j["count"] = v.count;
      return j;
    }
    case ParamValue::Kind::Critical:
      return "critical";
  }
  return nullptr;
}

void load_config_file(const std::string& path, const std::vector<std::string>& params, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config file '" + path + "' is not valid JSON");
  }
  if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");

  auto set_param = [&](const std::string& raw_key, const nlohmann::json& value) {
    std::string key = raw_key;
    bool range = false;
    const std::string norm = normalize_key(key);
    if (norm.size() > 6 && norm.ends_with("_range")) {
      key = norm.substr(0, norm.size() - 6);
      range = true;
    } else {
      key = norm;
    }
    std::string name;
    for (const std::string& p : params)
      if (normalize_key(p) == key) name = p;
    if (name.empty()) throw ConfigError("unknown config key '" + raw_key + "' for " + cfg.subcommand);
    ParamValue v = param_from_json(name, value);
    if (range && v.kind != ParamValue::Kind::Range)
      throw ConfigError("config key '" + raw_key + "' expects min:max:count");
    cfg.params[name] = v;
  };

  for (const auto& [raw, value] : j.items()) {
    const std::string key = normalize_key(raw);
    if (key == "subcommand") {
      if (value.get<std::string>() != cfg.subcommand)
        throw ConfigError("config file is for '" + value.get<std::string>() + "', not '" + cfg.subcommand + "'");
    } else if (key == "mode") {
      if (!has_mode(cfg.subcommand)) throw ConfigError(cfg.subcommand + " takes no mode");
      cfg.mode = parse_mode(value.get<std::string>());
    } else if (key == "threads") {
      cfg.threads = value.get<int>();
    } else if (key == "strict") {
      cfg.strict = value.get<bool>();
    } else if (key == "plot") {
      cfg.plot = value.get<bool>();
    } else if (key == "companion" && cfg.subcommand == "tradeoff") {
      cfg.companion = value.get<bool>();
    } else if (key == "optimizer_points" && has_optimizer(cfg.subcommand)) {
      cfg.optimizer.grid_points = value.get<int>();
    } else if (key == "optimizer_tolerance" && has_optimizer(cfg.subcommand)) {
      cfg.optimizer.tolerance = value.get<double>();
    } else if (key == "output") {
      cfg.output = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("config 'params' must be an object");
      for (const auto& [name, pv] : value.items()) set_param(name, pv);
    } else {
      set_param(raw, value);
    }
  }
}

// Defaults that make a bare subcommand produce its reference grid.
void apply_default_grids(RunConfig& cfg) {
  auto fill = [&](const std::string& name, ParamValue v) {
    if (!cfg.params.count(name)) cfg.params[name] = std::move(v);
  };
  if (cfg.subcommand == "tradeoff") {
    fill("t", make_range(0.0, 1.0, 201));
    fill("p", make_range(0.0, 1.0, 201));
  } else if (cfg.subcommand == "nonmarkov") {
    fill("t", make_range(0.0, 1.0, 101));
    ParamValue th;
    th.kind = ParamValue::Kind::List;
    for (int k = 1; k <= 181; ++k) th.values.push_back(std::numbers::pi / 2.0 * k / 181.0);
    fill("theta", th);
  } else if (cfg.subcommand == "qubit-dynamics") {
    fill("t", make_range(0.0, 2.0 * std::numbers::pi, 201));
  } else if (cfg.subcommand == "correlations" || cfg.subcommand == "audit") {
    fill("t", make_range(0.0, 1.0, 101));
  }
}

struct Plan {
  SweepGrid grid;
  KernelOptions options;
};

Plan build_plan(const RunConfig& cfg, const std::vector<std::string>& params) {
  KernelOptions opts;
  opts.mode = cfg.mode.value_or(ReductionMode::FirstPrinciples);
  opts.optimizer = cfg.optimizer;
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  std::string last_fixed;
  for (const std::string& name : params) {
    const auto it = cfg.params.find(name);
    if (it == cfg.params.end()) continue;
    const ParamValue& v = it->second;
    switch (v.kind) {
      case ParamValue::Kind::Critical:
        if (name != "c3" || cfg.subcommand == "tradeoff" || cfg.subcommand == "nonmarkov")
          throw ConfigError("'critical' is only valid for --c3 of bell, correlations and audit");
        opts.critical_c3 = true;
        break;
      case ParamValue::Kind::Fixed:
        fixed[name] = v.values[0];
        last_fixed = name;
        break;
      case ParamValue::Kind::List:
        axes.push_back(Axis::list(name, v.values));
        break;
      case ParamValue::Kind::Range:
        axes.push_back(Axis::range(name, v.min, v.max, v.count));
        break;
    }
  }
  if (axes.empty() && !last_fixed.empty()) {
    axes.push_back(Axis::list(last_fixed, {fixed[last_fixed]}));
    fixed.erase(last_fixed);
  }
  if (axes.empty()) throw ConfigError("nothing to sweep: give at least one parameter");
  return {SweepGrid(std::move(axes), std::move(fixed)), opts};
}

ordered_json effective_config(const RunConfig& cfg, const std::vector<std::string>& params,
                              const std::string& output) {
  ordered_json j;
  j["subcommand"] = cfg.subcommand;
  if (has_mode(cfg.subcommand)) j["mode"] = to_string(cfg.mode.value_or(ReductionMode::FirstPrinciples));
  ordered_json p = ordered_json::object();
  for (const std::string& name : params)
    if (auto it = cfg.params.find(name); it != cfg.params.end()) p[name] = param_to_json(it->second);
  j["params"] = p;
  if (has_optimizer(cfg.subcommand)) {
    j["optimizer_points"] = cfg.optimizer.grid_points;
    j["optimizer_tolerance"] = cfg.optimizer.tolerance;
  }
  if (cfg.subcommand == "tradeoff") j["companion"] = cfg.companion;
  j["strict"] = cfg.strict;
  j["plot"] = cfg.plot;
  j["threads"] = cfg.threads;
  j["output"] = output;
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << content;
  os.flush();
  if (!os) throw ConfigError("failed writing '" + path.string() + "'");
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  return fs::path(path.string() + suffix);
}

fs::path replace_csv(const fs::path& path, const std::string& tail) {
  const std::string s = path.string();
  if (s.size() > 4 && s.ends_with(".csv")) return fs::path(s.substr(0, s.size() - 4) + tail);
  return fs::path(s + tail);
}

std::string value_column(const std::string& sub) {
  if (sub == "bell") return "B";
  if (sub == "correlations") return "C";
  if (sub == "tradeoff") return "gap";
  if (sub == "nonmarkov") return "delta";
  if (sub == "qubit-dynamics") return "P11";
  return "abs_diff_C";
}

std::string csv_column_for_axis(const std::string& sub, const std::string& axis) {
  if (sub == "nonmarkov" && axis == "theta") return "theta_deg";
  return axis;
}

// Varying axes the kernel columns do not already report go in front.
SweepResult with_axis_columns(SweepResult r, const std::string& sub) {
  std::set<std::string> present;
  for (const ColumnSpec& c : r.columns) present.insert(c.name);
  std::vector<std::size_t> missing;
  for (std::size_t a = 0; a < r.grid.axes().size(); ++a) {
    const Axis& axis = r.grid.axes()[a];
    const std::string name = sub == "nonmarkov" && axis.name == "theta" ? "theta_rad" : axis.name;
    if (axis.values.size() > 1 && !present.count(name)) missing.push_back(a);
  }
  if (missing.empty()) return r;
  std::vector<ColumnSpec> columns;
  for (std::size_t a : missing) columns.push_back({r.grid.axes()[a].name, ColumnKind::Real, {}});
  columns.insert(columns.end(), r.columns.begin(), r.columns.end());
  std::vector<double> data;
  data.reserve(r.rows() * columns.size());
  for (std::size_t row = 0; row < r.rows(); ++row) {
    for (std::size_t a : missing) data.push_back(r.grid.coordinate(row, a));
    for (std::size_t c = 0; c < r.columns.size(); ++c) data.push_back(r.value(row, c));
  }
  r.columns = std::move(columns);
  r.data = std::move(data);
  return r;
}

std::string gnuplot_script(const SweepResult& r, const std::string& sub, const std::string& csv_name) {
  std::vector<const Axis*> varying;
  for (const Axis& a : r.grid.axes())
    if (a.values.size() > 1) varying.push_back(&a);
  const std::string z = value_column(sub);
  std::ostringstream gp;
  gp << "# gnuplot script for " << csv_name << "\n";
  gp << "set datafile separator ','\n";
  gp << "set datafile columnheaders\n";
  gp << "set terminal pngcairo size 900,650\n";
  gp << "set output '" << replace_csv(csv_name, ".png").string() << "'\n";
  auto col = [&](const Axis* a) { return csv_column_for_axis(sub, a->name); };
  std::set<std::string> present;
  for (const ColumnSpec& c : r.columns) present.insert(c.name);
  if (varying.empty() || !present.count(col(varying.back()))) {
    gp << "plot '" << csv_name << "' using 0:(column('" << z << "')) with linespoints title '" << z << "'\n";
    return gp.str();
  }
  const Axis* x = varying.back();
  gp << "set xlabel '" << col(x) << "'\n";
  if (varying.size() == 1) {
    gp << "set ylabel '" << z << "'\n";
    gp << "plot '" << csv_name << "' using (column('" << col(x) << "')):(column('" << z
       << "')) with lines title '" << z << "'\n";
    return gp.str();
  }
  const Axis* y = varying[varying.size() - 2];
  if (!y->bounds) {
    // one curve per value of the slower axis
    const std::size_t block = x->values.size();
    gp << "set ylabel '" << z << "'\n";
    gp << "plot";
    for (std::size_t k = 0; k < y->values.size(); ++k) {
      gp << (k ? ", \\\n    " : " ") << "'" << csv_name << "' every ::" << k * block << "::" << (k + 1) * block - 1
         << " using (column('" << col(x) << "')):(column('" << z << "')) with lines title '" << y->name << "="
         << format_real(y->values[k]) << "'";
    }
    gp << "\n";
    return gp.str();
  }
  gp << "set ylabel '" << col(y) << "'\n";
  gp << "set view map\n";
  gp << "set palette rgbformulae 33,13,10\n";
  gp << "plot '" << csv_name << "' using (column('" << col(x) << "')):(column('" << col(y) << "')):(column('" << z
     << "')) with image title '" << z << "'\n";
  return gp.str();
}

// One region summary per combination of the axes other than t and theta.
std::string region_summary_json(const SweepResult& r) {
  const Axis* t_axis = r.grid.find_axis("t");
  const Axis* th_axis = r.grid.find_axis("theta");
  ordered_json j;
  j["slices"] = ordered_json::array();
  if (!t_axis || !th_axis) {
    j["note"] = "t and theta must both be grid axes for a region summary";
    return j.dump(2) + "\n";
  }
  const std::size_t block = t_axis->values.size() * th_axis->values.size();
  const std::size_t neg_col = r.column("non_markovian");
  const std::size_t delta_col = r.column("delta");
  for (std::size_t start = 0; start < r.rows(); start += block) {
    std::vector<std::uint8_t> neg(block), undef(block);
    for (std::size_t i = 0; i < block; ++i) {
      neg[i] = r.value(start + i, neg_col) != 0.0;
      undef[i] = (r.flags[start + i] & (kFlagUndefined | kFlagFailed)) != 0 || std::isnan(r.value(start + i, delta_col));
    }
    const RegionSummary s = extract_regions(neg, undef, t_axis->values, th_axis->values);
    ordered_json slice;
    ordered_json at = ordered_json::object();
    for (std::size_t a = 0; a < r.grid.axes().size(); ++a) {
      const std::string& name = r.grid.axes()[a].name;
      if (name != "t" && name != "theta") at[name] = r.grid.coordinate(start, a);
    }
    slice["at"] = at;
    slice["negative_cells"] = s.negative_cells;
    slice["undefined_cells"] = s.undefined_cells;
    ordered_json regions = ordered_json::array();
    for (const Region& g : s.regions) {
      ordered_json e;
      e["cells"] = g.cells;
      e["t_min"] = g.t_min;
      e["t_max"] = g.t_max;
      e["theta_min_rad"] = g.theta_min;
      e["theta_max_rad"] = g.theta_max;
      e["theta_min_deg"] = g.theta_min * 180.0 / std::numbers::pi;
      e["theta_max_deg"] = g.theta_max * 180.0 / std::numbers::pi;
      regions.push_back(e);
    }
    slice["regions"] = regions;
    j["slices"].push_back(slice);
  }
  return j.dump(2) + "\n";
}

std::size_t flagged(const SweepResult& r) { return r.count_flag(~0u); }

int execute(const RunConfig& cfg, const std::vector<std::string>& params, const Environment& env,
            std::ostream& out, std::ostream& err) {
  const Plan plan = build_plan(cfg, params);
  const auto kernel = make_kernel(cfg.subcommand, plan.options);

  std::string output;
  if (cfg.output) {
    output = *cfg.output;
  } else {
    fs::path dir = env.output_dir ? fs::path(*env.output_dir) : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    output = (dir / (cfg.subcommand + ".csv")).string();
  }
  const bool to_stdout = output == "-";

  SweepResult result = with_axis_columns(
      cfg.subcommand == "audit"
          ? audit_report(plan.grid, plan.options.optimizer, plan.options.critical_c3, cfg.threads).table
          : run_sweep(plan.grid, *kernel, cfg.threads),
      cfg.subcommand);

  if (cfg.strict && flagged(result) > 0)
    throw StrictAbort("strict mode: " + std::to_string(flagged(result)) + " of " + std::to_string(result.rows()) +
                      " points flagged (clamped " + std::to_string(result.count_flag(kFlagClamped)) + ", projected " +
                      std::to_string(result.count_flag(kFlagProjected)) + ", undefined " +
                      std::to_string(result.count_flag(kFlagUndefined)) + ", nonphysical " +
                      std::to_string(result.count_flag(kFlagNonphysical)) + ", failed " +
                      std::to_string(result.count_flag(kFlagFailed)) + ")");

  const std::string csv = to_csv(result);
  if (to_stdout) {
    out << csv;
  } else {
    const fs::path path(output);
    write_file(path, csv);
    write_file(with_suffix(path, ".config.json"), effective_config(cfg, params, output).dump(2) + "\n");
    if (cfg.plot) write_file(with_suffix(path, ".gp"), gnuplot_script(result, cfg.subcommand, path.filename().string()));
    if (cfg.subcommand == "nonmarkov") write_file(with_suffix(path, ".regions.json"), region_summary_json(result));
    if (cfg.subcommand == "audit") {
      AuditReport rep{result, {}};
      // summary recomputed from the table already in hand
      const std::size_t dc = result.column("abs_diff_C"), dd = result.column("abs_diff_D");
      double sc = 0.0, sd = 0.0;
      for (std::size_t r = 0; r < result.rows(); ++r) {
        const double a = result.value(r, dc), b = result.value(r, dd);
        if (!(std::isfinite(a) && std::isfinite(b))) continue;
        rep.summary.max_abs_diff_C = std::max(rep.summary.max_abs_diff_C, a);
        rep.summary.max_abs_diff_D = std::max(rep.summary.max_abs_diff_D, b);
        sc += a;
        sd += b;
        ++rep.summary.points;
      }
      if (rep.summary.points) {
        rep.summary.mean_abs_diff_C = sc / static_cast<double>(rep.summary.points);
        rep.summary.mean_abs_diff_D = sd / static_cast<double>(rep.summary.points);
      }
      write_file(replace_csv(path, ".json"), audit_json(rep, path.filename().string()));
    }
    if (cfg.subcommand == "tradeoff" && cfg.companion) {
      KernelOptions other = plan.options;
      other.mode = other.mode == ReductionMode::AsPublished ? ReductionMode::FirstPrinciples : ReductionMode::AsPublished;
      const SweepResult comp = with_axis_columns(run_sweep(plan.grid, *make_kernel("tradeoff", other), cfg.threads), cfg.subcommand);
      write_file(replace_csv(path, std::string(".") + to_string(other.mode) + ".csv"), to_csv(comp));
    }
  }

  if (const std::size_t failed = result.count_flag(kFlagFailed))
    err << "qmeas: warning: " << failed << " points failed to evaluate\n";
  return 0;
}

std::string describe(const std::string& sub) {
  if (sub == "bell") return "CHSH-Bell function of the dephasing X state";
  if (sub == "correlations") return "classical correlation, discord and mutual information under imperfect measurement";
  if (sub == "tradeoff") return "disturbance versus information gain map over (t, p)";
  if (sub == "nonmarkov") return "fidelity-difference witness over (t, theta) with region summary";
  if (sub == "qubit-dynamics") return "survival and transition probabilities of the monitored qubit";
  return "as-published versus first-principles correlation audit (CSV table plus JSON report)";
}

}  // namespace

ParamValue parse_param_value(std::string_view text) {
  if (text == "critical") {
    ParamValue v;
    v.kind = ParamValue::Kind::Critical;
    return v;
  }
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("range '" + std::string(text) + "' must be min:max:count");
    return make_range(parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]));
  }
  ParamValue v;
  for (std::string_view p : split(text, ',')) v.values.push_back(parse_number(p));
  v.kind = v.values.size() == 1 ? ParamValue::Kind::Fixed : ParamValue::Kind::List;
  return v;
}

int parse_and_run(const std::vector<std::string>& args, const Environment& env, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Imperfect-measurement correlations of a dephasing two-qubit X state", "qmeas"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  struct SubOptions {
    std::map<std::string, std::string> value;
    std::map<std::string, std::string> range;
    std::map<std::string, CLI::Option*> value_opt;
    std::map<std::string, CLI::Option*> range_opt;
    std::string mode, output, config;
    int threads = 0;
    int optimizer_points = 0;
    double optimizer_tolerance = 0.0;
    CLI::Option *mode_opt = nullptr, *output_opt = nullptr, *config_opt = nullptr, *threads_opt = nullptr;
    CLI::Option *points_opt = nullptr, *tol_opt = nullptr, *strict_opt = nullptr, *plot_opt = nullptr,
                *companion_opt = nullptr;
    bool strict = false, plot = false, companion = false;
    std::vector<std::string> params;
  };
  std::map<std::string, SubOptions> subs;

  for (const std::string& name : kernel_names()) {
    KernelOptions probe;
    probe.critical_c3 = true;
    SubOptions& so = subs[name];
    so.params = make_kernel(name, probe)->parameters();
    CLI::App* sub = app.add_subcommand(name, describe(name));
    for (const std::string& p : so.params) {
      const std::string f = flag_name(p);
      std::string help = "value, comma list or min:max:count";
      if (p == "c3" && name != "tradeoff" && name != "nonmarkov") help += ", or 'critical'";
      if (p == "theta" || p == "omega") help += p == "theta" ? " (radians)" : " (omitted: resonant)";
      so.value_opt[p] = sub->add_option("--" + f, so.value[p], help);
      so.range_opt[p] = sub->add_option("--" + f + "-range", so.range[p], "min:max:count");
    }
    if (has_mode(name))
      so.mode_opt = sub->add_option("--mode", so.mode, "as-published or first-principles (default)");
    if (has_optimizer(name)) {
      so.points_opt = sub->add_option("--optimizer-points", so.optimizer_points, "theta grid points (default 721)");
      so.tol_opt = sub->add_option("--optimizer-tolerance", so.optimizer_tolerance,
                                   "golden-section bracket width (default 1e-10)");
    }
    if (name == "tradeoff")
      so.companion_opt = sub->add_flag("--companion", so.companion, "also write the other reduction mode");
    so.output_opt = sub->add_option("-o,--output", so.output, "CSV path, '-' for stdout");
    so.config_opt = sub->add_option("--config", so.config, "JSON config file; flags override it");
    so.threads_opt = sub->add_option("--threads", so.threads, "worker cap (0: OpenMP default)");
    so.strict_opt = sub->add_flag("--strict", so.strict, "exit 2 if any point is flagged");
    so.plot_opt = sub->add_flag("--plot", so.plot, "write a gnuplot script next to the CSV");
  }

  std::vector<const char*> argv{"qmeas"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "qmeas: " << e.what() << "\n";
    return 1;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    SubOptions& so = subs[name];
    RunConfig cfg;
    cfg.subcommand = name;
    if (so.config_opt->count()) load_config_file(so.config, so.params, cfg);

    for (const std::string& p : so.params) {
      const bool v = so.value_opt[p]->count() > 0, r = so.range_opt[p]->count() > 0;
      if (v && r) throw ConfigError("give --" + flag_name(p) + " or --" + flag_name(p) + "-range, not both");
      if (v) cfg.params[p] = parse_param_value(so.value[p]);
      if (r) {
        ParamValue pv = parse_param_value(so.range[p]);
        if (pv.kind != ParamValue::Kind::Range)
          throw ConfigError("--" + flag_name(p) + "-range expects min:max:count");
        cfg.params[p] = pv;
      }
    }
    if (so.mode_opt && so.mode_opt->count()) cfg.mode = parse_mode(so.mode);
    if (so.points_opt && so.points_opt->count()) cfg.optimizer.grid_points = so.optimizer_points;
    if (so.tol_opt && so.tol_opt->count()) cfg.optimizer.tolerance = so.optimizer_tolerance;
    if (so.companion_opt && so.companion_opt->count()) cfg.companion = true;
    if (so.output_opt->count()) cfg.output = so.output;
    if (so.threads_opt->count()) cfg.threads = so.threads;
    if (so.strict_opt->count()) cfg.strict = true;
    if (so.plot_opt->count()) cfg.plot = true;
    if (cfg.threads < 0) throw ConfigError("--threads must be nonnegative");

    apply_default_grids(cfg);
    return execute(cfg, so.params, env, out, err);
  } catch (const StrictAbort& e) {
    err << "qmeas: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "qmeas: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qmeas::cli
