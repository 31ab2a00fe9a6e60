#include "qmeas/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qmeas/parallel.hpp"

namespace qmeas {

std::vector<double> linspace(double min, double max, std::size_t count) {
  if (count < 2) throw std::invalid_argument("a range needs at least 2 points");
  if (!(std::isfinite(min) && std::isfinite(max))) throw std::invalid_argument("range bounds must be finite");
  if (!(min < max)) throw std::invalid_argument("range needs min < max");
  std::vector<double> v(count);
  const double span = max - min;
  const double last = static_cast<double>(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) v[k] = min + span * (static_cast<double>(k) / last);
  v[count - 1] = max;
  return v;
}

Axis Axis::range(std::string name, double min, double max, std::size_t count) {
  Axis a;
  a.name = std::move(name);
  a.values = linspace(min, max, count);
  a.bounds = std::array<double, 2>{min, max};
  return a;
}

Axis Axis::list(std::string name, std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("axis '" + name + "' has no values");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("axis '" + name + "' has a non-finite value");
  Axis a;
  a.name = std::move(name);
  a.values = std::move(values);
  return a;
}

SweepGrid::SweepGrid(std::vector<Axis> axes, std::map<std::string, double> fixed)
    : axes_(std::move(axes)), fixed_(std::move(fixed)) {
  if (axes_.empty()) throw std::invalid_argument("sweep grid needs at least one axis");
  std::set<std::string> names;
  for (const Axis& a : axes_) {
    if (a.values.empty()) throw std::invalid_argument("axis '" + a.name + "' has no values");
    if (!names.insert(a.name).second) throw std::invalid_argument("duplicate axis '" + a.name + "'");
  }
  for (const auto& [name, value] : fixed_)
    if (names.count(name)) throw std::invalid_argument("'" + name + "' is both an axis and a fixed value");
  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * axes_[i].values.size();
}

std::size_t SweepGrid::size() const { return strides_[0] * axes_[0].values.size(); }

double SweepGrid::coordinate(std::size_t row, std::size_t axis) const {
  const Axis& a = axes_[axis];
  return a.values[(row / strides_[axis]) % a.values.size()];
}

const Axis* SweepGrid::find_axis(std::string_view name) const {
  for (const Axis& a : axes_)
    if (a.name == name) return &a;
  return nullptr;
}

std::size_t SweepResult::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::size_t SweepResult::count_flag(std::uint32_t mask) const {
  return static_cast<std::size_t>(
      std::count_if(flags.begin(), flags.end(), [mask](std::uint32_t f) { return (f & mask) != 0; }));
}

namespace {

// Where each kernel parameter comes from: an axis index, or a constant.
struct Binding {
  std::vector<int> axis;
  std::vector<double> constant;
};

Binding bind(const SweepGrid& grid, const SweepKernel& kernel) {
  const std::vector<std::string> params = kernel.parameters();
  const std::map<std::string, double> defaults = kernel.defaults();
  std::set<std::string> known(params.begin(), params.end());
  for (const Axis& a : grid.axes())
    if (!known.count(a.name))
      throw std::invalid_argument("kernel '" + kernel.name() + "' has no parameter '" + a.name + "'");
  for (const auto& [name, value] : grid.fixed())
    if (!known.count(name))
      throw std::invalid_argument("kernel '" + kernel.name() + "' has no parameter '" + name + "'");

  Binding b;
  for (const std::string& name : params) {
    int ax = -1;
    for (std::size_t i = 0; i < grid.axes().size(); ++i)
      if (grid.axes()[i].name == name) ax = static_cast<int>(i);
    double c = std::numeric_limits<double>::quiet_NaN();
    if (ax < 0) {
      if (auto it = grid.fixed().find(name); it != grid.fixed().end())
        c = it->second;
      else if (auto d = defaults.find(name); d != defaults.end())
        c = d->second;
      else
        throw std::invalid_argument("kernel '" + kernel.name() + "' needs a value for '" + name + "'");
    }
    b.axis.push_back(ax);
    b.constant.push_back(c);
  }
  return b;
}

SweepResult prepare(const SweepGrid& grid, const SweepKernel& kernel) {
  SweepResult r{grid, kernel.name(), kernel.columns(), {}, {}};
  r.data.assign(grid.size() * r.columns.size(), 0.0);
  r.flags.assign(grid.size(), 0);
  return r;
}

void evaluate_row(const SweepGrid& grid, const SweepKernel& kernel, const Binding& b, SweepResult& r,
                  std::size_t row) {
  const std::size_t np = b.axis.size();
  std::array<double, 16> buffer{};
  std::vector<double> heap;
  double* params = buffer.data();
  if (np > buffer.size()) {
    heap.resize(np);
    params = heap.data();
  }
  for (std::size_t i = 0; i < np; ++i)
    params[i] = b.axis[i] >= 0 ? grid.coordinate(row, static_cast<std::size_t>(b.axis[i])) : b.constant[i];
  const std::size_t nc = r.columns.size();
  std::span<double> out(r.data.data() + row * nc, nc);
  try {
    r.flags[row] = kernel.evaluate(std::span<const double>(params, np), out);
  } catch (const std::exception&) {
    std::fill(out.begin(), out.end(), std::numeric_limits<double>::quiet_NaN());
    r.flags[row] = kFlagFailed;
  }
}

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, const SweepKernel& kernel, int threads) {
  const Binding b = bind(grid, kernel);
  SweepResult r = prepare(grid, kernel);
  parallel_for_index(grid.size(), threads, [&](std::size_t row) { evaluate_row(grid, kernel, b, r, row); });
  return r;
}

SweepResult run_sweep_serial(const SweepGrid& grid, const SweepKernel& kernel) {
  const Binding b = bind(grid, kernel);
  SweepResult r = prepare(grid, kernel);
  serial_for_index(grid.size(), [&](std::size_t row) { evaluate_row(grid, kernel, b, r, row); });
  return r;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const SweepResult& result) {
  const std::size_t nc = result.columns.size();
  for (std::size_t c = 0; c < nc; ++c) os << (c ? "," : "") << result.columns[c].name;
  os << '\n';
  for (std::size_t r = 0; r < result.rows(); ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      if (c) os << ',';
      const ColumnSpec& col = result.columns[c];
      const double v = result.value(r, c);
      switch (col.kind) {
        case ColumnKind::Real:
          os << format_real(v);
          break;
        case ColumnKind::Boolean:
          os << (std::isnan(v) ? "nan" : (v != 0.0 ? "1" : "0"));
          break;
        case ColumnKind::Label: {
          const auto idx = static_cast<std::size_t>(v);
          os << (std::isfinite(v) && v >= 0 && idx < col.labels.size() ? col.labels[idx] : "nan");
          break;
        }
      }
    }
    os << '\n';
  }
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  write_csv(os, result);
  return os.str();
}

namespace {

nlohmann::ordered_json grid_to_json(const SweepGrid& grid) {
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const Axis& a : grid.axes()) {
    nlohmann::ordered_json j;
    j["name"] = a.name;
    if (a.bounds) {
      j["min"] = (*a.bounds)[0];
      j["max"] = (*a.bounds)[1];
      j["count"] = a.values.size();
    } else {
      j["values"] = a.values;
    }
    axes.push_back(j);
  }
  nlohmann::ordered_json fixed = nlohmann::ordered_json::object();
  for (const auto& [name, value] : grid.fixed()) fixed[name] = value;
  nlohmann::ordered_json g;
  g["axes"] = axes;
  g["fixed"] = fixed;
  return g;
}

}  // namespace

AuditReport audit_report(const SweepGrid& grid, const OptimizerSettings& optimizer, bool critical_c3,
                         int threads) {
  if (grid.size() == 0) throw std::invalid_argument("audit grid is empty");
  KernelOptions opts;
  opts.optimizer = optimizer;
  opts.critical_c3 = critical_c3;
  const auto kernel = make_kernel("audit", opts);
  AuditReport rep{run_sweep(grid, *kernel, threads), {}};
  const std::size_t dc = rep.table.column("abs_diff_C");
  const std::size_t dd = rep.table.column("abs_diff_D");
  double sum_c = 0.0, sum_d = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < rep.table.rows(); ++r) {
    const double a = rep.table.value(r, dc);
    const double b = rep.table.value(r, dd);
    if (!(std::isfinite(a) && std::isfinite(b))) continue;
    rep.summary.max_abs_diff_C = std::max(rep.summary.max_abs_diff_C, a);
    rep.summary.max_abs_diff_D = std::max(rep.summary.max_abs_diff_D, b);
    sum_c += a;
    sum_d += b;
    ++n;
  }
  rep.summary.points = n;
  if (n) {
    rep.summary.mean_abs_diff_C = sum_c / static_cast<double>(n);
    rep.summary.mean_abs_diff_D = sum_d / static_cast<double>(n);
  }
  return rep;
}

std::string audit_json(const AuditReport& report, std::string_view table_reference) {
  nlohmann::ordered_json j;
  j["grid"] = grid_to_json(report.table.grid);
  j["points"] = report.summary.points;
  j["max_abs_diff_C"] = report.summary.max_abs_diff_C;
  j["max_abs_diff_D"] = report.summary.max_abs_diff_D;
  j["mean_abs_diff_C"] = report.summary.mean_abs_diff_C;
  j["mean_abs_diff_D"] = report.summary.mean_abs_diff_D;
  j["per_point_table"] = std::string(table_reference);
  return j.dump(2) + "\n";
}

std::string grid_json(const SweepGrid& grid) { return grid_to_json(grid).dump(2) + "\n"; }

}  // namespace qmeas
