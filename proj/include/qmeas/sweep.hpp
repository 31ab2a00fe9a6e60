#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmeas/correlations.hpp"

namespace qmeas {

/// Evenly spaced values; the last one is exactly `max`.
std::vector<double> linspace(double min, double max, std::size_t count);

struct Axis {
  std::string name;
  std::vector<double> values;
  /// Set when the axis was declared as min:max:count.
  std::optional<std::array<double, 2>> bounds;

  /// Throws std::invalid_argument unless count >= 2 and min < max.
  static Axis range(std::string name, double min, double max, std::size_t count);
  /// Throws std::invalid_argument if empty or non-finite.
  static Axis list(std::string name, std::vector<double> values);
};

/// Rectangular grid. Points are enumerated row-major: the first axis varies slowest.
class SweepGrid {
 public:
  /// Throws std::invalid_argument on zero axes or duplicate names.
  explicit SweepGrid(std::vector<Axis> axes, std::map<std::string, double> fixed = {});

  const std::vector<Axis>& axes() const { return axes_; }
  const std::map<std::string, double>& fixed() const { return fixed_; }
  std::size_t size() const;
  /// Value of axis `axis` at grid row `row`.
  double coordinate(std::size_t row, std::size_t axis) const;
  const Axis* find_axis(std::string_view name) const;

 private:
  std::vector<Axis> axes_;
  std::map<std::string, double> fixed_;
  std::vector<std::size_t> strides_;
};

enum PointFlag : std::uint32_t {
  kFlagClamped = 1u << 0,
  kFlagProjected = 1u << 1,
  kFlagUndefined = 1u << 2,
  kFlagNonphysical = 1u << 3,
  kFlagFailed = 1u << 4,
};

enum class ColumnKind { Real, Boolean, Label };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
  std::vector<std::string> labels;  // Label columns store an index into this list
};

/// A named per-point evaluator. Parameters are bound by name to grid axes,
/// fixed values or the kernel's defaults.
class SweepKernel {
 public:
  virtual ~SweepKernel() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::string> parameters() const = 0;
  virtual std::map<std::string, double> defaults() const { return {}; }
  virtual std::vector<ColumnSpec> columns() const = 0;
  /// `params` follows parameters(); `out` has one slot per column. Returns PointFlag bits.
  virtual std::uint32_t evaluate(std::span<const double> params, std::span<double> out) const = 0;
};

struct KernelOptions {
  ReductionMode mode = ReductionMode::FirstPrinciples;
  bool critical_c3 = false;  // replace c3 by 1 - 2c e^{-2gt} at every point
  OptimizerSettings optimizer;
};

std::vector<std::string> kernel_names();
/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<SweepKernel> make_kernel(std::string_view name, const KernelOptions& options = {});

struct SweepResult {
  SweepGrid grid;
  std::string kernel;
  std::vector<ColumnSpec> columns;
  std::vector<double> data;          // rows() x columns.size(), row-major
  std::vector<std::uint32_t> flags;  // one bitmask per row

  std::size_t rows() const { return flags.size(); }
  double value(std::size_t row, std::size_t col) const { return data[row * columns.size() + col]; }
  /// Throws std::out_of_range for an unknown column.
  std::size_t column(std::string_view name) const;
  std::size_t count_flag(std::uint32_t mask) const;
};

/// OpenMP evaluation; threads <= 0 uses the runtime default.
SweepResult run_sweep(const SweepGrid& grid, const SweepKernel& kernel, int threads = 0);
/// Plain loop reference; bitwise identical to run_sweep.
SweepResult run_sweep_serial(const SweepGrid& grid, const SweepKernel& kernel);

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_real(double v);
void write_csv(std::ostream& os, const SweepResult& result);
std::string to_csv(const SweepResult& result);

struct AuditSummary {
  std::size_t points = 0;
  double max_abs_diff_C = 0.0;
  double max_abs_diff_D = 0.0;
  double mean_abs_diff_C = 0.0;
  double mean_abs_diff_D = 0.0;
};

struct AuditReport {
  SweepResult table;
  AuditSummary summary;
};

/// Evaluates both reduction modes over a correlations grid (parameters p, c, c3, g, t).
AuditReport audit_report(const SweepGrid& grid, const OptimizerSettings& optimizer = {},
                         bool critical_c3 = false, int threads = 0);
/// JSON document with keys grid, max_abs_diff_C, max_abs_diff_D, mean_abs_diff_C,
/// mean_abs_diff_D, points and per_point_table.
std::string audit_json(const AuditReport& report, std::string_view table_reference);
/// {"axes": [...], "fixed": {...}}
std::string grid_json(const SweepGrid& grid);

}  // namespace qmeas
