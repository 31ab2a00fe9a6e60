#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmeas::cli {

/// Process environment seen by the CLI. `output_dir` comes from QMEAS_OUTPUT_DIR.
struct Environment {
  std::optional<std::string> output_dir;
  static Environment from_process();
};

/// One parameter as given on the command line or in a config file.
struct ParamValue {
  enum class Kind { Fixed, List, Range, Critical };
  Kind kind = Kind::Fixed;
  std::vector<double> values;  // Fixed: one value; List: the values
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Parses "0.5", "0,0.05,0.2", "0:1:101" or "critical". Throws std::invalid_argument.
ParamValue parse_param_value(std::string_view text);

/// Runs one invocation. args excludes the program name.
/// Exit status: 0 success, 1 configuration or I/O error, 2 strict mode with flagged points.
int parse_and_run(const std::vector<std::string>& args, const Environment& env, std::ostream& out,
                  std::ostream& err);

}  // namespace qmeas::cli
