#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qmeas/correlations.hpp"

namespace qmeas {

inline constexpr double kWitnessTolerance = 1e-10;
inline constexpr double kWitnessUndefinedFidelity = 1e-14;

struct WitnessValue {
  double delta = 0.0;
  bool non_markovian = false;
  bool undefined = false;
  bool projected = false;
};

/// Delta(t, s) = (F[rho(t), rho(t+s)] - F[rho(0), rho(s)]) / F[rho(0), rho(s)] for the
/// parallel conditional state rho(t) at the precision and angle in `attrs` (attrs.t is ignored).
WitnessValue fidelity_difference(const XStateParams& params, const MeasurementAttributes& attrs,
                                 double t, double step_tau, ReductionMode mode);

struct NonMarkovPoint {
  double t = 0.0;
  double theta = 0.0;
  WitnessValue value;
};

/// Connected set of negative cells (4-neighbour adjacency) with its bounding box.
struct Region {
  std::size_t cells = 0;
  std::size_t t_first = 0, t_last = 0;
  std::size_t theta_first = 0, theta_last = 0;
  double t_min = 0.0, t_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
};

struct RegionSummary {
  std::vector<Region> regions;  // ordered by first cell in row-major order
  std::size_t negative_cells = 0;
  std::size_t undefined_cells = 0;
};

/// Masks are row-major with t slow and theta fast. Undefined cells never join a region.
RegionSummary extract_regions(std::span<const std::uint8_t> negative, std::span<const std::uint8_t> undefined,
                              std::span<const double> t_values, std::span<const double> theta_values);

struct NonMarkovMap {
  std::vector<double> t_values;
  std::vector<double> theta_values;
  std::vector<NonMarkovPoint> points;  // row-major: t slow, theta fast
  RegionSummary summary;

  const NonMarkovPoint& at(std::size_t it, std::size_t ith) const {
    return points[it * theta_values.size() + ith];
  }
};

/// threads <= 0 uses the OpenMP default.
NonMarkovMap nonmarkov_map(const XStateParams& params, double p, const std::vector<double>& t_values,
                           const std::vector<double>& theta_values, double step_tau, ReductionMode mode,
                           int threads = 0);

}  // namespace qmeas
