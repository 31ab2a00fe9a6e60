#include "qmeas/nonmarkov.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "qmeas/parallel.hpp"

namespace qmeas {

namespace {

HermitianOperator2 state_at(const XStateParams& params, MeasurementAttributes attrs, double t,
                            ReductionMode mode) {
  attrs.t = t;
  return reduced_states(params, attrs, mode).rho_parallel;
}

}  // namespace

WitnessValue fidelity_difference(const XStateParams& params, const MeasurementAttributes& attrs,
                                 double t, double step_tau, ReductionMode mode) {
  if (!(step_tau > 0.0)) throw std::invalid_argument("step_tau must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const HermitianOperator2 r0 = state_at(params, attrs, 0.0, mode);
  const HermitianOperator2 rs = state_at(params, attrs, step_tau, mode);
  const HermitianOperator2 rt = state_at(params, attrs, t, mode);
  const HermitianOperator2 rts = state_at(params, attrs, t + step_tau, mode);

  const FidelityResult f0 = fidelity(r0, rs);
  const FidelityResult ft = fidelity(rt, rts);
  WitnessValue w;
  w.projected = f0.projected || ft.projected;
  if (!(f0.value >= kWitnessUndefinedFidelity)) {
    w.undefined = true;
    w.delta = std::numeric_limits<double>::quiet_NaN();
    return w;
  }
  w.delta = (ft.value - f0.value) / f0.value;
  w.non_markovian = w.delta < -kWitnessTolerance;
  return w;
}

RegionSummary extract_regions(std::span<const std::uint8_t> negative, std::span<const std::uint8_t> undefined,
                              std::span<const double> t_values, std::span<const double> theta_values) {
  const std::size_t nt = t_values.size();
  const std::size_t nth = theta_values.size();
  if (negative.size() != nt * nth || undefined.size() != nt * nth)
    throw std::invalid_argument("mask size does not match the grid");

  RegionSummary summary;
  std::vector<std::uint8_t> seen(nt * nth, 0);
  for (std::size_t i = 0; i < nt * nth; ++i) {
    if (undefined[i]) ++summary.undefined_cells;
    if (negative[i] && !undefined[i]) ++summary.negative_cells;
  }

  auto member = [&](std::size_t i) { return negative[i] && !undefined[i]; };
  for (std::size_t start = 0; start < nt * nth; ++start) {
    if (!member(start) || seen[start]) continue;
    Region r;
    r.t_first = r.t_last = start / nth;
    r.theta_first = r.theta_last = start % nth;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++r.cells;
      const std::size_t it = i / nth, ith = i % nth;
      r.t_first = std::min(r.t_first, it);
      r.t_last = std::max(r.t_last, it);
      r.theta_first = std::min(r.theta_first, ith);
      r.theta_last = std::max(r.theta_last, ith);
      auto visit = [&](std::size_t j) {
        if (member(j) && !seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      };
      if (it > 0) visit(i - nth);
      if (it + 1 < nt) visit(i + nth);
      if (ith > 0) visit(i - 1);
      if (ith + 1 < nth) visit(i + 1);
    }
    r.t_min = t_values[r.t_first];
    r.t_max = t_values[r.t_last];
    r.theta_min = theta_values[r.theta_first];
    r.theta_max = theta_values[r.theta_last];
    summary.regions.push_back(r);
  }
  return summary;
}

NonMarkovMap nonmarkov_map(const XStateParams& params, double p, const std::vector<double>& t_values,
                           const std::vector<double>& theta_values, double step_tau, ReductionMode mode,
                           int threads) {
  params.validate();
  if (!(step_tau > 0.0)) throw std::invalid_argument("step_tau must be positive");
  for (double th : theta_values) MeasurementAttributes{th, 0.0, p, 0.0, 1.0}.validate();
  for (double t : t_values)
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");

  NonMarkovMap map;
  map.t_values = t_values;
  map.theta_values = theta_values;
  map.points.resize(t_values.size() * theta_values.size());
  const std::size_t nth = theta_values.size();
  parallel_for_index(map.points.size(), threads, [&](std::size_t i) {
    NonMarkovPoint& pt = map.points[i];
    pt.t = t_values[i / nth];
    pt.theta = theta_values[i % nth];
    pt.value = fidelity_difference(params, MeasurementAttributes{pt.theta, 0.0, p, 0.0, 1.0}, pt.t,
                                   step_tau, mode);
  });

  std::vector<std::uint8_t> neg(map.points.size()), undef(map.points.size());
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    neg[i] = map.points[i].value.non_markovian;
    undef[i] = map.points[i].value.undefined;
  }
  map.summary = extract_regions(neg, undef, map.t_values, map.theta_values);
  return map;
}

}  // namespace qmeas
