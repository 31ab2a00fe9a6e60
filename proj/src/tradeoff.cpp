#include "qmeas/tradeoff.hpp"

#include <algorithm>
#include <limits>

#include "qmeas/parallel.hpp"

namespace qmeas {

Disturbance disturbance(const HermitianOperator2& rho1, const HermitianOperator2& rho2) {
  const FidelityResult f = fidelity(rho1, rho2);
  return {1.0 - f.value, f.projected};
}

InfoGain info_gain(const HermitianOperator2& rho1, const HermitianOperator2& rho2) {
  const double td = trace_distance(rho1, rho2);
  InfoGain g;
  g.nu = std::clamp(0.5 - 0.5 * td, 0.0, 1.0);
  g.gain = 1.0 - binary_entropy(g.nu);
  return g;
}

TradeoffPoint tradeoff_point(const XStateParams& params, double theta, double t, double p,
                             ReductionMode mode) {
  MeasurementAttributes reference;
  reference.theta = theta;
  MeasurementAttributes probe = reference;
  probe.t = t;
  probe.p = p;
  const HermitianOperator2 rho1 = reduced_states(params, reference, mode).rho_parallel;
  const HermitianOperator2 rho2 = reduced_states(params, probe, mode).rho_parallel;

  TradeoffPoint pt;
  pt.t = t;
  pt.p = p;
  const Disturbance d = disturbance(rho1, rho2);
  const InfoGain g = info_gain(rho1, rho2);
  pt.disturbance = d.value;
  pt.projected = d.projected;
  pt.nu = g.nu;
  pt.info_gain = g.gain;
  pt.gap = pt.disturbance - pt.info_gain;
  pt.violated = pt.gap < -kGapTolerance;
  return pt;
}

std::size_t TradeoffMap::violation_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const TradeoffPoint& p) { return p.violated; }));
}

double TradeoffMap::min_gap() const {
  double m = std::numeric_limits<double>::infinity();
  for (const TradeoffPoint& p : points) m = std::min(m, p.gap);
  return m;
}

TradeoffMap tradeoff_map(const XStateParams& params, double theta, const std::vector<double>& t_values,
                         const std::vector<double>& p_values, ReductionMode mode, int threads) {
  params.validate();
  for (double t : t_values)
    for (double p : p_values) MeasurementAttributes{theta, 0.0, p, t, 1.0}.validate();
  TradeoffMap map;
  map.t_values = t_values;
  map.p_values = p_values;
  map.points.resize(t_values.size() * p_values.size());
  const std::size_t np = p_values.size();
  parallel_for_index(map.points.size(), threads, [&](std::size_t i) {
    map.points[i] = tradeoff_point(params, theta, t_values[i / np], p_values[i % np], mode);
  });
  return map;
}

}  // namespace qmeas
