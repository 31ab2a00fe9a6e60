#pragma once

#include <vector>

#include "qmeas/correlations.hpp"

namespace qmeas {

/// Tolerance below which a negative gap counts as a violation.
inline constexpr double kGapTolerance = 1e-12;

/// 1 - F(rho1, rho2); `projected` follows the fidelity policy.
struct Disturbance {
  double value = 0.0;
  bool projected = false;
};

Disturbance disturbance(const HermitianOperator2& rho1, const HermitianOperator2& rho2);

struct InfoGain {
  double nu = 0.0;    // 1/2 - T_d / 2
  double gain = 0.0;  // 1 - H(nu)
};

InfoGain info_gain(const HermitianOperator2& rho1, const HermitianOperator2& rho2);

struct TradeoffPoint {
  double t = 0.0;
  double p = 0.0;
  double disturbance = 0.0;
  double nu = 0.0;
  double info_gain = 0.0;
  double gap = 0.0;  // disturbance - info_gain
  bool violated = false;
  bool projected = false;
};

/// Compares the parallel conditional state at (t, p) with the one at t = p = 0.
TradeoffPoint tradeoff_point(const XStateParams& params, double theta, double t, double p,
                             ReductionMode mode);

struct TradeoffMap {
  std::vector<double> t_values;
  std::vector<double> p_values;
  std::vector<TradeoffPoint> points;  // row-major: t slow, p fast

  const TradeoffPoint& at(std::size_t it, std::size_t ip) const {
    return points[it * p_values.size() + ip];
  }
  std::size_t violation_count() const;
  double min_gap() const;
};

/// Evaluates every (t, p) pair. threads <= 0 uses the OpenMP default.
TradeoffMap tradeoff_map(const XStateParams& params, double theta, const std::vector<double>& t_values,
                         const std::vector<double>& p_values, ReductionMode mode, int threads = 0);

}  // namespace qmeas
