#pragma once

#include <optional>
#include <string_view>

#include "qmeas/qstate.hpp"
#include "qmeas/xstate_model.hpp"

namespace qmeas {

/// AsPublished evaluates the printed reduced-state and spectrum formulas verbatim.
/// FirstPrinciples builds the conditional states of B from the generalized
/// projectors and the X state directly.
enum class ReductionMode { AsPublished, FirstPrinciples };

const char* to_string(ReductionMode mode);
/// Accepts "as-published" and "first-principles". Throws std::invalid_argument otherwise.
ReductionMode parse_mode(std::string_view text);

/// Imperfect projector on qubit A. theta in radians, p = lambda_r tau,
/// t in units of tau.
struct MeasurementAttributes {
  double theta = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double t = 0.0;
  double tau = 1.0;

  /// Throws std::invalid_argument unless theta in [0, pi/2], p >= 0, t >= 0, tau > 0.
  void validate() const;
  double pt() const { return p * t; }
};

struct ProjectorPair {
  std::array<Complex, 2> parallel_state;
  std::array<Complex, 2> perp_state;
  Complex R;
  Complex S;
};

/// R(theta) = e^{-pt/4}(cos theta - i (pt/4) sin theta / theta),
/// S(theta) = e^{-pt/4} sqrt(theta^2 + (pt/4)^2) sin theta / theta.
/// theta = 0 takes the limit sin theta / theta -> 1.
ProjectorPair projector_pair(const MeasurementAttributes& attrs);

/// |par><par| + |perp><perp| - I. Vanishes when pt = 0.
HermitianOperator2 completeness_defect(const MeasurementAttributes& attrs);

struct ReducedPair {
  HermitianOperator2 rho_parallel;
  HermitianOperator2 rho_perp;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double xi = 0.0;
  /// Outcome weights tr[(Pi (x) I) rho (Pi (x) I)^dagger]; FirstPrinciples only.
  double weight_parallel = 0.0;
  double weight_perp = 0.0;
  bool undefined_parallel = false;
  bool undefined_perp = false;
};

/// Threshold below which a FirstPrinciples outcome weight leaves its branch undefined.
inline constexpr double kUndefinedWeight = 1e-14;

ReducedPair reduced_states(const XStateParams& params, const MeasurementAttributes& attrs,
                           ReductionMode mode);

struct ThetaCapital {
  double value = 0.0;
  bool clamped = false;
};

/// Printed spectrum parameter: sqrt(c3^2 e^{-pt} (phi1 - phi2)^2 + 4 c^2 e^{-4gt} e^{-pt} phi1 phi2).
/// A negative radicand clamps to 0, a value above one clamps to 1; both set `clamped`.
ThetaCapital theta_capital(const XStateParams& params, const MeasurementAttributes& attrs);

struct OptimizerSettings {
  int grid_points = 721;
  double tolerance = 1e-10;
};

struct CorrelationResult {
  double classical = 0.0;
  double discord = 0.0;
  double mutual = 0.0;
  double theta_opt = 0.0;
  double theta_capital = 0.0;  // spectral splitting of the parallel state at theta_opt
  ReductionMode mode = ReductionMode::AsPublished;
  bool clamped = false;
  bool nonphysical = false;
  bool undefined = false;
};

/// Conditional entropy of B after measuring A at the given attributes
/// (the quantity minimized over theta), with the flags raised on the way.
struct ConditionalEntropy {
  double bits = 0.0;
  double theta_capital = 0.0;
  bool clamped = false;
  bool undefined = false;
};

ConditionalEntropy conditional_entropy(const XStateParams& params, const MeasurementAttributes& attrs,
                                       ReductionMode mode);

/// C = 1 - min over theta in [0, pi/2] of the conditional entropy: a uniform grid,
/// then golden-section refinement around the best grid cell. attrs.theta is ignored.
CorrelationResult classical_correlation(const XStateParams& params, const MeasurementAttributes& attrs,
                                        ReductionMode mode, const OptimizerSettings& settings = {});

/// classical_correlation plus I = 2 + sum lambda log2 lambda and D = I - C.
CorrelationResult quantum_discord(const XStateParams& params, const MeasurementAttributes& attrs,
                                  ReductionMode mode, const OptimizerSettings& settings = {});

}  // namespace qmeas
