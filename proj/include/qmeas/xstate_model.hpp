#pragma once

#include "qmeas/qstate.hpp"

namespace qmeas {

/// X state with |c1| = |c2| = c and c3 on the zz correlation, dephasing at rate gamma.
/// Time arguments are in units of tau.
struct XStateParams {
  double c = 0.0;
  double c3 = 0.0;
  double gamma = 0.0;
  double tau = 1.0;
  double d_omega_a = 0.0;
  double d_omega_b = 0.0;

  double g() const { return gamma * tau; }
  /// Throws std::invalid_argument unless 0 <= c <= 1, |c3| <= 1, gamma >= 0, tau > 0.
  void validate() const;
  static XStateParams from_g(double c, double c3, double g);
};

HermitianOperator4 x_state(const XStateParams& params, double t);

/// Phase-flip channel on both qubits with flip probability 1 - exp(-gamma t).
HermitianOperator4 phase_flip_apply(const HermitianOperator4& rho, double gamma, double t);

/// {(1+c3)/4, (1+c3)/4, (1-c3+2x)/4, (1-c3-2x)/4} with x = c e^{-2gt}, in that order.
std::array<double, 4> x_state_eigenvalues(const XStateParams& params, double t);
/// The same values sorted descending.
Spectrum<4> x_state_spectrum(const XStateParams& params, double t);

struct MutualInformation {
  double bits = 0.0;
  bool nonphysical = false;
};

/// 2 + sum lambda log2 lambda over the positive part of the spectrum.
MutualInformation mutual_information(const XStateParams& params, double t);

struct BellResult {
  double B1 = 0.0;
  double B2 = 0.0;
  double B = 0.0;
  bool violated = false;
};

BellResult bell_chsh(const XStateParams& params, double t);

/// Largest c3 keeping the state positive: 1 - 2c e^{-2 gamma t}.
double critical_c3(double c, double gamma, double t);

}  // namespace qmeas
