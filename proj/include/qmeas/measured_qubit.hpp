#pragma once

#include <array>

#include "qmeas/qstate.hpp"

namespace qmeas {

using Amplitudes = std::array<Complex, 2>;

/// A two-level system monitored by a continuous energy measurement.
/// Energies and frequencies share units (hbar = 1).
struct MeasuredQubitConfig {
  double E1 = 0.0;     // energy of |0>
  double E2 = 1.0;     // energy of |1>
  double E = 0.0;      // selected readout energy
  double Er = 1.0;     // measurement error
  double tau = 1.0;    // measurement duration
  double V0 = 1.0;     // coupling amplitude
  double omega = 1.0;  // drive frequency

  /// Throws std::invalid_argument unless Er > 0, tau > 0, V0 >= 0.
  void validate() const;
  /// Level-splitting parameter written as 2(E1 + E2) in the two-level Hamiltonian.
  /// Kept for reference; resonance uses E2 - E1.
  double printed_delta_omega() const { return 2.0 * (E1 + E2); }
};

struct DerivedDynamics {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_t = 0.0;
  double delta_E = 0.0;
  double Omega = 0.0;     // lambda2 - lambda1
  double V0 = 0.0;
  double detuning = 0.0;  // omega - delta_E
  Complex q;              // (omega - delta_E + i Omega / 2) / 2
  Complex kappa;          // sqrt(q^2 + V0^2)
  Complex cos_theta_mix;  // q / kappa, non-finite when kappa = 0
  Complex sin_theta_mix;  // V0 / kappa
  Complex kappa0;         // sqrt(4 V0^2 - (lambda_t / 2)^2) / 2
};

enum class Regime { Coherent, Incoherent, Exceptional };

const char* to_string(Regime r);

DerivedDynamics derive(const MeasuredQubitConfig& config);
Regime classify(double V0, double lambda_t);
inline Regime classify(const DerivedDynamics& d) { return classify(d.V0, d.lambda_t); }

/// Applies the rotating-frame mixing matrix to (C1, C2) at time t.
Amplitudes evolve_coefficients(const DerivedDynamics& d, const Amplitudes& c0, double t);
/// Rotating-frame amplitudes including the common decay e^{-(lambda1 + lambda2) t / 4}.
Amplitudes evolve_amplitudes(const DerivedDynamics& d, const Amplitudes& c0, double t);

struct SurvivalProbabilities {
  double P11 = 0.0;  // stays in |1>
  double P10 = 0.0;  // transferred to |0>
};

/// Resonant closed forms, one branch per regime. Throws std::invalid_argument off resonance.
SurvivalProbabilities survival_probabilities(const DerivedDynamics& d, double t);
/// Same quantities from the complex amplitude path, valid at any detuning.
SurvivalProbabilities transition_probabilities(const DerivedDynamics& d, double t);
/// 1 - P11 - P10 (resonance only).
double norm_loss(const DerivedDynamics& d, double t);

struct MeasuredBasis {
  Amplitudes chi_s;
  Amplitudes chi_a;
};

/// Damped dressed states |chi_s(t)>, |chi_a(t)>.
MeasuredBasis measured_basis_states(const DerivedDynamics& d, double t);

bool is_resonant(const DerivedDynamics& d);

}  // namespace qmeas
