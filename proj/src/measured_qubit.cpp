#include "qmeas/measured_qubit.hpp"

#include <algorithm>
#include <cmath>

namespace qmeas {

namespace {

constexpr Complex kI(0.0, 1.0);

// sin(z)/z, stable near zero.
Complex sinc(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
}

}  // namespace

void MeasuredQubitConfig::validate() const {
  if (!(Er > 0.0)) throw std::invalid_argument("Er must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(V0 >= 0.0)) throw std::invalid_argument("V0 must be nonnegative");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Coherent: return "coherent";
    case Regime::Incoherent: return "incoherent";
    case Regime::Exceptional: return "exceptional";
  }
  return "unknown";
}

DerivedDynamics derive(const MeasuredQubitConfig& config) {
  config.validate();
  DerivedDynamics d;
  const double denom = 2.0 * config.tau * config.Er * config.Er;
  d.lambda1 = (config.E1 - config.E) * (config.E1 - config.E) / denom;
  d.lambda2 = (config.E2 - config.E) * (config.E2 - config.E) / denom;
  d.delta_E = config.E2 - config.E1;
  d.lambda_t = d.delta_E * d.delta_E / denom;
  d.Omega = d.lambda2 - d.lambda1;
  d.V0 = config.V0;
  d.detuning = config.omega - d.delta_E;
  d.q = 0.5 * Complex(d.detuning, 0.5 * d.Omega);
  d.kappa = std::sqrt(d.q * d.q + d.V0 * d.V0);
  d.cos_theta_mix = d.q / d.kappa;
  d.sin_theta_mix = d.V0 / d.kappa;
  d.kappa0 = 0.5 * std::sqrt(Complex(4.0 * d.V0 * d.V0 - 0.25 * d.lambda_t * d.lambda_t, 0.0));
  return d;
}

Regime classify(double V0, double lambda_t) {
  const double x = lambda_t / 4.0;
  if (std::abs(V0 - x) <= 1e-12 * std::max({V0, x, 1.0})) return Regime::Exceptional;
  return V0 > x ? Regime::Coherent : Regime::Incoherent;
}

bool is_resonant(const DerivedDynamics& d) {
  return std::abs(d.detuning) <= 1e-12 * std::max(1.0, std::abs(d.delta_E));
}

Amplitudes evolve_coefficients(const DerivedDynamics& d, const Amplitudes& c0, double t) {
  require_time(t);
  const Complex ct = std::cos(d.kappa * t);
  const Complex s = t * sinc(d.kappa * t);  // sin(kappa t) / kappa
  const Complex a1 = d.q * s;               // cos(theta) sin(kappa t)
  const Complex a2 = d.V0 * s;              // sin(theta) sin(kappa t)
  return {(ct - kI * a1) * c0[0] - kI * a2 * c0[1],
          -kI * a2 * c0[0] + (ct + kI * a1) * c0[1]};
}

Amplitudes evolve_amplitudes(const DerivedDynamics& d, const Amplitudes& c0, double t) {
  const double decay = std::exp(-(d.lambda1 + d.lambda2) * t / 4.0);
  Amplitudes c = evolve_coefficients(d, c0, t);
  c[0] *= decay;
  c[1] *= decay;
  return c;
}

SurvivalProbabilities transition_probabilities(const DerivedDynamics& d, double t) {
  const Amplitudes c = evolve_amplitudes(d, {Complex(0.0), Complex(1.0)}, t);
  return {std::norm(c[1]), std::norm(c[0])};
}

SurvivalProbabilities survival_probabilities(const DerivedDynamics& d, double t) {
  require_time(t);
  if (!is_resonant(d))
    throw std::invalid_argument("survival probabilities are defined at resonance only");
  const double lt = d.lambda_t;
  const double envelope = std::exp(-lt * t / 2.0);
  SurvivalProbabilities p;
  switch (classify(d)) {
    case Regime::Exceptional: {
      const double a = 1.0 - lt * t / 4.0;
      p.P11 = envelope * a * a;
      p.P10 = envelope * d.V0 * d.V0 * t * t;
      break;
    }
    case Regime::Coherent: {
      const double k0 = std::sqrt(d.V0 * d.V0 - lt * lt / 16.0);
      const double s = t * sinc(k0 * t);
      const double a = std::cos(k0 * t) - lt / 4.0 * s;
      p.P11 = envelope * a * a;
      p.P10 = envelope * d.V0 * d.V0 * s * s;
      break;
    }
    case Regime::Incoherent: {
      const double k0 = std::sqrt(lt * lt / 16.0 - d.V0 * d.V0);
      const double s = t * sinhc(k0 * t);
      const double a = std::cosh(k0 * t) - lt / 4.0 * s;
      p.P11 = envelope * a * a;
      p.P10 = envelope * d.V0 * d.V0 * s * s;
      break;
    }
  }
  return p;
}

double norm_loss(const DerivedDynamics& d, double t) {
  const SurvivalProbabilities p = survival_probabilities(d, t);
  if (d.lambda_t == 0.0) return 0.0;
  return 1.0 - p.P11 - p.P10;
}

MeasuredBasis measured_basis_states(const DerivedDynamics& d, double t) {
  require_time(t);
  const double envelope = std::exp(-d.lambda_t * t / 4.0);
  const Complex ct = std::cos(d.kappa * t);
  const Complex s = t * sinc(d.kappa * t);
  const Complex a1 = d.q * s;
  const Complex a2 = d.V0 * s;
  MeasuredBasis b;
  b.chi_s = {envelope * (ct - kI * a1), -kI * envelope * a2};
  b.chi_a = {-kI * envelope * a2, envelope * (ct + kI * a1)};
  return b;
}

}  // namespace qmeas
