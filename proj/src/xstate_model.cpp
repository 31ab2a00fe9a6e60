#include "qmeas/xstate_model.hpp"

#include <algorithm>
#include <cmath>

namespace qmeas {

void XStateParams::validate() const {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in [0, 1]");
  if (!(std::abs(c3) <= 1.0)) throw std::invalid_argument("c3 must lie in [-1, 1]");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
}

XStateParams XStateParams::from_g(double c, double c3, double g) {
  XStateParams p;
  p.c = c;
  p.c3 = c3;
  p.gamma = g;
  return p;
}

HermitianOperator4 x_state(const XStateParams& params, double t) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const Complex mu(-2.0 * params.g(), -(params.d_omega_a - params.d_omega_b) * params.tau);
  const Complex coherence = 0.5 * params.c * std::exp(mu * t);
  ComplexMatrix<4> m{};
  m[0][0] = m[3][3] = 0.25 * (1.0 + params.c3);
  m[1][1] = m[2][2] = 0.25 * (1.0 - params.c3);
  m[1][2] = std::conj(coherence);
  m[2][1] = coherence;
  return HermitianOperator4::from_entries(m).as_density(1.0);
}

HermitianOperator4 phase_flip_apply(const HermitianOperator4& rho, double gamma, double t) {
  const double p = -std::expm1(-gamma * t);
  const double k0 = std::sqrt(1.0 - p / 2.0);
  const double k1 = std::sqrt(p / 2.0);
  // Single-qubit Kraus operators are diagonal: diag(k0, k0) and diag(k1, -k1).
  const std::array<std::array<double, 2>, 2> kraus{{{k0, k0}, {k1, -k1}}};
  ComplexMatrix<4> out{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      std::array<double, 4> d{};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) d[2 * a + b] = kraus[i][a] * kraus[j][b];
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s) out[r][s] += d[r] * rho(r, s) * d[s];
    }
  }
  HermitianOperator4 res = HermitianOperator4::hermitized(out);
  if (rho.trace_target()) res = res.as_density(*rho.trace_target());
  return res;
}

std::array<double, 4> x_state_eigenvalues(const XStateParams& params, double t) {
  const double x = params.c * std::exp(-2.0 * params.g() * t);
  const double outer = 0.25 * (1.0 + params.c3);
  return {outer, outer, 0.25 * (1.0 - params.c3 + 2.0 * x), 0.25 * (1.0 - params.c3 - 2.0 * x)};
}

Spectrum<4> x_state_spectrum(const XStateParams& params, double t) {
  Spectrum<4> s;
  s.values = x_state_eigenvalues(params, t);
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

MutualInformation mutual_information(const XStateParams& params, double t) {
  const std::array<double, 4> l = x_state_eigenvalues(params, t);
  const EntropyResult s = spectral_entropy(l);
  return {2.0 - s.bits, s.nonphysical};
}

BellResult bell_chsh(const XStateParams& params, double t) {
  const double x = params.c * std::exp(-2.0 * params.g() * t);
  BellResult r;
  r.B1 = 2.0 * std::sqrt(x * x + params.c3 * params.c3);
  r.B2 = 2.0 * std::sqrt(2.0) * x;
  r.B = std::max(r.B1, r.B2);
  r.violated = r.B > 2.0;
  return r;
}

double critical_c3(double c, double gamma, double t) {
  return 1.0 - 2.0 * c * std::exp(-2.0 * gamma * t);
}

}  // namespace qmeas
