#include "qmeas/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qmeas {

namespace {

constexpr Complex kI(0.0, 1.0);

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Conditional state of B for outcome vector v on A: <v| rho |v>_A.
ComplexMatrix<2> contract(const HermitianOperator4& rho, const std::array<Complex, 2>& v) {
  ComplexMatrix<2> m{};
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t bp = 0; bp < 2; ++bp) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap)
          s += std::conj(v[a]) * rho(2 * a + b, 2 * ap + bp) * v[ap];
      m[b][bp] = s;
    }
  return m;
}

struct Branch {
  HermitianOperator2 rho;
  double weight = 0.0;
  bool undefined = false;
};

Branch conditional_branch(const HermitianOperator4& rho_ab, const std::array<Complex, 2>& v) {
  const ComplexMatrix<2> m = contract(rho_ab, v);
  const double tr = m[0][0].real() + m[1][1].real();
  const double norm_v = std::norm(v[0]) + std::norm(v[1]);
  Branch b;
  b.weight = norm_v * tr;
  if (!(b.weight >= kUndefinedWeight)) {
    b.undefined = true;
    b.rho = HermitianOperator2::identity().scaled(0.5);
    return b;
  }
  ComplexMatrix<2> n{};
  n[0][0] = m[0][0].real() / tr;
  n[1][1] = 1.0 - n[0][0].real();
  n[0][1] = m[0][1] / tr;
  n[1][0] = std::conj(n[0][1]);
  b.rho = HermitianOperator2::hermitized(n).as_density(1.0);
  return b;
}

struct Phis {
  double phi1, phi2, xi;
};

Phis printed_phis(const MeasurementAttributes& attrs) {
  const double th = attrs.theta;
  const double b = attrs.pt() / 4.0;
  const double sc = sinc(th);
  const double xi = std::sqrt(th * th + b * b);
  const double cos_t = std::cos(th);
  const double a_sin = b * sc;   // (pt / 4 theta) sin theta
  const double xi_sin = xi * sc; // (xi / theta) sin theta
  return {cos_t * cos_t - a_sin * a_sin - xi_sin * xi_sin, xi_sin * xi_sin, xi};
}

}  // namespace

const char* to_string(ReductionMode mode) {
  return mode == ReductionMode::AsPublished ? "as-published" : "first-principles";
}

ReductionMode parse_mode(std::string_view text) {
  if (text == "as-published") return ReductionMode::AsPublished;
  if (text == "first-principles") return ReductionMode::FirstPrinciples;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected as-published or first-principles)");
}

void MeasurementAttributes::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  if (!std::isfinite(phi)) throw std::invalid_argument("phi must be finite");
  if (!(p >= 0.0)) throw std::invalid_argument("precision p must be nonnegative");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (!(tau > 0.0)) throw std::invalid_argument("duration must be positive");
}

ProjectorPair projector_pair(const MeasurementAttributes& attrs) {
  attrs.validate();
  const double b = attrs.pt() / 4.0;
  const double decay = std::exp(-b);
  const double sc = sinc(attrs.theta);
  ProjectorPair pp;
  pp.R = decay * Complex(std::cos(attrs.theta), -b * sc);
  pp.S = decay * std::sqrt(attrs.theta * attrs.theta + b * b) * sc;
  const Complex e = std::polar(1.0, attrs.phi);
  pp.parallel_state = {pp.R, e * pp.S};
  pp.perp_state = {std::conj(e) * pp.S, -pp.R};
  return pp;
}

HermitianOperator2 completeness_defect(const MeasurementAttributes& attrs) {
  const ProjectorPair pp = projector_pair(attrs);
  ComplexMatrix<2> m{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      m[i][j] = pp.parallel_state[i] * std::conj(pp.parallel_state[j]) +
                pp.perp_state[i] * std::conj(pp.perp_state[j]);
  m[0][0] -= 1.0;
  m[1][1] -= 1.0;
  return HermitianOperator2::hermitized(m);
}

ReducedPair reduced_states(const XStateParams& params, const MeasurementAttributes& attrs,
                           ReductionMode mode) {
  params.validate();
  attrs.validate();
  ReducedPair out;
  const Phis ph = printed_phis(attrs);
  out.phi1 = ph.phi1;
  out.phi2 = ph.phi2;
  out.xi = ph.xi;

  if (mode == ReductionMode::AsPublished) {
    const double dev = params.c3 * std::exp(-attrs.pt() / 2.0) * (ph.phi1 - ph.phi2);
    const double off = 0.5 * params.c * std::exp(-2.0 * params.g() * attrs.t) * ph.phi1 * ph.phi2;
    ComplexMatrix<2> par{}, perp{};
    par[0][0] = 0.5 * (1.0 - dev);
    par[1][1] = 0.5 * (1.0 + dev);
    par[0][1] = par[1][0] = off;
    perp[0][0] = 0.5 * (1.0 + dev);
    perp[1][1] = 0.5 * (1.0 - dev);
    perp[0][1] = perp[1][0] = -off;
    out.rho_parallel = HermitianOperator2::hermitized(par).as_density(1.0);
    out.rho_perp = HermitianOperator2::hermitized(perp).as_density(1.0);
    out.weight_parallel = out.weight_perp = 0.5;
    return out;
  }

  const ProjectorPair pp = projector_pair(attrs);
  const HermitianOperator4 rho_ab = x_state(params, attrs.t);
  const Branch par = conditional_branch(rho_ab, pp.parallel_state);
  const Branch perp = conditional_branch(rho_ab, pp.perp_state);
  out.rho_parallel = par.rho;
  out.rho_perp = perp.rho;
  out.weight_parallel = par.weight;
  out.weight_perp = perp.weight;
  out.undefined_parallel = par.undefined;
  out.undefined_perp = perp.undefined;
  return out;
}

ThetaCapital theta_capital(const XStateParams& params, const MeasurementAttributes& attrs) {
  params.validate();
  attrs.validate();
  const Phis ph = printed_phis(attrs);
  const double pt = attrs.pt();
  const double d = ph.phi1 - ph.phi2;
  const double e4 = std::exp(-4.0 * params.g() * attrs.t);
  const double radicand = params.c3 * params.c3 * std::exp(-pt) * d * d +
                          4.0 * params.c * params.c * e4 * std::exp(-pt) * ph.phi1 * ph.phi2;
  if (radicand < 0.0) return {0.0, true};
  const double v = std::sqrt(radicand);
  if (v > 1.0) return {1.0, true};
  return {v, false};
}

ConditionalEntropy conditional_entropy(const XStateParams& params, const MeasurementAttributes& attrs,
                                       ReductionMode mode) {
  ConditionalEntropy ce;
  if (mode == ReductionMode::AsPublished) {
    const ThetaCapital th = theta_capital(params, attrs);
    ce.theta_capital = th.value;
    ce.clamped = th.clamped;
    ce.bits = binary_entropy(0.5 * (1.0 - th.value));
    return ce;
  }
  const ReducedPair rp = reduced_states(params, attrs, mode);
  if (rp.undefined_parallel || rp.undefined_perp) {
    ce.undefined = true;
    ce.bits = std::numeric_limits<double>::infinity();
    return ce;
  }
  const Spectrum<2> sp = eigenvalues_hermitian(rp.rho_parallel);
  ce.theta_capital = sp.values[0] - sp.values[1];
  const double s_par = von_neumann_entropy(rp.rho_parallel).bits;
  const double s_perp = von_neumann_entropy(rp.rho_perp).bits;
  ce.bits = 0.5 * (s_par + s_perp);
  return ce;
}

CorrelationResult classical_correlation(const XStateParams& params, const MeasurementAttributes& attrs,
                                        ReductionMode mode, const OptimizerSettings& settings) {
  if (settings.grid_points < 3) throw std::invalid_argument("optimizer grid needs at least 3 points");
  if (!(settings.tolerance > 0.0)) throw std::invalid_argument("optimizer tolerance must be positive");
  params.validate();
  MeasurementAttributes a = attrs;
  a.theta = 0.0;
  a.validate();

  bool any_undefined = false;
  auto eval = [&](double theta) {
    a.theta = std::clamp(theta, 0.0, std::numbers::pi / 2.0);
    ConditionalEntropy ce = conditional_entropy(params, a, mode);
    any_undefined = any_undefined || ce.undefined;
    return ce;
  };

  const int n = settings.grid_points;
  const double step = (std::numbers::pi / 2.0) / (n - 1);
  int best_k = 0;
  double best_theta = 0.0;
  ConditionalEntropy best = eval(0.0);
  for (int k = 1; k < n; ++k) {
    const double th = k == n - 1 ? std::numbers::pi / 2.0 : k * step;
    const ConditionalEntropy ce = eval(th);
    if (ce.bits < best.bits) {
      best = ce;
      best_k = k;
      best_theta = th;
    }
  }

  if (std::isfinite(best.bits)) {
    double lo = std::max(0, best_k - 1) * step;
    double hi = std::min(std::numbers::pi / 2.0, (best_k + 1) * step);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = eval(x1).bits;
    double f2 = eval(x2).bits;
    while (hi - lo > settings.tolerance) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = eval(x1).bits;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = eval(x2).bits;
      }
    }
    const double th = 0.5 * (lo + hi);
    const ConditionalEntropy ce = eval(th);
    if (ce.bits < best.bits) {
      best = ce;
      best_theta = th;
    }
  }

  CorrelationResult res;
  res.mode = mode;
  res.theta_opt = best_theta;
  res.theta_capital = best.theta_capital;
  res.clamped = best.clamped;
  res.undefined = any_undefined;
  res.classical = std::isfinite(best.bits) ? 1.0 - best.bits : std::numeric_limits<double>::quiet_NaN();
  return res;
}

CorrelationResult quantum_discord(const XStateParams& params, const MeasurementAttributes& attrs,
                                  ReductionMode mode, const OptimizerSettings& settings) {
  CorrelationResult res = classical_correlation(params, attrs, mode, settings);
  const MutualInformation mi = mutual_information(params, attrs.t);
  res.mutual = mi.bits;
  res.nonphysical = mi.nonphysical;
  res.discord = res.mutual - res.classical;
  return res;
}

}  // namespace qmeas
