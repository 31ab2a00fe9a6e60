#include "qmeas/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qmeas {

NonHermitianError::NonHermitianError(double max_asymmetry)
    : std::invalid_argument("matrix is not Hermitian (max asymmetry " +
                            std::to_string(max_asymmetry) + ")"),
      max_asymmetry_(max_asymmetry) {}

template <std::size_t N>
double max_asymmetry(const ComplexMatrix<N>& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j)
      worst = std::max(worst, std::abs(m[i][j] - std::conj(m[j][i])));
  return worst;
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::from_entries(const ComplexMatrix<N>& m, double tol) {
  const double asym = max_asymmetry<N>(m);
  if (!(asym <= tol)) throw NonHermitianError(asym);
  return hermitized(m);
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::hermitized(const ComplexMatrix<N>& m) {
  ComplexMatrix<N> h{};
  for (std::size_t i = 0; i < N; ++i) {
    h[i][i] = Complex(m[i][i].real(), 0.0);
    for (std::size_t j = i + 1; j < N; ++j) {
      const Complex v = 0.5 * (m[i][j] + std::conj(m[j][i]));
      h[i][j] = v;
      h[j][i] = std::conj(v);
    }
  }
  return HermitianOperator(h);
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::diagonal(const std::array<double, N>& d) {
  ComplexMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = d[i];
  return HermitianOperator(m);
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::identity() {
  std::array<double, N> d;
  d.fill(1.0);
  return diagonal(d);
}

template <std::size_t N>
double HermitianOperator<N>::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += m_[i][i].real();
  return s;
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::as_density(double target) const {
  const double tr = trace();
  if (!(std::abs(tr - target) <= kTraceTolerance))
    throw std::invalid_argument("density matrix trace " + std::to_string(tr) +
                                " does not match target " + std::to_string(target));
  HermitianOperator out = *this;
  out.trace_target_ = target;
  return out;
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::operator+(const HermitianOperator& o) const {
  ComplexMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m[i][j] = m_[i][j] + o.m_[i][j];
  return HermitianOperator(m);
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::operator-(const HermitianOperator& o) const {
  ComplexMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m[i][j] = m_[i][j] - o.m_[i][j];
  return HermitianOperator(m);
}

template <std::size_t N>
HermitianOperator<N> HermitianOperator<N>::scaled(double s) const {
  ComplexMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m[i][j] = s * m_[i][j];
  return HermitianOperator(m);
}

template <std::size_t N>
double Spectrum<N>::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

template <std::size_t N>
ComplexMatrix<N> multiply(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
  ComplexMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex aik = a[i][k];
      for (std::size_t j = 0; j < N; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

template <std::size_t N>
ComplexMatrix<N> adjoint(const ComplexMatrix<N>& a) {
  ComplexMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

namespace {

struct Eigen2 {
  double hi, lo;
  std::array<Complex, 2> v_hi, v_lo;
};

Eigen2 eigen2(double a, double d, Complex b) {
  const double mean = 0.5 * (a + d);
  const double half = std::hypot(0.5 * (a - d), std::abs(b));
  Eigen2 e{mean + half, mean - half, {}, {}};
  if (std::abs(b) == 0.0) {
    if (a >= d) {
      e.v_hi = {1.0, 0.0};
      e.v_lo = {0.0, 1.0};
    } else {
      e.v_hi = {0.0, 1.0};
      e.v_lo = {1.0, 0.0};
    }
    return e;
  }
  std::array<Complex, 2> v;
  if (a >= d)
    v = {Complex(e.hi - d, 0.0), std::conj(b)};
  else
    v = {b, Complex(e.hi - a, 0.0)};
  const double n = std::hypot(std::abs(v[0]), std::abs(v[1]));
  v[0] /= n;
  v[1] /= n;
  e.v_hi = v;
  e.v_lo = {-std::conj(v[1]), std::conj(v[0])};
  return e;
}

template <std::size_t N>
void sort_descending(EigenSystem<N>& es) {
  std::array<std::size_t, N> idx;
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return es.values[x] > es.values[y]; });
  EigenSystem<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = es.values[idx[k]];
    for (std::size_t i = 0; i < N; ++i) out.vectors[i][k] = es.vectors[i][idx[k]];
  }
  es = out;
}

EigenSystem<2> eigensystem_2(const HermitianOperator2& op) {
  const Eigen2 e = eigen2(op(0, 0).real(), op(1, 1).real(), op(0, 1));
  EigenSystem<2> es;
  es.values = {e.hi, e.lo};
  for (std::size_t i = 0; i < 2; ++i) {
    es.vectors[i][0] = e.v_hi[i];
    es.vectors[i][1] = e.v_lo[i];
  }
  return es;
}

EigenSystem<4> eigensystem_x(const HermitianOperator4& op) {
  // Outer block {0,3}, inner block {1,2}.
  const Eigen2 outer = eigen2(op(0, 0).real(), op(3, 3).real(), op(0, 3));
  const Eigen2 inner = eigen2(op(1, 1).real(), op(2, 2).real(), op(1, 2));
  EigenSystem<4> es;
  es.values = {outer.hi, outer.lo, inner.hi, inner.lo};
  es.vectors[0][0] = outer.v_hi[0];
  es.vectors[3][0] = outer.v_hi[1];
  es.vectors[0][1] = outer.v_lo[0];
  es.vectors[3][1] = outer.v_lo[1];
  es.vectors[1][2] = inner.v_hi[0];
  es.vectors[2][2] = inner.v_hi[1];
  es.vectors[1][3] = inner.v_lo[0];
  es.vectors[2][3] = inner.v_lo[1];
  sort_descending(es);
  return es;
}

template <std::size_t N>
ComplexMatrix<N> reconstruct(const EigenSystem<N>& es, const std::array<double, N>& w) {
  ComplexMatrix<N> m{};
  for (std::size_t k = 0; k < N; ++k) {
    if (w[k] == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        m[i][j] += w[k] * es.vectors[i][k] * std::conj(es.vectors[j][k]);
  }
  return m;
}

}  // namespace

bool is_x_structured(const HermitianOperator4& op) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && i + j != 3 && op(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

template <std::size_t N>
EigenSystem<N> jacobi_eigensystem(const HermitianOperator<N>& op, JacobiSettings settings) {
  ComplexMatrix<N> a = op.entries();
  ComplexMatrix<N> v{};
  for (std::size_t i = 0; i < N; ++i) v[i][i] = 1.0;

  double norm2 = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) norm2 += std::norm(a[i][j]);
  const double scale = std::sqrt(norm2);

  bool converged = false;
  for (int sweep = 0; sweep <= settings.max_sweeps; ++sweep) {
    double off2 = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off2 += std::norm(a[p][q]);
    if (std::sqrt(off2) <= settings.tolerance * scale) {
      converged = true;
      break;
    }
    if (sweep == settings.max_sweeps) break;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double r = std::abs(a[p][q]);
        if (r == 0.0) continue;
        const Complex phase = a[p][q] / r;
        const double theta = (a[q][q].real() - a[p][p].real()) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) applied on (p,q), followed by a real rotation.
        ComplexMatrix<N> u{};
        for (std::size_t i = 0; i < N; ++i) u[i][i] = 1.0;
        u[p][p] = c;
        u[p][q] = s;
        u[q][p] = -s * std::conj(phase);
        u[q][q] = c * std::conj(phase);
        a = multiply<N>(adjoint<N>(u), multiply<N>(a, u));
        for (std::size_t i = 0; i < N; ++i) {
          a[i][i] = Complex(a[i][i].real(), 0.0);
          for (std::size_t j = i + 1; j < N; ++j) a[j][i] = std::conj(a[i][j]);
        }
        a[p][q] = a[q][p] = 0.0;
        v = multiply<N>(v, u);
      }
    }
  }
  if (!converged) throw std::runtime_error("Jacobi eigensolver did not converge");

  EigenSystem<N> es;
  for (std::size_t k = 0; k < N; ++k) es.values[k] = a[k][k].real();
  es.vectors = v;
  sort_descending(es);
  return es;
}

template <std::size_t N>
EigenSystem<N> eigensystem(const HermitianOperator<N>& op) {
  if constexpr (N == 2) {
    return eigensystem_2(op);
  } else if constexpr (N == 4) {
    if (is_x_structured(op)) return eigensystem_x(op);
    return jacobi_eigensystem(op);
  } else {
    return jacobi_eigensystem(op);
  }
}

template <std::size_t N>
Spectrum<N> eigenvalues_hermitian(const HermitianOperator<N>& op) {
  Spectrum<N> s;
  s.values = eigensystem(op).values;
  return s;
}

template <std::size_t N>
Spectrum<N> eigenvalues_hermitian(const ComplexMatrix<N>& m, double tol) {
  return eigenvalues_hermitian(HermitianOperator<N>::from_entries(m, tol));
}

EntropyResult spectral_entropy(std::span<const double> eigenvalues, double eigen_floor) {
  EntropyResult r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double lambda : eigenvalues) {
    r.min_eigenvalue = std::min(r.min_eigenvalue, lambda);
    if (lambda > eigen_floor) s -= lambda * std::log2(lambda);
  }
  r.bits = s;
  r.nonphysical = r.min_eigenvalue < -eigen_floor;
  return r;
}

template <std::size_t N>
EntropyResult von_neumann_entropy(const HermitianOperator<N>& rho, double eigen_floor) {
  if (!(rho.trace() > 0.0)) throw std::invalid_argument("entropy needs a positive trace");
  const Spectrum<N> s = eigenvalues_hermitian(rho);
  return spectral_entropy(s.values, eigen_floor);
}

double binary_entropy(double x) {
  constexpr double slack = 1e-12;
  if (!(x >= -slack && x <= 1.0 + slack))
    throw std::domain_error("binary entropy argument outside [0, 1]: " + std::to_string(x));
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double fidelity_closed_form(const HermitianOperator2& rho1, const HermitianOperator2& rho2) {
  double tr = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) tr += (rho1(i, j) * rho2(j, i)).real();
  const double det1 = rho1(0, 0).real() * rho1(1, 1).real() - std::norm(rho1(0, 1));
  const double det2 = rho2(0, 0).real() * rho2(1, 1).real() - std::norm(rho2(0, 1));
  return tr + 2.0 * std::sqrt(std::max(det1 * det2, 0.0));
}

namespace {

double raw_fidelity_2(const HermitianOperator2& rho1, const HermitianOperator2& rho2) {
  Complex tr = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) tr += rho1(i, j) * rho2(j, i);
  const double det1 = rho1(0, 0).real() * rho1(1, 1).real() - std::norm(rho1(0, 1));
  const double det2 = rho2(0, 0).real() * rho2(1, 1).real() - std::norm(rho2(0, 1));
  return (tr + 2.0 * std::sqrt(Complex(det1 * det2, 0.0))).real();
}

template <std::size_t N>
double raw_fidelity(const HermitianOperator<N>& rho1, const HermitianOperator<N>& rho2) {
  if constexpr (N == 2)
    return raw_fidelity_2(rho1, rho2);
  else
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

template <std::size_t N>
FidelityResult fidelity(const HermitianOperator<N>& rho1, const HermitianOperator<N>& rho2) {
  FidelityResult res;
  const EigenSystem<N> e1 = eigensystem(rho1);
  const bool proj1 = e1.values[N - 1] < -kEigenFloor;

  if (rho1.same_entries(rho2)) {
    const double tr = rho1.trace();
    res.value = tr * tr;
    res.projected = proj1;
    res.raw = proj1 ? raw_fidelity(rho1, rho2) : res.value;
    return res;
  }

  const EigenSystem<N> e2 = eigensystem(rho2);
  const bool proj2 = e2.values[N - 1] < -kEigenFloor;

  std::array<double, N> w{};
  for (std::size_t k = 0; k < N; ++k) w[k] = std::sqrt(std::max(e1.values[k], 0.0));
  const ComplexMatrix<N> sqrt1 = reconstruct(e1, w);

  ComplexMatrix<N> p2 = rho2.entries();
  if (e2.values[N - 1] < 0.0) {
    for (std::size_t k = 0; k < N; ++k) w[k] = std::max(e2.values[k], 0.0);
    p2 = reconstruct(e2, w);
  }

  const auto inner = HermitianOperator<N>::hermitized(multiply<N>(sqrt1, multiply<N>(p2, sqrt1)));
  double s2 = 0.0;
  if constexpr (N == 2) {
    // (sqrt mu1 + sqrt mu2)^2 with mu1 mu2 = det rho1 det rho2 taken from the clamped spectra
    const double det = std::max(e1.values[0], 0.0) * std::max(e1.values[1], 0.0) *
                       std::max(e2.values[0], 0.0) * std::max(e2.values[1], 0.0);
    s2 = std::max(inner.trace(), 0.0) + 2.0 * std::sqrt(det);
  } else {
    double s = 0.0;
    for (double mu : eigenvalues_hermitian(inner).values) s += std::sqrt(std::max(mu, 0.0));
    s2 = s * s;
  }
  res.value = s2;
  res.projected = proj1 || proj2;
  res.raw = res.projected ? raw_fidelity(rho1, rho2) : res.value;
  return res;
}

template <std::size_t N>
double trace_distance(const HermitianOperator<N>& rho1, const HermitianOperator<N>& rho2) {
  double s = 0.0;
  for (double l : eigenvalues_hermitian(rho1 - rho2).values) s += std::abs(l);
  return 0.5 * s;
}

template <std::size_t N>
PsdReport psd_check(const HermitianOperator<N>& op, double tol) {
  const double m = eigenvalues_hermitian(op).min();
  return {m >= -tol, m};
}

template <std::size_t N>
HermitianOperator<N> psd_projection(const HermitianOperator<N>& op) {
  const EigenSystem<N> es = eigensystem(op);
  if (es.values[N - 1] >= 0.0) return HermitianOperator<N>::hermitized(op.entries());
  std::array<double, N> w{};
  for (std::size_t k = 0; k < N; ++k) w[k] = std::max(es.values[k], 0.0);
  return HermitianOperator<N>::hermitized(reconstruct(es, w));
}

#define QMEAS_INSTANTIATE(N)                                                                    \
  template double max_asymmetry<N>(const ComplexMatrix<N>&);                                    \
  template class HermitianOperator<N>;                                                          \
  template struct Spectrum<N>;                                                                  \
  template Spectrum<N> eigenvalues_hermitian<N>(const HermitianOperator<N>&);                   \
  template Spectrum<N> eigenvalues_hermitian<N>(const ComplexMatrix<N>&, double);               \
  template EigenSystem<N> eigensystem<N>(const HermitianOperator<N>&);                          \
  template EigenSystem<N> jacobi_eigensystem<N>(const HermitianOperator<N>&, JacobiSettings);   \
  template EntropyResult von_neumann_entropy<N>(const HermitianOperator<N>&, double);           \
  template FidelityResult fidelity<N>(const HermitianOperator<N>&, const HermitianOperator<N>&); \
  template double trace_distance<N>(const HermitianOperator<N>&, const HermitianOperator<N>&);  \
  template PsdReport psd_check<N>(const HermitianOperator<N>&, double);                         \
  template HermitianOperator<N> psd_projection<N>(const HermitianOperator<N>&);                 \
  template ComplexMatrix<N> multiply<N>(const ComplexMatrix<N>&, const ComplexMatrix<N>&);      \
  template ComplexMatrix<N> adjoint<N>(const ComplexMatrix<N>&);

QMEAS_INSTANTIATE(2)
QMEAS_INSTANTIATE(4)

#undef QMEAS_INSTANTIATE

}  // namespace qmeas
