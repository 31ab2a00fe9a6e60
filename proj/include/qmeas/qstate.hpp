#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>

namespace qmeas {

using Complex = std::complex<double>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenFloor = 1e-12;

template <std::size_t N>
using ComplexMatrix = std::array<std::array<Complex, N>, N>;

/// Thrown when a matrix handed to a Hermitian constructor is not Hermitian.
class NonHermitianError : public std::invalid_argument {
 public:
  explicit NonHermitianError(double max_asymmetry);
  double max_asymmetry() const noexcept { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

/// max |m(i,j) - conj(m(j,i))|
template <std::size_t N>
double max_asymmetry(const ComplexMatrix<N>& m);

/// Small dense Hermitian matrix. Hermitian by construction: the stored upper
/// triangle mirrors the lower one exactly.
template <std::size_t N>
class HermitianOperator {
 public:
  static constexpr std::size_t dimension = N;

  HermitianOperator() = default;

  /// Validates Hermiticity within `tol`, then stores the Hermitian part.
  static HermitianOperator from_entries(const ComplexMatrix<N>& m,
                                        double tol = kHermitianTolerance);
  /// Stores the Hermitian part (m + m^dagger)/2 without validation.
  static HermitianOperator hermitized(const ComplexMatrix<N>& m);
  static HermitianOperator diagonal(const std::array<double, N>& d);
  static HermitianOperator identity();

  const Complex& operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const ComplexMatrix<N>& entries() const { return m_; }
  double trace() const;

  /// Density-matrix role. The target is the trace the state is meant to have;
  /// non-ideal maps may produce targets below one.
  std::optional<double> trace_target() const { return trace_target_; }
  bool is_density() const { return trace_target_.has_value(); }
  /// Copy flagged as a density matrix with the given trace target.
  /// Throws std::invalid_argument if the trace misses the target by more than 1e-10.
  HermitianOperator as_density(double target = 1.0) const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator scaled(double s) const;

  /// Entrywise bitwise equality. Role flags are ignored.
  bool same_entries(const HermitianOperator& o) const { return m_ == o.m_; }

 private:
  explicit HermitianOperator(const ComplexMatrix<N>& m) : m_(m) {}
  ComplexMatrix<N> m_{};
  std::optional<double> trace_target_;
};

using HermitianOperator2 = HermitianOperator<2>;
using HermitianOperator4 = HermitianOperator<4>;

/// Real eigenvalues sorted descending.
template <std::size_t N>
struct Spectrum {
  std::array<double, N> values{};
  double sum() const;
  double min() const { return values[N - 1]; }
  double max() const { return values[0]; }
};

/// Eigenvalues (descending) and matching eigenvectors; column k of `vectors`
/// is the eigenvector of `values[k]`.
template <std::size_t N>
struct EigenSystem {
  std::array<double, N> values{};
  ComplexMatrix<N> vectors{};
};

struct JacobiSettings {
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Closed form for 2x2, block form for X-structured 4x4, Jacobi otherwise.
template <std::size_t N>
Spectrum<N> eigenvalues_hermitian(const HermitianOperator<N>& op);
/// Same, for a raw matrix. Throws NonHermitianError beyond `tol`.
template <std::size_t N>
Spectrum<N> eigenvalues_hermitian(const ComplexMatrix<N>& m, double tol = kHermitianTolerance);
template <std::size_t N>
EigenSystem<N> eigensystem(const HermitianOperator<N>& op);
/// Cyclic complex Jacobi iteration, independent of the closed forms.
/// Throws std::runtime_error if it does not converge within max_sweeps.
template <std::size_t N>
EigenSystem<N> jacobi_eigensystem(const HermitianOperator<N>& op, JacobiSettings settings = {});

/// True if all entries outside the diagonal and anti-diagonal are exactly zero.
bool is_x_structured(const HermitianOperator4& op);

struct EntropyResult {
  double bits = 0.0;
  bool nonphysical = false;
  double min_eigenvalue = 0.0;
};

/// -sum lambda log2 lambda over eigenvalues above the floor.
EntropyResult spectral_entropy(std::span<const double> eigenvalues, double eigen_floor = kEigenFloor);
template <std::size_t N>
EntropyResult von_neumann_entropy(const HermitianOperator<N>& rho, double eigen_floor = kEigenFloor);

/// H(x) in bits. Throws std::domain_error outside [-1e-12, 1 + 1e-12].
double binary_entropy(double x);

struct FidelityResult {
  double value = 0.0;      // on PSD-projected inputs
  double raw = 0.0;        // on the inputs as given (NaN when no closed form applies)
  bool projected = false;  // an input had an eigenvalue below -kEigenFloor
};

/// (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2
template <std::size_t N>
FidelityResult fidelity(const HermitianOperator<N>& rho1, const HermitianOperator<N>& rho2);
/// Tr(r1 r2) + 2 sqrt(det r1 det r2)
double fidelity_closed_form(const HermitianOperator2& rho1, const HermitianOperator2& rho2);

/// Half the sum of |eigenvalues(r1 - r2)|.
template <std::size_t N>
double trace_distance(const HermitianOperator<N>& rho1, const HermitianOperator<N>& rho2);

struct PsdReport {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
};

template <std::size_t N>
PsdReport psd_check(const HermitianOperator<N>& op, double tol = kEigenFloor);

/// Negative eigenvalues clamped to zero; trace is not restored.
template <std::size_t N>
HermitianOperator<N> psd_projection(const HermitianOperator<N>& op);

template <std::size_t N>
ComplexMatrix<N> multiply(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b);
template <std::size_t N>
ComplexMatrix<N> adjoint(const ComplexMatrix<N>& a);

}  // namespace qmeas
