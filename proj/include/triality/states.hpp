#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "triality/error.hpp"

namespace triality {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Tolerances for state validation: deviations up to kAcceptTol are invariant-
// conforming noise, deviations beyond kRejectTol are hard errors, anything in
// between is repaired (symmetrized, clipped, renormalized).
inline constexpr double kAcceptTol = 1e-10;
inline constexpr double kRejectTol = 1e-8;
inline constexpr double kRankCut = 1e-12;
inline constexpr double kProbSumTol = 1e-12;
inline constexpr std::size_t kMinRandomDim = 2;
inline constexpr std::size_t kMaxRandomDim = 16;

/// A point of the probability simplex.
class ProbVector {
 public:
  /// Entries in [-1e-12, 0) are clipped to zero; the sum must be 1 within 1e-12.
  explicit ProbVector(std::vector<double> probs);

  static ProbVector uniform(std::size_t dim);
  static ProbVector indicator(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

/// Unit-norm amplitude vector in the fixed (path) basis.
class PureState {
 public:
  /// Norms off by more than 1e-8 are rejected with BadNorm; smaller
  /// deviations are renormalized away.
  explicit PureState(Vector amplitudes);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  /// (|psi_1|^2, ..., |psi_d|^2)
  ProbVector populations() const;

 private:
  Vector amps_;
};

namespace detail {
struct TrustedTag {
  explicit TrustedTag() = default;
};
}  // namespace detail

/// Hermitian, positive semidefinite, trace-one matrix. Construct through
/// validate_density() or the state operations below.
class DensityMatrix {
 public:
  /// Wraps a matrix already known to satisfy the invariants (results of
  /// convex combinations, Schur products and the like). No checks.
  DensityMatrix(Matrix m, detail::TrustedTag) : m_(std::move(m)) {}

  static DensityMatrix from_pure(const PureState& psi);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  /// tr(rho^2)
  double purity() const;

 private:
  Matrix m_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // descending, clipped to >= 0, sum 1
  std::vector<PureState> eigenvectors;
  std::size_t rank = 0;  // eigenvalues above kRankCut

  /// Eigenvectors as columns, in eigenvalue order.
  Matrix eigenvector_matrix() const;
};

enum class SpecialKind { Basis, MaxCoherent, MaxMixed };
enum class FamilyKind { Depolarize, DephaseMix, Antidephase };

SpecialKind parse_special_kind(std::string_view name);
FamilyKind parse_family_kind(std::string_view name);
std::string_view to_string(SpecialKind kind);
std::string_view to_string(FamilyKind kind);

/// Symmetrizes, checks the three state invariants and repairs violations
/// that are within the hard-reject tolerance.
DensityMatrix validate_density(const Matrix& raw);

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho);

/// Full dephasing: deletes all off-diagonal entries.
DensityMatrix dephase(const DensityMatrix& rho);

ProbVector diagonal(const DensityMatrix& rho);

/// lambda * a + (1 - lambda) * b
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double lambda);

/// P rho P^T for the permutation matrix sending basis state i to perm[i].
DensityMatrix permute(const DensityMatrix& rho, std::span<const std::size_t> perm);

PureState random_pure(std::size_t dim, Rng& rng);
PureState random_pure(std::size_t dim, std::uint64_t seed);
DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

/// Haar-distributed m x r isometry (orthonormal columns).
Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);

/// Gram-Schmidt orthonormalization of the columns in place. Returns false if
/// a column is numerically dependent on its predecessors.
bool orthonormalize_columns(Matrix& v);

DensityMatrix special_state(SpecialKind kind, std::size_t dim,
                            std::optional<std::size_t> index = std::nullopt);

/// Members of the free-state sweep families:
///   Depolarize   p rho + (1-p) I/n
///   DephaseMix   p rho + (1-p) dephase(rho)
///   Antidephase  p rho + (1-p) [I/2 + (rho - dephase(rho))]   (qubits only)
DensityMatrix family_state(FamilyKind kind, const DensityMatrix& rho, double p);

}  // namespace triality
