#include "triality/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace triality {

namespace {

// Trace deviations below this are left alone so that states read back from
// 17-digit files are bit-identical to what was written.
constexpr double kTraceNoise = 1e-13;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_random_dim(std::size_t dim) {
  if (dim < kMinRandomDim || dim > kMaxRandomDim) {
    throw Error(ErrorCode::BadDim,
                fmt::format("random states need {} <= dim <= {}, got {}", kMinRandomDim,
                            kMaxRandomDim, dim));
  }
}

cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

// Copies the upper triangle onto the lower one so the result is exactly
// Hermitian, with a real diagonal.
void hermitize_from_upper(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, i) = cplx(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(j, i) = std::conj(m(i, j));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbVector

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorCode::BadDim, "probability vector is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    double& p = probs_[i];
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::BadParameter, fmt::format("probability {} is not finite", i));
    }
    if (p < 0.0) {
      if (p < -kProbSumTol) {
        throw Error(ErrorCode::BadParameter,
                    fmt::format("probability {} is negative ({:.3e})", i, p));
      }
      p = 0.0;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw Error(ErrorCode::BadParameter,
                fmt::format("probabilities sum to {:.17g}, off by {:.3e}", sum, sum - 1.0));
  }
}

ProbVector ProbVector::uniform(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::BadDim, "dimension must be positive");
  return ProbVector(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

ProbVector ProbVector::indicator(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorCode::BadIndex, fmt::format("index {} out of range for dim {}", index, dim));
  }
  std::vector<double> p(dim, 0.0);
  p[index] = 1.0;
  return ProbVector(std::move(p));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw Error(ErrorCode::BadDim, "pure state has no amplitudes");
  if (!amps_.allFinite()) throw Error(ErrorCode::BadNorm, "pure state has non-finite amplitudes");
  const double norm2 = amps_.squaredNorm();
  const double dev = std::abs(norm2 - 1.0);
  if (dev > kRejectTol) {
    throw Error(ErrorCode::BadNorm,
                fmt::format("squared norm is {:.17g}, off by {:.3e}", norm2, norm2 - 1.0));
  }
  if (dev > kAcceptTol) amps_ /= std::sqrt(norm2);
}

ProbVector PureState::populations() const {
  std::vector<double> p(dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::norm(amps_(idx(i)));
    sum += p[i];
  }
  // The norm invariant only holds to 1e-10; the simplex needs 1e-12.
  if (std::abs(sum - 1.0) > kProbSumTol / 4) {
    for (double& x : p) x /= sum;
  }
  return ProbVector(std::move(p));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const auto& a = psi.amplitudes();
  const Eigen::Index n = a.size();
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = a(i) * std::conj(a(j));
  hermitize_from_upper(m);
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

double DensityMatrix::purity() const { return m_.cwiseAbs2().sum(); }

Matrix SpectralDecomposition::eigenvector_matrix() const {
  if (eigenvectors.empty()) return {};
  const auto n = static_cast<Eigen::Index>(eigenvectors.front().dim());
  Matrix v(n, static_cast<Eigen::Index>(eigenvectors.size()));
  for (std::size_t k = 0; k < eigenvectors.size(); ++k) v.col(idx(k)) = eigenvectors[k].amplitudes();
  return v;
}

// ---------------------------------------------------------------------------
// kinds

SpecialKind parse_special_kind(std::string_view name) {
  if (name == "basis") return SpecialKind::Basis;
  if (name == "max_coherent") return SpecialKind::MaxCoherent;
  if (name == "max_mixed") return SpecialKind::MaxMixed;
  throw Error(ErrorCode::BadParameter, fmt::format("unknown special state '{}'", name));
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "depolarize") return FamilyKind::Depolarize;
  if (name == "dephase_mix") return FamilyKind::DephaseMix;
  if (name == "antidephase") return FamilyKind::Antidephase;
  throw Error(ErrorCode::BadParameter, fmt::format("unknown state family '{}'", name));
}

std::string_view to_string(SpecialKind kind) {
  switch (kind) {
    case SpecialKind::Basis: return "basis";
    case SpecialKind::MaxCoherent: return "max_coherent";
    case SpecialKind::MaxMixed: return "max_mixed";
  }
  return "?";
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Depolarize: return "depolarize";
    case FamilyKind::DephaseMix: return "dephase_mix";
    case FamilyKind::Antidephase: return "antidephase";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// operations

DensityMatrix validate_density(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorCode::BadDim,
                fmt::format("matrix is {}x{}, expected square", raw.rows(), raw.cols()));
  }
  if (raw.rows() < 2) {
    throw Error(ErrorCode::BadDim, fmt::format("dimension {} is below 2", raw.rows()));
  }
  if (!raw.allFinite()) throw Error(ErrorCode::BadFormat, "matrix has non-finite entries");

  const double asym = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kRejectTol) {
    throw Error(ErrorCode::NonHermitian,
                fmt::format("max |rho_ij - conj(rho_ji)| = {:.3e} exceeds {:.0e}", asym, kRejectTol));
  }
  Matrix m = (raw + raw.adjoint()) / 2.0;

  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kRejectTol) {
    throw Error(ErrorCode::BadTrace,
                fmt::format("trace is {:.17g}, off by {:.3e}", tr, tr - 1.0));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -kRejectTol) {
    throw Error(ErrorCode::NotPSD,
                fmt::format("minimum eigenvalue {:.3e} is below -{:.0e}", min_eig, kRejectTol));
  }
  if (min_eig < -kAcceptTol) {
    Eigen::SelfAdjointEigenSolver<Matrix> full(m);
    Eigen::VectorXd lambda = full.eigenvalues().cwiseMax(0.0);
    lambda /= lambda.sum();
    const Matrix& v = full.eigenvectors();
    m = v * lambda.cast<cplx>().asDiagonal() * v.adjoint();
    hermitize_from_upper(m);
  } else {
    const double t = m.trace().real();
    if (std::abs(t - 1.0) > kTraceNoise) m /= t;
  }
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho.matrix());
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::BadParameter, "eigendecomposition did not converge");
  }
  const Eigen::Index n = rho.matrix().rows();
  SpectralDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = std::max(0.0, eig.eigenvalues()(n - 1 - k));
    out.eigenvalues[static_cast<std::size_t>(k)] = lambda;
    sum += lambda;
  }
  out.eigenvectors.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    double& lambda = out.eigenvalues[static_cast<std::size_t>(k)];
    lambda /= sum;
    if (lambda > kRankCut) ++out.rank;
    out.eigenvectors.emplace_back(eig.eigenvectors().col(n - 1 - k));
  }
  return out;
}

DensityMatrix dephase(const DensityMatrix& rho) {
  const Eigen::Index n = rho.matrix().rows();
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = rho.matrix()(i, i);
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

ProbVector diagonal(const DensityMatrix& rho) {
  const std::size_t n = rho.dim();
  std::vector<double> p(n);
  double sum = 0.0;
  bool clipped = false;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = rho(i, i).real();
    if (p[i] < 0.0) {
      p[i] = 0.0;
      clipped = true;
    }
    sum += p[i];
  }
  if (clipped || std::abs(sum - 1.0) > kProbSumTol / 4) {
    for (double& x : p) x /= sum;
  }
  return ProbVector(std::move(p));
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double lambda) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, fmt::format("cannot mix dim {} with dim {}", a.dim(), b.dim()));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::BadParameter, fmt::format("mixing weight {} outside [0,1]", lambda));
  }
  Matrix m = lambda * a.matrix() + (1.0 - lambda) * b.matrix();
  hermitize_from_upper(m);
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

DensityMatrix permute(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  const std::size_t n = rho.dim();
  if (perm.size() != n) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("permutation of length {} for dim {}", perm.size(), n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorCode::BadParameter, "not a permutation");
    seen[p] = true;
  }
  Matrix m(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(idx(perm[i]), idx(perm[j])) = rho(i, j);
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

PureState random_pure(std::size_t dim, Rng& rng) {
  require_random_dim(dim);
  Vector v(idx(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_gaussian(rng);
  v /= v.norm();
  return PureState(std::move(v));
}

PureState random_pure(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(dim, rng);
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  require_random_dim(dim);
  if (rank < 1 || rank > dim) {
    throw Error(ErrorCode::BadRank, fmt::format("rank {} outside [1, {}]", rank, dim));
  }
  Matrix g(idx(dim), idx(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index k = 0; k < g.cols(); ++k) g(i, k) = complex_gaussian(rng);
  Matrix m = g * g.adjoint();
  hermitize_from_upper(m);
  m /= m.trace().real();
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

bool orthonormalize_columns(Matrix& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double original = v.col(k).norm();
    // Two projection passes keep V^dagger V = I to machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const cplx overlap = v.col(j).dot(v.col(k));
        v.col(k) -= overlap * v.col(j);
      }
    }
    const double norm = v.col(k).norm();
    if (!(norm > 1e-12 * original) || norm == 0.0) return false;
    v.col(k) /= norm;
  }
  return true;
}

Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols == 0 || rows < cols) {
    throw Error(ErrorCode::RankMismatch,
                fmt::format("no {}x{} isometry exists", rows, cols));
  }
  Matrix v(idx(rows), idx(cols));
  do {
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index k = 0; k < v.cols(); ++k) v(i, k) = complex_gaussian(rng);
  } while (!orthonormalize_columns(v));
  return v;
}

DensityMatrix special_state(SpecialKind kind, std::size_t dim, std::optional<std::size_t> index) {
  if (dim < 2) throw Error(ErrorCode::BadDim, fmt::format("dimension {} is below 2", dim));
  const Eigen::Index n = idx(dim);
  switch (kind) {
    case SpecialKind::Basis: {
      if (!index) throw Error(ErrorCode::BadIndex, "basis state needs an index");
      if (*index >= dim) {
        throw Error(ErrorCode::BadIndex, fmt::format("index {} out of range for dim {}", *index, dim));
      }
      Matrix m = Matrix::Zero(n, n);
      m(idx(*index), idx(*index)) = 1.0;
      return DensityMatrix(std::move(m), detail::TrustedTag{});
    }
    case SpecialKind::MaxCoherent:
      return DensityMatrix(Matrix::Constant(n, n, cplx(1.0 / static_cast<double>(dim), 0.0)),
                           detail::TrustedTag{});
    case SpecialKind::MaxMixed: {
      Matrix m = Matrix::Zero(n, n);
      m.diagonal().setConstant(1.0 / static_cast<double>(dim));
      return DensityMatrix(std::move(m), detail::TrustedTag{});
    }
  }
  throw Error(ErrorCode::BadParameter, "unknown special state");
}

DensityMatrix family_state(FamilyKind kind, const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::BadParameter, fmt::format("family parameter p = {} outside [0,1]", p));
  }
  const Eigen::Index n = rho.matrix().rows();
  const Matrix& r = rho.matrix();
  Matrix m(n, n);
  switch (kind) {
    case FamilyKind::Depolarize: {
      const double uniform = 1.0 / static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          m(i, j) = i == j ? cplx(p * r(i, i).real() + (1.0 - p) * uniform, 0.0) : p * r(i, j);
      break;
    }
    case FamilyKind::DephaseMix:
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? r(i, i) : p * r(i, j);
      break;
    case FamilyKind::Antidephase: {
      if (n != 2) {
        throw Error(ErrorCode::BadDim,
                    fmt::format("antidephase family is defined for qubits only, got dim {}", n));
      }
      const double coherence = std::abs(r(0, 1));
      if (coherence > 0.5 + kAcceptTol) {
        throw Error(ErrorCode::NotPSD,
                    fmt::format("auxiliary matrix I/2 + (rho - dephase(rho)) has |rho_01| = {:.6g} > 1/2",
                                coherence));
      }
      // Off-diagonal entries are shared by rho and the auxiliary state.
      m(0, 0) = p * r(0, 0).real() + (1.0 - p) * 0.5;
      m(1, 1) = p * r(1, 1).real() + (1.0 - p) * 0.5;
      m(0, 1) = r(0, 1);
      m(1, 0) = r(1, 0);
      break;
    }
  }
  return validate_density(m);
}

}  // namespace triality
