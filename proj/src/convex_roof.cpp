#include "triality/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace triality {

namespace {

constexpr double kInitialStep = 0.25;
constexpr double kMaxStep = 1.0;
constexpr double kGrow = 2.0;
// 1/5th-success rule: one success balances four failures.
const double kShrink = std::pow(2.0, -0.25);

// Columns sqrt(lambda_k) e_k for the rank-r part of the spectrum.
Matrix scaled_basis(const SpectralDecomposition& spec) {
  const auto n = static_cast<Eigen::Index>(spec.eigenvectors.front().dim());
  const auto r = static_cast<Eigen::Index>(spec.rank);
  Matrix basis(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    basis.col(k) = std::sqrt(spec.eigenvalues[static_cast<std::size_t>(k)]) *
                   spec.eigenvectors[static_cast<std::size_t>(k)].amplitudes();
  }
  return basis;
}

Ensemble ensemble_from_basis(const DensityMatrix& rho, const Matrix& basis, const Matrix& v) {
  const Matrix members = basis * v.transpose();
  std::vector<double> weights;
  std::vector<PureState> states;
  for (Eigen::Index j = 0; j < members.cols(); ++j) {
    const double w = members.col(j).squaredNorm();
    if (w < kDropWeight) continue;
    weights.push_back(w);
    states.emplace_back(members.col(j) / std::sqrt(w));
  }
  return Ensemble{std::move(weights), std::move(states), rho};
}

// Objective evaluation with reusable scratch space; the unnormalized members
// are the columns of B V^T.
class RoofProblem {
 public:
  RoofProblem(const SimplexFunction& f, Matrix basis)
      : f_(f), basis_(std::move(basis)), probs_(static_cast<std::size_t>(basis_.rows())) {}

  Eigen::Index rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  double objective(const Matrix& v) {
    members_.noalias() = basis_ * v.transpose();
    double total = 0.0;
    for (Eigen::Index j = 0; j < members_.cols(); ++j) {
      const double w = members_.col(j).squaredNorm();
      if (w < kDropWeight) continue;
      for (Eigen::Index i = 0; i < members_.rows(); ++i)
        probs_[static_cast<std::size_t>(i)] = std::norm(members_(i, j)) / w;
      total += w * f_(probs_);
    }
    return total;
  }

 private:
  const SimplexFunction& f_;
  Matrix basis_;
  Matrix members_;
  std::vector<double> probs_;
};

void check_isometry(const Matrix& v, std::size_t rank) {
  const auto r = static_cast<Eigen::Index>(rank);
  if (v.cols() != r || v.rows() < r) {
    throw Error(ErrorCode::RankMismatch,
                fmt::format("isometry is {}x{}, state has rank {} (need m >= r columns = r)", v.rows(),
                            v.cols(), rank));
  }
  const double dev = (v.adjoint() * v - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (!(dev <= kIsometryTol)) {
    throw Error(ErrorCode::NotIsometry, fmt::format("max |V^dagger V - I| = {:.3e}", dev));
  }
}

Matrix identity_isometry(Eigen::Index m, Eigen::Index r) {
  Matrix v = Matrix::Zero(m, r);
  for (Eigen::Index k = 0; k < r; ++k) v(k, k) = 1.0;
  return v;
}

std::size_t default_ensemble_size(std::size_t rank, std::size_t dim) {
  return std::max(rank, std::min(rank * rank, 2 * dim));
}

}  // namespace

Matrix Ensemble::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(source.dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Vector& a = states[j].amplitudes();
    m.noalias() += weights[j] * (a * a.adjoint());
  }
  return m;
}

Ensemble ensemble_from_isometry(const DensityMatrix& rho, const Matrix& v) {
  const auto spec = spectral_decomposition(rho);
  check_isometry(v, spec.rank);
  return ensemble_from_basis(rho, scaled_basis(spec), v);
}

double roof_objective(const SimplexFunction& f, const Ensemble& ensemble) {
  double total = 0.0;
  for (std::size_t j = 0; j < ensemble.size(); ++j)
    total += ensemble.weights[j] * coherence_pure(f, ensemble.states[j]);
  return total;
}

std::size_t effective_ensemble_size(const DensityMatrix& rho, const RoofConfig& cfg) {
  const std::size_t rank = spectral_decomposition(rho).rank;
  return cfg.m == 0 ? default_ensemble_size(rank, rho.dim()) : cfg.m;
}

RoofResult roof_minimize(const SimplexFunction& f, const DensityMatrix& rho, const RoofConfig& cfg) {
  if (cfg.restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be at least 1");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("tol must be positive, got {}", cfg.tol));
  }
  const auto spec = spectral_decomposition(rho);
  const std::size_t rank = spec.rank;
  const std::size_t m = cfg.m == 0 ? default_ensemble_size(rank, rho.dim()) : cfg.m;
  if (m < rank) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("ensemble size m = {} is below the state rank {}", m, rank));
  }

  RoofResult result{.value = 0.0, .ensemble = Ensemble{{}, {}, rho}, .m = m};
  if (rank == 1) {
    const PureState& psi = spec.eigenvectors.front();
    result.value = coherence_pure(f, psi);
    result.ensemble = Ensemble{{1.0}, {psi}, rho};
    result.m = 1;
    result.converged = true;
    return result;
  }

  RoofProblem problem(f, scaled_basis(spec));
  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = problem.rank();
  Matrix best_v;
  double best = std::numeric_limits<double>::infinity();
  double worst_optimum = -std::numeric_limits<double>::infinity();
  Matrix proposal(rows, cols);

  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(cfg.seed + restart);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix v = restart == 0 ? identity_isometry(rows, cols)
                            : random_isometry(m, static_cast<std::size_t>(cols), rng);
    double value = problem.objective(v);
    double step = kInitialStep;
    bool converged = false;
    std::size_t it = 0;
    while (it < cfg.max_iters) {
      ++it;
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
          const double re = normal(rng);
          const double im = normal(rng);
          proposal(i, k) = v(i, k) + step * cplx(re, im);
        }
      }
      if (orthonormalize_columns(proposal)) {
        const double candidate = problem.objective(proposal);
        if (candidate < value) {
          v.swap(proposal);
          value = candidate;
          step = std::min(step * kGrow, kMaxStep);
        } else {
          step *= kShrink;
        }
      } else {
        step *= kShrink;
      }
      if (step < cfg.tol) {
        converged = true;
        break;
      }
    }
    result.iterations += it;
    ++result.restarts_used;
    worst_optimum = std::max(worst_optimum, value);
    if (value < best) {
      best = value;
      best_v = v;
      result.converged = converged;
    }
  }

  result.value = best;
  result.spread = worst_optimum - best;
  result.ensemble = ensemble_from_basis(rho, problem.basis(), best_v);
  return result;
}

double roof_sample_oracle(const SimplexFunction& f, const DensityMatrix& rho, std::size_t samples,
                          std::size_t m, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::BadParameter, "need at least one sample");
  const auto spec = spectral_decomposition(rho);
  const std::size_t rank = spec.rank;
  if (rank == 1) return coherence_pure(f, spec.eigenvectors.front());
  const std::size_t size = m == 0 ? default_ensemble_size(rank, rho.dim()) : m;
  if (size < rank) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("ensemble size m = {} is below the state rank {}", size, rank));
  }
  RoofProblem problem(f, scaled_basis(spec));
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) best = std::min(best, problem.objective(random_isometry(size, rank, rng)));
  return best;
}

}  // namespace triality
