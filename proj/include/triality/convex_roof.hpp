#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "triality/measures.hpp"

namespace triality {

/// Weighted pure-state decomposition of a density matrix:
/// source = sum_j weights[j] |states[j]><states[j]|.
struct Ensemble {
  std::vector<double> weights;
  std::vector<PureState> states;
  DensityMatrix source;

  std::size_t size() const noexcept { return weights.size(); }
  /// sum_j w_j |psi_j><psi_j|
  Matrix reconstruct() const;
};

inline constexpr double kIsometryTol = 1e-10;
inline constexpr double kDropWeight = 1e-14;

/// Every ensemble of rho arises from an m x r isometry V acting on the scaled
/// eigenvectors: |psi~_j> = sum_k V_jk sqrt(lambda_k) |e_k>, w_j = <psi~_j|psi~_j>.
/// Members lighter than 1e-14 are dropped.
Ensemble ensemble_from_isometry(const DensityMatrix& rho, const Matrix& v);

/// sum_j w_j C_f(psi_j)
double roof_objective(const SimplexFunction& f, const Ensemble& ensemble);

struct RoofConfig {
  std::size_t m = 0;  // ensemble size; 0 picks min(r^2, 2 dim), never below r
  std::size_t restarts = 16;
  std::size_t max_iters = 2000;
  double tol = 1e-8;  // step-size floor
  std::uint64_t seed = 0;
};

struct RoofResult {
  double value = 0.0;  // best objective found: an upper bound on the roof
  Ensemble ensemble;
  std::size_t m = 0;
  std::size_t restarts_used = 0;
  std::size_t iterations = 0;  // summed over restarts
  bool converged = false;      // winning restart reached the step floor
  double spread = 0.0;         // max - min over restart optima
};

/// Ensemble size used for rho under cfg.
std::size_t effective_ensemble_size(const DensityMatrix& rho, const RoofConfig& cfg);

/// Multi-restart derivative-free descent over m x r isometries. Restart 0
/// starts from the eigen-ensemble, restart k > 0 from a Haar isometry drawn
/// with seed cfg.seed + k. Proposals V + step * G are re-orthonormalized and
/// accepted on strict decrease; the step grows on success and shrinks on
/// failure until it falls below cfg.tol or the budget runs out.
RoofResult roof_minimize(const SimplexFunction& f, const DensityMatrix& rho, const RoofConfig& cfg = {});

/// Brute-force upper bound: minimum objective over `samples` Haar-random
/// m x r isometries (m = 0 picks the same default as the optimizer).
double roof_sample_oracle(const SimplexFunction& f, const DensityMatrix& rho, std::size_t samples,
                          std::size_t m, std::uint64_t seed);

}  // namespace triality
