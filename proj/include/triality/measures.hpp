#pragma once

#include <string_view>

#include "triality/simplex_functions.hpp"
#include "triality/states.hpp"

namespace triality {

/// C_f(|psi><psi|) = f(|psi_1|^2, ..., |psi_d|^2)
double coherence_pure(const SimplexFunction& f, const PureState& psi);

/// D_f(rho) = 1 - f(rho_11, ..., rho_nn). Depends on the diagonal only.
double path_information(const SimplexFunction& f, const DensityMatrix& rho);

/// Closed-form mixed-state coherence. Only "l1" has one:
///   C_l1(rho) = (1/(n-1)) sum_{i != j} |rho_ij|.
/// Other names throw UnknownDirectMeasure (use the convex roof).
double coherence_direct(std::string_view name, const DensityMatrix& rho);

bool has_direct_measure(std::string_view family);

/// M_f(rho) = f(diag rho) - C, with C the coherence computed in whatever mode
/// the caller chose.
double mixedness(const SimplexFunction& f, const DensityMatrix& rho, double coherence);

struct QuadraticTriality {
  double particle = 0.0;   // P = sum_i rho_ii^2
  double wave = 0.0;       // W = sum_{i != j} |rho_ij|^2
  double mixedness = 0.0;  // M = 1 - tr rho^2
  double sum() const noexcept { return particle + wave + mixedness; }
};

QuadraticTriality quadratic_triality(const DensityMatrix& rho);

}  // namespace triality
