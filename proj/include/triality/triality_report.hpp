#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "triality/convex_roof.hpp"

namespace triality {

enum class Mode { Direct, Roof, Quadratic };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);

inline constexpr double kDirectTol = 1e-10;
inline constexpr double kQuadraticTol = 1e-12;
inline constexpr double kRoofReportTol = 1e-6;
inline constexpr double kMixednessWarning = -1e-9;

struct RoofDiagnostics {
  bool upper_bound = true;  // C is the best ensemble found, not a certified minimum
  std::size_t m = 0;
  std::size_t restarts_used = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double spread = 0.0;
};

/// C + D + M for one state. In direct and roof modes M is the residual
/// f(diag) - C, so the sum is 1 by construction and the substantive checks
/// are C + D <= 1 + tol and M >= 0. In quadratic mode C, D, M are W, P and
/// 1 - tr rho^2.
struct TrialityReport {
  std::string measure_name;
  Mode mode = Mode::Direct;
  std::size_t dim = 0;
  double C = 0.0;
  double D = 0.0;
  double M = 0.0;
  double sum = 0.0;
  double residual = 0.0;
  double max_value = 0.0;  // f at the uniform vector of this dimension
  double tolerance = 0.0;
  bool bound_ok = true;           // C + D <= 1 + tolerance
  bool mixedness_warning = false;  // M < -1e-9
  std::optional<RoofDiagnostics> roof;
};

TrialityReport triality_report(const SimplexFunction& f, const DensityMatrix& rho, Mode mode,
                               const RoofConfig& cfg = {});

}  // namespace triality
