#include "triality/measures.hpp"
#include "triality/triality_report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace triality {

double coherence_pure(const SimplexFunction& f, const PureState& psi) {
  return f(psi.populations());
}

double path_information(const SimplexFunction& f, const DensityMatrix& rho) {
  return 1.0 - f(diagonal(rho));
}

bool has_direct_measure(std::string_view family) { return family == "l1"; }

double coherence_direct(std::string_view name, const DensityMatrix& rho) {
  if (!has_direct_measure(name)) {
    throw Error(ErrorCode::UnknownDirectMeasure,
                fmt::format("no closed-form mixed-state coherence for '{}'; use roof mode", name));
  }
  const std::size_t n = rho.dim();
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) upper += std::abs(rho(i, j));
  return 2.0 * upper / static_cast<double>(n - 1);
}

double mixedness(const SimplexFunction& f, const DensityMatrix& rho, double coherence) {
  return f(diagonal(rho)) - coherence;
}

QuadraticTriality quadratic_triality(const DensityMatrix& rho) {
  const std::size_t n = rho.dim();
  QuadraticTriality q;
  double diag2 = 0.0;
  double off2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a2 = std::norm(rho(i, j));
      (i == j ? diag2 : off2) += a2;
    }
  }
  q.particle = diag2;
  q.wave = off2;
  q.mixedness = 1.0 - (rho.matrix() * rho.matrix()).trace().real();
  return q;
}

Mode parse_mode(std::string_view name) {
  if (name == "direct") return Mode::Direct;
  if (name == "roof") return Mode::Roof;
  if (name == "quadratic") return Mode::Quadratic;
  throw Error(ErrorCode::BadParameter, fmt::format("unknown mode '{}'", name));
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Direct: return "direct";
    case Mode::Roof: return "roof";
    case Mode::Quadratic: return "quadratic";
  }
  return "?";
}

TrialityReport triality_report(const SimplexFunction& f, const DensityMatrix& rho, Mode mode,
                               const RoofConfig& cfg) {
  TrialityReport report;
  report.mode = mode;
  report.dim = rho.dim();

  if (mode == Mode::Quadratic) {
    const auto q = quadratic_triality(rho);
    report.measure_name = "quadratic";
    report.C = q.wave;
    report.D = q.particle;
    report.M = q.mixedness;
    report.sum = q.sum();
    report.residual = std::abs(report.sum - 1.0);
    report.max_value = 1.0 - 1.0 / static_cast<double>(rho.dim());
    report.tolerance = kQuadraticTol;
    report.bound_ok = report.residual <= kQuadraticTol;
    return report;
  }

  report.measure_name = f.name();
  report.max_value = f.max_value(rho.dim());
  const double top = f(diagonal(rho));
  if (mode == Mode::Direct) {
    report.C = coherence_direct(f.family(), rho);
    report.tolerance = kDirectTol;
  } else {
    const RoofResult roof = roof_minimize(f, rho, cfg);
    report.C = roof.value;
    report.tolerance = kRoofReportTol;
    report.roof = RoofDiagnostics{.upper_bound = true,
                                  .m = roof.m,
                                  .restarts_used = roof.restarts_used,
                                  .iterations = roof.iterations,
                                  .converged = roof.converged,
                                  .spread = roof.spread};
  }
  report.D = 1.0 - top;
  report.M = top - report.C;
  report.sum = report.C + report.D + report.M;
  report.residual = std::abs(report.sum - 1.0);
  report.bound_ok = report.C + report.D <= 1.0 + report.tolerance;
  report.mixedness_warning = report.M < kMixednessWarning;
  return report;
}

}  // namespace triality
