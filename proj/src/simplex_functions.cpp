#include "triality/simplex_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace triality {

namespace {

double l1_function(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j] > 0.0) pairs += std::sqrt(x[i] * x[j]);
  }
  return 2.0 * pairs / static_cast<double>(n - 1);
}

double fidelity_function(std::span<const double> x) {
  double largest = 0.0;
  for (double v : x) largest = std::max(largest, v);
  return std::sqrt(std::max(0.0, 1.0 - largest));
}

double entropy_function(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double h = 0.0;
  for (double v : x)
    if (v > 0.0) h -= v * std::log(v);
  return std::max(0.0, h / std::log(static_cast<double>(n)));
}

}  // namespace

SimplexFunction::SimplexFunction(std::string name, std::string family, Evaluator evaluate,
                                 bool normalized)
    : name_(std::move(name)),
      family_(std::move(family)),
      evaluate_(std::move(evaluate)),
      normalized_(normalized) {}

double SimplexFunction::max_value(std::size_t dim) const {
  return evaluate_(ProbVector::uniform(dim).probs());
}

SimplexFunction builtin(std::string_view name) {
  if (name == "l1") return SimplexFunction("l1", "l1", l1_function, true);
  if (name == "fidelity") return SimplexFunction("fidelity", "fidelity", fidelity_function, false);
  if (name == "entropy") return SimplexFunction("entropy", "entropy", entropy_function, true);
  throw Error(ErrorCode::UnknownFunction,
              fmt::format("'{}' is not one of l1, fidelity, entropy", name));
}

std::vector<std::string> builtin_names() { return {"l1", "fidelity", "entropy"}; }

SimplexFunction normalize(const SimplexFunction& f) {
  if (f.normalized()) return f;
  auto scale = std::make_shared<std::array<double, kMaxRandomDim + 1>>();
  scale->fill(0.0);
  for (std::size_t dim = 2; dim <= kMaxRandomDim; ++dim) {
    const double top = f.max_value(dim);
    if (!(top > 0.0)) {
      throw Error(ErrorCode::ZeroAtUniform,
                  fmt::format("{} vanishes at the uniform vector of dim {}", f.name(), dim));
    }
    (*scale)[dim] = top;
  }
  auto evaluate = [f, scale](std::span<const double> x) {
    const std::size_t n = x.size();
    const double raw = f(x);
    if (n < 2) return raw;
    const double top = n <= kMaxRandomDim ? (*scale)[n] : f.max_value(n);
    return raw / top;
  };
  return SimplexFunction(f.name() + "-normalized", f.family(), evaluate, true);
}

std::vector<double> random_simplex_point(std::size_t dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(dim);
  double sum = 0.0;
  for (double& v : x) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : x) v /= sum;
  return x;
}

ConditionReport check_f_conditions(const SimplexFunction& f, std::size_t dim, std::size_t samples,
                                   std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorCode::BadDim, fmt::format("dimension {} is below 2", dim));
  if (samples < 1) throw Error(ErrorCode::BadParameter, "need at least one sample");
  ConditionReport report;
  report.dim = dim;
  report.samples = samples;
  Rng rng(seed);

  for (std::size_t i = 0; i < dim; ++i) {
    const double v = f(ProbVector::indicator(dim, i));
    report.worst_vertex_value = std::max(report.worst_vertex_value, std::abs(v));
    if (v != 0.0) report.zero_on_vertices = false;
  }

  std::vector<std::size_t> perm(dim);
  std::vector<double> permuted(dim);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = random_simplex_point(dim, rng);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < dim; ++i) permuted[perm[i]] = x[i];
    const double gap = std::abs(f(permuted) - f(x));
    report.worst_permutation_gap = std::max(report.worst_permutation_gap, gap);
    if (gap > kConditionTol) report.permutation_invariant = false;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> mid(dim);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    // The first probes pair a vertex with an interior point so the boundary
    // of the simplex is always exercised.
    std::vector<double> x;
    if (s < dim) {
      x.assign(dim, 0.0);
      x[s] = 1.0;
    } else {
      x = random_simplex_point(dim, rng);
    }
    const auto y = random_simplex_point(dim, rng);
    const double lambda = unit(rng);
    for (std::size_t i = 0; i < dim; ++i) mid[i] = lambda * x[i] + (1.0 - lambda) * y[i];
    const double gap = lambda * f(x) + (1.0 - lambda) * f(y) - f(mid);
    if (gap > worst) {
      worst = gap;
      if (gap > kConditionTol) {
        report.witness_x = x;
        report.witness_y = y;
        report.witness_lambda = lambda;
      }
    }
    if (gap > kConditionTol) report.concave = false;
  }
  report.worst_concavity_gap = std::max(0.0, worst);
  return report;
}

}  // namespace triality
