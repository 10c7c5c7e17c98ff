#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triality/states.hpp"

namespace triality {

/// A symmetric concave function on the probability simplex, f: Omega -> R+,
/// vanishing on the vertices. Each f generates a coherence measure on pure
/// states, a path-information measure and a mixedness residual.
///
/// The function is defined for every dimension; the value at the uniform
/// vector (the maximum for a symmetric concave f) therefore depends on the
/// dimension and is exposed through max_value().
class SimplexFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  /// `family` names the builtin this function derives from (used to look up
  /// closed-form mixed-state measures); user-made functions pass their name.
  SimplexFunction(std::string name, std::string family, Evaluator evaluate, bool normalized);

  const std::string& name() const noexcept { return name_; }
  const std::string& family() const noexcept { return family_; }
  bool normalized() const noexcept { return normalized_; }

  double operator()(std::span<const double> x) const { return evaluate_(x); }
  double operator()(const ProbVector& x) const { return evaluate_(x.probs()); }

  /// f(1/n, ..., 1/n).
  double max_value(std::size_t dim) const;

 private:
  std::string name_;
  std::string family_;
  Evaluator evaluate_;
  bool normalized_;
};

/// Builtins: "l1", "fidelity", "entropy". Throws UnknownFunction otherwise.
SimplexFunction builtin(std::string_view name);

std::vector<std::string> builtin_names();

/// f'(x) = f(x) / f(uniform) with the uniform vector of x's own dimension.
/// Throws ZeroAtUniform if f vanishes at the uniform vector of any
/// dimension 2..16.
SimplexFunction normalize(const SimplexFunction& f);

/// Uniform (Dirichlet(1)) sample from the simplex.
std::vector<double> random_simplex_point(std::size_t dim, Rng& rng);

struct ConditionReport {
  std::size_t dim = 0;
  std::size_t samples = 0;
  bool zero_on_vertices = true;
  bool permutation_invariant = true;
  bool concave = true;
  double worst_vertex_value = 0.0;
  double worst_permutation_gap = 0.0;
  double worst_concavity_gap = 0.0;  // max of lambda f(x) + (1-lambda) f(y) - f(mix)
  // Arguments of the largest concavity gap (empty when concave).
  std::vector<double> witness_x;
  std::vector<double> witness_y;
  double witness_lambda = 0.0;

  bool pass() const noexcept { return zero_on_vertices && permutation_invariant && concave; }
};

inline constexpr double kConditionTol = 1e-10;

/// Randomized check of the three defining conditions: zero on every vertex
/// (exact), permutation invariance and concavity (1e-10).
ConditionReport check_f_conditions(const SimplexFunction& f, std::size_t dim, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace triality
