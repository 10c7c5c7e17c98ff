#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "triality/measures.hpp"
#include "triality/simplex_functions.hpp"
#include "triality/triality_report.hpp"

using namespace triality;
using testing::error_code_of;
using testing::mat2;

TEST_CASE("builtin simplex functions on fixed points") {
  const SimplexFunction l1 = builtin("l1");
  const SimplexFunction fid = builtin("fidelity");
  const SimplexFunction ent = builtin("entropy");
  CHECK(l1(ProbVector({0.5, 0.5})) == 1.0);
  CHECK(l1(ProbVector({1.0, 0.0, 0.0})) == 0.0);
  CHECK(fid(ProbVector({0.5, 0.5})) == doctest::Approx(0.70710678118654752));
  for (std::size_t n = 2; n <= 8; ++n) CHECK(ent(ProbVector::uniform(n)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l1.normalized());
  CHECK(ent.normalized());
  CHECK_FALSE(fid.normalized());
  CHECK(error_code_of([] { builtin("gini"); }) == ErrorCode::UnknownFunction);
  CHECK(builtin_names().size() == 3);
}

TEST_CASE("builtins agree with loop oracles on random points") {
  Rng rng(8);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 7);
    const std::vector<double> x = random_simplex_point(n, rng);
    CHECK(builtin("l1")(x) == doctest::Approx(oracle::l1_of_probs(x)).epsilon(1e-13));
    CHECK(builtin("fidelity")(x) == doctest::Approx(oracle::fidelity_of_probs(x)).epsilon(1e-13));
    CHECK(builtin("entropy")(x) == doctest::Approx(oracle::entropy_of_probs(x)).epsilon(1e-13));
  }
}

TEST_CASE("normalize") {
  const SimplexFunction fid = normalize(builtin("fidelity"));
  CHECK(fid.normalized());
  CHECK(fid(ProbVector({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fid(ProbVector({1.0, 0.0, 0.0, 0.0})) == 0.0);
  CHECK(fid(ProbVector::uniform(4)) == doctest::Approx(1.0).epsilon(1e-15));

  const SimplexFunction l1 = normalize(builtin("l1"));
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_simplex_point(3, rng);
    CHECK(l1(x) == builtin("l1")(x));
  }

  const SimplexFunction zero("zero", "zero", [](std::span<const double>) { return 0.0; }, false);
  CHECK(error_code_of([&] { normalize(zero); }) == ErrorCode::ZeroAtUniform);
}

TEST_CASE("f-condition checker") {
  CHECK(check_f_conditions(builtin("l1"), 3, 1000, 4).pass());
  CHECK(check_f_conditions(builtin("entropy"), 2, 1000, 4).pass());
  CHECK(check_f_conditions(builtin("fidelity"), 5, 1000, 4).pass());

  const SimplexFunction squares("squares", "squares", [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }, false);
  const ConditionReport bad = check_f_conditions(squares, 3, 1000, 4);
  CHECK_FALSE(bad.concave);
  CHECK_FALSE(bad.pass());
  CHECK(bad.witness_x.size() == 3);
  // the witness replays to a concavity violation
  const double lam = bad.witness_lambda;
  std::vector<double> mid(3);
  for (std::size_t i = 0; i < 3; ++i) mid[i] = lam * bad.witness_x[i] + (1 - lam) * bad.witness_y[i];
  CHECK(lam * squares(bad.witness_x) + (1 - lam) * squares(bad.witness_y) - squares(mid) > kConditionTol);

  const SimplexFunction lopsided("lopsided", "lopsided", [](std::span<const double> x) {
    return x[0] * (1 - x[0]);
  }, false);
  CHECK_FALSE(check_f_conditions(lopsided, 3, 500, 4).permutation_invariant);

  CHECK(error_code_of([] { check_f_conditions(builtin("l1"), 1, 10, 0); }) == ErrorCode::BadDim);
}

TEST_CASE("coherence of pure states") {
  const SimplexFunction l1 = builtin("l1");
  for (std::size_t n = 2; n <= 6; ++n) {
    Vector v = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    CHECK(coherence_pure(l1, PureState(v)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  Vector e = Vector::Zero(3);
  e(1) = 1.0;
  for (const auto& name : builtin_names()) CHECK(coherence_pure(builtin(name), PureState(e)) == 0.0);

  Vector a(2);
  a << std::sqrt(0.7), std::sqrt(0.3);
  CHECK(coherence_pure(l1, PureState(a)) == doctest::Approx(0.9165151389911680).epsilon(1e-14));
}

TEST_CASE("path information") {
  const SimplexFunction l1 = builtin("l1");
  CHECK(path_information(l1, special_state(SpecialKind::MaxMixed, 4)) == doctest::Approx(0.0).epsilon(1e-14));
  for (const auto& name : builtin_names())
    CHECK(path_information(builtin(name), special_state(SpecialKind::Basis, 3, 2)) == 1.0);
  const DensityMatrix d = validate_density(mat2(0.7, 0.0, 0.0, 0.3));
  CHECK(path_information(l1, d) == doctest::Approx(1.0 - 2.0 * std::sqrt(0.21)).epsilon(1e-14));
}

TEST_CASE("direct l1 coherence") {
  const DensityMatrix rho = validate_density(mat2(0.5, 0.3, 0.3, 0.5));
  CHECK(coherence_direct("l1", rho) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(coherence_direct("l1", special_state(SpecialKind::MaxCoherent, 2)) == doctest::Approx(1.0));
  CHECK(coherence_direct("l1", dephase(random_density(4, 3, 2))) == 0.0);
  CHECK(error_code_of([&] { coherence_direct("entropy", rho); }) == ErrorCode::UnknownDirectMeasure);
  CHECK(has_direct_measure("l1"));
  CHECK_FALSE(has_direct_measure("fidelity"));

  Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix r = random_density(2 + static_cast<std::size_t>(k % 5), 2, rng);
    CHECK(coherence_direct("l1", r) == doctest::Approx(oracle::l1_coherence(r.matrix())).epsilon(1e-13));
  }
}

TEST_CASE("mixedness") {
  const SimplexFunction l1 = builtin("l1");
  const DensityMatrix rho = validate_density(mat2(0.5, 0.3, 0.3, 0.5));
  CHECK(mixedness(l1, rho, 0.6) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(mixedness(l1, special_state(SpecialKind::MaxMixed, 3), 0.0) == doctest::Approx(1.0).epsilon(1e-14));

  const PureState psi = random_pure(4, 3);
  const DensityMatrix pure = DensityMatrix::from_pure(psi);
  for (const auto& name : builtin_names()) {
    const SimplexFunction f = builtin(name);
    CHECK(std::abs(mixedness(f, pure, coherence_pure(f, psi))) < 1e-12);
  }
}

TEST_CASE("quadratic triality") {
  const QuadraticTriality mm = quadratic_triality(special_state(SpecialKind::MaxMixed, 5));
  CHECK(mm.particle == doctest::Approx(0.2));
  CHECK(mm.wave == 0.0);
  CHECK(mm.mixedness == doctest::Approx(0.8));
  const QuadraticTriality plus = quadratic_triality(special_state(SpecialKind::MaxCoherent, 2));
  CHECK(plus.particle == doctest::Approx(0.5));
  CHECK(plus.wave == doctest::Approx(0.5));
  CHECK(std::abs(plus.mixedness) < 1e-15);
  const QuadraticTriality basis = quadratic_triality(special_state(SpecialKind::Basis, 3, 0));
  CHECK(basis.particle == 1.0);
  CHECK(basis.wave == 0.0);
  CHECK(basis.mixedness == 0.0);
}

TEST_CASE("triality reports") {
  const SimplexFunction l1 = builtin("l1");
  const DensityMatrix rho = validate_density(mat2(0.5, 0.3, 0.3, 0.5));
  const TrialityReport r = triality_report(l1, rho, Mode::Direct);
  CHECK(r.C == doctest::Approx(0.6));
  CHECK(std::abs(r.D) < 1e-15);
  CHECK(r.M == doctest::Approx(0.4));
  CHECK(r.sum == doctest::Approx(1.0));
  CHECK(r.bound_ok);
  CHECK_FALSE(r.mixedness_warning);
  CHECK_FALSE(r.roof.has_value());

  const DensityMatrix pure = DensityMatrix::from_pure(random_pure(3, 6));
  const TrialityReport p = triality_report(l1, pure, Mode::Direct);
  CHECK(std::abs(p.C + p.D - 1.0) <= 1e-10);
  CHECK(std::abs(p.M) <= 1e-10);

  RoofConfig cfg;
  cfg.seed = 3;
  const TrialityReport mm = triality_report(builtin("entropy"), special_state(SpecialKind::MaxMixed, 2), Mode::Roof, cfg);
  CHECK(std::abs(mm.C) <= 1e-6);
  CHECK(std::abs(mm.D) <= 1e-12);
  CHECK(mm.M == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(mm.roof.has_value());
  CHECK(mm.roof->upper_bound);

  const TrialityReport q = triality_report(l1, random_density(4, 3, 1), Mode::Quadratic);
  CHECK(q.residual <= 1e-12);
  CHECK(q.max_value == doctest::Approx(0.75));

  CHECK(parse_mode("roof") == Mode::Roof);
  CHECK(error_code_of([] { parse_mode("exact"); }) == ErrorCode::BadParameter);
  CHECK(error_code_of([&] { triality_report(builtin("fidelity"), rho, Mode::Direct); }) ==
        ErrorCode::UnknownDirectMeasure);
}
