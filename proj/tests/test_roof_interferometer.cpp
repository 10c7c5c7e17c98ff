#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "triality/convex_roof.hpp"
#include "triality/interferometer.hpp"
#include "triality/measures.hpp"

using namespace triality;
using testing::error_code_of;
using testing::mat2;

TEST_CASE("ensembles from isometries") {
  const DensityMatrix rho = random_density(3, 3, 12);
  const Ensemble eig = ensemble_from_isometry(rho, Matrix::Identity(3, 3));
  const SpectralDecomposition sd = spectral_decomposition(rho);
  REQUIRE(eig.size() == 3);
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(eig.weights[k] == doctest::Approx(sd.eigenvalues[k]).epsilon(1e-12));
  CHECK(oracle::max_abs_diff(eig.reconstruct(), rho.matrix()) < 1e-12);

  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const Matrix v = random_isometry(6, 3, rng);
    const Ensemble e = ensemble_from_isometry(rho, v);
    double total = 0.0;
    for (double w : e.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::max_abs_diff(e.reconstruct(), rho.matrix()) < 1e-12);
  }

  const DensityMatrix half = special_state(SpecialKind::MaxMixed, 2);
  const Ensemble e2 = ensemble_from_isometry(half, random_isometry(2, 2, rng));
  CHECK(oracle::max_abs_diff(e2.reconstruct(), half.matrix()) < 1e-12);

  const PureState psi = random_pure(3, 4);
  const Ensemble single = ensemble_from_isometry(DensityMatrix::from_pure(psi), random_isometry(4, 1, rng));
  for (const PureState& s : single.states)
    CHECK(std::abs(std::abs(s.amplitudes().dot(psi.amplitudes())) - 1.0) < 1e-12);

  CHECK(error_code_of([&] { ensemble_from_isometry(rho, random_isometry(4, 2, rng)); }) == ErrorCode::RankMismatch);
  CHECK(error_code_of([&] { ensemble_from_isometry(rho, Matrix::Ones(4, 3)); }) == ErrorCode::NotIsometry);
}

TEST_CASE("roof objective") {
  const SimplexFunction l1 = builtin("l1");
  const DensityMatrix d = dephase(random_density(3, 3, 5));
  CHECK(roof_objective(l1, ensemble_from_isometry(d, Matrix::Identity(3, 3))) < 1e-14);

  const PureState psi = random_pure(3, 8);
  const Ensemble single = ensemble_from_isometry(DensityMatrix::from_pure(psi), Matrix::Identity(1, 1));
  CHECK(roof_objective(l1, single) == doctest::Approx(coherence_pure(l1, psi)).epsilon(1e-12));

  // I/2 as the equal mixture of |+> and |->
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Ensemble pm = ensemble_from_isometry(special_state(SpecialKind::MaxMixed, 2), h);
  CHECK(roof_objective(l1, pm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("roof minimization on fixed states") {
  const SimplexFunction l1 = builtin("l1");
  RoofConfig cfg;
  cfg.seed = 1;

  const PureState psi = random_pure(3, 2);
  const RoofResult pure = roof_minimize(l1, DensityMatrix::from_pure(psi), cfg);
  CHECK(std::abs(pure.value - coherence_pure(l1, psi)) <= 1e-10);
  CHECK(pure.iterations == 0);

  CHECK(roof_minimize(l1, special_state(SpecialKind::MaxMixed, 2), cfg).value <= 1e-6);
  const double coarse = roof_sample_oracle(l1, special_state(SpecialKind::MaxMixed, 2), 100, 2, 1);
  const double fine = roof_sample_oracle(l1, special_state(SpecialKind::MaxMixed, 2), 10000, 2, 1);
  CHECK(fine >= 0.0);
  CHECK(fine <= coarse);
  CHECK(fine < 1e-2);
  CHECK(roof_sample_oracle(l1, DensityMatrix::from_pure(psi), 10, 0, 1) ==
        doctest::Approx(coherence_pure(l1, psi)).epsilon(1e-10));

  const DensityMatrix rho = validate_density(mat2(0.5, 0.3, 0.3, 0.5));
  const RoofResult r = roof_minimize(l1, rho, cfg);
  CHECK(std::abs(r.value - 0.6) <= 1e-4);
  CHECK(std::abs(roof_sample_oracle(l1, rho, 20000, 2, 9) - 0.6) <= 1e-4);
  CHECK(oracle::max_abs_diff(r.ensemble.reconstruct(), rho.matrix()) < 1e-10);
  CHECK(r.value == doctest::Approx(roof_objective(l1, r.ensemble)).epsilon(1e-12));
}

TEST_CASE("entropy roof matches the qubit closed form") {
  const SimplexFunction ent = builtin("entropy");
  Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho = random_density(2, 2, rng);
    RoofConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(k);
    cfg.restarts = 8;
    CHECK(roof_minimize(ent, rho, cfg).value == doctest::Approx(oracle::qubit_entropy_roof(rho.matrix())).epsilon(1e-5));
  }
}

TEST_CASE("roof configuration") {
  const DensityMatrix rho = random_density(3, 2, 4);
  CHECK(effective_ensemble_size(rho, RoofConfig{}) == 4);
  CHECK(effective_ensemble_size(random_density(3, 3, 4), RoofConfig{}) == 6);
  RoofConfig bad;
  bad.restarts = 0;
  CHECK(error_code_of([&] { roof_minimize(builtin("l1"), rho, bad); }) == ErrorCode::InvalidConfig);
  bad = {};
  bad.m = 1;
  CHECK(error_code_of([&] { roof_minimize(builtin("l1"), rho, bad); }) == ErrorCode::InvalidConfig);
  bad = {};
  bad.tol = 0.0;
  CHECK(error_code_of([&] { roof_minimize(builtin("l1"), rho, bad); }) == ErrorCode::InvalidConfig);

  RoofConfig cfg;
  cfg.seed = 5;
  const RoofResult a = roof_minimize(builtin("entropy"), rho, cfg);
  const RoofResult b = roof_minimize(builtin("entropy"), rho, cfg);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("solver never exceeds the sampling oracle") {
  Rng rng(77);
  for (const auto& name : builtin_names()) {
    const SimplexFunction f = builtin(name);
    for (int k = 0; k < 4; ++k) {
      const DensityMatrix rho = random_density(2 + static_cast<std::size_t>(k % 2), 2, rng);
      RoofConfig cfg;
      cfg.seed = 40 + static_cast<std::uint64_t>(k);
      const double solved = roof_minimize(f, rho, cfg).value;
      CHECK(solved <= roof_sample_oracle(f, rho, 2000, 0, 3) + 1e-6);
      // C + D <= 1
      CHECK(solved <= f(diagonal(rho)) + 1e-6);
    }
  }
}

TEST_CASE("detector Gram matrices") {
  Vector e0(2), e1(2), plus(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Matrix ortho = detector_gram(DetectorConfig({PureState(e0), PureState(e1)}));
  CHECK(oracle::max_abs_diff(ortho, Matrix::Identity(2, 2)) == 0.0);
  const Matrix same = detector_gram(DetectorConfig({PureState(plus), PureState(plus), PureState(plus)}));
  CHECK(oracle::max_abs_diff(same, Matrix::Ones(3, 3)) < 1e-15);
  const Matrix g = detector_gram(DetectorConfig({PureState(e0), PureState(plus)}));
  CHECK(g(0, 1).real() == doctest::Approx(1 / std::sqrt(2.0)));

  CHECK(error_code_of([] { DetectorConfig({}); }) == ErrorCode::BadDim);
  CHECK(error_code_of([&] { DetectorConfig({PureState(e0), PureState(Vector::Ones(3) / std::sqrt(3.0))}); }) ==
        ErrorCode::DimMismatch);
}

TEST_CASE("reduced system state") {
  Vector e0(2), e1(2), plus(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const DensityMatrix rho = random_density(2, 2, 3);
  const DensityMatrix ortho = reduce_system(rho, DetectorConfig({PureState(e0), PureState(e1)}));
  CHECK(oracle::max_abs_diff(ortho.matrix(), dephase(rho).matrix()) == 0.0);
  const DensityMatrix same = reduce_system(rho, DetectorConfig({PureState(plus), PureState(plus)}));
  CHECK(oracle::max_abs_diff(same.matrix(), rho.matrix()) < 1e-15);

  const DensityMatrix p = reduce_system(special_state(SpecialKind::MaxCoherent, 2),
                                        DetectorConfig({PureState(e0), PureState(plus)}));
  CHECK(oracle::max_abs_diff(p.matrix(), mat2(0.5, 0.5 / std::sqrt(2.0), 0.5 / std::sqrt(2.0), 0.5)) < 1e-15);

  CHECK(error_code_of([&] { reduce_system(random_density(3, 3, 1), DetectorConfig({PureState(e0), PureState(e1)})); }) ==
        ErrorCode::DimMismatch);
}

TEST_CASE("joint state and partial trace") {
  Rng rng(5);
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t dd = 1; dd <= 3; ++dd) {
      const DensityMatrix rho = random_density(n, 1 + n / 2, rng);
      const DetectorConfig cfg = random_detectors(n, dd, rng);
      const DensityMatrix joint = attach_detectors(rho, cfg);
      CHECK(joint.dim() == n * dd);
      CHECK(oracle::max_abs_diff(oracle::partial_trace_second(joint.matrix(), n, dd),
                                 reduce_system(rho, cfg).matrix()) <= 1e-12);
      if (dd == 1) CHECK(oracle::max_abs_diff(joint.matrix(), rho.matrix()) < 1e-15);
    }

  const DensityMatrix joint = attach_detectors(special_state(SpecialKind::Basis, 3, 0), random_detectors(3, 2, rng));
  CHECK(spectral_decomposition(joint).rank == 1);
}

TEST_CASE("detector inequality") {
  Rng rng(9);
  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const DensityMatrix rho = random_density(2, 2, rng);
  const DetectorInequality same = detector_inequality_report(rho, DetectorConfig({PureState(e0), PureState(e0)}));
  CHECK(same.holds);
  CHECK(same.mixedness_with_detectors == doctest::Approx(same.mixedness).epsilon(1e-14));

  const DetectorInequality ortho = detector_inequality_report(rho, DetectorConfig({PureState(e0), PureState(e1)}));
  CHECK(ortho.holds);
  CHECK(ortho.mixedness_with_detectors == doctest::Approx(oracle::l1_of_probs(oracle::diag_of(rho.matrix()))));
  CHECK(ortho.coherence_with_detectors == 0.0);

  for (int k = 0; k < 50; ++k) {
    const DensityMatrix r = random_density(3, 1 + static_cast<std::size_t>(k % 3), rng);
    const DetectorInequality d = detector_inequality_report(r, random_detectors(3, 2, rng));
    CHECK(d.holds);
    CHECK(d.mixed_sum <= 1.0 + 1e-10);
  }
}
