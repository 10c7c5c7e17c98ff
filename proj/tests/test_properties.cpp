// Randomized invariants, one generator per test case.

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "triality/convex_roof.hpp"
#include "triality/harness.hpp"
#include "triality/interferometer.hpp"
#include "triality/io.hpp"
#include "triality/measures.hpp"

using namespace triality;

namespace {

std::size_t draw(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

DensityMatrix any_state(std::size_t dim, Rng& rng) { return random_density(dim, draw(1, dim, rng), rng); }

// Hermitian, unit trace, PSD.
bool is_valid(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return false;
  if (std::abs(m.trace() - cplx(1.0)) > 1e-12) return false;
  return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff() >= -1e-10;
}

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("operations return valid density matrices") {
  Rng rng(1001);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = draw(2, 6, rng);
    const DensityMatrix rho = any_state(n, rng);
    const DensityMatrix sigma = any_state(n, rng);
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(is_valid(rho));
    CHECK(is_valid(dephase(rho)));
    CHECK(is_valid(mix(rho, sigma, p)));
    CHECK(is_valid(permute(rho, shuffled(n, rng))));
    CHECK(is_valid(family_state(FamilyKind::Depolarize, rho, p)));
    CHECK(is_valid(family_state(FamilyKind::DephaseMix, rho, p)));
    if (n == 2) CHECK(is_valid(family_state(FamilyKind::Antidephase, rho, p)));
    const DetectorConfig cfg = random_detectors(n, draw(1, 3, rng), rng);
    CHECK(is_valid(reduce_system(rho, cfg)));
    CHECK(is_valid(attach_detectors(rho, cfg)));
    CHECK(is_valid(DensityMatrix::from_pure(random_pure(n, rng))));
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(is_valid(special_state(SpecialKind::MaxCoherent, n)));
    CHECK(is_valid(special_state(SpecialKind::MaxMixed, n)));
    CHECK(is_valid(special_state(SpecialKind::Basis, n, n - 1)));
  }
}

TEST_CASE("dephasing is idempotent and keeps the diagonal") {
  Rng rng(1002);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix rho = any_state(draw(2, 8, rng), rng);
    const DensityMatrix d = dephase(rho);
    CHECK(dephase(d).matrix() == d.matrix());
    const auto a = diagonal(rho).probs();
    const auto b = diagonal(d).probs();
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("spectral reconstruction up to dim 16") {
  Rng rng(1003);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 15);
    const DensityMatrix rho = any_state(n, rng);
    const SpectralDecomposition sd = spectral_decomposition(rho);
    Matrix r = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (std::size_t j = 0; j < sd.eigenvectors.size(); ++j) {
      const Vector& v = sd.eigenvectors[j].amplitudes();
      r += sd.eigenvalues[j] * v * v.adjoint();
    }
    worst = std::max(worst, oracle::max_abs_diff(r, rho.matrix()));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("family diagonals") {
  Rng rng(1004);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = draw(2, 5, rng);
    const DensityMatrix rho = any_state(n, rng);
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);
    const DensityMatrix dm = family_state(FamilyKind::DephaseMix, rho, p);
    const DensityMatrix dp = family_state(FamilyKind::Depolarize, rho, p);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      CHECK(dm(i, i) == rho(i, i));
      CHECK(std::abs(dp(i, i).real() - (p * rho(i, i).real() + (1 - p) / static_cast<double>(n))) <= 1e-15);
    }
  }
}

TEST_CASE("builtin simplex functions: zeros, range, normalization") {
  Rng rng(1005);
  for (const auto& name : builtin_names()) {
    const SimplexFunction f = builtin(name);
    for (std::size_t n = 2; n <= 8; ++n) {
      for (std::size_t i = 0; i < n; ++i) CHECK(f(ProbVector::indicator(n, i)) == 0.0);
      const double top = f.max_value(n);
      for (int k = 0; k < 1000; ++k) {
        const double v = f(random_simplex_point(n, rng));
        CHECK(v >= 0.0);
        CHECK(v <= top + 1e-12);
      }
    }
    const SimplexFunction g = normalize(f);
    for (std::size_t n = 2; n <= 16; ++n) CHECK(std::abs(g(ProbVector::uniform(n)) - 1.0) <= 1e-12);
    CHECK(check_f_conditions(f, 4, 10000, 1005).pass());
  }
}

TEST_CASE("permutation covariance of C, D, M") {
  Rng rng(1006);
  const SimplexFunction l1 = builtin("l1");
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = draw(2, 6, rng);
    const DensityMatrix rho = any_state(n, rng);
    const DensityMatrix q = permute(rho, shuffled(n, rng));
    const TrialityReport a = triality_report(l1, rho, Mode::Direct);
    const TrialityReport b = triality_report(l1, q, Mode::Direct);
    CHECK(std::abs(a.C - b.C) <= 1e-12);
    CHECK(std::abs(a.D - b.D) <= 1e-12);
    CHECK(std::abs(a.M - b.M) <= 1e-12);
  }
}

TEST_CASE("path information is convex") {
  Rng rng(1007);
  for (const auto& name : builtin_names()) {
    const SimplexFunction f = builtin(name);
    for (int k = 0; k < 300; ++k) {
      const std::size_t n = draw(2, 6, rng);
      const DensityMatrix rho = any_state(n, rng);
      const DensityMatrix sigma = any_state(n, rng);
      const double lam = std::uniform_real_distribution<double>(0, 1)(rng);
      const double lhs = path_information(f, mix(rho, sigma, lam));
      const double rhs = lam * path_information(f, rho) + (1 - lam) * path_information(f, sigma);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("ensemble reconstruction over isometries") {
  Rng rng(1008);
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t r = 1; r <= n; ++r)
      for (int k = 0; k < 5; ++k) {
        const DensityMatrix rho = random_density(n, r, rng);
        const std::size_t rank = spectral_decomposition(rho).rank;
        const Ensemble e = ensemble_from_isometry(rho, random_isometry(draw(rank, 2 * n, rng), rank, rng));
        CHECK(oracle::max_abs_diff(e.reconstruct(), rho.matrix()) <= 1e-12);
        for (double w : e.weights) CHECK(w >= 0.0);
      }
}

TEST_CASE("roof solver bounds") {
  Rng rng(1009);
  for (const auto& name : builtin_names()) {
    const SimplexFunction f = builtin(name);
    for (int k = 0; k < 6; ++k) {
      const std::size_t n = draw(2, 3, rng);
      const DensityMatrix rho = random_density(n, draw(2, n, rng), rng);
      RoofConfig cfg;
      cfg.restarts = 4;
      cfg.seed = 90 + static_cast<std::uint64_t>(k);
      const RoofResult r = roof_minimize(f, rho, cfg);
      const std::size_t rank = spectral_decomposition(rho).rank;
      const Ensemble eig = ensemble_from_isometry(rho, Matrix::Identity(static_cast<Eigen::Index>(rank),
                                                                         static_cast<Eigen::Index>(rank)));
      CHECK(r.value <= roof_objective(f, eig) + 1e-12);
      CHECK(r.value <= f(diagonal(rho)) + 1e-6);
      if (name == "l1") CHECK(r.value >= coherence_direct("l1", rho) - 1e-6);
      CHECK(oracle::max_abs_diff(r.ensemble.reconstruct(), rho.matrix()) <= 1e-10);
    }
  }
}

TEST_CASE("reduce_system keeps the diagonal and shrinks coherences") {
  Rng rng(1010);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = draw(2, 5, rng);
    const DensityMatrix rho = any_state(n, rng);
    const DensityMatrix s = reduce_system(rho, random_detectors(n, draw(1, 4, rng), rng));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
        if (i == j) CHECK(s(i, i) == rho(i, i));
        else CHECK(std::abs(s(i, j)) <= std::abs(rho(i, j)) * (1 + 1e-15));
      }
  }
}

TEST_CASE("harness witnesses replay") {
  const harness::WaveMeasure bad{"sqrt_l1", [](const DensityMatrix& rho) { return std::sqrt(coherence_direct("l1", rho)); }};
  const std::vector<std::size_t> dims = {2, 3};
  const harness::SuiteReport r = harness::run_wave_axioms(bad, dims, 100, 11);
  const harness::CheckRecord* c = r.find("wave.convexity");
  REQUIRE(c != nullptr);
  REQUIRE(c->failures > 0);
  const io::Json w = io::Json::parse(io::dump(c->witness));
  const DensityMatrix rho = io::state_from_json(w["rho"]).density;
  const DensityMatrix sigma = io::state_from_json(w["sigma"]).density;
  const double lam = w["lambda"].get<double>();
  const double replay = bad.evaluate(mix(rho, sigma, lam)) - (lam * bad.evaluate(rho) + (1 - lam) * bad.evaluate(sigma));
  CHECK(replay == c->worst_violation);
}

TEST_CASE("suites are deterministic") {
  const std::vector<std::size_t> dims = {2, 3};
  const auto a = harness::run_theorem_suite(builtin("l1"), Mode::Direct, dims, 30, 5).to_json();
  const auto b = harness::run_theorem_suite(builtin("l1"), Mode::Direct, dims, 30, 5).to_json();
  CHECK(io::dump(a) == io::dump(b));
  const auto c = harness::run_theorem_suite(builtin("l1"), Mode::Direct, dims, 30, 6).to_json();
  CHECK(io::dump(a) != io::dump(c));
}

TEST_CASE("generated states round-trip through files") {
  Rng rng(1011);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = draw(2, 8, rng);
    const DensityMatrix rho = any_state(n, rng);
    const DensityMatrix back = io::state_from_json(io::Json::parse(io::dump(io::state_to_json(rho)))).density;
    CHECK(oracle::max_abs_diff(back.matrix(), rho.matrix()) <= 1e-15);
  }
}
