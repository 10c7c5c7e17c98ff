#include "triality/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace triality::harness {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (suite seed, check, dimension).
Rng stream(std::uint64_t seed, std::uint64_t check, std::size_t dim) {
  return Rng(splitmix(splitmix(seed ^ splitmix(check)) + dim));
}

class Check {
 public:
  Check(std::string id, std::string anchor, double tolerance) {
    rec_.id = std::move(id);
    rec_.anchor = std::move(anchor);
    rec_.tolerance = tolerance;
    rec_.worst_violation = -std::numeric_limits<double>::infinity();
  }

  /// `violation` > 0 means the property is violated by that amount.
  template <class WitnessFn>
  void observe(double violation, WitnessFn&& witness) {
    ++rec_.trials;
    const bool failed = !(violation <= rec_.tolerance);
    if (failed) ++rec_.failures;
    if (violation > rec_.worst_violation || std::isnan(violation)) {
      rec_.worst_violation = violation;
      if (failed) rec_.witness = witness();
    }
  }

  void skip(std::string note) {
    rec_.skipped = true;
    rec_.note = std::move(note);
  }
  void informational() { rec_.informational = true; }
  void note(const std::string& text) {
    if (!rec_.note.empty()) rec_.note += "; ";
    rec_.note += text;
  }

  CheckRecord finish() {
    if (rec_.trials == 0) rec_.worst_violation = 0.0;
    if (rec_.failures == 0) rec_.witness = nullptr;
    return std::move(rec_);
  }

 private:
  CheckRecord rec_;
};

io::Json state_witness(const DensityMatrix& rho) { return io::state_to_json(rho); }

io::Json pair_witness(const DensityMatrix& a, const DensityMatrix& b, double lambda) {
  io::Json w;
  w["rho"] = io::state_to_json(a);
  w["sigma"] = io::state_to_json(b);
  w["lambda"] = lambda;
  return w;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

double unit_draw(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double mode_coherence(const SimplexFunction& f, const DensityMatrix& rho, Mode mode,
                      const RoofConfig& cfg) {
  if (mode == Mode::Direct) return coherence_direct(f.family(), rho);
  return roof_minimize(f, rho, cfg).value;
}

double mode_mixedness(const SimplexFunction& f, const DensityMatrix& rho, Mode mode,
                      const RoofConfig& cfg) {
  return mixedness(f, rho, mode_coherence(f, rho, mode, cfg));
}

}  // namespace

bool SuiteReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass(); });
}

const CheckRecord* SuiteReport::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

io::Json SuiteReport::to_json() const {
  io::Json out;
  out["suite"] = suite;
  out["seed"] = seed;
  out["pass"] = pass();
  io::Json list = io::Json::array();
  for (const auto& c : checks) {
    io::Json j;
    j["id"] = c.id;
    j["anchor"] = c.anchor;
    j["tolerance"] = c.tolerance;
    j["trials"] = c.trials;
    j["failures"] = c.failures;
    j["worst_violation"] = c.worst_violation;
    j["skipped"] = c.skipped;
    j["informational"] = c.informational;
    j["pass"] = c.pass();
    if (!c.note.empty()) j["note"] = c.note;
    j["witness"] = c.witness;
    list.push_back(std::move(j));
  }
  out["checks"] = std::move(list);
  return out;
}

WaveMeasure wave_measure(std::string_view name) {
  if (name == "l1") {
    return {"l1", [](const DensityMatrix& rho) { return coherence_direct("l1", rho); }};
  }
  if (name == "quadratic") {
    return {"quadratic", [](const DensityMatrix& rho) { return quadratic_triality(rho).wave; }};
  }
  throw Error(ErrorCode::UnknownDirectMeasure,
              fmt::format("'{}' is not a wave measure (l1, quadratic)", name));
}

DensityMatrix random_state(std::size_t dim, Rng& rng) {
  std::uniform_int_distribution<std::size_t> rank(1, dim);
  return random_density(dim, rank(rng), rng);
}

SuiteReport run_wave_axioms(const WaveMeasure& measure, std::span<const std::size_t> dims,
                            std::size_t samples, std::uint64_t seed) {
  const auto& w = measure.evaluate;
  Check classical("wave.classical_minimum", "W(dephase(rho)) = 0 <= W(rho)", kAxiomTol);
  Check coherent("wave.coherent_maximum", "W(rho) <= W(max_coherent)", kAxiomTol);
  Check perm("wave.permutation_invariance", "W(P rho P^T) = W(rho)", kAxiomTol);
  Check convex("wave.convexity", "W(l rho + (1-l) sigma) <= l W(rho) + (1-l) W(sigma)", kAxiomTol);

  for (std::size_t dim : dims) {
    Rng rng = stream(seed, 1, dim);
    const double top = w(special_state(SpecialKind::MaxCoherent, dim));
    coherent.note(fmt::format("dim {}: W(max_coherent) = {}", dim, io::format_double(top)));
    for (std::size_t s = 0; s < samples; ++s) {
      const DensityMatrix rho = random_state(dim, rng);
      const DensityMatrix sigma = random_state(dim, rng);
      const double lambda = unit_draw(rng);
      const auto p = random_permutation(dim, rng);

      const double w_rho = w(rho);
      const double w_classical = w(dephase(rho));
      classical.observe(std::max(std::abs(w_classical), w_classical - w_rho),
                        [&] { return state_witness(rho); });
      coherent.observe(w_rho - top, [&] { return state_witness(rho); });
      perm.observe(std::abs(w(permute(rho, p)) - w_rho), [&] {
        io::Json j;
        j["rho"] = state_witness(rho);
        j["permutation"] = p;
        return j;
      });
      const double mixed = w(mix(rho, sigma, lambda));
      convex.observe(mixed - (lambda * w_rho + (1.0 - lambda) * w(sigma)),
                     [&] { return pair_witness(rho, sigma, lambda); });
    }
  }
  SuiteReport report{"wave_axioms:" + measure.name, seed, {}};
  for (Check* c : {&classical, &coherent, &perm, &convex}) report.checks.push_back(c->finish());
  return report;
}

SuiteReport run_particle_axioms(const SimplexFunction& f, std::span<const std::size_t> dims,
                                std::size_t samples, std::uint64_t seed) {
  const auto d = [&](const DensityMatrix& rho) { return path_information(f, rho); };
  Check basis("particle.basis_maximum", "D_f(|i><i|) = 1 >= D_f(rho)", kAxiomTol);
  Check uniform("particle.uniform_minimum", "D_f(uniform diagonal) <= D_f(rho)", kAxiomTol);
  Check perm("particle.permutation_invariance", "D_f(P rho P^T) = D_f(rho)", kAxiomTol);
  Check convex("particle.convexity", "D_f(l rho + (1-l) sigma) <= l D_f(rho) + (1-l) D_f(sigma)",
               kAxiomTol);

  for (std::size_t dim : dims) {
    Rng rng = stream(seed, 2, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const DensityMatrix e = special_state(SpecialKind::Basis, dim, i);
      basis.observe(std::abs(d(e) - 1.0), [&] { return state_witness(e); });
    }
    const double floor = d(special_state(SpecialKind::MaxMixed, dim));
    uniform.note(fmt::format("dim {}: min D = {}", dim, io::format_double(floor)));
    const DensityMatrix coherent = special_state(SpecialKind::MaxCoherent, dim);
    uniform.observe(std::abs(d(coherent) - floor), [&] { return state_witness(coherent); });
    for (std::size_t s = 0; s < samples; ++s) {
      const DensityMatrix rho = random_state(dim, rng);
      const DensityMatrix sigma = random_state(dim, rng);
      const double lambda = unit_draw(rng);
      const auto p = random_permutation(dim, rng);
      const double d_rho = d(rho);
      basis.observe(d_rho - 1.0, [&] { return state_witness(rho); });
      uniform.observe(floor - d_rho, [&] { return state_witness(rho); });
      perm.observe(std::abs(d(permute(rho, p)) - d_rho), [&] {
        io::Json j;
        j["rho"] = state_witness(rho);
        j["permutation"] = p;
        return j;
      });
      convex.observe(d(mix(rho, sigma, lambda)) - (lambda * d_rho + (1.0 - lambda) * d(sigma)),
                     [&] { return pair_witness(rho, sigma, lambda); });
    }
  }
  SuiteReport report{"particle_axioms:" + f.name(), seed, {}};
  for (Check* c : {&basis, &uniform, &perm, &convex}) report.checks.push_back(c->finish());
  return report;
}

std::vector<double> mixedness_sweep(const SimplexFunction& f, Mode mode, FamilyKind family,
                                    const DensityMatrix& rho, std::size_t steps,
                                    const RoofConfig& cfg) {
  if (steps < 2) throw Error(ErrorCode::BadParameter, "a sweep needs at least 2 grid points");
  std::vector<double> values(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(steps - 1);
    values[k] = mode_mixedness(f, family_state(family, rho, p), mode, cfg);
  }
  return values;
}

SuiteReport run_theorem_suite(const SimplexFunction& f, Mode mode, std::span<const std::size_t> dims,
                              std::size_t samples, std::uint64_t seed, const RoofConfig& cfg) {
  if (mode == Mode::Quadratic) {
    throw Error(ErrorCode::BadParameter, "theorem suite runs in direct or roof mode");
  }
  const bool have_c = mode == Mode::Roof || has_direct_measure(f.family());
  const double tol = mode == Mode::Direct ? kAxiomTol : kRoofReportTol;
  const double sweep_tol = mode == Mode::Direct ? kSweepTolDirect : kSweepTolRoof;
  const double concave_tol = mode == Mode::Direct ? kAxiomTol : kSweepTolRoof;

  Check duality("theorem.pure_duality", "C_f(psi) + D_f(psi) = 1", kDualityTol);
  Check ensemble("theorem.ensemble_bound", "f(diag rho) >= sum_j p_j C_f(psi_j)", kAxiomTol);
  Check bound("theorem.mixed_bound", "C_f(rho) + D_f(rho) <= 1", tol);
  Check pure_zero("mixedness.pure_zero", "M_f(psi) = 0", tol);
  Check maximal("mixedness.maximally_mixed", "M_f(I/n) = 1 >= M_f(rho)", tol);
  Check concave("mixedness.concavity", "M_f(l rho + (1-l) sigma) >= l M_f(rho) + (1-l) M_f(sigma)",
                concave_tol);
  Check depol("mixedness.depolarize_monotone", "M_f(p rho + (1-p) I/n) non-increasing in p",
              sweep_tol);
  Check dephase_mix("mixedness.dephase_monotone",
                    "M_f(p rho + (1-p) dephase(rho)) non-increasing in p", sweep_tol);
  Check anti("mixedness.antidephase_monotone",
             "M_f(p rho + (1-p) [I/2 + rho - dephase(rho)]) non-increasing in p (qubits)", sweep_tol);
  Check quad("quadratic.identity", "P + W + M = 1", kQuadraticTol);

  const std::string no_c = fmt::format(
      "no closed-form mixed-state coherence for {}; run in roof mode", f.name());
  if (!have_c) {
    for (Check* c : {&bound, &pure_zero, &maximal, &concave, &depol, &dephase_mix, &anti}) c->skip(no_c);
  } else if (!f.normalized()) {
    maximal.skip(fmt::format("{} is not normalized: f(uniform) != 1", f.name()));
  }
  const bool has_qubits = std::find(dims.begin(), dims.end(), std::size_t{2}) != dims.end();
  if (have_c && !has_qubits) anti.skip("family defined for qubits only; dim 2 not requested");

  const auto sweep_violation = [&](const std::vector<double>& m) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < m.size(); ++k) worst = std::max(worst, m[k + 1] - m[k]);
    return worst;
  };

  for (std::size_t dim : dims) {
    Rng rng = stream(seed, 3, dim);
    std::optional<double> top;
    if (have_c && f.normalized()) {
      const DensityMatrix uniform = special_state(SpecialKind::MaxMixed, dim);
      top = mode_mixedness(f, uniform, mode, cfg);
      maximal.observe(std::abs(*top - 1.0), [&] { return state_witness(uniform); });
    }
    for (std::size_t s = 0; s < samples; ++s) {
      const PureState psi = random_pure(dim, rng);
      const DensityMatrix pure = DensityMatrix::from_pure(psi);
      const double c_psi = coherence_pure(f, psi);
      duality.observe(std::abs(c_psi + path_information(f, pure) - 1.0),
                      [&] { return io::state_to_json(psi); });

      const DensityMatrix rho = random_state(dim, rng);
      const std::size_t rank = spectral_decomposition(rho).rank;
      const std::size_t m = std::uniform_int_distribution<std::size_t>(rank, 2 * dim)(rng);
      const Matrix v = random_isometry(m, rank, rng);
      const Ensemble ens = ensemble_from_isometry(rho, v);
      const double top_rho = f(diagonal(rho));
      ensemble.observe(roof_objective(f, ens) - top_rho, [&] {
        io::Json j;
        j["rho"] = state_witness(rho);
        j["isometry"] = io::to_json(v);
        return j;
      });

      const DensityMatrix sigma = random_state(dim, rng);
      const double lambda = unit_draw(rng);
      quad.observe(std::abs(quadratic_triality(rho).sum() - 1.0), [&] { return state_witness(rho); });
      if (!have_c) continue;

      const double c_rho = mode_coherence(f, rho, mode, cfg);
      const double m_rho = top_rho - c_rho;
      bound.observe(c_rho + (1.0 - top_rho) - 1.0, [&] { return state_witness(rho); });
      pure_zero.observe(std::abs(mode_mixedness(f, pure, mode, cfg)),
                        [&] { return state_witness(pure); });
      if (top) maximal.observe(m_rho - *top, [&] { return state_witness(rho); });

      const double m_sigma = mode_mixedness(f, sigma, mode, cfg);
      const double m_mix = mode_mixedness(f, mix(rho, sigma, lambda), mode, cfg);
      concave.observe(lambda * m_rho + (1.0 - lambda) * m_sigma - m_mix,
                      [&] { return pair_witness(rho, sigma, lambda); });

      depol.observe(sweep_violation(mixedness_sweep(f, mode, FamilyKind::Depolarize, rho,
                                                    kSweepSteps, cfg)),
                    [&] { return state_witness(rho); });
      dephase_mix.observe(sweep_violation(mixedness_sweep(f, mode, FamilyKind::DephaseMix, rho,
                                                          kSweepSteps, cfg)),
                          [&] { return state_witness(rho); });
      if (dim == 2) {
        anti.observe(sweep_violation(mixedness_sweep(f, mode, FamilyKind::Antidephase, rho,
                                                     kSweepSteps, cfg)),
                     [&] { return state_witness(rho); });
      }
    }
  }

  SuiteReport report{fmt::format("theorems:{}:{}", f.name(), to_string(mode)), seed, {}};
  for (Check* c : {&duality, &ensemble, &bound, &pure_zero, &maximal, &concave, &depol, &dephase_mix,
                   &anti, &quad})
    report.checks.push_back(c->finish());
  return report;
}

SuiteReport run_example_suite(std::uint64_t seed, std::size_t samples) {
  const SimplexFunction l1 = builtin("l1");
  const SimplexFunction fidelity = builtin("fidelity");
  constexpr double kExact = 1e-12;

  Check fixed("example.l1_fixed_state", "[[0.5,0.3],[0.3,0.5]] -> (C,D,M) = (0.6,0,0.4)", kExact);
  Check closed("example.l1_closed_forms",
               "D_l1 = 1 - sum_{i!=j} sqrt(rho_ii rho_jj)/(n-1), "
               "M_l1 = sum_{i!=j} (sqrt(rho_ii rho_jj) - |rho_ij|)/(n-1) >= 0",
               kExact);
  Check detector("example.detector_inequality", "M_l1(rho_s) >= M_l1(rho)", kDetectorTol);
  Check detector_sum("example.detector_triality_bound", "C_l1(rho_s) + D_l1(rho_s) + M_l1(rho) <= 1",
                     kDetectorTol);
  Check fid_pure("example.fidelity_pure_duality", "C_F(psi) + D_F(psi) = 1", kExact);
  Check fid_path("example.fidelity_path_information", "D_F(rho) = 1 - sqrt(1 - max_i rho_ii)", kExact);
  Check fid_mixed("example.fidelity_mixedness", "M_F = sqrt(1 - max_i rho_ii) - C_F(rho) >= 0",
                  kRoofReportTol);
  Check fid_det("example.fidelity_detector_bound", "C_F(rho_s) + D_F(rho_s) <= 1", kRoofReportTol);
  fid_det.informational();
  fid_det.note("recorded, not asserted");

  {
    Matrix raw(2, 2);
    raw << 0.5, 0.3, 0.3, 0.5;
    const DensityMatrix rho = validate_density(raw);
    const TrialityReport r = triality_report(l1, rho, Mode::Direct);
    const double dev = std::max({std::abs(r.C - 0.6), std::abs(r.D), std::abs(r.M - 0.4),
                                 std::abs(r.sum - 1.0)});
    fixed.observe(dev, [&] { return io::to_json(r); });
  }

  Rng rng = stream(seed, 4, 0);
  std::uniform_int_distribution<std::size_t> dim_draw(2, 4);
  std::uniform_int_distribution<std::size_t> det_dim_draw(2, 3);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t dim = dim_draw(rng);
    const DensityMatrix rho = random_state(dim, rng);
    const TrialityReport r = triality_report(l1, rho, Mode::Direct);
    double pairs = 0.0;
    double coherences = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        if (i == j) continue;
        pairs += std::sqrt(std::abs(rho(i, i).real()) * std::abs(rho(j, j).real()));
        coherences += std::abs(rho(i, j));
      }
    }
    const double n1 = static_cast<double>(dim - 1);
    const double d_formula = 1.0 - pairs / n1;
    const double m_formula = (pairs - coherences) / n1;
    closed.observe(std::max({std::abs(r.D - d_formula), std::abs(r.M - m_formula), -m_formula}),
                   [&] { return state_witness(rho); });

    const DetectorConfig det = random_detectors(dim, det_dim_draw(rng), rng);
    const DetectorInequality ineq = detector_inequality_report(rho, det);
    const auto det_witness = [&] {
      io::Json j;
      j["rho"] = state_witness(rho);
      j["detectors"] = io::detectors_to_json(det);
      return j;
    };
    detector.observe(ineq.mixedness - ineq.mixedness_with_detectors, det_witness);
    detector_sum.observe(ineq.mixed_sum - 1.0, det_witness);

    const PureState qubit = random_pure(2, rng);
    fid_pure.observe(std::abs(coherence_pure(fidelity, qubit) +
                              path_information(fidelity, DensityMatrix::from_pure(qubit)) - 1.0),
                     [&] { return io::state_to_json(qubit); });

    double largest = 0.0;
    for (std::size_t i = 0; i < dim; ++i) largest = std::max(largest, rho(i, i).real());
    fid_path.observe(std::abs(path_information(fidelity, rho) - (1.0 - std::sqrt(1.0 - largest))),
                     [&] { return state_witness(rho); });
  }

  // Fidelity coherence has no closed form on mixed states, so these go
  // through the convex roof and use fewer, smaller states.
  const RoofConfig cfg{.m = 0, .restarts = 8, .max_iters = 2000, .tol = 1e-8, .seed = seed};
  const std::size_t roof_cases = std::min<std::size_t>(samples, 10);
  for (std::size_t s = 0; s < roof_cases; ++s) {
    const std::size_t dim = 2 + s % 2;
    const DensityMatrix rho = random_state(dim, rng);
    double largest = 0.0;
    for (std::size_t i = 0; i < dim; ++i) largest = std::max(largest, rho(i, i).real());
    const double c = roof_minimize(fidelity, rho, cfg).value;
    fid_mixed.observe(c - std::sqrt(1.0 - largest), [&] { return state_witness(rho); });

    const DetectorConfig det = random_detectors(dim, 2, rng);
    const DensityMatrix reduced = reduce_system(rho, det);
    const double c_s = roof_minimize(fidelity, reduced, cfg).value;
    fid_det.observe(c_s + path_information(fidelity, reduced) - 1.0, [&] {
      io::Json j;
      j["rho"] = state_witness(rho);
      j["detectors"] = io::detectors_to_json(det);
      return j;
    });
  }

  SuiteReport report{"examples", seed, {}};
  for (Check* c : {&fixed, &closed, &detector, &detector_sum, &fid_pure, &fid_path, &fid_mixed, &fid_det})
    report.checks.push_back(c->finish());
  return report;
}

}  // namespace triality::harness
