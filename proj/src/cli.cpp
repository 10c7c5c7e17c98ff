#include "triality/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "triality/harness.hpp"
#include "triality/interferometer.hpp"
#include "triality/io.hpp"
#include "triality/triality_report.hpp"

namespace triality::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(fmt::format("{} must be a non-negative integer, got '{}'", source, text));
  }
  return value;
}

// --seed wins over TRIALITY_SEED; randomized commands without either are
// rejected so every run is reproducible.
std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
  if (flag) return parse_seed_text(*flag, "--seed");
  if (const char* env = std::getenv("TRIALITY_SEED"); env && *env) {
    return parse_seed_text(env, "TRIALITY_SEED");
  }
  throw UsageError("this command is randomized: pass --seed or set TRIALITY_SEED");
}

io::StateFile load_state(const std::string& path) {
  try {
    return io::state_from_json(io::read_json_file(path));
  } catch (const Error& e) {
    throw InputError(fmt::format("--state {}: {}", path, e.what()));
  }
}

DetectorConfig load_detectors(const std::string& path) {
  try {
    return io::detectors_from_json(io::read_json_file(path));
  } catch (const Error& e) {
    throw InputError(fmt::format("--detectors {}: {}", path, e.what()));
  }
}

SimplexFunction make_function(const std::string& name, bool normalized) {
  try {
    SimplexFunction f = builtin(name);
    return normalized ? normalize(f) : f;
  } catch (const Error& e) {
    throw UsageError(fmt::format("--f: {}", e.what()));
  }
}

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  try {
    io::write_file(out_path, text);
  } catch (const Error& e) {
    throw InputError(fmt::format("--out: {}", e.what()));
  }
}

struct RoofFlags {
  std::size_t m = 0;
  std::size_t restarts = 16;
  std::size_t iters = 2000;
  double tol = 1e-8;
  std::optional<std::string> seed;

  void attach(CLI::App* app) {
    app->add_option("--m", m, "Ensemble size (0: min(r^2, 2 dim))");
    app->add_option("--restarts", restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
    app->add_option("--iters", iters, "Iteration budget per restart");
    app->add_option("--tol", tol, "Step-size floor")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Random seed (default: $TRIALITY_SEED)");
  }

  RoofConfig config() const {
    return RoofConfig{.m = m, .restarts = restarts, .max_iters = iters, .tol = tol,
                      .seed = resolve_seed(seed)};
  }
};

const std::vector<std::string> kFunctionNames = {"l1", "fidelity", "entropy"};

// --- eval -------------------------------------------------------------------

struct EvalCmd {
  std::string state, f = "l1", mode = "direct", out;
  bool normalize = false;
  RoofFlags roof;

  void attach(CLI::App* app) {
    app->add_option("--state", state, "State file")->required();
    app->add_option("--f", f, "Simplex function")->check(CLI::IsMember(kFunctionNames));
    app->add_flag("--normalize", normalize, "Scale f so that f(uniform) = 1");
    app->add_option("--mode", mode, "direct | roof | quadratic")
        ->check(CLI::IsMember({"direct", "roof", "quadratic"}));
    roof.attach(app);
    app->add_option("--out", out, "Output file (.json or .csv)");
  }

  int operator()(std::ostream& os) const {
    const auto input = load_state(state);
    const SimplexFunction fn = make_function(f, normalize);
    const Mode m = parse_mode(mode);
    if (m == Mode::Direct && !has_direct_measure(fn.family())) {
      throw UsageError(fmt::format("--mode direct: {} has no closed form on mixed states; use --mode roof", f));
    }
    const RoofConfig cfg = m == Mode::Roof ? roof.config() : RoofConfig{};
    const TrialityReport report = triality_report(fn, input.density, m, cfg);
    if (ends_with(out, ".csv")) {
      emit(out, fmt::format("{}\n{}\n", io::kTrialityCsvHeader, io::csv_row(report)), os);
    } else {
      emit(out, io::dump(io::to_json(report)), os);
    }
    return kOk;
  }
};

// --- roof -------------------------------------------------------------------

struct RoofCmd {
  std::string state, f = "l1", out;
  bool normalize = false;
  RoofFlags roof;

  void attach(CLI::App* app) {
    app->add_option("--state", state, "State file")->required();
    app->add_option("--f", f, "Simplex function")->check(CLI::IsMember(kFunctionNames));
    app->add_flag("--normalize", normalize, "Scale f so that f(uniform) = 1");
    roof.attach(app);
    app->add_option("--out", out, "Output file (.json or .csv)");
  }

  int operator()(std::ostream& os) const {
    const auto input = load_state(state);
    const SimplexFunction fn = make_function(f, normalize);
    const RoofConfig cfg = roof.config();
    const RoofResult result = roof_minimize(fn, input.density, cfg);
    if (ends_with(out, ".csv")) {
      emit(out,
           fmt::format("measure,dim,value,m,restarts_used,iterations,converged,spread\n{},{},{},{},{},{},{},{}\n",
                       fn.name(), input.density.dim(), io::format_double(result.value), result.m,
                       result.restarts_used, result.iterations, result.converged ? "true" : "false",
                       io::format_double(result.spread)),
           os);
    } else {
      emit(out, io::dump(io::to_json(result, fn.name())), os);
    }
    return kOk;
  }
};

// --- sweep ------------------------------------------------------------------

struct SweepCmd {
  std::string family, state, f = "l1", mode = "direct", out;
  bool normalize = false;
  std::size_t steps = harness::kSweepSteps;
  RoofFlags roof;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "depolarize | dephase_mix | antidephase")
        ->required()
        ->check(CLI::IsMember({"depolarize", "dephase_mix", "antidephase"}));
    app->add_option("--state", state, "Base state file")->required();
    app->add_option("--f", f, "Simplex function")->check(CLI::IsMember(kFunctionNames));
    app->add_flag("--normalize", normalize, "Scale f so that f(uniform) = 1");
    app->add_option("--mode", mode, "direct | roof")->check(CLI::IsMember({"direct", "roof"}));
    app->add_option("--steps", steps, "Grid points including p = 0 and p = 1")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100001}));
    roof.attach(app);
    app->add_option("--out", out, "Output file (.json or .csv)");
  }

  int operator()(std::ostream& os) const {
    const auto input = load_state(state);
    const SimplexFunction fn = make_function(f, normalize);
    const Mode m = parse_mode(mode);
    if (m == Mode::Direct && !has_direct_measure(fn.family())) {
      throw UsageError(fmt::format("--mode direct: {} has no closed form on mixed states; use --mode roof", f));
    }
    const FamilyKind kind = parse_family_kind(family);
    const RoofConfig cfg = m == Mode::Roof ? roof.config() : RoofConfig{};

    std::vector<std::pair<double, TrialityReport>> rows;
    for (std::size_t k = 0; k < steps; ++k) {
      const double p = 1.0 - static_cast<double>(k) / static_cast<double>(steps - 1);
      DensityMatrix sigma = [&] {
        try {
          return family_state(kind, input.density, p);
        } catch (const Error& e) {
          throw InputError(fmt::format("--state {} with --family {}: {}", state, family, e.what()));
        }
      }();
      rows.emplace_back(p, triality_report(fn, sigma, m, cfg));
    }

    if (ends_with(out, ".csv")) {
      std::string text = "family,p,C,D,M,sum,mode,measure\n";
      for (const auto& [p, r] : rows) {
        text += fmt::format("{},{},{},{},{},{},{},{}\n", family, io::format_double(p),
                            io::format_double(r.C), io::format_double(r.D), io::format_double(r.M),
                            io::format_double(r.sum), mode, r.measure_name);
      }
      emit(out, text, os);
    } else {
      Json doc;
      doc["family"] = family;
      doc["measure"] = fn.name();
      doc["mode"] = mode;
      doc["dim"] = input.density.dim();
      Json list = Json::array();
      for (const auto& [p, r] : rows) {
        Json row;
        row["family"] = family;
        row["p"] = p;
        row["C"] = r.C;
        row["D"] = r.D;
        row["M"] = r.M;
        row["sum"] = r.sum;
        row["mode"] = mode;
        row["measure"] = r.measure_name;
        list.push_back(std::move(row));
      }
      doc["rows"] = std::move(list);
      emit(out, io::dump(doc), os);
    }
    return kOk;
  }
};

// --- interf -----------------------------------------------------------------

struct InterfCmd {
  std::string state, detectors, measure = "l1", out;

  void attach(CLI::App* app) {
    app->add_option("--state", state, "State file")->required();
    app->add_option("--detectors", detectors, "Detector file")->required();
    app->add_option("--measure", measure, "Measure (l1)")->check(CLI::IsMember({"l1"}));
    app->add_option("--out", out, "Output file (.json or .csv)");
  }

  int operator()(std::ostream& os) const {
    const auto input = load_state(state);
    const DetectorConfig cfg = load_detectors(detectors);
    if (cfg.n() != input.density.dim()) {
      throw InputError(fmt::format("--detectors {}: {} detectors for a {}-path state", detectors,
                                   cfg.n(), input.density.dim()));
    }
    const DetectorInequality report = detector_inequality_report(input.density, cfg);
    if (ends_with(out, ".csv")) {
      emit(out,
           fmt::format("measure,dim,M_of_rho_s,M_of_rho,C_of_rho_s,D_of_rho_s,C_s_plus_D_s_plus_M,holds\n"
                       "l1,{},{},{},{},{},{},{}\n",
                       input.density.dim(), io::format_double(report.mixedness_with_detectors),
                       io::format_double(report.mixedness),
                       io::format_double(report.coherence_with_detectors),
                       io::format_double(report.path_information_with_detectors),
                       io::format_double(report.mixed_sum), report.holds ? "true" : "false"),
           os);
    } else {
      Json doc = io::to_json(report);
      doc["rho_s"] = io::state_to_json(reduce_system(input.density, cfg));
      emit(out, io::dump(doc), os);
    }
    return kOk;
  }
};

// --- check ------------------------------------------------------------------

struct CheckCmd {
  std::string suite = "all", functions = "l1,entropy,fidelity", mode = "direct", dims = "2..4", out;
  std::size_t samples = 200;
  RoofFlags roof;

  void attach(CLI::App* app) {
    app->add_option("--suite", suite, "axioms | theorems | examples | all")
        ->check(CLI::IsMember({"axioms", "theorems", "examples", "all"}));
    app->add_option("--f", functions, "Comma-separated simplex functions");
    app->add_option("--mode", mode, "direct | roof")->check(CLI::IsMember({"direct", "roof"}));
    app->add_option("--dims", dims, "Dimensions, e.g. 2..6 or 2,3");
    app->add_option("--samples", samples, "Trials per check and dimension")->check(CLI::PositiveNumber);
    roof.attach(app);
    app->add_option("--out", out, "Output file (.json)");
  }

  int operator()(std::ostream& os) const {
    const std::uint64_t seed = resolve_seed(roof.seed);
    const std::vector<std::size_t> dim_list = parse_dims(dims);
    std::vector<SimplexFunction> fs;
    std::stringstream names(functions);
    for (std::string name; std::getline(names, name, ',');) {
      if (name.empty()) continue;
      if (std::find(kFunctionNames.begin(), kFunctionNames.end(), name) == kFunctionNames.end()) {
        throw UsageError(fmt::format("--f: '{}' is not one of l1, fidelity, entropy", name));
      }
      fs.push_back(builtin(name));
    }
    if (fs.empty()) throw UsageError("--f: no functions given");
    const Mode m = parse_mode(mode);
    RoofConfig cfg{.m = roof.m, .restarts = roof.restarts, .max_iters = roof.iters, .tol = roof.tol,
                   .seed = seed};

    std::vector<harness::SuiteReport> reports;
    const bool all = suite == "all";
    if (all || suite == "axioms") {
      for (const char* w : {"l1", "quadratic"})
        reports.push_back(harness::run_wave_axioms(harness::wave_measure(w), dim_list, samples, seed));
      for (const auto& f : fs) reports.push_back(harness::run_particle_axioms(f, dim_list, samples, seed));
    }
    if (all || suite == "theorems") {
      for (const auto& f : fs)
        reports.push_back(harness::run_theorem_suite(f, m, dim_list, samples, seed, cfg));
    }
    if (all || suite == "examples") reports.push_back(harness::run_example_suite(seed, samples));

    bool pass = true;
    Json doc;
    doc["seed"] = seed;
    doc["dims"] = dim_list;
    doc["samples"] = samples;
    doc["mode"] = mode;
    Json list = Json::array();
    for (const auto& r : reports) {
      pass = pass && r.pass();
      list.push_back(r.to_json());
    }
    doc["pass"] = pass;
    doc["suites"] = std::move(list);
    emit(out, io::dump(doc), os);
    return pass ? kOk : kCheckFailed;
  }
};

// --- gen --------------------------------------------------------------------

struct GenCmd {
  std::string kind, out;
  std::size_t dim = 0;
  std::optional<std::size_t> index, rank;
  std::optional<std::string> seed;

  void attach(CLI::App* app) {
    app->add_option("kind", kind, "basis | max_coherent | max_mixed | random_pure | random_density")
        ->required()
        ->check(CLI::IsMember({"basis", "max_coherent", "max_mixed", "random_pure", "random_density"}));
    app->add_option("--dim", dim, "Dimension")->required();
    app->add_option("--index", index, "Basis index (basis)");
    app->add_option("--rank", rank, "Rank (random_density; default dim)");
    app->add_option("--seed", seed, "Random seed (default: $TRIALITY_SEED)");
    app->add_option("--out", out, "Output file");
  }

  int operator()(std::ostream& os) const {
    Json doc;
    try {
      if (kind == "random_pure") {
        doc = io::state_to_json(random_pure(dim, resolve_seed(seed)));
      } else if (kind == "random_density") {
        doc = io::state_to_json(random_density(dim, rank.value_or(dim), resolve_seed(seed)));
      } else {
        doc = io::state_to_json(special_state(parse_special_kind(kind), dim, index));
      }
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    emit(out, io::dump(doc), os);
    return kOk;
  }
};

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wave-particle-mixedness triality toolkit", "triality"};
  app.require_subcommand(1);

  EvalCmd eval;
  RoofCmd roof;
  SweepCmd sweep;
  InterfCmd interf;
  CheckCmd check;
  GenCmd gen;
  auto* eval_app = app.add_subcommand("eval", "Evaluate C, D, M for a state");
  auto* roof_app = app.add_subcommand("roof", "Minimize the convex roof for a state");
  auto* sweep_app = app.add_subcommand("sweep", "Evaluate C, D, M along a free-state family");
  auto* interf_app = app.add_subcommand("interf", "Interferometer with path detectors");
  auto* check_app = app.add_subcommand("check", "Run the randomized property suites");
  auto* gen_app = app.add_subcommand("gen", "Write a state file");
  eval.attach(eval_app);
  roof.attach(roof_app);
  sweep.attach(sweep_app);
  interf.attach(interf_app);
  check.attach(check_app);
  gen.attach(gen_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (eval_app->parsed()) return eval(out);
    if (roof_app->parsed()) return roof(out);
    if (sweep_app->parsed()) return sweep(out);
    if (interf_app->parsed()) return interf(out);
    if (check_app->parsed()) return check(out);
    if (gen_app->parsed()) return gen(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::InvalidConfig ||
                       e.code() == ErrorCode::UnknownFunction ||
                       e.code() == ErrorCode::UnknownDirectMeasure;
    err << (usage ? "usage error: " : "invalid input: ") << e.what() << "\n";
    return usage ? kUsage : kInvalidInput;
  }
  return kUsage;
}

}  // namespace

std::vector<std::size_t> parse_dims(const std::string& text) {
  const auto number = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < kMinRandomDim || v > kMaxRandomDim) {
      throw UsageError(fmt::format("--dims: '{}' is not a dimension in [{}, {}]", s, kMinRandomDim,
                                   kMaxRandomDim));
    }
    return v;
  };
  std::vector<std::size_t> dims;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::size_t lo = number(std::string_view(text).substr(0, dots));
    const std::size_t hi = number(std::string_view(text).substr(dots + 2));
    if (lo > hi) throw UsageError(fmt::format("--dims: empty range '{}'", text));
    for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) dims.push_back(number(part));
  if (dims.empty()) throw UsageError("--dims: no dimensions given");
  return dims;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace triality::cli
