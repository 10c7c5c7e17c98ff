#include "triality/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace triality::io {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_into(const Json& j, std::string& out, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += Json(key).dump();
        out += ": ";
        dump_into(value, out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& v : j) flat = flat && is_scalar(v);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        pad(depth + 1);
        dump_into(j[i], out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

[[noreturn]] void bad_format(const std::string& what) { throw Error(ErrorCode::BadFormat, what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) bad_format("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) bad_format(fmt::format("missing field \"{}\"", key));
  return *it;
}

std::size_t require_size(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    bad_format(fmt::format("field \"{}\" must be a positive integer", key));
  }
  return v.get<std::size_t>();
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt::format("{:.17g}", x);
}

std::string dump(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += "\n";
  return out;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad_format(fmt::format("expected a complex number [re, im], got {}", j.dump()));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad_format("expected a non-empty array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad_format("expected a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      bad_format(fmt::format("row {} has a different length than row 0", i));
    }
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  Json out;
  out["kind"] = "density";
  out["dim"] = rho.dim();
  out["matrix"] = to_json(rho.matrix());
  return out;
}

Json state_to_json(const PureState& psi) {
  Json out;
  out["kind"] = "pure";
  out["dim"] = psi.dim();
  out["amplitudes"] = to_json(psi.amplitudes());
  return out;
}

StateFile state_from_json(const Json& j) {
  const Json& kind_field = require(j, "kind");
  if (!kind_field.is_string()) bad_format("field \"kind\" must be a string");
  const auto kind = kind_field.get<std::string>();
  if (kind != "density" && kind != "pure") {
    bad_format(fmt::format("field \"kind\" must be \"density\" or \"pure\", got \"{}\"", kind));
  }
  const std::size_t dim = require_size(j, "dim");

  if (kind == "pure" && j.contains("amplitudes")) {
    Vector amps = vector_from_json(j["amplitudes"]);
    if (static_cast<std::size_t>(amps.size()) != dim) {
      bad_format(fmt::format("\"amplitudes\" has {} entries, \"dim\" says {}", amps.size(), dim));
    }
    PureState psi(std::move(amps));
    if (psi.dim() < 2) throw Error(ErrorCode::BadDim, "dimension 1 is below 2");
    return StateFile{DensityMatrix::from_pure(psi), psi};
  }

  Matrix raw = matrix_from_json(require(j, "matrix"));
  if (static_cast<std::size_t>(raw.rows()) != dim || static_cast<std::size_t>(raw.cols()) != dim) {
    bad_format(fmt::format("\"matrix\" is {}x{}, \"dim\" says {}", raw.rows(), raw.cols(), dim));
  }
  DensityMatrix rho = validate_density(raw);
  if (kind == "density") return StateFile{std::move(rho), std::nullopt};

  const double purity = rho.purity();
  if (std::abs(purity - 1.0) > kRejectTol) {
    bad_format(fmt::format("kind \"pure\" but tr(rho^2) = {:.17g}", purity));
  }
  auto spec = spectral_decomposition(rho);
  return StateFile{std::move(rho), std::move(spec.eigenvectors.front())};
}

Json detectors_to_json(const DetectorConfig& cfg) {
  Json out;
  out["n"] = cfg.n();
  out["detector_dim"] = cfg.detector_dim();
  Json list = Json::array();
  for (const auto& d : cfg.detectors()) list.push_back(to_json(d.amplitudes()));
  out["detectors"] = std::move(list);
  return out;
}

DetectorConfig detectors_from_json(const Json& j) {
  const std::size_t n = require_size(j, "n");
  const std::size_t dd = require_size(j, "detector_dim");
  const Json& list = require(j, "detectors");
  if (!list.is_array() || list.size() != n) {
    bad_format(fmt::format("\"detectors\" must list exactly n = {} states", n));
  }
  std::vector<PureState> detectors;
  detectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v = vector_from_json(list[i]);
    if (static_cast<std::size_t>(v.size()) != dd) {
      bad_format(fmt::format("detector {} has {} entries, \"detector_dim\" says {}", i, v.size(), dd));
    }
    detectors.emplace_back(std::move(v));
  }
  return DetectorConfig(std::move(detectors));
}

Json to_json(const TrialityReport& report) {
  Json out;
  out["measure_name"] = report.measure_name;
  out["mode"] = std::string(to_string(report.mode));
  out["C"] = report.C;
  out["D"] = report.D;
  out["M"] = report.M;
  out["sum"] = report.sum;
  out["residual"] = report.residual;
  Json meta;
  meta["dim"] = report.dim;
  meta["max_value"] = report.max_value;
  meta["tolerance"] = report.tolerance;
  meta["bound_ok"] = report.bound_ok;
  meta["mixedness_warning"] = report.mixedness_warning;
  if (report.roof) {
    Json roof;
    roof["upper_bound"] = report.roof->upper_bound;
    roof["m"] = report.roof->m;
    roof["restarts_used"] = report.roof->restarts_used;
    roof["iterations"] = report.roof->iterations;
    roof["converged"] = report.roof->converged;
    roof["spread"] = report.roof->spread;
    meta["roof"] = std::move(roof);
  }
  out["metadata"] = std::move(meta);
  return out;
}

Json to_json(const RoofResult& result, const std::string& measure_name) {
  Json out;
  out["measure_name"] = measure_name;
  out["value"] = result.value;
  out["upper_bound"] = true;
  out["m"] = result.m;
  out["restarts_used"] = result.restarts_used;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  out["spread"] = result.spread;
  Json ensemble;
  ensemble["weights"] = result.ensemble.weights;
  Json states = Json::array();
  for (const auto& s : result.ensemble.states) states.push_back(to_json(s.amplitudes()));
  ensemble["states"] = std::move(states);
  out["ensemble"] = std::move(ensemble);
  return out;
}

Json to_json(const DetectorInequality& report) {
  Json out;
  out["measure"] = "l1";
  out["M_of_rho_s"] = report.mixedness_with_detectors;
  out["M_of_rho"] = report.mixedness;
  out["C_of_rho_s"] = report.coherence_with_detectors;
  out["D_of_rho_s"] = report.path_information_with_detectors;
  out["C_s_plus_D_s_plus_M"] = report.mixed_sum;
  out["holds"] = report.holds;
  return out;
}

Json to_json(const ConditionReport& report) {
  Json out;
  out["dim"] = report.dim;
  out["samples"] = report.samples;
  out["zero_on_vertices"] = report.zero_on_vertices;
  out["permutation_invariant"] = report.permutation_invariant;
  out["concave"] = report.concave;
  out["worst_vertex_value"] = report.worst_vertex_value;
  out["worst_permutation_gap"] = report.worst_permutation_gap;
  out["worst_concavity_gap"] = report.worst_concavity_gap;
  if (!report.concave) {
    Json witness;
    witness["x"] = report.witness_x;
    witness["y"] = report.witness_y;
    witness["lambda"] = report.witness_lambda;
    out["concavity_witness"] = std::move(witness);
  }
  out["pass"] = report.pass();
  return out;
}

std::string csv_row(const TrialityReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{}", r.measure_name, to_string(r.mode), r.dim,
                     format_double(r.C), format_double(r.D), format_double(r.M),
                     format_double(r.sum), format_double(r.residual));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_format(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad_format(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) bad_format(fmt::format("cannot write '{}'", path));
  out << contents;
  if (!out) bad_format(fmt::format("failed writing '{}'", path));
}

}  // namespace triality::io
