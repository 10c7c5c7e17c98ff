#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "triality/convex_roof.hpp"
#include "triality/interferometer.hpp"
#include "triality/simplex_functions.hpp"
#include "triality/triality_report.hpp"

namespace triality::io {

using Json = nlohmann::ordered_json;

/// Doubles are written with 17 significant digits ("%.17g"), which round-trips
/// every IEEE-754 value exactly. Non-finite values become null.
std::string format_double(double x);

/// Serializes with two-space indentation; arrays holding only scalars stay on
/// one line.
std::string dump(const Json& value);

Json to_json(cplx z);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
cplx complex_from_json(const Json& j);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

// State files:
//   {"kind":"density","dim":n,"matrix":[[[re,im],...],...]}
//   {"kind":"pure","dim":n,"amplitudes":[[re,im],...]}
// A "pure" file may also carry a rank-one "matrix".
struct StateFile {
  DensityMatrix density;
  std::optional<PureState> pure;
};

Json state_to_json(const DensityMatrix& rho);
Json state_to_json(const PureState& psi);
StateFile state_from_json(const Json& j);

// Detector files: {"n":k,"detector_dim":m,"detectors":[[[re,im],...],...]}
Json detectors_to_json(const DetectorConfig& cfg);
DetectorConfig detectors_from_json(const Json& j);

Json to_json(const TrialityReport& report);
Json to_json(const RoofResult& result, const std::string& measure_name);
Json to_json(const DetectorInequality& report);
Json to_json(const ConditionReport& report);

inline constexpr const char* kTrialityCsvHeader = "measure,mode,dim,C,D,M,sum,residual";
std::string csv_row(const TrialityReport& report);

/// Reads a whole file; throws BadFormat naming the path on failure.
std::string read_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace triality::io
