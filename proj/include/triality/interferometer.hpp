#pragma once

#include <cstddef>
#include <vector>

#include "triality/states.hpp"

namespace triality {

/// n paths, each marked by a unit detector state |d_i> in a space of
/// dimension detector_dim.
class DetectorConfig {
 public:
  explicit DetectorConfig(std::vector<PureState> detectors);

  std::size_t n() const noexcept { return detectors_.size(); }
  std::size_t detector_dim() const noexcept { return detectors_.front().dim(); }
  const std::vector<PureState>& detectors() const noexcept { return detectors_; }

 private:
  std::vector<PureState> detectors_;
};

/// G_ij = <d_i|d_j>
Matrix detector_gram(const DetectorConfig& cfg);

/// Reduced path state after tracing out the detectors:
/// (rho_s)_ij = rho_ij <d_j|d_i>, the Schur product of rho with G^T.
DensityMatrix reduce_system(const DensityMatrix& rho, const DetectorConfig& cfg);

/// rho_sd = sum_ij rho_ij |i><j| (x) |d_i><d_j|, path index major.
DensityMatrix attach_detectors(const DensityMatrix& rho, const DetectorConfig& cfg);

struct DetectorInequality {
  double mixedness_with_detectors = 0.0;  // M_l1(rho_s)
  double mixedness = 0.0;                 // M_l1(rho)
  double coherence_with_detectors = 0.0;  // C_l1(rho_s)
  double path_information_with_detectors = 0.0;  // D_l1(rho_s)
  double mixed_sum = 0.0;  // C_l1(rho_s) + D_l1(rho_s) + M_l1(rho)
  bool holds = false;      // M_l1(rho_s) >= M_l1(rho) - 1e-10
};

inline constexpr double kDetectorTol = 1e-10;

DetectorInequality detector_inequality_report(const DensityMatrix& rho, const DetectorConfig& cfg);

/// Detectors drawn as Haar-random unit vectors.
DetectorConfig random_detectors(std::size_t n, std::size_t detector_dim, Rng& rng);

}  // namespace triality
