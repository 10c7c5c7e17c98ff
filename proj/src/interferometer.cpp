#include "triality/interferometer.hpp"

#include <fmt/format.h>

#include "triality/measures.hpp"

namespace triality {

DetectorConfig::DetectorConfig(std::vector<PureState> detectors) : detectors_(std::move(detectors)) {
  if (detectors_.empty()) throw Error(ErrorCode::BadDim, "no detector states given");
  const std::size_t dd = detectors_.front().dim();
  for (std::size_t i = 0; i < detectors_.size(); ++i) {
    if (detectors_[i].dim() != dd) {
      throw Error(ErrorCode::DimMismatch,
                  fmt::format("detector {} has dim {}, detector 0 has dim {}", i,
                              detectors_[i].dim(), dd));
    }
  }
}

Matrix detector_gram(const DetectorConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.n());
  Matrix g(n, n);
  const auto& d = cfg.detectors();
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      g(i, j) = d[static_cast<std::size_t>(i)].amplitudes().dot(d[static_cast<std::size_t>(j)].amplitudes());
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

namespace {

void require_paths(const DensityMatrix& rho, const DetectorConfig& cfg) {
  if (rho.dim() != cfg.n()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("state has {} paths, detector config has {}", rho.dim(), cfg.n()));
  }
}

}  // namespace

DensityMatrix reduce_system(const DensityMatrix& rho, const DetectorConfig& cfg) {
  require_paths(rho, cfg);
  const Matrix g = detector_gram(cfg);
  Matrix m = rho.matrix().cwiseProduct(g.transpose());
  // G_ii = 1 exactly, so the diagonal is untouched.
  return DensityMatrix(std::move(m), detail::TrustedTag{});
}

DensityMatrix attach_detectors(const DensityMatrix& rho, const DetectorConfig& cfg) {
  require_paths(rho, cfg);
  const auto n = static_cast<Eigen::Index>(cfg.n());
  const auto dd = static_cast<Eigen::Index>(cfg.detector_dim());
  const auto& d = cfg.detectors();
  Matrix joint(n * dd, n * dd);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector& di = d[static_cast<std::size_t>(i)].amplitudes();
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector& dj = d[static_cast<std::size_t>(j)].amplitudes();
      joint.block(i * dd, j * dd, dd, dd) = rho.matrix()(i, j) * (di * dj.adjoint());
    }
  }
  if (joint.rows() < 2) return DensityMatrix(std::move(joint), detail::TrustedTag{});
  return validate_density(joint);
}

DetectorInequality detector_inequality_report(const DensityMatrix& rho, const DetectorConfig& cfg) {
  const SimplexFunction l1 = builtin("l1");
  const DensityMatrix reduced = reduce_system(rho, cfg);
  DetectorInequality out;
  out.coherence_with_detectors = coherence_direct("l1", reduced);
  out.path_information_with_detectors = path_information(l1, reduced);
  out.mixedness_with_detectors = mixedness(l1, reduced, out.coherence_with_detectors);
  out.mixedness = mixedness(l1, rho, coherence_direct("l1", rho));
  out.mixed_sum = out.coherence_with_detectors + out.path_information_with_detectors + out.mixedness;
  out.holds = out.mixedness_with_detectors >= out.mixedness - kDetectorTol;
  return out;
}

DetectorConfig random_detectors(std::size_t n, std::size_t detector_dim, Rng& rng) {
  std::vector<PureState> detectors;
  detectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (detector_dim == 1) {
      detectors.emplace_back(Vector::Ones(1));
    } else {
      detectors.push_back(random_pure(detector_dim, rng));
    }
  }
  return DetectorConfig(std::move(detectors));
}

}  // namespace triality
