#include "qmeas/collapse.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qmeas {

void MeasurementEvent::validate(const Tolerances& tols) const {
  if (outcomes.empty()) throw ValidationError("measurement event has an empty outcome set");
  for (double v : outcomes) {
    if (!sd.snap(v, tols.cluster_tol)) {
      throw UnknownSpectralPoint("event outcome is not in the spectrum");
    }
  }
  if (basis) basis->validate_against(sd, tols);
}

namespace {

// Kraus projectors of the unnormalized part of each rule.
std::vector<Matrix> kraus_projectors(UpdateKind kind, const MeasurementEvent& event,
                                     const Tolerances& tols) {
  std::vector<Matrix> out;
  switch (kind) {
    case UpdateKind::standard: {
      if (event.outcomes.size() != 1) {
        throw ValidationError("standard collapse takes a single outcome");
      }
      out.push_back(event.sd.projector_of(event.outcomes[0], tols.cluster_tol));
      break;
    }
    case UpdateKind::subjective: {
      std::vector<double> seen;
      for (double v : event.outcomes) {
        const double snapped = *event.sd.snap(v, tols.cluster_tol);
        if (std::find(seen.begin(), seen.end(), snapped) != seen.end()) continue;
        seen.push_back(snapped);
        out.push_back(event.sd.projector_of(snapped, tols.cluster_tol));
      }
      break;
    }
    case UpdateKind::lueders_block: {
      out.push_back(event.sd.spectral_projector(event.outcomes, tols.cluster_tol));
      break;
    }
    case UpdateKind::contextual: {
      if (!event.basis) throw BasisMismatch("contextual collapse requires a measurement basis");
      event.basis->validate_against(event.sd, tols);
      for (const auto& elem : event.basis->elements()) {
        for (double v : event.outcomes) {
          const double snapped = *event.sd.snap(v, tols.cluster_tol);
          if (*event.sd.snap(elem.label, tols.cluster_tol) == snapped) {
            out.push_back(elem.projector);
            break;
          }
        }
      }
      break;
    }
  }
  return out;
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& x) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus) out += k * x * k;
  return out;
}

}  // namespace

UpdateMap to_update_map(UpdateKind kind, const MeasurementEvent& event,
                        const Tolerances& tols) {
  event.validate(tols);
  const auto kraus = kraus_projectors(kind, event, tols);
  const int n = event.sd.dim();
  Matrix choi = Matrix::Zero(n * n, n * n);
  // C = sum_j vec-rank-one contributions; block (k,l) is Phi(|k><l|).
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Matrix unit = Matrix::Zero(n, n);
      unit(k, l) = 1.0;
      choi.block(k * n, l * n, n, n) = apply_kraus(kraus, unit);
    }
  }
  return {kind, event, std::move(choi)};
}

bool update_maps_equal(const UpdateMap& a, const UpdateMap& b, double eq_tol) {
  if (a.choi.rows() != b.choi.rows()) return false;
  // Threshold scales with the Choi dimension n^2.
  return (a.choi - b.choi).norm() <= eq_tol * static_cast<double>(a.choi.rows());
}

Matrix apply_unnormalized(const UpdateMap& map, const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      out += x(k, l) * map.choi.block(k * n, l * n, n, n);
    }
  }
  return out;
}

DensityState apply_update(const UpdateMap& map, const DensityState& rho,
                          const Tolerances& tols) {
  const int n = rho.dim();
  if (rho.is_null()) return DensityState::null_state(n);
  const Matrix raw = hermitize(apply_unnormalized(map, rho.matrix()));
  const double p = raw.trace().real();
  if (p <= tols.prob_floor) return DensityState::null_state(n);
  return DensityState::from_matrix(raw / p, tols);
}

double born_probability(const DensityState& rho, const std::vector<double>& delta,
                        const SpectralDecomposition& sd, const Tolerances& tols) {
  if (rho.is_null()) throw ValidationError("probability of the null state is undefined");
  const Matrix e = sd.spectral_projector(delta, tols.cluster_tol);
  const double p = (rho.matrix() * e).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

namespace {

DensityState collapse_by(UpdateKind kind, const DensityState& rho,
                         const std::vector<double>& delta, const SpectralDecomposition& sd,
                         std::optional<MeasurementBasis> basis, const Tolerances& tols) {
  const int n = sd.dim();
  if (rho.is_null()) return DensityState::null_state(n);  // null is absorbing
  MeasurementEvent event{sd, delta, std::move(basis)};
  event.validate(tols);
  const auto kraus = kraus_projectors(kind, event, tols);
  const Matrix raw = hermitize(apply_kraus(kraus, rho.matrix()));
  const double p = born_probability(rho, delta, sd, tols);
  if (p <= tols.prob_floor) return DensityState::null_state(n);
  // Renormalize by the actual output trace to stop drift.
  return DensityState::from_matrix(raw / raw.trace().real(), tols);
}

}  // namespace

DensityState standard_collapse(const DensityState& rho, double alpha,
                               const SpectralDecomposition& sd, const Tolerances& tols) {
  return collapse_by(UpdateKind::standard, rho, {alpha}, sd, std::nullopt, tols);
}

DensityState subjective_collapse(const DensityState& rho, const std::vector<double>& delta,
                                 const SpectralDecomposition& sd, const Tolerances& tols) {
  return collapse_by(UpdateKind::subjective, rho, delta, sd, std::nullopt, tols);
}

DensityState loss_of_outcome(const DensityState& rho, const SpectralDecomposition& sd,
                             const Tolerances& tols) {
  if (rho.is_null()) throw ValidationError("loss of outcome needs a non-null state");
  return subjective_collapse(rho, sd.eigenvalues(), sd, tols);
}

DensityState lueders_block_collapse(const DensityState& rho, const std::vector<double>& delta,
                                    const SpectralDecomposition& sd, const Tolerances& tols) {
  return collapse_by(UpdateKind::lueders_block, rho, delta, sd, std::nullopt, tols);
}

DensityState contextual_collapse(const DensityState& rho, double alpha,
                                 const SpectralDecomposition& sd,
                                 const MeasurementBasis& basis, const Tolerances& tols) {
  return collapse_by(UpdateKind::contextual, rho, {alpha}, sd, basis, tols);
}

DensityState contextual_subjective_collapse(const DensityState& rho,
                                            const std::vector<double>& delta,
                                            const SpectralDecomposition& sd,
                                            const MeasurementBasis& basis,
                                            const Tolerances& tols) {
  return collapse_by(UpdateKind::contextual, rho, delta, sd, basis, tols);
}

}  // namespace qmeas
