#pragma once

#include <optional>
#include <vector>

#include "qmeas/operator_core.hpp"

namespace qmeas {

/// "(Delta, A)" or, with a basis, "(Delta, A, B)": a measurement of A yielded
/// some outcome in Delta, possibly in a chosen measurement basis.
struct MeasurementEvent {
  SpectralDecomposition sd;
  std::vector<double> outcomes;  // nonempty subset of sigma(A)
  std::optional<MeasurementBasis> basis;

  void validate(const Tolerances& tols = default_tols()) const;
};

enum class UpdateKind { standard, subjective, lueders_block, contextual };

/// A state-update rule materialized as the Choi matrix of its unnormalized
/// linear part, C = sum_{kl} |k><l| (x) Phi(|k><l|). Two rules are equal iff
/// their Choi matrices are, which makes map equality a finite check.
struct UpdateMap {
  UpdateKind kind;
  MeasurementEvent event;
  Matrix choi;  // n^2 x n^2, Hermitian PSD
};

UpdateMap to_update_map(UpdateKind kind, const MeasurementEvent& event,
                        const Tolerances& tols = default_tols());

bool update_maps_equal(const UpdateMap& a, const UpdateMap& b,
                       double eq_tol = default_tols().eq_tol);

/// Apply an update map's unnormalized part Phi to an arbitrary matrix.
Matrix apply_unnormalized(const UpdateMap& map, const Matrix& x);

/// The total map T on states: Phi(rho) normalized, or the null state when the
/// event probability is below prob_floor. The null state is absorbing.
DensityState apply_update(const UpdateMap& map, const DensityState& rho,
                          const Tolerances& tols = default_tols());

/// tr(rho E_Delta), clamped to [0,1].
double born_probability(const DensityState& rho, const std::vector<double>& delta,
                        const SpectralDecomposition& sd,
                        const Tolerances& tols = default_tols());

/// E_alpha rho E_alpha / tr(rho E_alpha); null below prob_floor.
DensityState standard_collapse(const DensityState& rho, double alpha,
                               const SpectralDecomposition& sd,
                               const Tolerances& tols = default_tols());

/// (1 / tr(rho E_Delta)) sum_{alpha in Delta} E_alpha rho E_alpha.
DensityState subjective_collapse(const DensityState& rho, const std::vector<double>& delta,
                                 const SpectralDecomposition& sd,
                                 const Tolerances& tols = default_tols());

/// rho^A = sum_alpha E_alpha rho E_alpha; trace preserving, never null.
DensityState loss_of_outcome(const DensityState& rho, const SpectralDecomposition& sd,
                             const Tolerances& tols = default_tols());

/// E_Delta rho E_Delta / tr(rho E_Delta) -- the rejected block rule, kept to
/// exhibit its conflict with loss of measurement outcome.
DensityState lueders_block_collapse(const DensityState& rho, const std::vector<double>& delta,
                                    const SpectralDecomposition& sd,
                                    const Tolerances& tols = default_tols());

/// Context-dependent collapse: sum over basis elements labeled alpha of
/// E_i rho E_i, normalized by tr(rho E_alpha).
DensityState contextual_collapse(const DensityState& rho, double alpha,
                                 const SpectralDecomposition& sd,
                                 const MeasurementBasis& basis,
                                 const Tolerances& tols = default_tols());

/// Subjective extension of the contextual rule over a set of outcomes.
DensityState contextual_subjective_collapse(const DensityState& rho,
                                            const std::vector<double>& delta,
                                            const SpectralDecomposition& sd,
                                            const MeasurementBasis& basis,
                                            const Tolerances& tols = default_tols());

}  // namespace qmeas
