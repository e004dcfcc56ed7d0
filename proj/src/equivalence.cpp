#include "qmeas/equivalence.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace qmeas {

namespace {

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

// One normalized eigenvector of A per spectral point, from the canonical
// basis. Keyed by (snapped) eigenvalue.
Vector eigenvector_for(const SpectralDecomposition& sd, const MeasurementBasis& canonical,
                       double alpha) {
  const double snapped = *sd.snap(alpha);
  for (const auto& e : canonical.elements()) {
    if (*sd.snap(e.label) == snapped) {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(e.projector);
      return solver.eigenvectors().col(sd.dim() - 1);
    }
  }
  throw UnknownSpectralPoint("no basis element with the requested label");
}

bool sampled_probabilities_agree(const SpectralDecomposition& sd,
                                 const SpectralDecomposition& gsd, double beta,
                                 const std::vector<double>& preimage,
                                 const PostProcessingOptions& opts, const Tolerances& tols) {
  for (int s = 0; s < opts.probability_samples; ++s) {
    const DensityState rho = random_density(sd.dim(), opts.seed + 7919 * s);
    const double p1 = born_probability(rho, {beta}, gsd, tols);
    const double p2 = born_probability(rho, preimage, sd, tols);
    if (std::abs(p1 - p2) > 1e-10) return false;
  }
  return true;
}

std::optional<DisagreementWitness> find_witness(const UpdateMap& m1, const UpdateMap& m2,
                                                const SpectralDecomposition& sd,
                                                const std::vector<double>& preimage,
                                                const PostProcessingOptions& opts,
                                                const Tolerances& tols) {
  const int n = sd.dim();
  const double threshold = tols.eq_tol * n;
  std::vector<DensityState> candidates;
  // A balanced superposition across two preimage eigenvectors always splits
  // the rules, so try it before falling back to random states.
  if (preimage.size() >= 2) {
    const auto canonical = MeasurementBasis::canonical(sd);
    const Vector phi0 = eigenvector_for(sd, canonical, preimage[0]);
    const Vector phi1 = eigenvector_for(sd, canonical, preimage[1]);
    candidates.push_back(DensityState::pure((phi0 + phi1) / std::sqrt(2.0)));
  }
  for (int s = 0; s < 50; ++s) candidates.push_back(random_pure(n, opts.seed + 104729 * s));
  for (const auto& rho : candidates) {
    const DensityState o1 = apply_update(m1, rho, tols);
    const DensityState o2 = apply_update(m2, rho, tols);
    if (o1.is_null() != o2.is_null()) {
      return DisagreementWitness{rho, o1, o2, 1.0};
    }
    if (o1.is_null()) continue;
    const double dist = (o1.matrix() - o2.matrix()).norm();
    if (dist > threshold) return DisagreementWitness{rho, o1, o2, dist};
  }
  return std::nullopt;
}

}  // namespace

bool events_equivalent_projector(const MeasurementEvent& e1, const MeasurementEvent& e2,
                                 const Tolerances& tols) {
  e1.validate(tols);
  e2.validate(tols);
  const Matrix p1 = e1.sd.spectral_projector(e1.outcomes, tols.cluster_tol);
  const Matrix p2 = e2.sd.spectral_projector(e2.outcomes, tols.cluster_tol);
  return matrix_close(p1, p2, tols.eq_tol);
}

std::vector<EquivalenceVerdict> check_post_processing(
    const SpectralDecomposition& sd, const SpectrumFunction& g, Semantics semantics,
    const PostProcessingOptions& opts, const Tolerances& tols) {
  const SpectralDecomposition gsd = apply_function(g, sd, tols);
  const PreimagePartition partition = preimage_partition(g, sd, tols);

  std::vector<MeasurementBasis> bases;
  if (semantics == Semantics::contextual) {
    bases.push_back(MeasurementBasis::canonical(sd));
    if (!sd.is_nondegenerate()) {
      for (int b = 0; b < opts.random_bases; ++b) {
        bases.push_back(MeasurementBasis::random_rotation(sd, opts.seed + 31 * b));
      }
    }
  }

  std::vector<EquivalenceVerdict> verdicts;
  for (const auto& [beta, preimage] : partition.blocks) {
    EquivalenceVerdict verdict{beta, true, true, std::nullopt};
    verdict.probability_equal =
        sampled_probabilities_agree(sd, gsd, beta, preimage, opts, tols) &&
        matrix_close(gsd.projector_of(beta), sd.spectral_projector(preimage), tols.eq_tol);

    if (semantics == Semantics::noncontextual) {
      const UpdateMap m1 = to_update_map(UpdateKind::standard,
                                         MeasurementEvent{gsd, {beta}, std::nullopt}, tols);
      const UpdateMap m2 = to_update_map(UpdateKind::subjective,
                                         MeasurementEvent{sd, preimage, std::nullopt}, tols);
      verdict.update_equal = update_maps_equal(m1, m2, tols.eq_tol);
      if (!verdict.update_equal) {
        verdict.witness = find_witness(m1, m2, sd, preimage, opts, tols);
      }
    } else {
      for (const auto& basis : bases) {
        const MeasurementBasis gbasis =
            basis.relabel([&](double label) { return g.value_at(label, sd); });
        const UpdateMap m1 = to_update_map(UpdateKind::contextual,
                                           MeasurementEvent{gsd, {beta}, gbasis}, tols);
        const UpdateMap m2 = to_update_map(UpdateKind::contextual,
                                           MeasurementEvent{sd, preimage, basis}, tols);
        if (!update_maps_equal(m1, m2, tols.eq_tol)) {
          verdict.update_equal = false;
          if (!verdict.witness) verdict.witness = find_witness(m1, m2, sd, preimage, opts, tols);
        }
      }
    }
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

TttReport exhibit_ttt_inconsistency(const SpectralDecomposition& sd, const SpectrumFunction& g,
                                    const Tolerances& tols) {
  if (!is_coarse_graining(g, sd, tols)) {
    throw NotCoarseGraining("g is injective on sigma(A); no inconsistency exists");
  }
  const SpectralDecomposition gsd = apply_function(g, sd, tols);
  const PreimagePartition partition = preimage_partition(g, sd, tols);
  const auto canonical = MeasurementBasis::canonical(sd);
  for (const auto& [beta, preimage] : partition.blocks) {
    if (preimage.size() < 2) continue;
    const Vector phi0 = eigenvector_for(sd, canonical, preimage[0]);
    const Vector phi1 = eigenvector_for(sd, canonical, preimage[1]);
    const DensityState psi = DensityState::pure((phi0 + phi1) / std::sqrt(2.0));
    const DensityState by_standard = standard_collapse(psi, beta, gsd, tols);
    const DensityState by_subjective = subjective_collapse(psi, preimage, sd, tols);
    return TttReport{beta,
                     preimage,
                     psi,
                     by_standard,
                     by_subjective,
                     trace_distance(by_standard.matrix(), by_subjective.matrix()),
                     (by_standard.matrix() - by_subjective.matrix()).norm()};
  }
  throw NotCoarseGraining("unreachable: coarse-graining without a large block");
}

bool bases_commute(const MeasurementBasis& b1, const MeasurementBasis& b2,
                   const SpectralDecomposition& sd, const Tolerances& tols) {
  b1.validate_against(sd, tols);
  b2.validate_against(sd, tols);
  const double tol = tols.eq_tol * sd.dim();
  for (const auto& e : b1.elements()) {
    for (const auto& f : b2.elements()) {
      if ((e.projector * f.projector - f.projector * e.projector).norm() > tol) return false;
    }
  }
  return true;
}

bool contextual_event_equal_implies_same_projector(const MeasurementEvent& e1,
                                                   const MeasurementEvent& e2,
                                                   const Tolerances& tols) {
  const UpdateMap m1 = to_update_map(UpdateKind::contextual, e1, tols);
  const UpdateMap m2 = to_update_map(UpdateKind::contextual, e2, tols);
  if (!update_maps_equal(m1, m2, tols.eq_tol)) return true;  // vacuous
  const DensityState phi = maximally_mixed(e1.sd.dim());
  const DensityState o1 = apply_update(m1, phi, tols);
  const DensityState o2 = apply_update(m2, phi, tols);
  const Matrix p1 = e1.sd.spectral_projector(e1.outcomes, tols.cluster_tol);
  const Matrix expected = p1 / p1.trace().real();
  return o1.approx_equal(o2, tols.eq_tol) && matrix_close(o1.matrix(), expected, tols.eq_tol);
}

}  // namespace qmeas
