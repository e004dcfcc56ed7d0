#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/collapse.hpp"
#include "qmeas/functional_calculus.hpp"

namespace qmeas {

enum class Semantics { noncontextual, contextual };

/// A state on which two update rules disagree, with both outputs and their
/// Frobenius distance.
struct DisagreementWitness {
  DensityState state;
  DensityState out_first;
  DensityState out_second;
  double frobenius_distance;
};

struct EquivalenceVerdict {
  double beta;                 // spectral point of g(A) under test
  bool probability_equal;
  bool update_equal;
  std::optional<DisagreementWitness> witness;  // present iff !update_equal
};

struct PostProcessingOptions {
  std::uint64_t seed = 20260826;
  int probability_samples = 20;
  int random_bases = 8;  // per degenerate observable, contextual semantics only
};

/// True iff chi_{Delta1}(A1) = chi_{Delta2}(A2) within eq_tol * n.
bool events_equivalent_projector(const MeasurementEvent& e1, const MeasurementEvent& e2,
                                 const Tolerances& tols = default_tols());

/// For each beta in sigma(g(A)), compare the update map of (beta, g(A)) with
/// the update map of (g^{-1}(beta), A) by Choi equality.
///
/// Noncontextual semantics pits the standard collapse on g(A) against the
/// subjective collapse on A; the verdict is update_equal iff the preimage is
/// a singleton. Contextual semantics compares the context-dependent rule on
/// both sides over the canonical basis plus seeded random bases, and every
/// verdict comes out update_equal. The probability halves agree always.
std::vector<EquivalenceVerdict> check_post_processing(
    const SpectralDecomposition& sd, const SpectrumFunction& g, Semantics semantics,
    const PostProcessingOptions& opts = {}, const Tolerances& tols = default_tols());

/// The two states the standard and subjective readings assign to the same
/// physical situation, for some non-singleton preimage block.
struct TttReport {
  double beta;
  std::vector<double> preimage;
  DensityState witness_state;       // psi = (phi_0 + phi_1)/sqrt(2)
  DensityState standard_on_gA;      // |psi><psi|
  DensityState subjective_on_A;     // the mixture
  double trace_distance;
  double frobenius_distance;
};

/// Throws NotCoarseGraining when g is injective on sigma(A): then no
/// inconsistency exists.
TttReport exhibit_ttt_inconsistency(const SpectralDecomposition& sd, const SpectrumFunction& g,
                                    const Tolerances& tols = default_tols());

/// True iff every pair of projectors across the two bases commutes. Distinct
/// bases for a degenerate observable never do.
bool bases_commute(const MeasurementBasis& b1, const MeasurementBasis& b2,
                   const SpectralDecomposition& sd, const Tolerances& tols = default_tols());

/// If the two contextual events have Choi-equal update maps, check that they
/// carry the same event projector by evaluating both maps on the maximally
/// mixed state. Vacuously true when the maps differ.
bool contextual_event_equal_implies_same_projector(const MeasurementEvent& e1,
                                                   const MeasurementEvent& e2,
                                                   const Tolerances& tols = default_tols());

}  // namespace qmeas
