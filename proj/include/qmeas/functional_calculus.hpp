#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qmeas/operator_core.hpp"

namespace qmeas {

/// A real function given extensionally on a finite spectrum: only the
/// restriction of g to sigma(A) matters, and tables serialize.
class SpectrumFunction {
 public:
  explicit SpectrumFunction(std::vector<std::pair<double, double>> table);

  static SpectrumFunction square();  // convenience: filled lazily per spectrum
  static SpectrumFunction identity();

  /// Table form g(alpha) for each alpha in an explicit domain.
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  /// Value at a (snapped) spectral point of sd. Throws DomainMismatch if the
  /// table misses the point, UnknownSpectralPoint if alpha is off-spectrum.
  double value_at(double alpha, const SpectralDecomposition& sd) const;

  /// Throws DomainMismatch unless the table domain is exactly sigma(A).
  void check_domain(const SpectralDecomposition& sd) const;

  bool is_builtin() const { return builtin_ != Builtin::none; }

  /// The table restricted/instantiated on sigma(A). Builtins (square,
  /// identity) are tabulated here; explicit tables are domain-checked.
  std::vector<std::pair<double, double>> table_on(const SpectralDecomposition& sd) const;

 private:
  enum class Builtin { none, square, identity };
  SpectrumFunction(Builtin b) : builtin_(b) {}
  std::vector<std::pair<double, double>> table_;
  Builtin builtin_ = Builtin::none;
};

/// Blocks Delta_beta = g^{-1}(beta) for beta in sigma(g(A)); they partition
/// sigma(A).
struct PreimagePartition {
  std::vector<std::pair<double, std::vector<double>>> blocks;  // beta -> Delta_beta, beta ascending
};

/// g(A) = sum_alpha g(alpha) E_alpha with equal g-values merged, so the
/// spectral mapping sigma(g(A)) = g(sigma(A)) holds exactly post-merge.
SpectralDecomposition apply_function(const SpectrumFunction& g, const SpectralDecomposition& sd,
                                     const Tolerances& tols = default_tols());

PreimagePartition preimage_partition(const SpectrumFunction& g, const SpectralDecomposition& sd,
                                     const Tolerances& tols = default_tols());

/// True iff g is non-injective on sigma(A): some preimage block has size > 1.
bool is_coarse_graining(const SpectrumFunction& g, const SpectralDecomposition& sd,
                        const Tolerances& tols = default_tols());

/// Result of induced_nondegenerate_member: the operator plus the distinct
/// coefficients it was built from, aligned with the basis elements.
struct InducedObservable {
  Matrix operator_matrix;
  std::vector<double> coefficients;
};

/// B = sum_i c_i E_i with pairwise-distinct seeded coefficients (rejection
/// sampling until distinct after clustering). B is nondegenerate and the
/// basis observable is a function of B via g(c_i) = label_i.
InducedObservable induced_nondegenerate_member(const MeasurementBasis& basis,
                                               std::uint64_t coefficient_seed,
                                               const Tolerances& tols = default_tols());

}  // namespace qmeas
