#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qmeas/functional_calculus.hpp"

namespace qmeas {

/// Asserted (or discovered) relation member_target = g(member_source).
struct FunctionalRelation {
  std::size_t source;
  std::size_t target;
  std::vector<std::pair<double, double>> table;  // alpha -> g(alpha) on sigma(source)
};

/// A finite family of observables with the functional relations between
/// them. A desk-scale stand-in for all of B(H)_sa.
class ObservableFamily {
 public:
  explicit ObservableFamily(std::vector<SpectralDecomposition> members,
                            std::vector<FunctionalRelation> relations = {},
                            const Tolerances& tols = default_tols());

  const std::vector<SpectralDecomposition>& members() const { return members_; }
  const std::vector<FunctionalRelation>& relations() const { return relations_; }
  int dim() const { return members_.empty() ? 0 : members_[0].dim(); }

  /// For every commuting ordered pair (i, j), try to build the table g with
  /// A_j = g(A_i); well-defined iff A_i's eigenspaces refine A_j's. Appends
  /// every relation found; idempotent.
  void discover_functional_relations(const Tolerances& tols = default_tols());

 private:
  std::vector<SpectralDecomposition> members_;
  std::vector<FunctionalRelation> relations_;
};

/// V(A_i) per member, satisfying the value rule and FUNC across the family's
/// relations.
struct Valuation {
  std::vector<double> values;
};

struct NoValuationCertificate {
  std::uint64_t assignments_tried;
  std::size_t relation_count;
  std::size_t member_count;
};

using ValuationResult = std::variant<Valuation, NoValuationCertificate>;

/// Exhaustive backtracking over the product of spectra with FUNC constraint
/// propagation. Deterministic given the family ordering. Throws
/// SearchSpaceTooLarge if the product of spectrum sizes exceeds the cap.
ValuationResult search_valuation(const ObservableFamily& family,
                                 std::uint64_t search_cap = 100'000'000,
                                 const Tolerances& tols = default_tols());

/// Re-verify both valuation clauses by direct evaluation.
bool verify_valuation(const ObservableFamily& family, const Valuation& v,
                      const Tolerances& tols = default_tols());

}  // namespace qmeas
