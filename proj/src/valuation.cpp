#include "qmeas/valuation.hpp"

#include <algorithm>
#include <cmath>

namespace qmeas {

namespace {

double table_lookup(const std::vector<std::pair<double, double>>& table, double key,
                    double tol) {
  for (const auto& [k, v] : table) {
    if (std::abs(k - key) <= tol) return v;
  }
  throw DomainMismatch("relation table misses spectral value " + std::to_string(key));
}

bool same_relation(const FunctionalRelation& a, const FunctionalRelation& b, double tol) {
  if (a.source != b.source || a.target != b.target) return false;
  if (a.table.size() != b.table.size()) return false;
  for (const auto& [k, v] : a.table) {
    bool found = false;
    for (const auto& [k2, v2] : b.table) {
      if (std::abs(k - k2) <= tol && std::abs(v - v2) <= tol) found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

ObservableFamily::ObservableFamily(std::vector<SpectralDecomposition> members,
                                   std::vector<FunctionalRelation> relations,
                                   const Tolerances& tols)
    : members_(std::move(members)), relations_(std::move(relations)) {
  if (members_.empty()) throw ValidationError("observable family must be nonempty");
  for (const auto& m : members_) {
    if (m.dim() != members_[0].dim()) {
      throw ValidationError("family members must share one dimension");
    }
  }
  // Verify asserted relations numerically.
  for (const auto& rel : relations_) {
    if (rel.source >= members_.size() || rel.target >= members_.size()) {
      throw ValidationError("relation indexes outside the family");
    }
    const auto& src = members_[rel.source];
    const SpectrumFunction g{rel.table};
    const SpectralDecomposition applied = apply_function(g, src, tols);
    if (!matrix_close(applied.operator_matrix(), members_[rel.target].operator_matrix(),
                      tols.eq_tol)) {
      throw ValidationError("asserted functional relation fails numerically");
    }
  }
}

void ObservableFamily::discover_functional_relations(const Tolerances& tols) {
  const int n = dim();
  const double tol = tols.eq_tol * n;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (std::size_t j = 0; j < members_.size(); ++j) {
      if (i == j) continue;
      const Matrix& a = members_[i].operator_matrix();
      const Matrix& b = members_[j].operator_matrix();
      if ((a * b - b * a).norm() > tol) continue;
      // A_j = g(A_i) is well-defined iff every eigenspace of A_i lies inside
      // one eigenspace of A_j.
      std::vector<std::pair<double, double>> table;
      bool refines = true;
      for (const auto& pi : members_[i].points()) {
        bool placed = false;
        for (const auto& pj : members_[j].points()) {
          if ((pj.projector * pi.projector - pi.projector).norm() <= tol) {
            table.emplace_back(pi.eigenvalue, pj.eigenvalue);
            placed = true;
            break;
          }
        }
        if (!placed) {
          refines = false;
          break;
        }
      }
      if (!refines) continue;
      FunctionalRelation rel{i, j, std::move(table)};
      const double dedupe_tol = tols.cluster_tol * 10.0;
      const bool known = std::any_of(relations_.begin(), relations_.end(), [&](const auto& r) {
        return same_relation(r, rel, dedupe_tol);
      });
      if (!known) relations_.push_back(std::move(rel));
    }
  }
}

ValuationResult search_valuation(const ObservableFamily& family, std::uint64_t search_cap,
                                 const Tolerances& tols) {
  const auto& members = family.members();
  const auto& relations = family.relations();

  double log_space = 0.0;
  for (const auto& m : members) log_space += std::log10(double(m.spectrum_size()));
  if (log_space > std::log10(double(search_cap))) {
    throw SearchSpaceTooLarge("product of spectrum sizes exceeds the search cap");
  }

  const double snap_tol = tols.cluster_tol * 10.0;
  std::vector<int> choice(members.size(), -1);
  std::uint64_t tried = 0;

  // FUNC propagation: an assignment at `idx` must agree with every relation
  // whose endpoints are both assigned.
  auto consistent = [&](std::size_t idx) {
    const double v = members[idx].eigenvalues()[choice[idx]];
    for (const auto& rel : relations) {
      if (rel.source == idx && choice[rel.target] >= 0) {
        const double expect = table_lookup(rel.table, v, snap_tol);
        const double actual = members[rel.target].eigenvalues()[choice[rel.target]];
        if (std::abs(expect - actual) > snap_tol) return false;
      }
      if (rel.target == idx && choice[rel.source] >= 0) {
        const double src = members[rel.source].eigenvalues()[choice[rel.source]];
        const double expect = table_lookup(rel.table, src, snap_tol);
        if (std::abs(expect - v) > snap_tol) return false;
      }
    }
    return true;
  };

  // Iterative depth-first backtracking, deterministic in spectrum order.
  std::size_t depth = 0;
  while (true) {
    if (depth == members.size()) {
      Valuation v;
      for (std::size_t i = 0; i < members.size(); ++i) {
        v.values.push_back(members[i].eigenvalues()[choice[i]]);
      }
      return v;
    }
    bool advanced = false;
    for (int next = choice[depth] + 1;
         next < static_cast<int>(members[depth].spectrum_size()); ++next) {
      choice[depth] = next;
      ++tried;
      if (consistent(depth)) {
        advanced = true;
        break;
      }
    }
    if (advanced) {
      ++depth;
      continue;
    }
    choice[depth] = -1;
    if (depth == 0) {
      return NoValuationCertificate{tried, relations.size(), members.size()};
    }
    --depth;
  }
}

bool verify_valuation(const ObservableFamily& family, const Valuation& v,
                      const Tolerances& tols) {
  const auto& members = family.members();
  if (v.values.size() != members.size()) return false;
  const double snap_tol = tols.cluster_tol * 10.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!members[i].snap(v.values[i])) return false;  // value rule
  }
  for (const auto& rel : family.relations()) {
    const double mapped = table_lookup(rel.table, v.values[rel.source], snap_tol);
    if (std::abs(mapped - v.values[rel.target]) > snap_tol) return false;  // FUNC
  }
  return true;
}

}  // namespace qmeas
