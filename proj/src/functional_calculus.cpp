#include "qmeas/functional_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qmeas {

SpectrumFunction::SpectrumFunction(std::vector<std::pair<double, double>> table)
    : table_(std::move(table)) {
  std::sort(table_.begin(), table_.end());
  for (std::size_t i = 1; i < table_.size(); ++i) {
    if (table_[i].first == table_[i - 1].first) {
      throw ValidationError("spectrum function table has a duplicate key");
    }
  }
}

SpectrumFunction SpectrumFunction::square() { return SpectrumFunction(Builtin::square); }
SpectrumFunction SpectrumFunction::identity() { return SpectrumFunction(Builtin::identity); }

std::vector<std::pair<double, double>> SpectrumFunction::table_on(
    const SpectralDecomposition& sd) const {
  std::vector<std::pair<double, double>> out;
  if (builtin_ == Builtin::square) {
    for (double a : sd.eigenvalues()) out.emplace_back(a, a * a);
    return out;
  }
  if (builtin_ == Builtin::identity) {
    for (double a : sd.eigenvalues()) out.emplace_back(a, a);
    return out;
  }
  check_domain(sd);
  for (double a : sd.eigenvalues()) out.emplace_back(a, value_at(a, sd));
  return out;
}

double SpectrumFunction::value_at(double alpha, const SpectralDecomposition& sd) const {
  const auto snapped = sd.snap(alpha);
  if (!snapped) {
    throw UnknownSpectralPoint("function argument is not a spectral point");
  }
  if (builtin_ == Builtin::square) return *snapped * *snapped;
  if (builtin_ == Builtin::identity) return *snapped;
  const double scale = std::max(1.0, sd.operator_matrix().norm());
  const double tol = default_tols().cluster_tol * scale;
  for (const auto& [key, val] : table_) {
    if (std::abs(key - *snapped) <= tol) return val;
  }
  throw DomainMismatch("spectrum function table misses eigenvalue " + std::to_string(alpha));
}

void SpectrumFunction::check_domain(const SpectralDecomposition& sd) const {
  if (builtin_ != Builtin::none) return;
  const auto spectrum = sd.eigenvalues();
  const double scale = std::max(1.0, sd.operator_matrix().norm());
  const double tol = default_tols().cluster_tol * scale;
  if (table_.size() != spectrum.size()) {
    throw DomainMismatch("spectrum function domain does not equal sigma(A)");
  }
  for (double a : spectrum) {
    const bool found = std::any_of(table_.begin(), table_.end(), [&](const auto& kv) {
      return std::abs(kv.first - a) <= tol;
    });
    if (!found) throw DomainMismatch("spectrum function domain misses an eigenvalue");
  }
}

namespace {

// Cluster g-values with the same tolerance notion as eigendecomposition.
std::vector<std::pair<double, std::vector<std::size_t>>> grouped_values(
    const std::vector<std::pair<double, double>>& table, double merge) {
  std::vector<std::size_t> order(table.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table[a].second < table[b].second;
  });
  std::vector<std::pair<double, std::vector<std::size_t>>> groups;
  for (std::size_t idx : order) {
    const double v = table[idx].second;
    if (!groups.empty() && v - table[groups.back().second.back()].second <= merge) {
      groups.back().second.push_back(idx);
    } else {
      groups.push_back({v, {idx}});
    }
  }
  for (auto& [beta, members] : groups) {
    double mean = 0.0;
    for (std::size_t idx : members) mean += table[idx].second;
    beta = mean / static_cast<double>(members.size());
  }
  return groups;
}

}  // namespace

SpectralDecomposition apply_function(const SpectrumFunction& g, const SpectralDecomposition& sd,
                                     const Tolerances& tols) {
  const auto table = g.table_on(sd);
  const int n = sd.dim();
  const double merge = tols.cluster_tol * std::max(1.0, sd.operator_matrix().norm());
  std::vector<SpectralPoint> points;
  Matrix gA = Matrix::Zero(n, n);
  for (const auto& [beta, members] : grouped_values(table, merge)) {
    Matrix proj = Matrix::Zero(n, n);
    int rank = 0;
    for (std::size_t idx : members) {
      const auto& p = sd.points()[idx];
      proj += p.projector;
      rank += p.rank;
    }
    gA += beta * proj;
    points.push_back({beta, hermitize(proj), rank});
  }
  return SpectralDecomposition(gA, std::move(points), tols);
}

PreimagePartition preimage_partition(const SpectrumFunction& g, const SpectralDecomposition& sd,
                                     const Tolerances& tols) {
  const auto table = g.table_on(sd);
  const double merge = tols.cluster_tol * std::max(1.0, sd.operator_matrix().norm());
  PreimagePartition out;
  for (const auto& [beta, members] : grouped_values(table, merge)) {
    std::vector<double> block;
    for (std::size_t idx : members) block.push_back(sd.points()[idx].eigenvalue);
    std::sort(block.begin(), block.end());
    out.blocks.push_back({beta, std::move(block)});
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool is_coarse_graining(const SpectrumFunction& g, const SpectralDecomposition& sd,
                        const Tolerances& tols) {
  const auto partition = preimage_partition(g, sd, tols);
  return std::any_of(partition.blocks.begin(), partition.blocks.end(),
                     [](const auto& b) { return b.second.size() > 1; });
}

InducedObservable induced_nondegenerate_member(const MeasurementBasis& basis,
                                               std::uint64_t coefficient_seed,
                                               const Tolerances& tols) {
  const auto& elems = basis.elements();
  const int n = basis.dim();
  std::mt19937_64 rng(coefficient_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> coeffs(elems.size());
  // Rejection until pairwise distinct under the clustering tolerance.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (auto& c : coeffs) c = normal(rng);
    double norm_sq = 0.0;
    for (double c : coeffs) norm_sq += c * c;
    const double merge = tols.cluster_tol * std::max(1.0, std::sqrt(norm_sq));
    auto sorted = coeffs;
    std::sort(sorted.begin(), sorted.end());
    bool distinct = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] - sorted[i - 1] <= merge) distinct = false;
    }
    if (distinct) {
      Matrix b = Matrix::Zero(n, n);
      for (std::size_t i = 0; i < elems.size(); ++i) b += coeffs[i] * elems[i].projector;
      return {hermitize(b), coeffs};
    }
  }
  throw NumericalFailure("could not draw pairwise-distinct coefficients");
}

}  // namespace qmeas
