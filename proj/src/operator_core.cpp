#include "qmeas/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace qmeas {

namespace {

void check_hermitian(const Matrix& a, const Tolerances& tols) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw NonHermitianInput("operator must be a square matrix with dim >= 1");
  }
  const double resid = (a - a.adjoint().eval()).norm();
  if (resid > tols.herm_tol * static_cast<double>(a.rows())) {
    throw NonHermitianInput("Hermiticity residual " + std::to_string(resid) +
                            " exceeds tolerance");
  }
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(Matrix operator_matrix,
                                             std::vector<SpectralPoint> points,
                                             const Tolerances& tols)
    : operator_(std::move(operator_matrix)), points_(std::move(points)) {
  const int n = dim();
  if (points_.empty()) throw NumericalFailure("empty spectral decomposition");
  std::sort(points_.begin(), points_.end(),
            [](const SpectralPoint& a, const SpectralPoint& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  Matrix completeness = Matrix::Zero(n, n);
  Matrix recon = Matrix::Zero(n, n);
  int total_rank = 0;
  for (const auto& p : points_) {
    completeness += p.projector;
    recon += p.eigenvalue * p.projector;
    total_rank += p.rank;
  }
  const double tol = tols.eq_tol * n;
  if (!matrix_close(completeness, Matrix::Identity(n, n), tols.eq_tol)) {
    throw NumericalFailure("spectral projectors do not sum to identity");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const Matrix prod = points_[i].projector * points_[j].projector;
      const Matrix expect = (i == j) ? points_[i].projector : Matrix::Zero(n, n);
      if ((prod - expect).norm() > tol) {
        throw NumericalFailure("spectral projectors are not orthogonal");
      }
    }
  }
  if (total_rank != n) throw NumericalFailure("projector ranks do not sum to dim");
  if ((recon - operator_).norm() > tols.recon_tol * n) {
    throw NumericalFailure("spectral reconstruction residual too large");
  }
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.eigenvalue);
  return out;
}

std::optional<double> SpectralDecomposition::snap(double value, double cluster_tol) const {
  const double scale = std::max(1.0, operator_.norm());
  const SpectralPoint* best = nullptr;
  double best_dist = 0.0;
  for (const auto& p : points_) {
    const double d = std::abs(p.eigenvalue - value);
    if (!best || d < best_dist) {
      best = &p;
      best_dist = d;
    }
  }
  if (best && best_dist <= cluster_tol * scale) return best->eigenvalue;
  return std::nullopt;
}

const Matrix& SpectralDecomposition::projector_of(double eigenvalue, double cluster_tol) const {
  const auto snapped = snap(eigenvalue, cluster_tol);
  if (!snapped) {
    throw UnknownSpectralPoint("value " + std::to_string(eigenvalue) +
                               " is not in the spectrum");
  }
  for (const auto& p : points_) {
    if (p.eigenvalue == *snapped) return p.projector;
  }
  throw UnknownSpectralPoint("unreachable: snapped value missing");
}

Matrix SpectralDecomposition::spectral_projector(const std::vector<double>& delta,
                                                 double cluster_tol) const {
  const int n = dim();
  Matrix out = Matrix::Zero(n, n);
  std::vector<double> seen;
  for (double v : delta) {
    const auto snapped = snap(v, cluster_tol);
    if (!snapped) {
      throw UnknownSpectralPoint("value " + std::to_string(v) + " is not in the spectrum");
    }
    if (std::find(seen.begin(), seen.end(), *snapped) != seen.end()) continue;
    seen.push_back(*snapped);
    out += projector_of(*snapped, cluster_tol);
  }
  return out;
}

bool SpectralDecomposition::is_nondegenerate() const {
  return static_cast<int>(points_.size()) == dim();
}

SpectralDecomposition eigendecompose(const Matrix& a, double cluster_tol,
                                     const Tolerances& tols) {
  check_hermitian(a, tols);
  const int n = static_cast<int>(a.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigensolver did not converge");
  }
  const auto& vals = solver.eigenvalues();  // ascending
  const auto& vecs = solver.eigenvectors();

  const double merge = cluster_tol * std::max(1.0, a.norm());
  std::vector<SpectralPoint> points;
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && vals(j) - vals(j - 1) <= merge) ++j;
    Matrix proj = Matrix::Zero(n, n);
    double mean = 0.0;
    for (int k = i; k < j; ++k) {
      proj += vecs.col(k) * vecs.col(k).adjoint();
      mean += vals(k);
    }
    mean /= static_cast<double>(j - i);
    points.push_back({mean, hermitize(proj), j - i});
    i = j;
  }
  return SpectralDecomposition(a, std::move(points), tols);
}

DensityState DensityState::null_state(int dim) {
  return DensityState(Matrix::Zero(dim, dim), true);
}

DensityState DensityState::from_matrix(Matrix rho, const Tolerances& tols) {
  const int n = static_cast<int>(rho.rows());
  if (n < 1 || rho.cols() != n) throw ValidationError("density matrix must be square");
  if (rho.norm() == 0.0) return null_state(n);
  if ((rho - rho.adjoint().eval()).norm() > tols.herm_tol * n) {
    throw ValidationError("density matrix is not Hermitian");
  }
  Matrix h = hermitize(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.eigenvalues().minCoeff() < -tols.psd_tol) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tols.eq_tol * n) {
    throw ValidationError("density matrix trace is not 1");
  }
  return DensityState(std::move(h), false);
}

DensityState DensityState::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("cannot build a pure state from the zero vector");
  Vector unit = psi / norm;
  return DensityState(unit * unit.adjoint(), false);
}

bool DensityState::approx_equal(const DensityState& other, double tol_per_dim) const {
  if (is_null_ != other.is_null_) return false;
  if (is_null_) return true;
  return matrix_close(matrix_, other.matrix_, tol_per_dim);
}

Matrix random_complex_normal(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

DensityState random_density(int dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  const Matrix g = random_complex_normal(dim, dim, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityState::from_matrix(hermitize(rho));
}

DensityState random_pure(int dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  const Matrix g = random_complex_normal(dim, 1, seed);
  return DensityState::pure(g.col(0));
}

DensityState maximally_mixed(int dim) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  return DensityState::from_matrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

namespace {

// Orthonormal columns spanning the range of a rank-r projector.
Matrix range_basis(const Matrix& projector, int rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(projector);
  // eigenvalues ascending; the top `rank` eigenvectors span the range
  return solver.eigenvectors().rightCols(rank).eval();
}

}  // namespace

MeasurementBasis MeasurementBasis::canonical(const SpectralDecomposition& sd) {
  MeasurementBasis out;
  for (const auto& p : sd.points()) {
    const Matrix basis = range_basis(p.projector, p.rank);
    for (int k = 0; k < p.rank; ++k) {
      const Vector v = basis.col(k);
      out.elements_.push_back({v * v.adjoint(), p.eigenvalue});
    }
  }
  return out;
}

MeasurementBasis MeasurementBasis::random_rotation(const SpectralDecomposition& sd,
                                                   std::uint64_t seed) {
  MeasurementBasis out;
  std::uint64_t block_seed = seed;
  for (const auto& p : sd.points()) {
    Matrix basis = range_basis(p.projector, p.rank);
    if (p.rank > 1) {
      const Matrix g = random_complex_normal(p.rank, p.rank, block_seed++);
      Eigen::HouseholderQR<Matrix> qr(g);
      const Matrix q = qr.householderQ() * Matrix::Identity(p.rank, p.rank);
      basis = basis * q;
    }
    for (int k = 0; k < p.rank; ++k) {
      const Vector v = basis.col(k);
      out.elements_.push_back({v * v.adjoint(), p.eigenvalue});
    }
  }
  return out;
}

void MeasurementBasis::validate_against(const SpectralDecomposition& sd,
                                        const Tolerances& tols) const {
  const int n = sd.dim();
  if (static_cast<int>(elements_.size()) != n) {
    throw BasisMismatch("basis must contain exactly dim rank-one projectors");
  }
  const double tol = tols.eq_tol * n;
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const Matrix& e = elements_[i].projector;
    if (std::abs(e.trace().real() - 1.0) > tol || (e * e - e).norm() > tol) {
      throw BasisMismatch("basis element is not a rank-one projector");
    }
    if (!sd.snap(elements_[i].label)) {
      throw BasisMismatch("basis label is not an eigenvalue of the observable");
    }
    if ((e * sd.operator_matrix() - elements_[i].label * e).norm() > tol) {
      throw BasisMismatch("basis element does not live in the labeled eigenspace");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((e * elements_[j].projector).norm() > tol) {
        throw BasisMismatch("basis elements are not orthogonal");
      }
    }
    sum += e;
  }
  if (!matrix_close(sum, Matrix::Identity(n, n), tols.eq_tol)) {
    throw BasisMismatch("basis does not resolve the identity");
  }
}

bool MeasurementBasis::approx_equal(const MeasurementBasis& other, double tol_per_dim) const {
  if (elements_.size() != other.elements_.size()) return false;
  // Order-insensitive: match every element to one of the other basis.
  std::vector<bool> used(other.elements_.size(), false);
  for (const auto& e : elements_) {
    bool found = false;
    for (std::size_t j = 0; j < other.elements_.size(); ++j) {
      if (used[j]) continue;
      if (matrix_close(e.projector, other.elements_[j].projector, tol_per_dim)) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace qmeas
