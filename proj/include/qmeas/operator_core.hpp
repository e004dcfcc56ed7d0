#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/config.hpp"
#include "qmeas/errors.hpp"

namespace qmeas {

/// One point of a spectral decomposition: an eigenvalue together with the
/// orthogonal projector onto its eigenspace.
struct SpectralPoint {
  double eigenvalue;
  Matrix projector;
  int rank;
};

/// Resolution A = sum_j alpha_j E_j with distinct ascending eigenvalues and
/// mutually orthogonal projectors summing to the identity. Degenerate
/// eigenvalues keep a single rank-r projector; no eigenbasis is chosen here.
class SpectralDecomposition {
 public:
  SpectralDecomposition(Matrix operator_matrix, std::vector<SpectralPoint> points,
                        const Tolerances& tols = default_tols());

  int dim() const { return static_cast<int>(operator_.rows()); }
  const Matrix& operator_matrix() const { return operator_; }
  const std::vector<SpectralPoint>& points() const { return points_; }
  std::size_t spectrum_size() const { return points_.size(); }

  std::vector<double> eigenvalues() const;

  /// Nearest stored eigenvalue within the clustering tolerance, if any.
  std::optional<double> snap(double value, double cluster_tol = default_tols().cluster_tol) const;

  /// Projector of a single (snapped) eigenvalue. Throws UnknownSpectralPoint.
  const Matrix& projector_of(double eigenvalue,
                             double cluster_tol = default_tols().cluster_tol) const;

  /// E_Delta = sum over the snapped elements of delta. Empty set gives the
  /// zero projector, the full spectrum gives the identity.
  Matrix spectral_projector(const std::vector<double>& delta,
                            double cluster_tol = default_tols().cluster_tol) const;

  bool is_nondegenerate() const;

 private:
  Matrix operator_;
  std::vector<SpectralPoint> points_;
};

/// Hermitian eigendecomposition with degeneracy clustering: raw eigenvalues
/// within cluster_tol * max(1, ||A||_F) of each other are merged into one
/// spectral point whose projector is the sum of the rank-one eigenprojectors.
SpectralDecomposition eigendecompose(const Matrix& a,
                                     double cluster_tol = default_tols().cluster_tol,
                                     const Tolerances& tols = default_tols());

/// A density operator, or the distinguished null state (exact zero matrix)
/// that absorbs impossible measurement events.
class DensityState {
 public:
  static DensityState null_state(int dim);
  static DensityState from_matrix(Matrix rho, const Tolerances& tols = default_tols());
  /// Pure state |psi><psi| from a (not necessarily normalized) vector.
  static DensityState pure(const Vector& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  bool is_null() const { return is_null_; }
  const Matrix& matrix() const { return matrix_; }

  bool approx_equal(const DensityState& other,
                    double tol_per_dim = default_tols().eq_tol) const;

 private:
  DensityState(Matrix m, bool is_null) : matrix_(std::move(m)), is_null_(is_null) {}
  Matrix matrix_;
  bool is_null_;
};

/// Full-rank density state generated reproducibly from a seed: G a matrix of
/// independent standard complex normals, rho = GG' / tr(GG').
DensityState random_density(int dim, std::uint64_t seed);

/// Seeded random pure state on C^n.
DensityState random_pure(int dim, std::uint64_t seed);

DensityState maximally_mixed(int dim);

/// n x n matrix of independent standard complex normals (shared RNG helper).
Matrix random_complex_normal(int rows, int cols, std::uint64_t seed);

/// Rank-one resolution of identity {E_i} compatible with an observable, each
/// element labeled by the eigenvalue of the block it lives in. Basis choice
/// is physically meaningful, so it lives here and not in the decomposition.
class MeasurementBasis {
 public:
  struct Element {
    Matrix projector;  // rank one
    double label;      // eigenvalue of the containing spectral point
  };

  /// Deterministic basis from each projector's own eigenvectors.
  static MeasurementBasis canonical(const SpectralDecomposition& sd);

  /// Canonical basis rotated by a seeded random unitary within each
  /// degenerate eigenspace (QR of a complex normal block).
  static MeasurementBasis random_rotation(const SpectralDecomposition& sd, std::uint64_t seed);

  const std::vector<Element>& elements() const { return elements_; }
  int dim() const { return elements_.empty() ? 0 : static_cast<int>(elements_[0].projector.rows()); }

  /// Same basis, labels pushed through beta_of(label). Any basis for A is
  /// also a basis for g(A).
  template <typename F>
  MeasurementBasis relabel(F&& beta_of) const {
    MeasurementBasis out;
    out.elements_ = elements_;
    for (auto& e : out.elements_) e.label = beta_of(e.label);
    return out;
  }

  /// Throws BasisMismatch unless the elements are orthogonal rank-one
  /// projectors summing to identity with E_i A = label_i E_i.
  void validate_against(const SpectralDecomposition& sd,
                        const Tolerances& tols = default_tols()) const;

  bool approx_equal(const MeasurementBasis& other,
                    double tol_per_dim = default_tols().eq_tol) const;

 private:
  std::vector<Element> elements_;
};

}  // namespace qmeas
