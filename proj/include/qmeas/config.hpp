#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qmeas {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances used across the library. All matrix-equality checks
/// are Frobenius-norm checks scaled by the matrix dimension.
struct Tolerances {
  double herm_tol = 1e-10;     // Hermiticity: ||A - A'||_F <= herm_tol * n
  double recon_tol = 1e-9;     // spectral reconstruction residual per dim
  double eq_tol = 1e-9;        // generic matrix equality per dim
  double cluster_tol = 1e-9;   // eigenvalue clustering (abs + rel)
  double psd_tol = 1e-10;      // allowed negative eigenvalue magnitude
  double prob_floor = 1e-12;   // probabilities below this count as zero
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

/// ||X - Y||_F <= tol * n, the library-wide matrix equality.
inline bool matrix_close(const Matrix& x, const Matrix& y, double tol_per_dim) {
  return (x - y).norm() <= tol_per_dim * static_cast<double>(x.rows());
}

/// Symmetrize against roundoff drift: (X + X') / 2.
inline Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

}  // namespace qmeas
