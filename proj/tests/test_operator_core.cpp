#include <doctest.h>

#include "qmeas/operator_core.hpp"
#include "test_util.hpp"

using namespace qmeas;
using namespace qmeas::testutil;

TEST_CASE("eigendecompose diagonal input") {
  const auto sd = eigendecompose(diag({1, -1}));
  REQUIRE(sd.spectrum_size() == 2);
  CHECK(sd.eigenvalues() == std::vector<double>{-1, 1});
  CHECK(matrix_close(sd.projector_of(-1), diag({0, 1}), 1e-12));
  CHECK(matrix_close(sd.projector_of(1), diag({1, 0}), 1e-12));
}

TEST_CASE("eigendecompose degenerate diagonal") {
  const auto sd = eigendecompose(diag({1, 1, -1}));
  REQUIRE(sd.spectrum_size() == 2);
  CHECK(sd.points()[0].eigenvalue == doctest::Approx(-1));
  CHECK(sd.points()[0].rank == 1);
  CHECK(sd.points()[1].rank == 2);
}

TEST_CASE("eigendecompose Pauli-X") {
  const auto sd = eigendecompose(pauli_x());
  REQUIRE(sd.spectrum_size() == 2);
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK(matrix_close(sd.projector_of(1), plus, 1e-10));
  // Verify the reconstruction A = sum alpha E_alpha by direct multiplication.
  Matrix recon = Matrix::Zero(2, 2);
  for (const auto& p : sd.points()) recon += p.eigenvalue * p.projector;
  CHECK(matrix_close(recon, pauli_x(), 1e-10));
}

TEST_CASE("eigendecompose rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigendecompose(m), NonHermitianInput);
}

TEST_CASE("spectral decomposition invariants on random Hermitian matrices") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const Matrix a = random_hermitian(n, seed);
    const auto sd = eigendecompose(a);
    Matrix completeness = Matrix::Zero(n, n);
    int total_rank = 0;
    for (const auto& p : sd.points()) {
      completeness += p.projector;
      total_rank += p.rank;
      CHECK((p.projector * p.projector - p.projector).norm() < 1e-9 * n);
    }
    CHECK(matrix_close(completeness, Matrix::Identity(n, n), 1e-9));
    CHECK(total_rank == n);
    CHECK(sd.spectrum_size() <= static_cast<std::size_t>(n));
  }
}

TEST_CASE("eigendecompose is stable under tiny perturbation of a separated spectrum") {
  const Matrix a = diag({-2, 0.5, 3});
  Matrix perturbed = a;
  perturbed(0, 1) = Complex(1e-13, -1e-13);
  perturbed(1, 0) = Complex(1e-13, 1e-13);
  const auto sd1 = eigendecompose(a);
  const auto sd2 = eigendecompose(perturbed);
  REQUIRE(sd1.spectrum_size() == sd2.spectrum_size());
  for (std::size_t i = 0; i < sd1.spectrum_size(); ++i) {
    CHECK(sd1.points()[i].eigenvalue ==
          doctest::Approx(sd2.points()[i].eigenvalue).epsilon(1e-9));
  }
}

TEST_CASE("spectral_projector sums the requested blocks") {
  const auto sd = eigendecompose(diag({1, 1, -1}));
  CHECK(matrix_close(sd.spectral_projector({1}), diag({1, 1, 0}), 1e-10));
  CHECK(matrix_close(sd.spectral_projector(sd.eigenvalues()), Matrix::Identity(3, 3), 1e-10));
  CHECK(sd.spectral_projector({}).norm() == 0.0);
  CHECK_THROWS_AS(sd.spectral_projector({0.5}), UnknownSpectralPoint);
}

TEST_CASE("spectral_projector of the full Pauli-X spectrum is identity") {
  const auto sd = eigendecompose(pauli_x());
  CHECK(matrix_close(sd.spectral_projector({-1, 1}), Matrix::Identity(2, 2), 1e-10));
}

TEST_CASE("random_density") {
  CHECK(matrix_close(random_density(1, 7).matrix(), Matrix::Identity(1, 1), 1e-12));
  const auto a = random_density(3, 42);
  const auto b = random_density(3, 42);
  CHECK(matrix_close(a.matrix(), b.matrix(), 0.0));  // determinism
  const auto rho = random_density(2, 5);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  CHECK(solver.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("maximally_mixed") {
  CHECK(matrix_close(maximally_mixed(2).matrix(), diag({0.5, 0.5}), 1e-15));
  CHECK(matrix_close(maximally_mixed(3).matrix(), diag({1.0 / 3, 1.0 / 3, 1.0 / 3}), 1e-15));
  CHECK(maximally_mixed(5).matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("density state validation") {
  CHECK_THROWS_AS(DensityState::from_matrix(diag({1, 1})), ValidationError);
  CHECK_THROWS_AS(DensityState::from_matrix(diag({2, -1})), ValidationError);
  CHECK(DensityState::from_matrix(Matrix::Zero(2, 2)).is_null());
}

TEST_CASE("canonical measurement basis resolves the identity and matches labels") {
  const Matrix a = diag({1, 1, -1});
  const auto sd = eigendecompose(a);
  const auto basis = MeasurementBasis::canonical(sd);
  basis.validate_against(sd);
  REQUIRE(basis.elements().size() == 3);
}

TEST_CASE("random rotated bases stay valid and differ in degenerate blocks") {
  const auto sd = eigendecompose(diag({2, 2, -1}));
  const auto b1 = MeasurementBasis::random_rotation(sd, 1);
  const auto b2 = MeasurementBasis::random_rotation(sd, 2);
  b1.validate_against(sd);
  b2.validate_against(sd);
  CHECK_FALSE(b1.approx_equal(b2));
}

TEST_CASE("a basis for another observable is rejected") {
  const auto sd_z = eigendecompose(pauli_z());
  const auto sd_x = eigendecompose(pauli_x());
  const auto basis_x = MeasurementBasis::canonical(sd_x);
  CHECK_THROWS_AS(basis_x.validate_against(sd_z), BasisMismatch);
}
