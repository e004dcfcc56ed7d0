#include <doctest.h>

#include "qmeas/functional_calculus.hpp"
#include "test_util.hpp"

using namespace qmeas;
using namespace qmeas::testutil;

TEST_CASE("square of diag(1,-1) is the identity with merged spectrum") {
  const auto sd = eigendecompose(diag({1, -1}));
  const auto squared = apply_function(SpectrumFunction::square(), sd);
  REQUIRE(squared.spectrum_size() == 1);
  CHECK(squared.points()[0].eigenvalue == doctest::Approx(1));
  CHECK(matrix_close(squared.operator_matrix(), Matrix::Identity(2, 2), 1e-10));
}

TEST_CASE("identity function reproduces the input decomposition") {
  const auto sd = eigendecompose(random_hermitian(4, 11));
  const auto mapped = apply_function(SpectrumFunction::identity(), sd);
  REQUIRE(mapped.spectrum_size() == sd.spectrum_size());
  for (std::size_t i = 0; i < sd.spectrum_size(); ++i) {
    CHECK(matrix_close(mapped.points()[i].projector, sd.points()[i].projector, 1e-10));
  }
}

TEST_CASE("square of diag(2,0,-2) merges the +-2 blocks") {
  const auto sd = eigendecompose(diag({2, 0, -2}));
  const auto squared = apply_function(SpectrumFunction::square(), sd);
  REQUIRE(squared.spectrum_size() == 2);
  CHECK(squared.points()[0].eigenvalue == doctest::Approx(0));
  CHECK(squared.points()[1].eigenvalue == doctest::Approx(4));
  CHECK(squared.points()[1].rank == 2);
  CHECK(matrix_close(squared.points()[1].projector,
                     sd.projector_of(2) + sd.projector_of(-2), 1e-10));
}

TEST_CASE("explicit tables are domain checked") {
  const auto sd = eigendecompose(diag({1, -1}));
  const SpectrumFunction partial({{1.0, 0.0}});
  CHECK_THROWS_AS(apply_function(partial, sd), DomainMismatch);
  const SpectrumFunction offset({{1.0, 0.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(apply_function(offset, sd), DomainMismatch);
}

TEST_CASE("preimage partition") {
  const auto sd2 = eigendecompose(diag({1, -1}));
  const auto p2 = preimage_partition(SpectrumFunction::square(), sd2);
  REQUIRE(p2.blocks.size() == 1);
  CHECK(p2.blocks[0].second == std::vector<double>{-1, 1});

  const auto sd3 = eigendecompose(diag({2, 0, -2}));
  const auto p3 = preimage_partition(SpectrumFunction::square(), sd3);
  REQUIRE(p3.blocks.size() == 2);
  CHECK(p3.blocks[0].second == std::vector<double>{0});
  CHECK(p3.blocks[1].second == std::vector<double>{-2, 2});

  const auto injective = preimage_partition(SpectrumFunction::identity(), sd3);
  for (const auto& [beta, block] : injective.blocks) CHECK(block.size() == 1);
}

TEST_CASE("coarse graining classification") {
  CHECK(is_coarse_graining(SpectrumFunction::square(), eigendecompose(diag({1, -1}))));
  CHECK_FALSE(is_coarse_graining(SpectrumFunction::identity(), eigendecompose(diag({1, -1}))));
  CHECK_FALSE(is_coarse_graining(SpectrumFunction::square(), eigendecompose(diag({0, 1, 2}))));
}

TEST_CASE("induced nondegenerate member") {
  const auto sd = eigendecompose(diag({3, 3, -1}));
  const auto basis = MeasurementBasis::canonical(sd);
  const auto induced = induced_nondegenerate_member(basis, 99);
  const auto bsd = eigendecompose(induced.operator_matrix);
  CHECK(bsd.spectrum_size() == 3);  // nondegenerate by construction

  // The original observable is a function of the induced one:
  // g(c_i) = label_i recovers A by matrix equality.
  std::vector<std::pair<double, double>> table;
  for (std::size_t i = 0; i < induced.coefficients.size(); ++i) {
    table.emplace_back(induced.coefficients[i], basis.elements()[i].label);
  }
  const auto recovered = apply_function(SpectrumFunction(table), bsd);
  CHECK(matrix_close(recovered.operator_matrix(), sd.operator_matrix(), 1e-9));
}

TEST_CASE("spectral mapping, composition, commutation and projector transport hold "
          "on random cases") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const auto sd = eigendecompose(random_hermitian(n, 1000 + seed));
    // A pseudo-random table g on sigma(A), non-injective for even seeds.
    std::vector<std::pair<double, double>> table;
    const auto eigs = sd.eigenvalues();
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      const double v = (seed % 2 == 0) ? static_cast<double>(i / 2) : static_cast<double>(i) + 0.5;
      table.emplace_back(eigs[i], v);
    }
    const SpectrumFunction g{table};
    const auto gsd = apply_function(g, sd);

    // Spectral mapping: sigma(g(A)) = g(sigma(A)) as sets post-merge.
    std::vector<double> image;
    for (const auto& [a, v] : table) {
      if (std::find(image.begin(), image.end(), v) == image.end()) image.push_back(v);
    }
    CHECK(gsd.spectrum_size() == image.size());
    for (double v : image) CHECK(gsd.snap(v).has_value());

    // Commutation: [g(A), A] = 0.
    const Matrix& a = sd.operator_matrix();
    const Matrix& ga = gsd.operator_matrix();
    CHECK((ga * a - a * ga).norm() <= 1e-9 * n);

    // Composition: h(g(A)) = (h o g)(A) with h = square.
    const auto outer = apply_function(SpectrumFunction::square(), gsd);
    std::vector<std::pair<double, double>> composed;
    for (const auto& [alpha, v] : table) composed.emplace_back(alpha, v * v);
    const auto direct = apply_function(SpectrumFunction{composed}, sd);
    CHECK(matrix_close(outer.operator_matrix(), direct.operator_matrix(), 1e-9));

    // Projector transport: chi_Delta(g(A)) = chi_{g^-1(Delta)}(A).
    const auto partition = preimage_partition(g, sd);
    for (const auto& [beta, block] : partition.blocks) {
      CHECK(matrix_close(gsd.projector_of(beta), sd.spectral_projector(block), 1e-9));
    }
  }
}
