#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "qmeas/classical.hpp"

using namespace qmeas;

namespace {

ClassicalSystem four_point_system() {
  ClassicalSystem sys;
  sys.points = {"a", "b", "c", "d"};
  sys.observables["height"] = {1, 1, 2, 3};
  sys.observables["parity"] = {0, 1, 0, 1};
  sys.validate();
  return sys;
}

}  // namespace

TEST_CASE("classical probability is the pushforward") {
  const auto sys = four_point_system();
  const auto mu = ClassicalState::uniform(4);
  const ClassicalEvent two_preimages{sys.observable("height"), {1}};
  CHECK(classical_probability(mu, two_preimages) == doctest::Approx(0.5));
  const ClassicalEvent full{sys.observable("height"), {1, 2, 3}};
  CHECK(classical_probability(mu, full) == doctest::Approx(1.0));
  const auto point = ClassicalState::point_mass(4, 2);
  CHECK(classical_probability(point, ClassicalEvent{sys.observable("height"), {2}}) ==
        doctest::Approx(1.0));
  CHECK(classical_probability(point, ClassicalEvent{sys.observable("height"), {3}}) ==
        doctest::Approx(0.0));
}

TEST_CASE("classical update is conditioning") {
  const auto sys = four_point_system();
  const auto mu = ClassicalState::uniform(4);
  const auto conditioned = classical_update(mu, ClassicalEvent{sys.observable("height"), {1}});
  CHECK(conditioned.weights() == std::vector<double>{0.5, 0.5, 0.0, 0.0});

  // Zero-probability events map to the null state.
  const auto point = ClassicalState::point_mass(4, 0);
  CHECK(classical_update(point, ClassicalEvent{sys.observable("height"), {3}}).is_null());

  // A point mass consistent with the event is unchanged.
  CHECK(classical_update(point, ClassicalEvent{sys.observable("height"), {1}})
            .approx_equal(point));
}

TEST_CASE("post-processed events have equal preimages and equal updates") {
  const auto sys = four_point_system();
  // g squares the height; (Delta, g o A) vs (g^-1(Delta), A).
  std::vector<double> squared;
  for (double v : sys.observable("height")) squared.push_back(v * v);
  const ClassicalEvent via_g{squared, {1, 4}};
  const ClassicalEvent direct{sys.observable("height"), {1, 2}};
  CHECK(preimage_indicator(via_g, 4) == preimage_indicator(direct, 4));
  CHECK(classical_equivalence_check(sys, via_g, direct));
}

TEST_CASE("event vs itself and disjoint preimages") {
  const auto sys = four_point_system();
  const ClassicalEvent e{sys.observable("parity"), {0}};
  CHECK(classical_equivalence_check(sys, e, e));
  const ClassicalEvent other{sys.observable("parity"), {1}};
  CHECK(classical_equivalence_check(sys, e, other));  // vacuous: preimages differ
}

TEST_CASE("exhaustive preimage-equality implies update-equality at small sizes") {
  // Brute force over all events of all observables on a 5-point system.
  ClassicalSystem sys;
  sys.points = {"p0", "p1", "p2", "p3", "p4"};
  sys.observables["A"] = {0, 0, 1, 2, 2};
  sys.observables["B"] = {5, 5, 6, 7, 7};  // same partition as A, shifted values
  sys.observables["C"] = {0, 1, 0, 1, 0};
  sys.validate();

  std::vector<ClassicalState> probes;
  for (std::size_t i = 0; i < 5; ++i) probes.push_back(ClassicalState::point_mass(5, i));
  probes.push_back(ClassicalState::uniform(5));

  auto ranges = [](const std::vector<double>& values) {
    std::vector<double> r = values;
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  };

  for (const auto& [n1, v1] : sys.observables) {
    for (const auto& [n2, v2] : sys.observables) {
      const auto r1 = ranges(v1);
      const auto r2 = ranges(v2);
      for (std::uint64_t m1 = 1; m1 < (1ull << r1.size()); ++m1) {
        for (std::uint64_t m2 = 1; m2 < (1ull << r2.size()); ++m2) {
          std::vector<double> d1, d2;
          for (std::size_t i = 0; i < r1.size(); ++i) {
            if (m1 & (1ull << i)) d1.push_back(r1[i]);
          }
          for (std::size_t i = 0; i < r2.size(); ++i) {
            if (m2 & (1ull << i)) d2.push_back(r2[i]);
          }
          const ClassicalEvent e1{v1, d1};
          const ClassicalEvent e2{v2, d2};
          if (preimage_indicator(e1, 5) != preimage_indicator(e2, 5)) continue;
          for (const auto& mu : probes) {
            CHECK(classical_update(mu, e1).approx_equal(classical_update(mu, e2)));
          }
        }
      }
    }
  }
}

TEST_CASE("validation catches partial observables") {
  ClassicalSystem sys;
  sys.points = {"a", "b"};
  sys.observables["partial"] = {1};
  CHECK_THROWS_AS(sys.validate(), ValidationError);
}
