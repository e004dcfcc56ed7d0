#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmeas/errors.hpp"

namespace qmeas {

/// Finite sample space Lambda with named real-valued observables on it.
struct ClassicalSystem {
  std::vector<std::string> points;
  std::map<std::string, std::vector<double>> observables;  // name -> value per point

  void validate() const;
  const std::vector<double>& observable(const std::string& name) const;
};

/// Probability vector over Lambda, or the null vector (the absorbing state of
/// impossible events).
class ClassicalState {
 public:
  static ClassicalState null_state(std::size_t size);
  static ClassicalState from_weights(std::vector<double> weights);
  static ClassicalState uniform(std::size_t size);
  static ClassicalState point_mass(std::size_t size, std::size_t index);

  bool is_null() const { return is_null_; }
  const std::vector<double>& weights() const { return weights_; }
  bool approx_equal(const ClassicalState& other, double tol = 1e-12) const;

 private:
  ClassicalState(std::vector<double> w, bool n) : weights_(std::move(w)), is_null_(n) {}
  std::vector<double> weights_;
  bool is_null_;
};

/// "(Delta, A)" over a finite Lambda.
struct ClassicalEvent {
  std::vector<double> values;        // observable values per point
  std::vector<double> delta;
};

/// mu(A^{-1}(Delta)), the pushforward probability.
double classical_probability(const ClassicalState& mu, const ClassicalEvent& event);

/// Conditioning on A^{-1}(Delta); null when the probability is zero.
ClassicalState classical_update(const ClassicalState& mu, const ClassicalEvent& event);

/// Points of Lambda (by index) where the observable value lies in delta.
std::vector<bool> preimage_indicator(const ClassicalEvent& event, std::size_t size);

/// If the two events have equal preimages, assert that classical_update
/// agrees on a spanning test set (all point masses plus uniform); true when
/// the assertion holds, vacuously true for distinct preimages.
bool classical_equivalence_check(const ClassicalSystem& system, const ClassicalEvent& e1,
                                 const ClassicalEvent& e2);

}  // namespace qmeas
