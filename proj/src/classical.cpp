#include "qmeas/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmeas {

void ClassicalSystem::validate() const {
  if (points.empty()) throw ValidationError("classical system needs at least one point");
  for (const auto& [name, values] : observables) {
    if (values.size() != points.size()) {
      throw ValidationError("observable '" + name + "' is not total on Lambda");
    }
  }
}

const std::vector<double>& ClassicalSystem::observable(const std::string& name) const {
  const auto it = observables.find(name);
  if (it == observables.end()) throw ValidationError("unknown observable '" + name + "'");
  return it->second;
}

ClassicalState ClassicalState::null_state(std::size_t size) {
  return ClassicalState(std::vector<double>(size, 0.0), true);
}

ClassicalState ClassicalState::from_weights(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("classical state has a negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("classical weights do not sum to 1");
  return ClassicalState(std::move(weights), false);
}

ClassicalState ClassicalState::uniform(std::size_t size) {
  return from_weights(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

ClassicalState ClassicalState::point_mass(std::size_t size, std::size_t index) {
  std::vector<double> w(size, 0.0);
  w.at(index) = 1.0;
  return from_weights(std::move(w));
}

bool ClassicalState::approx_equal(const ClassicalState& other, double tol) const {
  if (is_null_ != other.is_null_) return false;
  if (is_null_) return true;
  if (weights_.size() != other.weights_.size()) return false;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (std::abs(weights_[i] - other.weights_[i]) > tol) return false;
  }
  return true;
}

std::vector<bool> preimage_indicator(const ClassicalEvent& event, std::size_t size) {
  if (event.values.size() != size) {
    throw ValidationError("event observable is not total on Lambda");
  }
  std::vector<bool> in(size, false);
  for (std::size_t i = 0; i < size; ++i) {
    for (double d : event.delta) {
      if (event.values[i] == d) in[i] = true;
    }
  }
  return in;
}

double classical_probability(const ClassicalState& mu, const ClassicalEvent& event) {
  if (mu.is_null()) throw ValidationError("probability of the null state is undefined");
  const auto in = preimage_indicator(event, mu.weights().size());
  double p = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i]) p += mu.weights()[i];
  }
  return p;
}

ClassicalState classical_update(const ClassicalState& mu, const ClassicalEvent& event) {
  const std::size_t size = mu.weights().size();
  if (mu.is_null()) return ClassicalState::null_state(size);
  const auto in = preimage_indicator(event, size);
  double p = 0.0;
  std::vector<double> w(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    if (in[i]) {
      w[i] = mu.weights()[i];
      p += w[i];
    }
  }
  if (p == 0.0) return ClassicalState::null_state(size);
  for (double& x : w) x /= p;
  return ClassicalState::from_weights(std::move(w));
}

bool classical_equivalence_check(const ClassicalSystem& system, const ClassicalEvent& e1,
                                 const ClassicalEvent& e2) {
  system.validate();
  const std::size_t size = system.points.size();
  if (preimage_indicator(e1, size) != preimage_indicator(e2, size)) return true;  // vacuous
  std::vector<ClassicalState> probes;
  for (std::size_t i = 0; i < size; ++i) probes.push_back(ClassicalState::point_mass(size, i));
  probes.push_back(ClassicalState::uniform(size));
  for (const auto& mu : probes) {
    if (!classical_update(mu, e1).approx_equal(classical_update(mu, e2))) return false;
  }
  return true;
}

}  // namespace qmeas
