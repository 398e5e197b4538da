#pragma once

#include <vector>

#include "localscore/scores.hpp"

namespace localscore {

// Strictly positive vector over an enumerable space, stored as logarithms.
class UnnormalizedVector {
 public:
  static UnnormalizedVector from_log(std::vector<double> log_values);
  static UnnormalizedVector from_values(const std::vector<double>& values);

  std::size_t size() const noexcept { return log_values_.size(); }
  const std::vector<double>& log_values() const noexcept { return log_values_; }
  double log_value(Index y) const { return log_values_.at(y); }
  double value(Index y) const;
  UnnormalizedVector scaled(double lambda) const;
  // Query function for scores; out-of-range queries throw InputError.
  LogDensity log_density() const;

 private:
  explicit UnnormalizedVector(std::vector<double> log_values) : log_values_(std::move(log_values)) {}
  std::vector<double> log_values_;
};

// Strictly positive weights summing to one within 1e-12.
class Probability {
 public:
  static Probability from_weights(std::vector<double> weights);
  // Normalizes any strictly positive vector.
  static Probability normalized(const std::vector<double>& positive);
  static Probability from_log_weights(const std::vector<double>& log_weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](Index y) const { return weights_.at(y); }
  UnnormalizedVector as_unnormalized() const { return UnnormalizedVector::from_values(weights_); }

 private:
  explicit Probability(std::vector<double> weights) : weights_(std::move(weights)) {}
  std::vector<double> weights_;
};

// phi(f) = sum_{y in Y0} f_y phi_y(f_{b(y)} / f_y).
double composite_potential(const LocalPotentialFamily& family, const UnnormalizedVector& f);

// D(f, g) = sum_{y in Y0} f_y D_{phi_y}(f_{b(y)} / f_y, g_{b(y)} / g_y).
// Rounding noise below zero is clipped; anything beyond the tolerance
// raises InternalConsistencyError.
double divergence(const LocalPotentialFamily& family, const UnnormalizedVector& f, const UnnormalizedVector& g);

// S(p, f) = sum_y p_y S(y, f).
double expected_score(const LocalPotentialFamily& family, const Probability& p, const UnnormalizedVector& f);
double expected_score(const LocalScore& rule, const Probability& p, const UnnormalizedVector& f);

// |a - b| / max(1, |a|, |b|).
double relative_difference(double a, double b);

}  // namespace localscore
