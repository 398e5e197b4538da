#include "localscore/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "localscore/errors.hpp"

namespace localscore {

namespace {

void check_family_vector(const LocalPotentialFamily& family, std::size_t n) {
  const auto& space = family.space();
  if (!space.enumerable()) throw UnsupportedError("space too large to enumerate: " + space.describe());
  if (n != space.size()) {
    throw InputError("vector has " + std::to_string(n) + " entries, space has " + std::to_string(space.size()));
  }
}

void ratios(const std::vector<Index>& nb, const UnnormalizedVector& f, Index y, std::vector<double>& out) {
  out.resize(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) out[i] = std::exp(f.log_value(nb[i]) - f.log_value(y));
}

}  // namespace

UnnormalizedVector UnnormalizedVector::from_log(std::vector<double> log_values) {
  if (log_values.empty()) throw InputError("unnormalized vector must be nonempty");
  for (double v : log_values) {
    if (!std::isfinite(v)) throw InputError("log values must be finite");
  }
  return UnnormalizedVector(std::move(log_values));
}

UnnormalizedVector UnnormalizedVector::from_values(const std::vector<double>& values) {
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw InputError("entries must be finite and positive");
    logs[i] = std::log(values[i]);
  }
  return from_log(std::move(logs));
}

double UnnormalizedVector::value(Index y) const { return std::exp(log_values_.at(y)); }

UnnormalizedVector UnnormalizedVector::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw InputError("scale must be positive");
  auto logs = log_values_;
  const double l = std::log(lambda);
  for (double& v : logs) v += l;
  return UnnormalizedVector(std::move(logs));
}

LogDensity UnnormalizedVector::log_density() const {
  return [this](Index z) {
    if (z >= log_values_.size()) throw InputError("log f queried outside the available support");
    return log_values_[z];
  };
}

Probability Probability::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw InputError("probability vector must be nonempty");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("probability entries must be strictly positive");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw InputError("probability entries must sum to one");
  return Probability(std::move(weights));
}

Probability Probability::normalized(const std::vector<double>& positive) {
  if (positive.empty()) throw InputError("probability vector must be nonempty");
  double sum = 0.0;
  for (double w : positive) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("entries must be finite and positive");
    sum += w;
  }
  std::vector<double> w(positive.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = positive[i] / sum;
  return Probability(std::move(w));
}

Probability Probability::from_log_weights(const std::vector<double>& log_weights) {
  if (log_weights.empty()) throw InputError("probability vector must be nonempty");
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(m)) throw InputError("log weights must be finite");
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - m);
  return normalized(w);
}

double composite_potential(const LocalPotentialFamily& family, const UnnormalizedVector& f) {
  check_family_vector(family, f.size());
  std::vector<Index> nb;
  std::vector<double> r;
  double total = 0.0;
  for (Index y : family.active_points()) {
    family.neighborhood().neighbors_into(y, nb);
    ratios(nb, f, y, r);
    total += f.value(y) * family.local_potential(y, r);
  }
  return total;
}

double divergence(const LocalPotentialFamily& family, const UnnormalizedVector& f, const UnnormalizedVector& g) {
  check_family_vector(family, f.size());
  check_family_vector(family, g.size());
  std::vector<Index> nb;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> grad;
  double total = 0.0;
  double scale = 0.0;
  for (Index y : family.active_points()) {
    family.neighborhood().neighbors_into(y, nb);
    ratios(nb, f, y, a);
    ratios(nb, g, y, b);
    grad.resize(nb.size());
    family.local_potential_gradient(y, b, grad);
    const double phi_a = family.local_potential(y, a);
    const double phi_b = family.local_potential(y, b);
    double linear = 0.0;
    for (std::size_t i = 0; i < nb.size(); ++i) linear += grad[i] * (a[i] - b[i]);
    const double fy = f.value(y);
    total += fy * (phi_a - phi_b - linear);
    scale += fy * (std::abs(phi_a) + std::abs(phi_b) + std::abs(linear));
  }
  if (total < 0.0) {
    const double tolerance = 1e-12 * std::max(1.0, scale);
    if (total < -tolerance) {
      throw InternalConsistencyError("negative divergence " + std::to_string(total) + " beyond rounding tolerance");
    }
    total = 0.0;
  }
  return total;
}

double expected_score(const LocalPotentialFamily& family, const Probability& p, const UnnormalizedVector& f) {
  check_family_vector(family, p.size());
  check_family_vector(family, f.size());
  const auto log_f = f.log_density();
  double total = 0.0;
  for (Index y = 0; y < p.size(); ++y) total += p[y] * score(family, y, log_f);
  return total;
}

double expected_score(const LocalScore& rule, const Probability& p, const UnnormalizedVector& f) {
  check_family_vector(rule.family(), p.size());
  check_family_vector(rule.family(), f.size());
  const auto log_f = f.log_density();
  double total = 0.0;
  for (Index y = 0; y < p.size(); ++y) total += p[y] * rule.value(y, log_f);
  return total;
}

double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace localscore
