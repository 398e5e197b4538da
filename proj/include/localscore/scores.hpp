#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "localscore/potentials.hpp"

namespace localscore {

// Query function returning log f_z. Scores only ever evaluate it on the
// (extended) neighborhood of the scored point.
using LogDensity = std::function<double(Index)>;

// log f restricted to a finite support; queries outside it throw InputError.
class PartialLogDensity {
 public:
  PartialLogDensity() = default;
  void set(Index z, double log_value) { values_[z] = log_value; }
  double operator()(Index z) const;

 private:
  std::unordered_map<Index, double> values_;
};

// Score of the composite potential, S(y, f) = -d phi(f) / d f_y, including
// the indicator terms for an active set Y0 that is a strict subset of Y.
double generic_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f);

// S(y, f) = sum_{z in b(y)} psi(f_z / f_y) for additive families with Y0 = Y,
// where psi(r) = r phi'(r) - phi(r) - phi'(1/r).
double additive_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f);

// Additive fast path when available, otherwise the generic formula.
double score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f);

// Named closed forms: pseudo-likelihood, ratio matching, local density-power,
// local pseudo-spherical, and the modified composite likelihood for block
// families. Requires Y0 = Y. Custom additive potentials have no closed form.
double named_closed_form_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f);

// Standard composite likelihood sum_l log(1 + sum_{z in b_l(y)} f_z / f_y).
// Proper only when every block neighborhood is an equivalence function.
double cl_score(const BlockNeighborhood& blocks, Index y, const LogDensity& log_f);

double psi(const PotentialKind& kind, double ratio);

// Score-kind grammar: pl | rm | dp:<gamma> | ps:<gamma> | cl[:<blocks>] | mcl[:<blocks>]
struct ScoreSpec {
  enum class Family { PseudoLikelihood, RatioMatching, DensityPower, PseudoSpherical, CompositeLikelihood,
                      ModifiedCompositeLikelihood };
  Family family = Family::PseudoLikelihood;
  double gamma = 0.0;
  std::optional<std::string> blocks;
};

ScoreSpec parse_score_spec(const std::string& text);
std::string to_string(const ScoreSpec& spec);

// Score value with partial derivatives with respect to log f at every
// point the score reads (sorted by point index).
struct ScoreGradient {
  double value = 0.0;
  std::vector<std::pair<Index, double>> d_log_f;
};

// A scoring rule bound to a neighborhood system: either the proper score of
// a local potential family, or the standard composite likelihood.
class LocalScore {
 public:
  explicit LocalScore(LocalPotentialFamily family, bool standard_cl = false);

  // Hypercube: Hamming radius for pl/rm/dp/ps, block system for cl/mcl.
  // Labels: band k for every kind; cl/mcl use the sliding windows.
  static LocalScore from_spec(const ScoreSpec& spec, const SampleSpace& space, int radius_or_band);
  static LocalScore from_spec(const ScoreSpec& spec, std::shared_ptr<const NeighborhoodSystem> neighborhood);

  const LocalPotentialFamily& family() const noexcept { return family_; }
  bool standard_cl() const noexcept { return standard_cl_; }
  std::string name() const;

  double value(Index y, const LogDensity& log_f) const;
  ScoreGradient value_and_gradient(Index y, const LogDensity& log_f) const;

 private:
  LocalPotentialFamily family_;
  bool standard_cl_;
};

}  // namespace localscore
