#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localscore/graph.hpp"
#include "localscore/neighborhood.hpp"

namespace localscore {

// One-dimensional convex function used by additive local potentials
// phi_y(g) = sum_z phi(g_z). The second derivative is optional; when it is
// absent score gradients fall back to central differences.
struct CustomAdditivePotential {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
};

class PotentialKind {
 public:
  enum class Tag { PseudoLikelihood, RatioMatching, DensityPower, PseudoSpherical, CompositeLikelihood, CustomAdditive };

  static PotentialKind pseudo_likelihood() { return PotentialKind(Tag::PseudoLikelihood, 0.0); }
  static PotentialKind ratio_matching() { return PotentialKind(Tag::RatioMatching, 0.0); }
  static PotentialKind density_power(double gamma);
  static PotentialKind pseudo_spherical(double gamma);
  static PotentialKind composite_likelihood() { return PotentialKind(Tag::CompositeLikelihood, 0.0); }
  // Spot-checks convexity (second differences >= -1e-8 on a grid).
  static PotentialKind custom_additive(CustomAdditivePotential potential);

  Tag tag() const noexcept { return tag_; }
  double gamma() const noexcept { return gamma_; }
  const CustomAdditivePotential* custom() const noexcept { return custom_.get(); }

  // phi_y is a sum of one-dimensional terms over b(y).
  bool additive() const noexcept {
    return tag_ == Tag::PseudoLikelihood || tag_ == Tag::RatioMatching || tag_ == Tag::DensityPower ||
           tag_ == Tag::CustomAdditive;
  }
  std::string name() const;

 private:
  PotentialKind(Tag tag, double gamma) : tag_(tag), gamma_(gamma) {}

  Tag tag_;
  double gamma_;
  std::shared_ptr<const CustomAdditivePotential> custom_;
};

// Phi = {phi_y : y in Y0} over a neighborhood system.
class LocalPotentialFamily {
 public:
  // `active` lists Y0; std::nullopt means Y0 = Y.
  LocalPotentialFamily(PotentialKind kind, std::shared_ptr<const NeighborhoodSystem> neighborhood,
                       std::optional<std::vector<Index>> active = std::nullopt);

  const PotentialKind& kind() const noexcept { return kind_; }
  const NeighborhoodSystem& neighborhood() const noexcept { return *neighborhood_; }
  std::shared_ptr<const NeighborhoodSystem> neighborhood_ptr() const noexcept { return neighborhood_; }
  const SampleSpace& space() const noexcept { return neighborhood_->space(); }
  // Non-null for composite-likelihood families.
  const BlockNeighborhood* blocks() const noexcept { return blocks_; }

  bool full_active_set() const noexcept { return !active_.has_value(); }
  bool is_active(Index y) const;
  // Y0 as a sorted list (enumerable spaces only when Y0 = Y).
  std::vector<Index> active_points() const;
  bool additive() const noexcept { return kind_.additive(); }

  // phi_y(g), g indexed like the sorted b(y).
  double local_potential(Index y, std::span<const double> g) const;
  void local_potential_gradient(Index y, std::span<const double> g, std::span<double> out) const;

  // Local strict convexity of every phi_y: false for pseudo-spherical,
  // the rank condition for composite likelihood, true otherwise.
  bool locally_strictly_convex() const;
  PotentialClass potential_class() const;

 private:
  void check_arguments(Index y, std::span<const double> g) const;
  // Positions of each b_l(y) inside the sorted b(y).
  std::vector<std::vector<std::size_t>> block_positions(Index y) const;

  PotentialKind kind_;
  std::shared_ptr<const NeighborhoodSystem> neighborhood_;
  const BlockNeighborhood* blocks_ = nullptr;
  std::optional<std::vector<Index>> active_;
};

// Rank of the |b(y)| x m incidence matrix (1_{b_1(y)}, ..., 1_{b_m(y)})
// equals |b(y)|. Computed exactly over the rationals.
bool rank_condition(const BlockNeighborhood& blocks, Index y);
bool rank_condition(const BlockSystem& blocks, Index y);

// Exact rank of a 0/1 matrix given as rows.
std::size_t exact_rank(const std::vector<std::vector<int>>& rows);

}  // namespace localscore
