#include "localscore/potentials.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>

#include "localscore/errors.hpp"

namespace localscore {

PotentialKind PotentialKind::density_power(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("density-power gamma must be positive");
  return PotentialKind(Tag::DensityPower, gamma);
}

PotentialKind PotentialKind::pseudo_spherical(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("pseudo-spherical gamma must be positive");
  return PotentialKind(Tag::PseudoSpherical, gamma);
}

PotentialKind PotentialKind::custom_additive(CustomAdditivePotential potential) {
  if (!potential.value || !potential.derivative) {
    throw InputError("custom additive potential needs a value and a derivative");
  }
  const double h = 1e-3;
  for (double s = -3.0; s <= 3.0; s += 0.25) {
    const double t = std::exp(s);
    const double second = potential.value(t - h * t) - 2.0 * potential.value(t) + potential.value(t + h * t);
    if (second < -1e-8) {
      throw InputError("custom potential '" + potential.name + "' fails the convexity spot check at " +
                       std::to_string(t));
    }
  }
  PotentialKind kind(Tag::CustomAdditive, 0.0);
  kind.custom_ = std::make_shared<const CustomAdditivePotential>(std::move(potential));
  return kind;
}

namespace {

std::string with_gamma(const char* head, double gamma) {
  std::ostringstream os;
  os.precision(17);
  os << head << ':' << gamma;
  return os.str();
}

}  // namespace

std::string PotentialKind::name() const {
  switch (tag_) {
    case Tag::PseudoLikelihood:
      return "pl";
    case Tag::RatioMatching:
      return "rm";
    case Tag::DensityPower:
      return with_gamma("dp", gamma_);
    case Tag::PseudoSpherical:
      return with_gamma("ps", gamma_);
    case Tag::CompositeLikelihood:
      return "cl";
    case Tag::CustomAdditive:
      return "custom:" + custom_->name;
  }
  return {};
}

LocalPotentialFamily::LocalPotentialFamily(PotentialKind kind, std::shared_ptr<const NeighborhoodSystem> neighborhood,
                                           std::optional<std::vector<Index>> active)
    : kind_(std::move(kind)), neighborhood_(std::move(neighborhood)), active_(std::move(active)) {
  if (!neighborhood_) throw InputError("potential family needs a neighborhood system");
  if (kind_.tag() == PotentialKind::Tag::CompositeLikelihood) {
    blocks_ = dynamic_cast<const BlockNeighborhood*>(neighborhood_.get());
    if (!blocks_) throw InputError("composite likelihood requires a block neighborhood system");
  }
  const auto& space = neighborhood_->space();
  std::vector<Index> nb;
  if (active_) {
    auto& pts = *active_;
    if (pts.empty()) throw InputError("active set Y0 must be nonempty");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (Index y : pts) {
      if (!space.contains(y)) throw InputError("active point out of range: " + std::to_string(y));
      neighborhood_->neighbors_into(y, nb);
      if (nb.empty()) throw InputError("active point " + space.point_name(y) + " has no neighbors");
    }
  } else if (space.enumerable()) {
    for (Index y = 0; y < space.size(); ++y) {
      neighborhood_->neighbors_into(y, nb);
      if (nb.empty()) throw InputError("point " + space.point_name(y) + " has no neighbors");
    }
  }
}

bool LocalPotentialFamily::is_active(Index y) const {
  if (!active_) return space().contains(y);
  return std::binary_search(active_->begin(), active_->end(), y);
}

std::vector<Index> LocalPotentialFamily::active_points() const {
  if (active_) return *active_;
  return all_points(space());
}

void LocalPotentialFamily::check_arguments(Index y, std::span<const double> g) const {
  if (!is_active(y)) throw InputError("point " + std::to_string(y) + " is not in the active set Y0");
  const auto nb = neighborhood_->neighbors(y);
  if (g.size() != nb.size()) {
    throw InputError("local argument has dimension " + std::to_string(g.size()) + ", expected |b(y)| = " +
                     std::to_string(nb.size()));
  }
  for (double v : g) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("local argument must be strictly positive and finite");
  }
}

std::vector<std::vector<std::size_t>> LocalPotentialFamily::block_positions(Index y) const {
  const auto nb = neighborhood_->neighbors(y);
  std::vector<std::vector<std::size_t>> out(blocks_->num_blocks());
  std::vector<Index> block;
  for (std::size_t l = 0; l < out.size(); ++l) {
    blocks_->block_neighbors_into(y, l, block);
    for (Index z : block) {
      out[l].push_back(static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), z) - nb.begin()));
    }
  }
  return out;
}

namespace {

double lp_norm(std::span<const double> g, double p) {
  const double scale = *std::max_element(g.begin(), g.end());
  double total = 0.0;
  for (double v : g) total += std::pow(v / scale, p);
  return scale * std::pow(total, 1.0 / p);
}

}  // namespace

double LocalPotentialFamily::local_potential(Index y, std::span<const double> g) const {
  check_arguments(y, g);
  const double gamma = kind_.gamma();
  double total = 0.0;
  switch (kind_.tag()) {
    case PotentialKind::Tag::PseudoLikelihood:
      for (double v : g) total -= std::log1p(v);
      return total;
    case PotentialKind::Tag::RatioMatching:
      for (double v : g) total -= 0.5 * v / (1.0 + v);
      return total;
    case PotentialKind::Tag::DensityPower:
      for (double v : g) total += std::pow(v, 1.0 + gamma) / (1.0 + gamma);
      return total;
    case PotentialKind::Tag::PseudoSpherical:
      return lp_norm(g, 1.0 + gamma);
    case PotentialKind::Tag::CompositeLikelihood:
      for (const auto& positions : block_positions(y)) {
        double inner = 0.0;
        for (std::size_t k : positions) inner += g[k];
        total -= std::log1p(inner);
      }
      return total;
    case PotentialKind::Tag::CustomAdditive:
      for (double v : g) total += kind_.custom()->value(v);
      return total;
  }
  return total;
}

void LocalPotentialFamily::local_potential_gradient(Index y, std::span<const double> g, std::span<double> out) const {
  check_arguments(y, g);
  if (out.size() != g.size()) throw InputError("gradient output has the wrong dimension");
  const double gamma = kind_.gamma();
  switch (kind_.tag()) {
    case PotentialKind::Tag::PseudoLikelihood:
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = -1.0 / (1.0 + g[k]);
      return;
    case PotentialKind::Tag::RatioMatching:
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = -0.5 / ((1.0 + g[k]) * (1.0 + g[k]));
      return;
    case PotentialKind::Tag::DensityPower:
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = std::pow(g[k], gamma);
      return;
    case PotentialKind::Tag::PseudoSpherical: {
      const double norm = lp_norm(g, 1.0 + gamma);
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = std::pow(g[k] / norm, gamma);
      return;
    }
    case PotentialKind::Tag::CompositeLikelihood:
      std::fill(out.begin(), out.end(), 0.0);
      for (const auto& positions : block_positions(y)) {
        double inner = 0.0;
        for (std::size_t k : positions) inner += g[k];
        for (std::size_t k : positions) out[k] -= 1.0 / (1.0 + inner);
      }
      return;
    case PotentialKind::Tag::CustomAdditive:
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = kind_.custom()->derivative(g[k]);
      return;
  }
}

bool LocalPotentialFamily::locally_strictly_convex() const {
  switch (kind_.tag()) {
    case PotentialKind::Tag::PseudoSpherical:
      return false;
    case PotentialKind::Tag::CompositeLikelihood: {
      if (!space().enumerable()) return rank_condition(*blocks_, 0);
      for (Index y : active_points()) {
        if (!rank_condition(*blocks_, y)) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

PotentialClass LocalPotentialFamily::potential_class() const {
  return kind_.tag() == PotentialKind::Tag::PseudoSpherical ? PotentialClass::PseudoSpherical
                                                            : PotentialClass::StrictlyConvex;
}

std::size_t exact_rank(const std::vector<std::vector<int>>& rows) {
  using Rational = boost::multiprecision::cpp_rational;
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<Rational>> m;
  m.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != cols) throw InputError("exact_rank: ragged matrix");
    m.emplace_back(row.begin(), row.end());
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const Rational factor = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

bool rank_condition(const BlockNeighborhood& blocks, Index y) {
  const auto nb = blocks.neighbors(y);
  const std::size_t m = blocks.num_blocks();
  if (nb.size() > m) return false;
  std::vector<std::vector<int>> rows(nb.size(), std::vector<int>(m, 0));
  std::vector<Index> block;
  for (std::size_t l = 0; l < m; ++l) {
    blocks.block_neighbors_into(y, l, block);
    for (Index z : block) {
      const auto row = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), z) - nb.begin());
      rows[row][l] = 1;
    }
  }
  return exact_rank(rows) == nb.size();
}

bool rank_condition(const BlockSystem& blocks, Index y) {
  return rank_condition(HypercubeBlockNeighborhood(blocks), y);
}

}  // namespace localscore
