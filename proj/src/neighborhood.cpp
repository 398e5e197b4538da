#include "localscore/neighborhood.hpp"

#include <algorithm>

#include "localscore/errors.hpp"

namespace localscore {

void NeighborhoodSystem::check_point(Index y) const {
  if (!space_.contains(y)) {
    throw InputError("point " + std::to_string(y) + " is outside the " + space_.describe() + " space");
  }
}

void BlockNeighborhood::neighbors_into(Index y, std::vector<Index>& out) const {
  out.clear();
  std::vector<Index> block;
  for (std::size_t l = 0; l < num_blocks(); ++l) {
    block_neighbors_into(y, l, block);
    out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

namespace {

void append_masks(int dimension, int remaining, int start, Index mask, std::vector<Index>& out) {
  if (remaining == 0) {
    out.push_back(mask);
    return;
  }
  for (int i = start; i < dimension; ++i) append_masks(dimension, remaining - 1, i + 1, mask | (Index{1} << i), out);
}

}  // namespace

HammingNeighborhood::HammingNeighborhood(int dimension, int radius)
    : NeighborhoodSystem(SampleSpace::hypercube(dimension)), radius_(radius) {
  if (radius < 1 || radius > dimension) throw InputError("Hamming radius must satisfy 1 <= radius <= D");
  for (int k = 1; k <= radius; ++k) append_masks(dimension, k, 0, 0, flip_masks_);
}

void HammingNeighborhood::neighbors_into(Index y, std::vector<Index>& out) const {
  check_point(y);
  out.clear();
  out.reserve(flip_masks_.size());
  for (Index m : flip_masks_) out.push_back(y ^ m);
  std::sort(out.begin(), out.end());
}

std::string HammingNeighborhood::describe() const {
  return "hamming D=" + std::to_string(space().dimension()) + " radius=" + std::to_string(radius_);
}

HypercubeBlockNeighborhood::HypercubeBlockNeighborhood(BlockSystem blocks)
    : BlockNeighborhood(SampleSpace::hypercube(blocks.dimension())), blocks_(std::move(blocks)) {
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const Index mask = blocks_.mask(l);
    std::vector<Index> subs;
    // Nonzero submasks of the block mask.
    for (Index s = mask; s != 0; s = (s - 1) & mask) subs.push_back(s);
    submasks_.push_back(std::move(subs));
  }
}

void HypercubeBlockNeighborhood::block_neighbors_into(Index y, std::size_t block, std::vector<Index>& out) const {
  check_point(y);
  const auto& subs = submasks_.at(block);
  out.clear();
  out.reserve(subs.size());
  for (Index s : subs) out.push_back(y ^ s);
  std::sort(out.begin(), out.end());
}

std::string HypercubeBlockNeighborhood::describe() const {
  return "blocks D=" + std::to_string(blocks_.dimension()) + " [" + blocks_.describe() + "]";
}

LabelBandNeighborhood::LabelBandNeighborhood(Index labels, Index band)
    : BlockNeighborhood(SampleSpace::label_range(labels)), band_(band) {
  if (band < 1 || band >= labels) throw InputError("label band must satisfy 1 <= k < L");
}

void LabelBandNeighborhood::neighbors_into(Index y, std::vector<Index>& out) const {
  check_point(y);
  out.clear();
  const Index lo = y >= band_ ? y - band_ : 0;
  const Index hi = std::min(space().size() - 1, y + band_);
  for (Index z = lo; z <= hi; ++z) {
    if (z != y) out.push_back(z);
  }
}

void LabelBandNeighborhood::block_neighbors_into(Index y, std::size_t block, std::vector<Index>& out) const {
  check_point(y);
  if (block > band_) throw InputError("block index out of range");
  out.clear();
  // Window [y - block, y - block + band], clipped to the label range.
  const Index shift = static_cast<Index>(block);
  const Index lo = y >= shift ? y - shift : 0;
  const Index top = y + band_ - shift;
  const Index hi = std::min(space().size() - 1, top);
  for (Index z = lo; z <= hi; ++z) {
    if (z != y) out.push_back(z);
  }
}

std::string LabelBandNeighborhood::describe() const {
  return "label band L=" + std::to_string(space().size()) + " k=" + std::to_string(band_);
}

GraphNeighborhood::GraphNeighborhood(std::shared_ptr<const NeighborhoodGraph> graph)
    : NeighborhoodSystem(graph->space()), graph_(std::move(graph)) {}

void GraphNeighborhood::neighbors_into(Index y, std::vector<Index>& out) const {
  check_point(y);
  const auto nb = graph_->neighbors(y);
  out.assign(nb.begin(), nb.end());
}

std::string GraphNeighborhood::describe() const {
  return "graph over " + space().describe() + " with " + std::to_string(graph_->edge_count()) + " edges";
}

NeighborhoodGraph materialize(const NeighborhoodSystem& system) {
  const auto& space = system.space();
  if (!space.enumerable()) throw UnsupportedError("cannot materialize a graph over more than 2^16 points");
  std::vector<std::vector<Index>> adjacency(space.size());
  for (Index y = 0; y < space.size(); ++y) system.neighbors_into(y, adjacency[y]);
  return NeighborhoodGraph(space, std::move(adjacency));
}

}  // namespace localscore
