#pragma once

#include <memory>
#include <string>
#include <vector>

#include "localscore/graph.hpp"
#include "localscore/sample_space.hpp"

namespace localscore {

// Neighbor generator b(y). Implementations never enumerate the space, so
// hypercubes with D well beyond the enumerable limit are usable by scores.
class NeighborhoodSystem {
 public:
  explicit NeighborhoodSystem(SampleSpace space) : space_(std::move(space)) {}
  virtual ~NeighborhoodSystem() = default;

  const SampleSpace& space() const noexcept { return space_; }

  // Writes the sorted list b(y) into `out` (cleared first).
  virtual void neighbors_into(Index y, std::vector<Index>& out) const = 0;
  std::vector<Index> neighbors(Index y) const {
    std::vector<Index> out;
    neighbors_into(y, out);
    return out;
  }

  virtual std::string describe() const = 0;

 protected:
  void check_point(Index y) const;

 private:
  SampleSpace space_;
};

// Neighborhood given as a union of block neighborhoods b_l(y), l = 1..m.
class BlockNeighborhood : public NeighborhoodSystem {
 public:
  using NeighborhoodSystem::NeighborhoodSystem;

  virtual std::size_t num_blocks() const = 0;
  // Sorted b_l(y); may be empty.
  virtual void block_neighbors_into(Index y, std::size_t block, std::vector<Index>& out) const = 0;
  std::vector<Index> block_neighbors(Index y, std::size_t block) const {
    std::vector<Index> out;
    block_neighbors_into(y, block, out);
    return out;
  }

  void neighbors_into(Index y, std::vector<Index>& out) const override;
};

// Hypercube points within Hamming distance 1..radius.
class HammingNeighborhood final : public NeighborhoodSystem {
 public:
  HammingNeighborhood(int dimension, int radius);

  int radius() const noexcept { return radius_; }
  void neighbors_into(Index y, std::vector<Index>& out) const override;
  std::string describe() const override;

 private:
  int radius_;
  std::vector<Index> flip_masks_;
};

// Composite-likelihood blocks on a hypercube: b_l(y) are the points that
// differ from y only inside A_l.
class HypercubeBlockNeighborhood final : public BlockNeighborhood {
 public:
  explicit HypercubeBlockNeighborhood(BlockSystem blocks);

  const BlockSystem& blocks() const noexcept { return blocks_; }
  std::size_t num_blocks() const override { return blocks_.size(); }
  void block_neighbors_into(Index y, std::size_t block, std::vector<Index>& out) const override;
  std::string describe() const override;

 private:
  BlockSystem blocks_;
  std::vector<std::vector<Index>> submasks_;
};

// Labels 0..L-1 with |y - z| <= band. Blocks are the band+1 windows of
// width band+1 containing y: n_l(y) = [y - l, y - l + band], l = 0..band.
class LabelBandNeighborhood final : public BlockNeighborhood {
 public:
  LabelBandNeighborhood(Index labels, Index band);

  Index band() const noexcept { return band_; }
  std::size_t num_blocks() const override { return static_cast<std::size_t>(band_) + 1; }
  void neighbors_into(Index y, std::vector<Index>& out) const override;
  void block_neighbors_into(Index y, std::size_t block, std::vector<Index>& out) const override;
  std::string describe() const override;

 private:
  Index band_;
};

// Adapter over an explicit graph.
class GraphNeighborhood final : public NeighborhoodSystem {
 public:
  explicit GraphNeighborhood(std::shared_ptr<const NeighborhoodGraph> graph);

  const NeighborhoodGraph& graph() const noexcept { return *graph_; }
  void neighbors_into(Index y, std::vector<Index>& out) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const NeighborhoodGraph> graph_;
};

// Builds the explicit graph of an implicit system (enumerable spaces only).
NeighborhoodGraph materialize(const NeighborhoodSystem& system);

}  // namespace localscore
