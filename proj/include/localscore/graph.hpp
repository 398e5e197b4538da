#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "localscore/sample_space.hpp"

namespace localscore {

// Symmetric, loop-free neighborhood system b(y) over an enumerable space.
// Adjacency lists are sorted; n(y) = b(y) + {y} is derived on demand.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph(SampleSpace space, std::vector<std::vector<Index>> adjacency);

  static NeighborhoodGraph from_edges(SampleSpace space,
                                      const std::vector<std::pair<Index, Index>>& edges);

  const SampleSpace& space() const noexcept { return space_; }
  Index size() const noexcept { return space_.size(); }

  std::span<const Index> neighbors(Index y) const { return adjacency_.at(y); }
  std::vector<Index> closed_neighborhood(Index y) const;
  std::size_t degree(Index y) const { return adjacency_.at(y).size(); }
  bool adjacent(Index y, Index z) const;

  std::size_t edge_count() const noexcept { return edge_count_; }
  // Canonical (min, max) pairs in lexicographic order.
  std::vector<std::pair<Index, Index>> edges() const;

  const std::vector<std::vector<Index>>& adjacency() const noexcept { return adjacency_; }

 private:
  SampleSpace space_;
  std::vector<std::vector<Index>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Index sets A_1..A_m over hypercube coordinates 1..D.
class BlockSystem {
 public:
  BlockSystem(int dimension, std::vector<std::vector<int>> blocks);

  // Parses "1,2;3,4" (1-based coordinates).
  static BlockSystem parse(int dimension, const std::string& text);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  // Bit mask of block l (coordinate i -> bit i-1).
  Index mask(std::size_t block) const { return masks_.at(block); }
  bool covers_all_coordinates() const;
  std::string describe() const;

 private:
  int dimension_;
  std::vector<std::vector<int>> blocks_;
  std::vector<Index> masks_;
};

// Graph induced on a vertex subset; adjacency holds positions into `vertices`.
struct SubsetGraph {
  std::vector<Index> vertices;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t edge_count() const;
};

NeighborhoodGraph hamming_graph(int dimension, int radius);
NeighborhoodGraph label_band_graph(Index labels, Index band);

// Adds every pair of distinct points that share a common neighbor.
NeighborhoodGraph extended_graph(const NeighborhoodGraph& graph);

// G0: edge iff n(y) and n(y') intersect.
SubsetGraph derived_graph_n(const NeighborhoodGraph& graph, std::span<const Index> active);
// G0': edge iff b(y) and b(y') intersect.
SubsetGraph derived_graph_b(const NeighborhoodGraph& graph, std::span<const Index> active);

std::vector<std::vector<Index>> components(const NeighborhoodGraph& graph);
std::vector<std::vector<Index>> components(const SubsetGraph& graph);
bool is_connected(const NeighborhoodGraph& graph);
bool is_connected(const SubsetGraph& graph);

enum class CoverMode { Closed, Open };  // union of n(y) / union of b(y)

bool covers(const NeighborhoodGraph& graph, std::span<const Index> active, CoverMode mode);

struct ClNeighborhood {
  NeighborhoodGraph graph;
  // block_neighbors[y][l] = b_l(y), sorted.
  std::vector<std::vector<std::vector<Index>>> block_neighbors;
};

ClNeighborhood cl_neighborhood(const BlockSystem& blocks);

// Connectivity of G0 over the full space agrees with the block cover test.
bool cl_connectivity_matches_cover(const BlockSystem& blocks);

enum class PotentialClass { StrictlyConvex, PseudoSpherical };

struct GraphDiagnostics {
  bool covers_n = false;
  bool covers_b = false;
  bool g0_connected = false;
  bool g0prime_connected = false;
  std::size_t component_count_g0 = 0;
  std::size_t component_count_g0prime = 0;
  PotentialClass potential = PotentialClass::StrictlyConvex;

  // Sufficient condition for the coincidence axiom on the simplex.
  bool coincidence_guaranteed() const {
    return potential == PotentialClass::StrictlyConvex ? (covers_n && g0_connected)
                                                       : (covers_b && g0prime_connected);
  }
};

GraphDiagnostics diagnose(const NeighborhoodGraph& graph, std::span<const Index> active,
                          PotentialClass potential);

std::vector<Index> all_points(const SampleSpace& space);

// Edge-list text format: "space <kind> <param>" then one "i j" per line.
void write_edge_list(std::ostream& out, const NeighborhoodGraph& graph);
NeighborhoodGraph read_edge_list(std::istream& in);

}  // namespace localscore
