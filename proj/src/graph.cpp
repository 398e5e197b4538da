#include "localscore/graph.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "localscore/errors.hpp"
#include "localscore/neighborhood.hpp"

namespace localscore {

NeighborhoodGraph::NeighborhoodGraph(SampleSpace space, std::vector<std::vector<Index>> adjacency)
    : space_(std::move(space)), adjacency_(std::move(adjacency)) {
  if (!space_.enumerable()) {
    throw UnsupportedError("explicit graphs require an enumerable space (size <= 2^16)");
  }
  if (adjacency_.size() != space_.size()) {
    throw InputError("adjacency has " + std::to_string(adjacency_.size()) + " rows for a space of size " +
                     std::to_string(space_.size()));
  }
  std::size_t directed = 0;
  for (Index y = 0; y < adjacency_.size(); ++y) {
    auto& row = adjacency_[y];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw InputError("duplicate neighbor in adjacency of point " + std::to_string(y));
    }
    for (Index z : row) {
      if (!space_.contains(z)) throw InputError("neighbor index out of range: " + std::to_string(z));
      if (z == y) throw InputError("loop at point " + std::to_string(y));
    }
    directed += row.size();
  }
  for (Index y = 0; y < adjacency_.size(); ++y) {
    for (Index z : adjacency_[y]) {
      if (!std::binary_search(adjacency_[z].begin(), adjacency_[z].end(), y)) {
        throw InputError("adjacency is not symmetric: " + std::to_string(y) + " -> " + std::to_string(z));
      }
    }
  }
  edge_count_ = directed / 2;
}

NeighborhoodGraph NeighborhoodGraph::from_edges(SampleSpace space,
                                                const std::vector<std::pair<Index, Index>>& edges) {
  if (!space.enumerable()) throw UnsupportedError("explicit graphs require an enumerable space");
  std::vector<std::vector<Index>> adjacency(space.size());
  for (auto [a, b] : edges) {
    if (!space.contains(a) || !space.contains(b)) throw InputError("edge endpoint out of range");
    if (a == b) throw InputError("loop edge at " + std::to_string(a));
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return NeighborhoodGraph(std::move(space), std::move(adjacency));
}

std::vector<Index> NeighborhoodGraph::closed_neighborhood(Index y) const {
  const auto& row = adjacency_.at(y);
  std::vector<Index> out(row.begin(), row.end());
  out.insert(std::upper_bound(out.begin(), out.end(), y), y);
  return out;
}

bool NeighborhoodGraph::adjacent(Index y, Index z) const {
  const auto& row = adjacency_.at(y);
  return std::binary_search(row.begin(), row.end(), z);
}

std::vector<std::pair<Index, Index>> NeighborhoodGraph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(edge_count_);
  for (Index y = 0; y < adjacency_.size(); ++y) {
    for (Index z : adjacency_[y]) {
      if (y < z) out.emplace_back(y, z);
    }
  }
  return out;
}

BlockSystem::BlockSystem(int dimension, std::vector<std::vector<int>> blocks)
    : dimension_(dimension), blocks_(std::move(blocks)) {
  if (dimension_ < 1 || dimension_ > kMaxHypercubeDimension) {
    throw InputError("block system dimension out of range");
  }
  if (blocks_.empty()) throw InputError("block system needs at least one block");
  for (auto& block : blocks_) {
    if (block.empty()) throw InputError("blocks must be nonempty");
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());
    Index mask = 0;
    for (int i : block) {
      if (i < 1 || i > dimension_) {
        throw InputError("block coordinate " + std::to_string(i) + " outside 1.." + std::to_string(dimension_));
      }
      mask |= Index{1} << (i - 1);
    }
    masks_.push_back(mask);
  }
}

BlockSystem BlockSystem::parse(int dimension, const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::stringstream outer(text);
  std::string group;
  while (std::getline(outer, group, ';')) {
    std::vector<int> block;
    std::stringstream inner(group);
    std::string item;
    while (std::getline(inner, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        const int value = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        block.push_back(value);
      } catch (const std::exception&) {
        throw InputError("cannot parse block coordinate '" + item + "'");
      }
    }
    blocks.push_back(std::move(block));
  }
  return BlockSystem(dimension, std::move(blocks));
}

bool BlockSystem::covers_all_coordinates() const {
  Index all = 0;
  for (Index m : masks_) all |= m;
  const Index full = (dimension_ == 64) ? ~Index{0} : ((Index{1} << dimension_) - 1);
  return all == full;
}

std::string BlockSystem::describe() const {
  std::string out;
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    if (l) out += ';';
    for (std::size_t k = 0; k < blocks_[l].size(); ++k) {
      if (k) out += ',';
      out += std::to_string(blocks_[l][k]);
    }
  }
  return out;
}

std::size_t SubsetGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : adjacency) total += row.size();
  return total / 2;
}

NeighborhoodGraph hamming_graph(int dimension, int radius) {
  if (dimension < 1 || radius < 1 || radius > dimension) {
    throw InputError("hamming_graph: radius must satisfy 1 <= radius <= D");
  }
  return materialize(HammingNeighborhood(dimension, radius));
}

NeighborhoodGraph label_band_graph(Index labels, Index band) {
  if (band < 1 || band >= labels) throw InputError("label_band_graph: band must satisfy 1 <= k < L");
  return materialize(LabelBandNeighborhood(labels, band));
}

NeighborhoodGraph extended_graph(const NeighborhoodGraph& graph) {
  std::vector<std::vector<Index>> adjacency(graph.adjacency());
  for (Index y = 0; y < graph.size(); ++y) {
    const auto nb = graph.neighbors(y);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        adjacency[nb[a]].push_back(nb[b]);
        adjacency[nb[b]].push_back(nb[a]);
      }
    }
  }
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return NeighborhoodGraph(graph.space(), std::move(adjacency));
}

namespace {

constexpr std::size_t kInactive = static_cast<std::size_t>(-1);

std::vector<Index> normalized_active(const NeighborhoodGraph& graph, std::span<const Index> active) {
  if (active.empty()) throw InputError("active set Y0 must be nonempty");
  std::vector<Index> out(active.begin(), active.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (Index y : out) {
    if (!graph.space().contains(y)) throw InputError("active point out of range: " + std::to_string(y));
  }
  return out;
}

// Vertices y, y' of Y0 are joined when some z lies in both of their
// (closed or open) neighborhoods; by symmetry those y are exactly the
// active members of z's own neighborhood.
SubsetGraph derived_graph(const NeighborhoodGraph& graph, std::span<const Index> active, bool closed) {
  SubsetGraph out;
  out.vertices = normalized_active(graph, active);
  std::vector<std::size_t> position(graph.size(), kInactive);
  for (std::size_t i = 0; i < out.vertices.size(); ++i) position[out.vertices[i]] = i;
  out.adjacency.assign(out.vertices.size(), {});

  std::vector<std::size_t> members;
  for (Index z = 0; z < graph.size(); ++z) {
    members.clear();
    if (closed && position[z] != kInactive) members.push_back(position[z]);
    for (Index w : graph.neighbors(z)) {
      if (position[w] != kInactive) members.push_back(position[w]);
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        out.adjacency[members[a]].push_back(members[b]);
        out.adjacency[members[b]].push_back(members[a]);
      }
    }
  }
  for (auto& row : out.adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return out;
}

template <class Row>
std::vector<std::vector<std::size_t>> bfs_components(const std::vector<Row>& adjacency) {
  std::vector<std::vector<std::size_t>> result;
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < adjacency.size(); ++start) {
    if (seen[start]) continue;
    seen[start] = true;
    queue.assign(1, start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (auto next : adjacency[queue[head]]) {
        const auto v = static_cast<std::size_t>(next);
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    result.push_back(queue);
  }
  return result;
}

}  // namespace

SubsetGraph derived_graph_n(const NeighborhoodGraph& graph, std::span<const Index> active) {
  return derived_graph(graph, active, true);
}

SubsetGraph derived_graph_b(const NeighborhoodGraph& graph, std::span<const Index> active) {
  return derived_graph(graph, active, false);
}

std::vector<std::vector<Index>> components(const NeighborhoodGraph& graph) {
  std::vector<std::vector<Index>> out;
  for (auto& comp : bfs_components(graph.adjacency())) out.emplace_back(comp.begin(), comp.end());
  return out;
}

std::vector<std::vector<Index>> components(const SubsetGraph& graph) {
  std::vector<std::vector<Index>> out;
  for (auto& comp : bfs_components(graph.adjacency)) {
    std::vector<Index> labels;
    labels.reserve(comp.size());
    for (std::size_t i : comp) labels.push_back(graph.vertices[i]);
    out.push_back(std::move(labels));
  }
  return out;
}

bool is_connected(const NeighborhoodGraph& graph) { return components(graph).size() == 1; }

bool is_connected(const SubsetGraph& graph) { return bfs_components(graph.adjacency).size() <= 1; }

bool covers(const NeighborhoodGraph& graph, std::span<const Index> active, CoverMode mode) {
  const auto points = normalized_active(graph, active);
  std::vector<bool> hit(graph.size(), false);
  for (Index y : points) {
    if (mode == CoverMode::Closed) hit[y] = true;
    for (Index z : graph.neighbors(y)) hit[z] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

ClNeighborhood cl_neighborhood(const BlockSystem& blocks) {
  const HypercubeBlockNeighborhood system(blocks);
  ClNeighborhood out{materialize(system), {}};
  const Index size = system.space().size();
  out.block_neighbors.resize(size);
  for (Index y = 0; y < size; ++y) {
    out.block_neighbors[y].resize(blocks.size());
    for (std::size_t l = 0; l < blocks.size(); ++l) system.block_neighbors_into(y, l, out.block_neighbors[y][l]);
  }
  return out;
}

bool cl_connectivity_matches_cover(const BlockSystem& blocks) {
  const auto cl = cl_neighborhood(blocks);
  const auto points = all_points(cl.graph.space());
  const bool connected = is_connected(derived_graph_n(cl.graph, points));
  return connected == blocks.covers_all_coordinates();
}

GraphDiagnostics diagnose(const NeighborhoodGraph& graph, std::span<const Index> active,
                          PotentialClass potential) {
  GraphDiagnostics d;
  d.potential = potential;
  d.covers_n = covers(graph, active, CoverMode::Closed);
  d.covers_b = covers(graph, active, CoverMode::Open);
  const auto g0 = derived_graph_n(graph, active);
  const auto g0prime = derived_graph_b(graph, active);
  d.component_count_g0 = components(g0).size();
  d.component_count_g0prime = components(g0prime).size();
  d.g0_connected = d.component_count_g0 == 1;
  d.g0prime_connected = d.component_count_g0prime == 1;
  return d;
}

std::vector<Index> all_points(const SampleSpace& space) {
  if (!space.enumerable()) throw UnsupportedError("space too large to enumerate");
  std::vector<Index> out(space.size());
  for (Index y = 0; y < space.size(); ++y) out[y] = y;
  return out;
}

void write_edge_list(std::ostream& out, const NeighborhoodGraph& graph) {
  out << "space " << graph.space().describe() << '\n';
  for (auto [a, b] : graph.edges()) out << a << ' ' << b << '\n';
}

NeighborhoodGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<SampleSpace> space;
  std::vector<std::pair<Index, Index>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (!space) {
      std::string tag, kind, param;
      if (!(fields >> tag >> kind >> param) || tag != "space") {
        throw InputError("edge list line " + std::to_string(line_no) + ": expected 'space <kind> <param>'");
      }
      space = SampleSpace::parse(kind, param);
      continue;
    }
    Index a = 0, b = 0;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest)) {
      throw InputError("edge list line " + std::to_string(line_no) + ": expected 'i j'");
    }
    edges.emplace_back(a, b);
  }
  if (!space) throw InputError("edge list is missing its space header");
  return NeighborhoodGraph::from_edges(*space, edges);
}

}  // namespace localscore
