#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace localscore {

// Dense point index. Hypercube points use the binary encoding
// -1 -> 0, +1 -> 1 with coordinate 1 as the least significant bit.
using Index = std::uint64_t;

// Spaces at most this large may be enumerated (divergences, exact
// normalization, materialized graphs).
inline constexpr Index kMaxEnumerableSize = Index{1} << 16;

inline constexpr int kMaxHypercubeDimension = 62;

class SampleSpace {
 public:
  enum class Kind { Enumerated, Hypercube, LabelRange };

  static SampleSpace enumerated(std::vector<std::string> identifiers);
  static SampleSpace hypercube(int dimension);
  static SampleSpace label_range(Index labels);

  Kind kind() const noexcept { return kind_; }
  Index size() const noexcept { return size_; }
  bool contains(Index y) const noexcept { return y < size_; }
  bool enumerable() const noexcept { return size_ <= kMaxEnumerableSize; }

  // Hypercube dimension D; throws for other kinds.
  int dimension() const;

  std::vector<int> to_signs(Index y) const;
  Index from_signs(std::span<const int> signs) const;

  // Human-readable name of a point: "(+1,-1)", "3", or the identifier.
  std::string point_name(Index y) const;

  // "<kind> <param>", as used in file headers.
  std::string describe() const;
  static SampleSpace parse(const std::string& kind, const std::string& param);

  const std::vector<std::string>& identifiers() const noexcept { return identifiers_; }

  friend bool operator==(const SampleSpace& a, const SampleSpace& b) {
    return a.kind_ == b.kind_ && a.size_ == b.size_ && a.identifiers_ == b.identifiers_;
  }

 private:
  SampleSpace(Kind kind, Index size, int dimension, std::vector<std::string> ids)
      : kind_(kind), size_(size), dimension_(dimension), identifiers_(std::move(ids)) {}

  Kind kind_;
  Index size_;
  int dimension_;
  std::vector<std::string> identifiers_;
};

// Number of coordinates at which two sign vectors differ.
int hamming_distance(std::span<const int> y, std::span<const int> z);

// Same, on hypercube indices.
inline int hamming_distance(Index y, Index z) { return std::popcount(y ^ z); }

// Parses "hypercube:D", "labels:L" or "enumerated:N".
SampleSpace parse_space_spec(const std::string& spec);

}  // namespace localscore
