#include "localscore/sample_space.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "localscore/errors.hpp"

namespace localscore {

SampleSpace SampleSpace::enumerated(std::vector<std::string> identifiers) {
  if (identifiers.size() < 2) throw InputError("enumerated space needs at least 2 points");
  std::set<std::string> seen(identifiers.begin(), identifiers.end());
  if (seen.size() != identifiers.size()) throw InputError("enumerated space has duplicate points");
  const Index n = identifiers.size();
  return SampleSpace(Kind::Enumerated, n, 0, std::move(identifiers));
}

SampleSpace SampleSpace::hypercube(int dimension) {
  if (dimension < 1 || dimension > kMaxHypercubeDimension) {
    throw InputError("hypercube dimension must be in [1, " +
                     std::to_string(kMaxHypercubeDimension) + "], got " +
                     std::to_string(dimension));
  }
  return SampleSpace(Kind::Hypercube, Index{1} << dimension, dimension, {});
}

SampleSpace SampleSpace::label_range(Index labels) {
  if (labels < 2) throw InputError("label range needs at least 2 labels");
  return SampleSpace(Kind::LabelRange, labels, 0, {});
}

int SampleSpace::dimension() const {
  if (kind_ != Kind::Hypercube) throw InputError("dimension() requires a hypercube space");
  return dimension_;
}

std::vector<int> SampleSpace::to_signs(Index y) const {
  if (kind_ != Kind::Hypercube) throw InputError("to_signs() requires a hypercube space");
  if (!contains(y)) throw InputError("point index out of range");
  std::vector<int> signs(static_cast<std::size_t>(dimension_));
  for (int i = 0; i < dimension_; ++i) signs[i] = ((y >> i) & 1U) ? 1 : -1;
  return signs;
}

Index SampleSpace::from_signs(std::span<const int> signs) const {
  if (kind_ != Kind::Hypercube) throw InputError("from_signs() requires a hypercube space");
  if (signs.size() != static_cast<std::size_t>(dimension_)) {
    throw InputError("sign vector has dimension " + std::to_string(signs.size()) +
                     ", expected " + std::to_string(dimension_));
  }
  Index y = 0;
  for (int i = 0; i < dimension_; ++i) {
    if (signs[i] == 1) {
      y |= Index{1} << i;
    } else if (signs[i] != -1) {
      throw InputError("hypercube coordinates must be +1 or -1");
    }
  }
  return y;
}

std::string SampleSpace::point_name(Index y) const {
  if (!contains(y)) throw InputError("point index out of range");
  switch (kind_) {
    case Kind::Enumerated:
      return identifiers_[y];
    case Kind::LabelRange:
      return std::to_string(y);
    case Kind::Hypercube: {
      std::string out = "(";
      for (int i = 0; i < dimension_; ++i) {
        if (i) out += ',';
        out += ((y >> i) & 1U) ? "+1" : "-1";
      }
      return out + ")";
    }
  }
  return {};
}

std::string SampleSpace::describe() const {
  switch (kind_) {
    case Kind::Enumerated:
      return "enumerated " + std::to_string(size_);
    case Kind::Hypercube:
      return "hypercube " + std::to_string(dimension_);
    case Kind::LabelRange:
      return "labels " + std::to_string(size_);
  }
  return {};
}

namespace {

Index parse_positive(const std::string& text, const std::string& what) {
  Index value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InputError("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

}  // namespace

SampleSpace SampleSpace::parse(const std::string& kind, const std::string& param) {
  const Index value = parse_positive(param, kind + " parameter");
  if (kind == "hypercube") {
    if (value > static_cast<Index>(kMaxHypercubeDimension)) throw InputError("hypercube too large");
    return hypercube(static_cast<int>(value));
  }
  if (kind == "labels") return label_range(value);
  if (kind == "enumerated") {
    std::vector<std::string> ids;
    ids.reserve(value);
    for (Index i = 0; i < value; ++i) ids.push_back(std::to_string(i));
    return enumerated(std::move(ids));
  }
  throw InputError("unknown space kind '" + kind + "'");
}

SampleSpace parse_space_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("space spec must look like kind:param, got '" + spec + "'");
  return SampleSpace::parse(spec.substr(0, colon), spec.substr(colon + 1));
}

int hamming_distance(std::span<const int> y, std::span<const int> z) {
  if (y.size() != z.size()) {
    throw InputError("hamming_distance: dimension mismatch (" + std::to_string(y.size()) +
                     " vs " + std::to_string(z.size()) + ")");
  }
  int d = 0;
  for (std::size_t i = 0; i < y.size(); ++i) d += (y[i] != z[i]) ? 1 : 0;
  return d;
}

}  // namespace localscore
