#include "localscore/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "localscore/errors.hpp"

namespace localscore {

LabeledData ingest_optdigits(const std::string& path, const std::vector<std::size_t>& feature_indices,
                             bool binarize) {
  for (std::size_t k : feature_indices) {
    if (k >= kOptdigitsFeatures) {
      throw InputError("feature index " + std::to_string(k) + " out of range 0.." +
                       std::to_string(kOptdigitsFeatures - 1));
    }
  }
  std::vector<std::size_t> columns = feature_indices;
  if (columns.empty()) {
    columns.resize(kOptdigitsFeatures);
    std::iota(columns.begin(), columns.end(), std::size_t{0});
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read dataset " + path);
  LabeledData data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<long> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    row.clear();
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (cell.empty() || used != cell.size()) {
        throw InputError(path + ":" + std::to_string(line_no) + ": non-integer entry '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != kOptdigitsFeatures + 1) {
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(kOptdigitsFeatures + 1) + " columns, got " + std::to_string(row.size()));
    }
    const long label = row.back();
    if (label < 0 || label >= static_cast<long>(kOptdigitsLabels)) {
      throw InputError(path + ":" + std::to_string(line_no) + ": label out of range 0..9");
    }
    std::vector<double> x;
    x.reserve(columns.size());
    for (std::size_t k : columns) {
      const long v = row[k];
      if (v < 0 || v > 16) throw InputError(path + ":" + std::to_string(line_no) + ": feature out of range 0..16");
      x.push_back(binarize ? (v == 0 ? -1.0 : 1.0) : static_cast<double>(v));
    }
    data.features.push_back(std::move(x));
    data.labels.push_back(static_cast<Index>(label));
  }
  if (data.size() == 0) throw InputError(path + ": no data rows");
  return data;
}

std::size_t inject_label_noise(LabeledData& data, double rate, Index num_labels, RngStream& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("noise rate must lie in [0, 1]");
  if (num_labels == 0) throw InputError("need at least one label");
  const std::size_t n = data.size();
  const auto count = static_cast<std::size_t>(std::floor(rate * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` positions are a uniform subset.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(order[i], order[j]);
    data.labels[order[i]] = rng.below(num_labels);
  }
  return count;
}

std::pair<LabeledData, LabeledData> split(const LabeledData& data, std::size_t n_train, RngStream& rng) {
  const std::size_t n = data.size();
  if (n_train == 0 || n_train >= n) {
    throw InputError("training size must lie in 1.." + std::to_string(n - 1) + ", got " + std::to_string(n_train));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  std::pair<LabeledData, LabeledData> out;
  for (std::size_t k = 0; k < n; ++k) {
    auto& part = k < n_train ? out.first : out.second;
    part.features.push_back(data.features[order[k]]);
    part.labels.push_back(data.labels[order[k]]);
  }
  return out;
}

std::vector<Index> as_hypercube_points(const LabeledData& data) {
  std::vector<Index> out;
  out.reserve(data.size());
  for (const auto& x : data.features) {
    if (x.size() > static_cast<std::size_t>(kMaxHypercubeDimension)) throw InputError("too many features for a point");
    Index y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 1.0) {
        y |= Index{1} << i;
      } else if (x[i] != -1.0) {
        throw InputError("features must be binarized to -1/+1");
      }
    }
    out.push_back(y);
  }
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string item;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-') throw InputError("invalid index '" + s + "' in '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  while (std::getline(in, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(number(item));
    } else {
      const auto lo = number(item.substr(0, dash));
      const auto hi = number(item.substr(dash + 1));
      if (hi < lo) throw InputError("descending range '" + item + "'");
      for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    }
  }
  if (out.empty()) throw InputError("empty index list");
  return out;
}

}  // namespace localscore
