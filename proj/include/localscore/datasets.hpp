#pragma once

#include <string>
#include <utility>
#include <vector>

#include "localscore/estimation.hpp"
#include "localscore/rng.hpp"

namespace localscore {

inline constexpr std::size_t kOptdigitsFeatures = 64;
inline constexpr Index kOptdigitsLabels = 10;

// Reads comma-separated integer rows (64 features in 0..16, then a label in
// 0..9). Keeps the listed 0-based feature columns, all of them when the list
// is empty. With binarize, 0 becomes -1 and 1..16 become +1.
LabeledData ingest_optdigits(const std::string& path, const std::vector<std::size_t>& feature_indices,
                             bool binarize);

// Resamples exactly floor(rate * n) labels, at distinct positions, uniformly
// over 0..num_labels-1. Returns the number of positions touched.
std::size_t inject_label_noise(LabeledData& data, double rate, Index num_labels, RngStream& rng);

// Random split into n_train training rows and the rest.
std::pair<LabeledData, LabeledData> split(const LabeledData& data, std::size_t n_train, RngStream& rng);

// Binarized feature rows as hypercube points (+1 -> bit set).
std::vector<Index> as_hypercube_points(const LabeledData& data);

// Parses "0,1,5-9" into 0-based indices.
std::vector<std::size_t> parse_index_list(const std::string& text);

}  // namespace localscore
