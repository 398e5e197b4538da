#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "localscore/divergence.hpp"
#include "localscore/rng.hpp"

namespace testing_support {

using namespace localscore;

inline std::shared_ptr<const NeighborhoodSystem> hamming(int d, int r) {
  return std::make_shared<HammingNeighborhood>(d, r);
}

inline std::shared_ptr<const NeighborhoodSystem> blocks(int d, const char* text) {
  return std::make_shared<HypercubeBlockNeighborhood>(BlockSystem::parse(d, text));
}

inline std::shared_ptr<const NeighborhoodSystem> graph_system(NeighborhoodGraph g) {
  return std::make_shared<GraphNeighborhood>(std::make_shared<const NeighborhoodGraph>(std::move(g)));
}

inline std::vector<double> random_log_values(std::size_t n, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
