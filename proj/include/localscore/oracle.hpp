#pragma once

#include <string>
#include <vector>

#include "localscore/divergence.hpp"
#include "localscore/rng.hpp"

namespace localscore {

struct OracleReport {
  std::string check_name;
  std::size_t trials = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  // Offending inputs, at most kMaxWitnesses.
  std::vector<std::string> witnesses;
  std::vector<std::string> notes;
  bool pass = true;

  static constexpr std::size_t kMaxWitnesses = 10;

  void add_witness(std::string w);
  // Sets pass from worst_violation and tolerance.
  void finalize();
  // key=value lines.
  std::string to_text() const;
};

struct KnownCounterexample {
  std::string name;
  SampleSpace space;
  std::vector<double> p;
  std::vector<double> q;
};

// Pairs p != q with vanishing divergence for some configurations.
const std::vector<KnownCounterexample>& known_counterexamples();

// Worst S(p, p) - S(p, q) over random (p, q); tolerance 1e-9.
OracleReport check_properness(const LocalScore& rule, std::size_t trials, RngStream& rng);

// Minimum divergence over random p != q with |p - q|_inf >= 0.01, refined by
// a local search around the best pair; pass iff it stays above 1e-8.
// Registered counterexamples on the same space are evaluated as well.
OracleReport check_coincidence(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng);

// Generic formula, closed form / psi path and the negated finite difference
// of the composite potential agree; tolerance 1e-5 relative.
OracleReport check_score_paths(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng);

// Connectivity of the composite-likelihood graph matches the block cover.
OracleReport check_block_connectivity(int max_dimension, std::size_t trials, RngStream& rng);

// D(f, g) = sum_y f_y S(y, g) + phi(f) within 1e-9 relative, plus the exact
// index-swap identity on random integer arrays and random graphs.
OracleReport check_divergence_identity(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng);

// n_l(z) = n_l(y) whenever z is in n_l(y), for every block and point.
bool is_equivalence_function(const BlockNeighborhood& blocks);

// sum_x sum_{y in b(x)} A[x][y] and sum_x sum_{y in b(x)} A[y][x].
std::pair<long long, long long> index_swap_sums(const NeighborhoodGraph& graph,
                                                const std::vector<std::vector<long long>>& a);

// Entries exp(U[-3, 3]).
std::vector<double> random_positive(std::size_t n, RngStream& rng);

}  // namespace localscore
