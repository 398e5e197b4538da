#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localscore/models.hpp"
#include "localscore/rng.hpp"

namespace localscore {

// Inverse-CDF draws from p.
std::vector<Index> exact_sample(const Probability& p, std::size_t n, RngStream& rng);

// P(y_i = +1 | y_{-i}) = logistic(4 sum_{j != i} W_ij y_j); i is 0-based.
double gibbs_conditional_plus(const BoltzmannModel& model, Index y, int i);

// One systematic-scan sweep over coordinates 1..D.
Index gibbs_sweep(const BoltzmannModel& model, Index y, RngStream& rng, double beta = 1.0);

struct GibbsConfig {
  // Sweeps discarded before the first kept sample; default 100 D.
  std::optional<std::size_t> burn_in;
  // Sweeps between kept samples.
  std::size_t thinning = 1;
};

// Single chain started from a uniform point.
std::vector<Index> gibbs_sample(const BoltzmannModel& model, std::size_t n, const GibbsConfig& config, RngStream& rng);

struct AisConfig {
  std::size_t num_temperatures = 1000;
  std::size_t num_chains = 100;
  std::size_t sweeps_per_temperature = 1;
  // Chains are split across this many threads; results do not depend on it.
  unsigned num_threads = 1;
};

struct AisResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::vector<double> log_weights;
};

// Annealed importance sampling from W = 0 (log Z0 = D log 2) to W along a
// linear schedule in beta. Chain m uses rng.substream(m).
AisResult ais_log_z(const BoltzmannModel& model, const AisConfig& config, const RngStream& rng);

// W = (W~ + W~^T) / 2 with standard normal entries of W~.
BoltzmannModel random_boltzmann(int dimension, RngStream& rng);

struct SampleFile {
  SampleSpace space;
  std::optional<std::uint64_t> seed;
  std::vector<Index> samples;
};

// One sample per line (+-1 integers for hypercubes, one integer for labels)
// after a header "# space <kind> <param> seed <seed>".
void write_samples(const std::string& path, const SampleSpace& space, const std::vector<Index>& samples,
                   std::optional<std::uint64_t> seed);
SampleFile read_samples(const std::string& path);

}  // namespace localscore
