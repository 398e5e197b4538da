#include "localscore/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "localscore/errors.hpp"

namespace localscore {

std::vector<Index> exact_sample(const Probability& p, std::size_t n, RngStream& rng) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p.weights()[i];
    cdf[i] = acc;
  }
  std::vector<Index> out(n);
  for (auto& s : out) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    s = static_cast<Index>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }
  return out;
}

namespace {

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double gibbs_conditional_plus(const BoltzmannModel& model, Index y, int i) {
  return logistic(4.0 * model.local_field(y, i));
}

Index gibbs_sweep(const BoltzmannModel& model, Index y, RngStream& rng, double beta) {
  for (int i = 0; i < model.dimension(); ++i) {
    const double plus = logistic(4.0 * beta * model.local_field(y, i));
    const Index bit = Index{1} << i;
    if (rng.uniform() < plus) {
      y |= bit;
    } else {
      y &= ~bit;
    }
  }
  return y;
}

std::vector<Index> gibbs_sample(const BoltzmannModel& model, std::size_t n, const GibbsConfig& config, RngStream& rng) {
  if (n == 0) throw InputError("gibbs_sample needs n >= 1");
  if (config.thinning == 0) throw InputError("thinning must be positive");
  const int d = model.dimension();
  const std::size_t burn_in = config.burn_in.value_or(100 * static_cast<std::size_t>(d));
  Index y = d == 64 ? rng.next_u64() : rng.next_u64() & ((Index{1} << d) - 1);
  for (std::size_t s = 0; s < burn_in; ++s) y = gibbs_sweep(model, y, rng);
  std::vector<Index> out;
  out.reserve(n);
  while (out.size() < n) {
    for (std::size_t t = 0; t < config.thinning; ++t) y = gibbs_sweep(model, y, rng);
    out.push_back(y);
  }
  return out;
}

AisResult ais_log_z(const BoltzmannModel& model, const AisConfig& config, const RngStream& rng) {
  if (config.num_temperatures < 2) throw InputError("AIS needs at least 2 temperatures");
  if (config.num_chains == 0) throw InputError("AIS needs at least one chain");
  if (config.sweeps_per_temperature == 0) throw InputError("AIS needs at least one sweep per temperature");
  const int d = model.dimension();
  const std::size_t k_max = config.num_temperatures - 1;
  AisResult result;
  result.log_weights.assign(config.num_chains, 0.0);

  auto run_chain = [&](std::size_t m) {
    RngStream chain = rng.substream(m);
    Index y = chain.next_u64() & ((Index{1} << d) - 1);
    double log_w = 0.0;
    double beta_prev = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const double beta = static_cast<double>(k) / static_cast<double>(k_max);
      log_w += (beta - beta_prev) * model.log_f(y);
      beta_prev = beta;
      if (k < k_max) {
        for (std::size_t s = 0; s < config.sweeps_per_temperature; ++s) y = gibbs_sweep(model, y, chain, beta);
      }
    }
    result.log_weights[m] = log_w;
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(config.num_threads, config.num_chains));
  if (threads == 1) {
    for (std::size_t m = 0; m < config.num_chains; ++m) run_chain(m);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t m = t; m < config.num_chains; m += threads) run_chain(m);
      });
    }
    for (auto& th : pool) th.join();
  }

  const auto& lw = result.log_weights;
  const double mx = *std::max_element(lw.begin(), lw.end());
  const double count = static_cast<double>(lw.size());
  double mean = 0.0;
  for (double v : lw) mean += std::exp(v - mx);
  mean /= count;
  double var = 0.0;
  for (double v : lw) {
    const double e = std::exp(v - mx) - mean;
    var += e * e;
  }
  var = lw.size() > 1 ? var / (count - 1.0) : 0.0;
  result.estimate = d * std::numbers::ln2 + mx + std::log(mean);
  result.std_error = std::sqrt(var / count) / mean;
  return result;
}

BoltzmannModel random_boltzmann(int dimension, RngStream& rng) {
  std::vector<std::vector<double>> raw(dimension, std::vector<double>(dimension));
  for (auto& row : raw) {
    for (double& v : row) v = rng.normal();
  }
  std::vector<double> upper;
  for (int i = 0; i < dimension; ++i) {
    for (int j = i + 1; j < dimension; ++j) upper.push_back(0.5 * (raw[i][j] + raw[j][i]));
  }
  return BoltzmannModel(dimension, std::move(upper));
}

void write_samples(const std::string& path, const SampleSpace& space, const std::vector<Index>& samples,
                   std::optional<std::uint64_t> seed) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write sample file " + path);
  out << "# space " << space.describe();
  if (seed) out << " seed " << *seed;
  out << '\n';
  for (Index s : samples) {
    if (!space.contains(s)) throw InputError("sample out of range for " + space.describe());
    if (space.kind() == SampleSpace::Kind::Hypercube) {
      const auto signs = space.to_signs(s);
      for (std::size_t i = 0; i < signs.size(); ++i) out << (i ? " " : "") << signs[i];
    } else {
      out << s;
    }
    out << '\n';
  }
  if (!out) throw InputError("failed writing sample file " + path);
}

SampleFile read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read sample file " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty sample file");
  std::istringstream header(line);
  std::string hash, word, kind, param;
  header >> hash >> word >> kind >> param;
  if (hash != "#" || word != "space" || kind.empty() || param.empty()) {
    throw InputError(path + ":1: expected header '# space <kind> <param> [seed <seed>]'");
  }
  SampleFile file{SampleSpace::parse(kind, param), std::nullopt, {}};
  if (header >> word) {
    std::uint64_t seed = 0;
    if (word != "seed" || !(header >> seed)) throw InputError(path + ":1: malformed seed in header");
    file.seed = seed;
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::vector<long long> values;
    long long v = 0;
    while (row >> v) values.push_back(v);
    if (!row.eof()) throw InputError(path + ":" + std::to_string(line_no) + ": non-integer entry");
    if (file.space.kind() == SampleSpace::Kind::Hypercube) {
      std::vector<int> signs(values.begin(), values.end());
      if (static_cast<int>(signs.size()) != file.space.dimension()) {
        throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(file.space.dimension()) + " signs");
      }
      try {
        file.samples.push_back(file.space.from_signs(signs));
      } catch (const InputError& e) {
        throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      if (values.size() != 1 || values[0] < 0 || !file.space.contains(static_cast<Index>(values[0]))) {
        throw InputError(path + ":" + std::to_string(line_no) + ": expected one point index in range");
      }
      file.samples.push_back(static_cast<Index>(values[0]));
    }
  }
  return file;
}

}  // namespace localscore
