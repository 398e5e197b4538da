#include "localscore/scores.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "localscore/errors.hpp"

namespace localscore {

namespace {

using Tag = PotentialKind::Tag;

// Memoized log f lookups for one score evaluation.
class LogCache {
 public:
  explicit LogCache(const LogDensity& log_f) : log_f_(log_f) {}
  double operator()(Index z) {
    auto it = cache_.find(z);
    if (it != cache_.end()) return it->second;
    const double v = log_f_(z);
    if (!std::isfinite(v)) throw InputError("log f is not finite at point " + std::to_string(z));
    cache_.emplace(z, v);
    return v;
  }

 private:
  const LogDensity& log_f_;
  std::unordered_map<Index, double> cache_;
};

double softplus(double d) { return d > 0.0 ? d + std::log1p(std::exp(-d)) : std::log1p(std::exp(d)); }
double sigmoid(double d) {
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Accumulates partial derivatives and merges duplicates at the end.
class GradientSink {
 public:
  void add(Index z, double v) { entries_.emplace_back(z, v); }
  std::vector<std::pair<Index, double>> finish() {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Index, double>> out;
    for (const auto& [z, v] : entries_) {
      if (!out.empty() && out.back().first == z) {
        out.back().second += v;
      } else {
        out.emplace_back(z, v);
      }
    }
    return out;
  }

 private:
  std::vector<std::pair<Index, double>> entries_;
};

// psi(e^d) and d psi(e^d) / dd for the additive kinds.
double psi_log(const PotentialKind& kind, double d) {
  switch (kind.tag()) {
    case Tag::PseudoLikelihood:
      return softplus(d);
    case Tag::RatioMatching: {
      const double s = sigmoid(d);
      return s * s;
    }
    case Tag::DensityPower: {
      const double g = kind.gamma();
      return g / (1.0 + g) * std::exp((1.0 + g) * d) - std::exp(-g * d);
    }
    case Tag::CustomAdditive:
      return psi(kind, std::exp(d));
    default:
      throw UnsupportedError("psi is defined only for additive potentials");
  }
}

double psi_log_derivative(const PotentialKind& kind, double d) {
  switch (kind.tag()) {
    case Tag::PseudoLikelihood:
      return sigmoid(d);
    case Tag::RatioMatching: {
      const double s = sigmoid(d);
      return 2.0 * s * s * (1.0 - s);
    }
    case Tag::DensityPower: {
      const double g = kind.gamma();
      return g * std::exp((1.0 + g) * d) + g * std::exp(-g * d);
    }
    case Tag::CustomAdditive: {
      const auto* c = kind.custom();
      const double r = std::exp(d);
      if (c->second_derivative) {
        return r * r * c->second_derivative(r) + c->second_derivative(1.0 / r) / r;
      }
      const double h = 1e-5;
      return (psi(kind, std::exp(d + h)) - psi(kind, std::exp(d - h))) / (2.0 * h);
    }
    default:
      throw UnsupportedError("psi is defined only for additive potentials");
  }
}

void require_full(const LocalPotentialFamily& family, const char* what) {
  if (!family.full_active_set()) {
    throw UnsupportedError(std::string(what) + " requires the active set to be the whole space");
  }
}

double additive_value_and_gradient(const LocalPotentialFamily& family, Index y, LogCache& u, GradientSink* sink) {
  const auto nb = family.neighborhood().neighbors(y);
  const double uy = u(y);
  double value = 0.0;
  double dy = 0.0;
  for (Index z : nb) {
    const double d = u(z) - uy;
    value += psi_log(family.kind(), d);
    if (sink) {
      const double g = psi_log_derivative(family.kind(), d);
      sink->add(z, g);
      dy -= g;
    }
  }
  if (sink) sink->add(y, dy);
  return value;
}

// Written from the named formulas in ratio form, independent of psi.
double named_additive_value(const PotentialKind& kind, const std::vector<Index>& nb, Index y, LogCache& u) {
  const double uy = u(y);
  double value = 0.0;
  for (Index z : nb) {
    const double uz = u(z);
    switch (kind.tag()) {
      case Tag::PseudoLikelihood:
        value += std::log1p(std::exp(uz - uy));
        break;
      case Tag::RatioMatching: {
        const double t = 1.0 + std::exp(uy - uz);
        value += 1.0 / (t * t);
        break;
      }
      case Tag::DensityPower: {
        const double g = kind.gamma();
        value += g / (1.0 + g) * std::exp((1.0 + g) * (uz - uy)) - std::exp(g * (uy - uz));
        break;
      }
      default:
        throw UnsupportedError("no named closed form for " + kind.name());
    }
  }
  return value;
}

// Local pseudo-spherical: S = -sum_{z in b(y)} || f_{b(z)} / f_y ||_{1+gamma}^{-gamma}.
double ps_value_and_gradient(const LocalPotentialFamily& family, Index y, LogCache& u, GradientSink* sink) {
  const double gamma = family.kind().gamma();
  const double p = 1.0 + gamma;
  const auto& system = family.neighborhood();
  const double uy = u(y);
  std::vector<Index> nbz;
  std::vector<double> a;
  double value = 0.0;
  double dy = 0.0;
  for (Index z : system.neighbors(y)) {
    system.neighbors_into(z, nbz);
    a.resize(nbz.size());
    for (std::size_t i = 0; i < nbz.size(); ++i) a[i] = p * (u(nbz[i]) - uy);
    const double log_t = log_sum_exp(a);
    const double term = std::exp(-gamma / p * log_t);
    value -= term;
    if (sink) {
      for (std::size_t i = 0; i < nbz.size(); ++i) sink->add(nbz[i], gamma * term * std::exp(a[i] - log_t));
      dy -= gamma * term;
    }
  }
  if (sink) sink->add(y, dy);
  return value;
}

// n_l(y) = b_l(y) with y, sorted.
void closed_block(const BlockNeighborhood& blocks, Index y, std::size_t l, std::vector<Index>& out) {
  blocks.block_neighbors_into(y, l, out);
  out.insert(std::lower_bound(out.begin(), out.end(), y), y);
}

// Adds log sum_{w in set} f_w and its gradient (softmax) with weight `scale`.
double add_lse(const std::vector<Index>& set, LogCache& u, double scale, GradientSink* sink,
               std::vector<double>& scratch) {
  scratch.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) scratch[i] = u(set[i]);
  const double lse = log_sum_exp(scratch);
  if (sink) {
    for (std::size_t i = 0; i < set.size(); ++i) sink->add(set[i], scale * std::exp(scratch[i] - lse));
  }
  return lse;
}

double cl_value_and_gradient(const BlockNeighborhood& blocks, Index y, LogCache& u, GradientSink* sink) {
  const double uy = u(y);
  std::vector<Index> set;
  std::vector<double> scratch;
  double value = 0.0;
  for (std::size_t l = 0; l < blocks.num_blocks(); ++l) {
    closed_block(blocks, y, l, set);
    value += add_lse(set, u, 1.0, sink, scratch) - uy;
    if (sink) sink->add(y, -1.0);
  }
  return value;
}

// Modified composite likelihood:
// sum_l { -log q(y | n_l(y)) + sum_{z : y in n_l(z)} q(z | n_l(z)) - 1 }.
double mcl_value_and_gradient(const BlockNeighborhood& blocks, Index y, LogCache& u, GradientSink* sink) {
  const double uy = u(y);
  std::vector<Index> set;
  std::vector<Index> bz;
  std::vector<double> scratch;
  const auto nb = blocks.neighbors(y);
  double value = 0.0;
  for (std::size_t l = 0; l < blocks.num_blocks(); ++l) {
    closed_block(blocks, y, l, set);
    value += add_lse(set, u, 1.0, sink, scratch) - uy - 1.0;
    if (sink) sink->add(y, -1.0);

    auto conditional = [&](Index z, const std::vector<Index>& closed) {
      scratch.resize(closed.size());
      for (std::size_t i = 0; i < closed.size(); ++i) scratch[i] = u(closed[i]);
      const double lse = log_sum_exp(scratch);
      const double q = std::exp(u(z) - lse);
      value += q;
      if (sink) {
        sink->add(z, q);
        for (std::size_t i = 0; i < closed.size(); ++i) sink->add(closed[i], -q * std::exp(scratch[i] - lse));
      }
    };
    conditional(y, set);
    for (Index z : nb) {
      blocks.block_neighbors_into(z, l, bz);
      if (!std::binary_search(bz.begin(), bz.end(), y)) continue;
      bz.insert(std::lower_bound(bz.begin(), bz.end(), z), z);
      conditional(z, bz);
    }
  }
  return value;
}

double closed_form_value_and_gradient(const LocalPotentialFamily& family, Index y, LogCache& u, GradientSink* sink) {
  require_full(family, "the closed-form score");
  const auto& kind = family.kind();
  switch (kind.tag()) {
    case Tag::PseudoLikelihood:
    case Tag::RatioMatching:
    case Tag::DensityPower:
      if (sink) return additive_value_and_gradient(family, y, u, sink);
      return named_additive_value(kind, family.neighborhood().neighbors(y), y, u);
    case Tag::PseudoSpherical:
      return ps_value_and_gradient(family, y, u, sink);
    case Tag::CompositeLikelihood:
      return mcl_value_and_gradient(*family.blocks(), y, u, sink);
    case Tag::CustomAdditive:
      throw UnsupportedError("custom additive potentials have no named closed form; use the psi path");
  }
  return 0.0;
}

double generic_value(const LocalPotentialFamily& family, Index y, LogCache& u) {
  const auto& system = family.neighborhood();
  std::vector<Index> nb;
  std::vector<double> r;
  std::vector<double> grad;
  const double uy = u(y);
  double value = 0.0;
  system.neighbors_into(y, nb);
  if (family.is_active(y)) {
    r.resize(nb.size());
    grad.resize(nb.size());
    for (std::size_t i = 0; i < nb.size(); ++i) r[i] = std::exp(u(nb[i]) - uy);
    family.local_potential_gradient(y, r, grad);
    value -= family.local_potential(y, r);
    for (std::size_t i = 0; i < nb.size(); ++i) value += r[i] * grad[i];
  }
  std::vector<Index> nbz;
  for (Index z : nb) {
    if (!family.is_active(z)) continue;
    system.neighbors_into(z, nbz);
    const double uz = u(z);
    r.resize(nbz.size());
    grad.resize(nbz.size());
    for (std::size_t i = 0; i < nbz.size(); ++i) r[i] = std::exp(u(nbz[i]) - uz);
    family.local_potential_gradient(z, r, grad);
    const auto pos = std::lower_bound(nbz.begin(), nbz.end(), y) - nbz.begin();
    if (static_cast<std::size_t>(pos) >= nbz.size() || nbz[pos] != y) {
      throw InternalConsistencyError("neighborhood system is not symmetric");
    }
    value -= grad[pos];
  }
  return value;
}

// Points read by the generic score at y: y, b(y) and b(z) for z in b(y).
std::vector<Index> generic_support(const NeighborhoodSystem& system, Index y) {
  std::vector<Index> out{y};
  const auto nb = system.neighbors(y);
  std::vector<Index> nbz;
  for (Index z : nb) {
    out.push_back(z);
    system.neighbors_into(z, nbz);
    out.insert(out.end(), nbz.begin(), nbz.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

double PartialLogDensity::operator()(Index z) const {
  auto it = values_.find(z);
  if (it == values_.end()) throw InputError("log f queried outside the available support at point " + std::to_string(z));
  return it->second;
}

double psi(const PotentialKind& kind, double r) {
  if (!(r > 0.0)) throw InputError("psi needs a positive ratio");
  switch (kind.tag()) {
    case Tag::PseudoLikelihood:
      return std::log1p(r);
    case Tag::RatioMatching:
      return r * r / ((1.0 + r) * (1.0 + r));
    case Tag::DensityPower: {
      const double g = kind.gamma();
      return g / (1.0 + g) * std::pow(r, 1.0 + g) - std::pow(r, -g);
    }
    case Tag::CustomAdditive: {
      const auto* c = kind.custom();
      return r * c->derivative(r) - c->value(r) - c->derivative(1.0 / r);
    }
    default:
      throw UnsupportedError("psi is defined only for additive potentials");
  }
}

double generic_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f) {
  if (!family.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  return generic_value(family, y, u);
}

double additive_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f) {
  if (!family.additive()) throw UnsupportedError("psi path requires an additive potential family");
  require_full(family, "the psi path");
  if (!family.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  double value = 0.0;
  const double uy = u(y);
  for (Index z : family.neighborhood().neighbors(y)) value += psi(family.kind(), std::exp(u(z) - uy));
  return value;
}

double score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f) {
  if (family.additive() && family.full_active_set()) return additive_score(family, y, log_f);
  return generic_score(family, y, log_f);
}

double named_closed_form_score(const LocalPotentialFamily& family, Index y, const LogDensity& log_f) {
  if (!family.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  return closed_form_value_and_gradient(family, y, u, nullptr);
}

double cl_score(const BlockNeighborhood& blocks, Index y, const LogDensity& log_f) {
  if (!blocks.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  return cl_value_and_gradient(blocks, y, u, nullptr);
}

ScoreSpec parse_score_spec(const std::string& text) {
  ScoreSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  auto parse_gamma = [&]() {
    if (arg.empty()) throw InputError("score '" + head + "' needs a gamma, e.g. " + head + ":1");
    std::size_t used = 0;
    double g = 0.0;
    try {
      g = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || !(g > 0.0) || !std::isfinite(g)) throw InputError("invalid gamma '" + arg + "'");
    return g;
  };
  if (head == "pl" || head == "rm") {
    if (colon != std::string::npos) throw InputError("score '" + head + "' takes no argument");
    spec.family = head == "pl" ? ScoreSpec::Family::PseudoLikelihood : ScoreSpec::Family::RatioMatching;
  } else if (head == "dp") {
    spec.family = ScoreSpec::Family::DensityPower;
    spec.gamma = parse_gamma();
  } else if (head == "ps") {
    spec.family = ScoreSpec::Family::PseudoSpherical;
    spec.gamma = parse_gamma();
  } else if (head == "cl" || head == "mcl") {
    spec.family =
        head == "cl" ? ScoreSpec::Family::CompositeLikelihood : ScoreSpec::Family::ModifiedCompositeLikelihood;
    if (colon != std::string::npos) {
      if (arg.empty()) throw InputError("empty block list in '" + text + "'");
      spec.blocks = arg;
    }
  } else {
    throw InputError("unknown score kind '" + text + "' (expected pl, rm, dp:g, ps:g, cl:blocks or mcl:blocks)");
  }
  return spec;
}

std::string to_string(const ScoreSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  switch (spec.family) {
    case ScoreSpec::Family::PseudoLikelihood:
      return "pl";
    case ScoreSpec::Family::RatioMatching:
      return "rm";
    case ScoreSpec::Family::DensityPower:
      os << "dp:" << spec.gamma;
      return os.str();
    case ScoreSpec::Family::PseudoSpherical:
      os << "ps:" << spec.gamma;
      return os.str();
    case ScoreSpec::Family::CompositeLikelihood:
      return spec.blocks ? "cl:" + *spec.blocks : "cl";
    case ScoreSpec::Family::ModifiedCompositeLikelihood:
      return spec.blocks ? "mcl:" + *spec.blocks : "mcl";
  }
  return {};
}

LocalScore::LocalScore(LocalPotentialFamily family, bool standard_cl)
    : family_(std::move(family)), standard_cl_(standard_cl) {
  if (standard_cl_ && !family_.blocks()) throw InputError("standard CL needs a block neighborhood");
}

namespace {

PotentialKind kind_for(const ScoreSpec& spec) {
  switch (spec.family) {
    case ScoreSpec::Family::PseudoLikelihood:
      return PotentialKind::pseudo_likelihood();
    case ScoreSpec::Family::RatioMatching:
      return PotentialKind::ratio_matching();
    case ScoreSpec::Family::DensityPower:
      return PotentialKind::density_power(spec.gamma);
    case ScoreSpec::Family::PseudoSpherical:
      return PotentialKind::pseudo_spherical(spec.gamma);
    default:
      return PotentialKind::composite_likelihood();
  }
}

bool is_block_family(const ScoreSpec& spec) {
  return spec.family == ScoreSpec::Family::CompositeLikelihood ||
         spec.family == ScoreSpec::Family::ModifiedCompositeLikelihood;
}

}  // namespace

LocalScore LocalScore::from_spec(const ScoreSpec& spec, const SampleSpace& space, int radius_or_band) {
  std::shared_ptr<const NeighborhoodSystem> system;
  if (space.kind() == SampleSpace::Kind::Hypercube) {
    if (is_block_family(spec)) {
      if (!spec.blocks) throw InputError("cl/mcl on a hypercube needs blocks, e.g. cl:1,2;3,4");
      system = std::make_shared<HypercubeBlockNeighborhood>(BlockSystem::parse(space.dimension(), *spec.blocks));
    } else {
      system = std::make_shared<HammingNeighborhood>(space.dimension(), radius_or_band);
    }
  } else if (space.kind() == SampleSpace::Kind::LabelRange) {
    if (spec.blocks) throw InputError("blocks are only valid with a hypercube space");
    if (radius_or_band < 1) throw InputError("label band must be at least 1");
    system = std::make_shared<LabelBandNeighborhood>(space.size(), static_cast<Index>(radius_or_band));
  } else {
    throw InputError("enumerated spaces need an explicit neighborhood graph");
  }
  return from_spec(spec, std::move(system));
}

LocalScore LocalScore::from_spec(const ScoreSpec& spec, std::shared_ptr<const NeighborhoodSystem> neighborhood) {
  LocalPotentialFamily family(kind_for(spec), std::move(neighborhood));
  return LocalScore(std::move(family), spec.family == ScoreSpec::Family::CompositeLikelihood);
}

std::string LocalScore::name() const {
  if (family_.kind().tag() == Tag::CompositeLikelihood) return standard_cl_ ? "cl" : "mcl";
  return family_.kind().name();
}

double LocalScore::value(Index y, const LogDensity& log_f) const {
  if (!family_.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  if (standard_cl_) return cl_value_and_gradient(*family_.blocks(), y, u, nullptr);
  if (!family_.full_active_set()) return generic_value(family_, y, u);
  if (family_.kind().tag() == Tag::CustomAdditive) return additive_value_and_gradient(family_, y, u, nullptr);
  return closed_form_value_and_gradient(family_, y, u, nullptr);
}

ScoreGradient LocalScore::value_and_gradient(Index y, const LogDensity& log_f) const {
  if (!family_.space().contains(y)) throw InputError("score point out of range");
  LogCache u(log_f);
  GradientSink sink;
  ScoreGradient out;
  if (standard_cl_) {
    out.value = cl_value_and_gradient(*family_.blocks(), y, u, &sink);
  } else if (!family_.full_active_set()) {
    // Central differences of the generic formula over its local support.
    const auto support = generic_support(family_.neighborhood(), y);
    out.value = generic_value(family_, y, u);
    std::unordered_map<Index, double> base;
    for (Index z : support) base[z] = u(z);
    const double h = 1e-6;
    for (Index z : support) {
      auto shifted = [&](double delta) {
        LogDensity f = [&](Index w) { return base.at(w) + (w == z ? delta : 0.0); };
        LogCache c(f);
        return generic_value(family_, y, c);
      };
      sink.add(z, (shifted(h) - shifted(-h)) / (2.0 * h));
    }
  } else if (family_.kind().tag() == Tag::CustomAdditive) {
    out.value = additive_value_and_gradient(family_, y, u, &sink);
  } else {
    out.value = closed_form_value_and_gradient(family_, y, u, &sink);
  }
  out.d_log_f = sink.finish();
  return out;
}

}  // namespace localscore
