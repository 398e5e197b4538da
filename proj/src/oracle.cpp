#include "localscore/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "localscore/errors.hpp"

namespace localscore {

namespace {

std::string format_vector(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_small(const SampleSpace& space, Index limit, const char* check) {
  if (space.size() > limit) {
    throw UnsupportedError(std::string(check) + " needs |Y| <= " + std::to_string(limit) + ", got " +
                           std::to_string(space.size()));
  }
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<Index> active_list(const LocalPotentialFamily& family) { return family.active_points(); }

}  // namespace

void OracleReport::add_witness(std::string w) {
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
}

void OracleReport::finalize() { pass = worst_violation <= tolerance; }

std::string OracleReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "check=" << check_name << '\n';
  os << "trials=" << trials << '\n';
  os << "worst_violation=" << worst_violation << '\n';
  os << "tolerance=" << tolerance << '\n';
  for (const auto& n : notes) os << "note=" << n << '\n';
  for (const auto& w : witnesses) os << "witness=" << w << '\n';
  os << "verdict=" << (pass ? "pass" : "fail") << '\n';
  return os.str();
}

const std::vector<KnownCounterexample>& known_counterexamples() {
  // Points (+1,+1), (-1,-1), (-1,+1), (+1,-1) carry p = (0.1, 0.1, 0.4, 0.4)
  // and q = (0.2, 0.2, 0.3, 0.3); stored here by dense index.
  static const std::vector<KnownCounterexample> registry = {
      {"parity-split pair on {-1,+1}^2", SampleSpace::hypercube(2), {0.1, 0.4, 0.4, 0.1}, {0.2, 0.3, 0.3, 0.2}},
  };
  return registry;
}

std::vector<double> random_positive(std::size_t n, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = std::exp(rng.uniform(-3.0, 3.0));
  return v;
}

OracleReport check_properness(const LocalScore& rule, std::size_t trials, RngStream& rng) {
  const auto& space = rule.family().space();
  require_small(space, 16, "check_properness");
  OracleReport report;
  report.check_name = "properness[" + rule.name() + "]";
  report.tolerance = 1e-9;
  const std::size_t n = space.size();
  for (std::size_t t = 0; t < trials; ++t) {
    const auto p = Probability::normalized(random_positive(n, rng));
    const auto q = t == 0 ? p : Probability::normalized(random_positive(n, rng));
    const double self = expected_score(rule, p, p.as_unnormalized());
    const double cross = expected_score(rule, p, q.as_unnormalized());
    const double violation = self - cross;
    if (violation > report.worst_violation) report.worst_violation = violation;
    if (violation > report.tolerance) {
      report.add_witness("p=" + format_vector(p.weights()) + " q=" + format_vector(q.weights()) +
                         " S(p,p)-S(p,q)=" + format_number(violation));
    }
  }
  report.trials = trials;
  report.finalize();
  return report;
}

OracleReport check_coincidence(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng) {
  const auto& space = family.space();
  require_small(space, 16, "check_coincidence");
  const double threshold = 1e-8;
  const double separation = 0.01;
  OracleReport report;
  report.check_name = "coincidence[" + family.kind().name() + "]";
  report.tolerance = 0.0;
  const std::size_t n = space.size();

  auto div = [&](const std::vector<double>& p, const std::vector<double>& q) {
    return divergence(family, UnnormalizedVector::from_values(p), UnnormalizedVector::from_values(q));
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  std::vector<double> best_q;
  std::size_t done = 0;
  while (done < trials) {
    const auto p = Probability::normalized(random_positive(n, rng)).weights();
    const auto q = Probability::normalized(random_positive(n, rng)).weights();
    if (max_abs_difference(p, q) < separation) continue;
    ++done;
    const double d = div(p, q);
    if (d < best) {
      best = d;
      best_p = p;
      best_q = q;
    }
  }

  // Coordinate search on log p and log q around the best pair, keeping the
  // separation and the dynamic range of the random draws. Near the boundary
  // of the simplex every divergence shrinks, so leaving that range would
  // produce spurious witnesses.
  auto in_range = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi <= std::exp(6.0) * *lo;
  };
  if (!best_q.empty()) {
    for (double step = 0.5; step > 1e-6; step *= 0.5) {
      bool improved = true;
      for (int pass = 0; improved && pass < 50; ++pass) {
        improved = false;
        for (int side = 0; side < 2; ++side) {
          for (std::size_t i = 0; i < n; ++i) {
            for (double sign : {-1.0, 1.0}) {
              auto p = best_p;
              auto q = best_q;
              auto& moved = side == 0 ? q : p;
              moved[i] *= std::exp(sign * step);
              moved = Probability::normalized(moved).weights();
              if (!in_range(moved) || max_abs_difference(p, q) < separation) continue;
              const double d = div(p, q);
              if (d < best) {
                best = d;
                best_p = std::move(p);
                best_q = std::move(q);
                improved = true;
              }
            }
          }
        }
      }
    }
    report.notes.push_back("min_divergence=" + format_number(best));
    if (best <= threshold) {
      report.add_witness("p=" + format_vector(best_p) + " q=" + format_vector(best_q) + " D=" + format_number(best));
    }
  }

  for (const auto& ce : known_counterexamples()) {
    if (!(ce.space == space)) continue;
    const double d = div(ce.p, ce.q);
    report.notes.push_back("known_counterexample=" + ce.name + " divergence=" + format_number(d));
    if (d < best) best = d;
    if (d <= threshold) {
      report.add_witness("known " + ce.name + " p=" + format_vector(ce.p) + " q=" + format_vector(ce.q) +
                         " D=" + format_number(d));
    }
  }

  if (space.enumerable()) {
    const auto graph = materialize(family.neighborhood());
    const auto active = active_list(family);
    const auto diag = diagnose(graph, active, family.potential_class());
    std::string note = std::string("diagnose=coincidence ") + (diag.coincidence_guaranteed() ? "guaranteed" : "NOT guaranteed");
    if (!family.locally_strictly_convex() && family.potential_class() == PotentialClass::StrictlyConvex) {
      note += " (local potentials not strictly convex)";
    }
    report.notes.push_back(note);
  }

  report.trials = trials;
  report.worst_violation = best > threshold ? 0.0 : threshold - best;
  if (best <= threshold && report.worst_violation == 0.0) report.worst_violation = threshold;
  report.finalize();
  return report;
}

bool is_equivalence_function(const BlockNeighborhood& blocks) {
  const auto& space = blocks.space();
  if (!space.enumerable()) throw UnsupportedError("equivalence test needs an enumerable space");
  std::vector<Index> by;
  std::vector<Index> bz;
  for (Index y = 0; y < space.size(); ++y) {
    for (std::size_t l = 0; l < blocks.num_blocks(); ++l) {
      blocks.block_neighbors_into(y, l, by);
      by.insert(std::lower_bound(by.begin(), by.end(), y), y);
      for (Index z : by) {
        blocks.block_neighbors_into(z, l, bz);
        bz.insert(std::lower_bound(bz.begin(), bz.end(), z), z);
        if (bz != by) return false;
      }
    }
  }
  return true;
}

OracleReport check_score_paths(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng) {
  const auto& space = family.space();
  require_small(space, 256, "check_score_paths");
  OracleReport report;
  report.check_name = "score_paths[" + family.kind().name() + "]";
  report.tolerance = 1e-5;
  const std::size_t n = space.size();
  const double h = 1e-5;
  const bool full = family.full_active_set();
  const bool custom = family.kind().tag() == PotentialKind::Tag::CustomAdditive;
  const bool with_cl = family.blocks() && full && is_equivalence_function(*family.blocks());
  report.notes.push_back(std::string("paths=generic,finite_difference") + (full && !custom ? ",closed_form" : "") +
                         (full && family.additive() ? ",psi" : "") + (with_cl ? ",standard_cl" : ""));
  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = UnnormalizedVector::from_values(random_positive(n, rng));
    const auto log_f = f.log_density();
    for (Index y = 0; y < n; ++y) {
      std::vector<std::pair<const char*, double>> paths;
      paths.emplace_back("generic", generic_score(family, y, log_f));
      if (full && !custom) paths.emplace_back("closed_form", named_closed_form_score(family, y, log_f));
      if (full && family.additive()) paths.emplace_back("psi", additive_score(family, y, log_f));
      if (with_cl) paths.emplace_back("standard_cl", cl_score(*family.blocks(), y, log_f));
      auto shifted = f.log_values();
      shifted[y] += h;
      const double up = composite_potential(family, UnnormalizedVector::from_log(shifted));
      shifted[y] -= 2.0 * h;
      const double down = composite_potential(family, UnnormalizedVector::from_log(shifted));
      paths.emplace_back("finite_difference", -(up - down) / (2.0 * h) / f.value(y));
      for (std::size_t a = 0; a < paths.size(); ++a) {
        for (std::size_t b = a + 1; b < paths.size(); ++b) {
          const double d = relative_difference(paths[a].second, paths[b].second);
          report.worst_violation = std::max(report.worst_violation, d);
          if (d > report.tolerance) {
            report.add_witness("y=" + space.point_name(y) + " " + paths[a].first + "=" +
                               format_number(paths[a].second) + " " + paths[b].first + "=" +
                               format_number(paths[b].second));
          }
        }
      }
    }
  }
  report.trials = trials;
  report.finalize();
  return report;
}

OracleReport check_block_connectivity(int max_dimension, std::size_t trials, RngStream& rng) {
  if (max_dimension < 1 || max_dimension > 4) throw InputError("check_block_connectivity supports dimensions 1..4");
  OracleReport report;
  report.check_name = "block_connectivity";
  report.tolerance = 0.0;
  std::size_t connected = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_dimension)));
    const std::size_t m = 1 + rng.below(static_cast<std::uint64_t>(d));
    std::vector<std::vector<int>> blocks;
    for (std::size_t l = 0; l < m; ++l) {
      const Index mask = 1 + rng.below((Index{1} << d) - 1);
      std::vector<int> block;
      for (int i = 0; i < d; ++i) {
        if ((mask >> i) & 1U) block.push_back(i + 1);
      }
      blocks.push_back(block);
    }
    const BlockSystem system(d, blocks);
    if (system.covers_all_coordinates()) ++connected;
    if (!cl_connectivity_matches_cover(system)) {
      report.worst_violation += 1.0;
      report.add_witness("D=" + std::to_string(d) + " blocks=" + system.describe());
    }
  }
  report.notes.push_back("covering_systems=" + std::to_string(connected) +
                         " non_covering_systems=" + std::to_string(trials - connected));
  report.trials = trials;
  report.finalize();
  return report;
}

std::pair<long long, long long> index_swap_sums(const NeighborhoodGraph& graph,
                                                const std::vector<std::vector<long long>>& a) {
  const Index n = graph.size();
  if (a.size() != n) throw InputError("array must be |Y| x |Y|");
  long long forward = 0;
  long long swapped = 0;
  for (Index x = 0; x < n; ++x) {
    if (a[x].size() != n) throw InputError("array must be |Y| x |Y|");
    for (Index y : graph.neighbors(x)) {
      forward += a[x][y];
      swapped += a[y][x];
    }
  }
  return {forward, swapped};
}

OracleReport check_divergence_identity(const LocalPotentialFamily& family, std::size_t trials, RngStream& rng) {
  const auto& space = family.space();
  require_small(space, 16, "check_divergence_identity");
  OracleReport report;
  report.check_name = "divergence_identity[" + family.kind().name() + "]";
  report.tolerance = 1e-9;
  const std::size_t n = space.size();
  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = UnnormalizedVector::from_values(random_positive(n, rng));
    const auto g = t == 0 ? f : UnnormalizedVector::from_values(random_positive(n, rng));
    const double lhs = divergence(family, f, g);
    const auto log_g = g.log_density();
    double rhs = composite_potential(family, f);
    for (Index y = 0; y < n; ++y) rhs += f.value(y) * generic_score(family, y, log_g);
    const double d = relative_difference(lhs, rhs);
    report.worst_violation = std::max(report.worst_violation, d);
    if (d > report.tolerance) {
      report.add_witness("f=" + format_vector(f.log_values()) + " (log) D=" + format_number(lhs) +
                         " identity=" + format_number(rhs));
    }
  }

  // Index swap on the family's graph and on random graphs, integer entries.
  std::size_t swap_failures = 0;
  const auto own = materialize(family.neighborhood());
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::pair<Index, Index>> edges;
    for (Index x = 0; x < n; ++x) {
      for (Index y = x + 1; y < n; ++y) {
        if (rng.uniform() < 0.4) edges.emplace_back(x, y);
      }
    }
    const auto random_graph = NeighborhoodGraph::from_edges(space, edges);
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (auto& row : a) {
      for (auto& v : row) v = static_cast<long long>(rng.below(2001)) - 1000;
    }
    for (const auto* graph : {&own, &random_graph}) {
      const auto [forward, swapped] = index_swap_sums(*graph, a);
      if (forward != swapped) {
        ++swap_failures;
        report.add_witness("index swap mismatch: " + std::to_string(forward) + " vs " + std::to_string(swapped));
      }
    }
  }
  report.notes.push_back("index_swap_failures=" + std::to_string(swap_failures));
  if (swap_failures > 0) report.worst_violation = std::max(report.worst_violation, 1.0);
  report.trials = trials;
  report.finalize();
  return report;
}

}  // namespace localscore
