// Acceptance run: one PASS/FAIL/SKIP line per criterion, followed by the
// measurements behind it.
//
//   acceptance [--only N[,N...]] [--expect-fail N[,N...]]
//
// The exit status is 0 when the set of failing criteria equals the
// --expect-fail set, 1 otherwise. Criterion 10 reads the labeled digits file
// named by OPTDIGITS_PATH and is skipped when it is unset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "localscore/datasets.hpp"
#include "localscore/oracle.hpp"
#include "localscore/sampling.hpp"

using namespace localscore;

namespace {

// Pinned tolerances and budgets.
constexpr double kC1ZeroTol = 1e-12;
constexpr double kC1PositiveMin = 1e-6;
constexpr double kC1MaxSeconds = 1e-3;
constexpr std::size_t kC2Trials = 1000;
constexpr double kC2Tol = 1e-9;
constexpr double kC2MaxSeconds = 30.0;
constexpr double kC3HomogeneityTol = 1e-9;
constexpr double kC3MaxSeconds = 10.0;
constexpr std::size_t kC4Systems = 200;
constexpr double kC4MaxSeconds = 10.0;
constexpr double kC5Tol = 1e-10;
constexpr std::size_t kC5Draws = 100;
constexpr std::size_t kC6Samples = 200000;
constexpr double kC6RecoveryTol = 0.05;
constexpr double kC6GradientTol = 1e-8;
constexpr double kC6MaxSeconds = 60.0;
constexpr double kC7ZeroTol = 1e-9;
constexpr double kC7Tol = 0.1;
constexpr double kC7MaxSeconds = 60.0;
constexpr std::size_t kC8Seeds = 5;
constexpr std::size_t kC8Train = 1000;
constexpr std::size_t kC8Test = 5000;
constexpr double kC8UniformLoss = 5.5452;
constexpr std::size_t kC8AllowedViolations = 1;
constexpr double kC8MaxSeconds = 600.0;
constexpr double kC9StationarityTol = 1e-12;
constexpr std::size_t kC9Samples = 200000;
constexpr double kC9TvTol = 0.05;
constexpr double kC9MaxSeconds = 120.0;
constexpr std::size_t kC10Splits = 3;
constexpr std::size_t kC10Train = 2000;
constexpr double kC10Noise = 0.1;
constexpr double kC10MleSlack = 0.1;
constexpr std::size_t kC10MaxIterations = 2000;
constexpr double kC10MaxSeconds = 600.0;

constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

enum class Outcome { Pass, Fail, Skip };

struct Result {
  Outcome outcome = Outcome::Pass;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) outcome = Outcome::Fail;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

UnnormalizedVector as_vector(const std::vector<double>& weights) { return UnnormalizedVector::from_values(weights); }

std::shared_ptr<const NeighborhoodSystem> hamming(int d, int r) { return std::make_shared<HammingNeighborhood>(d, r); }

// ------------------------------------------------------------------ 1

Result counterexample() {
  Result r;
  // Points (+1,+1), (-1,-1), (-1,+1), (+1,-1) are indices 3, 0, 2, 1.
  std::vector<double> p(4), q(4);
  p[3] = 0.1, p[0] = 0.1, p[2] = 0.4, p[1] = 0.4;
  q[3] = 0.2, q[0] = 0.2, q[2] = 0.3, q[1] = 0.3;
  const auto t0 = Clock::now();
  const LocalPotentialFamily r1(PotentialKind::pseudo_spherical(1.0), hamming(2, 1));
  const LocalPotentialFamily r2(PotentialKind::pseudo_spherical(1.0), hamming(2, 2));
  const double d1 = divergence(r1, as_vector(p), as_vector(q));
  const double d2 = divergence(r2, as_vector(p), as_vector(q));
  const double elapsed = seconds_since(t0);
  double gap = 0.0;
  for (int i = 0; i < 4; ++i) gap = std::max(gap, std::abs(p[i] - q[i]));
  r.require(std::abs(d1) <= kC1ZeroTol, fmt("radius 1: |D(p,q)| = %.3g <= %.0e", std::abs(d1), kC1ZeroTol));
  r.require(std::abs(gap - 0.1) <= 1e-15, fmt("|p - q|_inf = %.17g", gap));
  r.require(d2 > kC1PositiveMin, fmt("radius 2: D(p,q) = %.6g > %.0e", d2, kC1PositiveMin));
  r.require(elapsed < kC1MaxSeconds, fmt("runtime %.3g s < %.0e s", elapsed, kC1MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 2

struct RuleCase {
  std::string label;
  LocalScore rule;
};

std::vector<RuleCase> properness_cases() {
  std::vector<RuleCase> cases;
  const auto cube4 = SampleSpace::hypercube(4);
  const auto cube3 = SampleSpace::hypercube(3);
  const auto labels = SampleSpace::label_range(12);
  for (const char* spec : {"pl", "rm", "dp:1", "ps:1"}) {
    cases.push_back({std::string(spec) + " hypercube:4 radius 1", LocalScore::from_spec(parse_score_spec(spec), cube4, 1)});
    cases.push_back({std::string(spec) + " hypercube:3 radius 2", LocalScore::from_spec(parse_score_spec(spec), cube3, 2)});
    cases.push_back({std::string(spec) + " labels:12 band 2", LocalScore::from_spec(parse_score_spec(spec), labels, 2)});
  }
  for (const char* spec : {"cl:1,2;3,4", "cl:1;2;1,2;3;4;3,4", "mcl:1,2;3,4", "mcl:1,2;2,3;3,4"}) {
    cases.push_back({std::string(spec) + " hypercube:4", LocalScore::from_spec(parse_score_spec(spec), cube4, 0)});
  }
  for (const char* spec : {"cl", "mcl"}) {
    cases.push_back({std::string(spec) + " labels:12 band 2", LocalScore::from_spec(parse_score_spec(spec), labels, 2)});
  }
  return cases;
}

Result properness() {
  Result r;
  const auto t0 = Clock::now();
  RngStream rng(kSeed, 2);
  double worst = -INFINITY;
  for (const auto& c : properness_cases()) {
    if (!is_connected(materialize(c.rule.family().neighborhood()))) {
      r.note(c.label + ": graph not connected, skipped");
      continue;
    }
    const auto report = check_properness(c.rule, kC2Trials, rng);
    worst = std::max(worst, report.worst_violation);
    r.require(report.worst_violation <= kC2Tol,
              fmt("%s: max S(p,p) - S(p,q) = %.3g", c.label.c_str(), report.worst_violation));
  }
  const double elapsed = seconds_since(t0);
  r.note(fmt("worst over all rules %.3g, tolerance %.0e, %zu draws each", worst, kC2Tol, kC2Trials));
  r.require(elapsed < kC2MaxSeconds, fmt("runtime %.2f s < %.0f s", elapsed, kC2MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 3

std::vector<LocalPotentialFamily> identity_families() {
  std::vector<LocalPotentialFamily> out;
  std::vector<PotentialKind> kinds = {PotentialKind::pseudo_likelihood(), PotentialKind::ratio_matching(),
                                      PotentialKind::density_power(1.0), PotentialKind::pseudo_spherical(1.0),
                                      PotentialKind::pseudo_spherical(3.0)};
  for (const auto& k : kinds) {
    out.emplace_back(k, hamming(3, 1));
    out.emplace_back(k, hamming(3, 2));
    out.emplace_back(k, std::make_shared<LabelBandNeighborhood>(8, 2));
  }
  out.emplace_back(PotentialKind::composite_likelihood(),
                   std::make_shared<HypercubeBlockNeighborhood>(BlockSystem::parse(3, "1,2;2,3")));
  out.emplace_back(PotentialKind::composite_likelihood(), std::make_shared<LabelBandNeighborhood>(8, 2));
  return out;
}

Result identities() {
  Result r;
  const auto t0 = Clock::now();
  RngStream rng(kSeed, 3);
  const std::vector<double> lambdas = {1e-3, 0.5, 2.0, 1e3};
  for (const auto& family : identity_families()) {
    const std::string name = family.kind().name() + " " + family.neighborhood().describe();
    const auto paths = check_score_paths(family, 50, rng);
    r.require(paths.pass, fmt("%s: score paths agree, worst %.3g (tol %.0e)", name.c_str(), paths.worst_violation,
                              paths.tolerance));
    const auto identity = check_divergence_identity(family, 50, rng);
    r.require(identity.pass, fmt("%s: divergence identity, worst %.3g; %s", name.c_str(), identity.worst_violation,
                                 identity.notes.empty() ? "" : identity.notes.back().c_str()));
    const LocalScore rule(family);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> log_f(family.space().size());
      for (double& v : log_f) v = rng.uniform(-3.0, 3.0);
      const LogDensity base = [&](Index z) { return log_f[z]; };
      for (Index y = 0; y < family.space().size(); ++y) {
        const double s = rule.value(y, base);
        for (double lambda : lambdas) {
          const double shift = std::log(lambda);
          const LogDensity scaled = [&](Index z) { return log_f[z] + shift; };
          worst = std::max(worst, relative_difference(s, rule.value(y, scaled)));
        }
      }
    }
    r.require(worst <= kC3HomogeneityTol, fmt("%s: homogeneity, worst relative change %.3g", name.c_str(), worst));
  }
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC3MaxSeconds, fmt("runtime %.2f s < %.0f s", elapsed, kC3MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 4

Result graph_conditions() {
  Result r;
  const auto t0 = Clock::now();
  RngStream rng(kSeed, 4);
  const auto report = check_block_connectivity(4, kC4Systems, rng);
  r.require(report.pass, fmt("block-cover connectivity equivalence on %zu random systems (D <= 4), mismatches %.0f",
                             report.trials, report.worst_violation));
  r.require(rank_condition(BlockSystem::parse(2, "1;2"), 0), "rank condition holds for {1},{2}");
  r.require(!rank_condition(BlockSystem::parse(3, "1;2,3"), 0), "rank condition fails for {1},{2,3}");
  for (int d = 2; d <= 6; ++d) {
    const auto g = hamming_graph(d, 1);
    const auto all = all_points(g.space());
    const auto diag = diagnose(g, all, PotentialClass::PseudoSpherical);
    r.require(diag.component_count_g0prime == 2,
              fmt("hypercube:%d radius 1: G0' components = %zu", d, diag.component_count_g0prime));
  }
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC4MaxSeconds, fmt("runtime %.2f s < %.0f s", elapsed, kC4MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 5

Result cl_equals_mcl() {
  Result r;
  RngStream rng(kSeed, 5);
  const auto space = SampleSpace::hypercube(3);
  const auto cl = LocalScore::from_spec(parse_score_spec("cl:1;2;3"), space, 0);
  const auto mcl = LocalScore::from_spec(parse_score_spec("mcl:1;2;3"), space, 0);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < kC5Draws; ++trial) {
    const auto q = random_positive(space.size(), rng);
    const LogDensity log_q = [&](Index z) { return std::log(q[z]); };
    for (Index y = 0; y < space.size(); ++y) {
      worst = std::max(worst, std::abs(cl.value(y, log_q) - mcl.value(y, log_q)));
    }
  }
  r.require(worst <= kC5Tol, fmt("max |CL - mCL| over 8 points and %zu draws = %.3g", kC5Draws, worst));
  return r;
}

// ------------------------------------------------------------------ 6

Result consistency() {
  Result r;
  RngStream rng(kSeed, 6);
  const auto truth = random_boltzmann(4, rng);
  const auto p = normalize(truth);
  const auto samples = exact_sample(p, kC6Samples, rng);
  auto t0 = Clock::now();
  const auto pl = LocalScore::from_spec(parse_score_spec("pl"), truth.space(), 1);
  const auto fitted = fit(pl, BoltzmannModel::zeros(4), samples, FitConfig{});
  const double fit_seconds = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t k = 0; k < fitted.parameters.size(); ++k) {
    worst = std::max(worst, std::abs(fitted.parameters[k] - truth.parameters()[k]));
  }
  r.note(fmt("true |W|_inf = %.3f, fit converged=%d after %zu iterations", infinity_norm(truth.parameters()),
             fitted.converged, fitted.iterations_used));
  r.require(worst <= kC6RecoveryTol, fmt("PL radius 1: max |W_hat - W| = %.4f <= %.2f", worst, kC6RecoveryTol));
  r.require(fit_seconds < kC6MaxSeconds, fmt("PL fit runtime %.2f s < %.0f s", fit_seconds, kC6MaxSeconds));

  // Strictly proper configurations: additive kinds at either radius, PS at
  // radius 2, block families whose rank condition and cover both hold.
  const std::vector<std::pair<const char*, int>> kinds = {
      {"pl", 1}, {"pl", 2}, {"rm", 1}, {"rm", 2}, {"dp:1", 1}, {"dp:1", 2}, {"ps:1", 2}, {"ps:3", 2},
      {"cl:1;2;1,2;3;4;3,4", 0}, {"mcl:1;2;1,2;3;4;3,4", 0}, {"mcl:1;2;3;4", 0}};
  for (const auto& [spec, radius] : kinds) {
    t0 = Clock::now();
    const auto rule = LocalScore::from_spec(parse_score_spec(spec), truth.space(), radius);
    std::vector<double> grad;
    population_score(rule, truth, p, &grad);
    const double norm = infinity_norm(grad);
    r.require(norm <= kC6GradientTol && seconds_since(t0) < kC6MaxSeconds,
              fmt("%s%s: population gradient at truth %.3g <= %.0e", spec,
                  radius ? fmt(" radius %d", radius).c_str() : "", norm, kC6GradientTol));
  }
  return r;
}

// ------------------------------------------------------------------ 7

Result ais() {
  Result r;
  const auto t0 = Clock::now();
  const auto zero = BoltzmannModel::zeros(8);
  const auto z = ais_log_z(zero, AisConfig{}, RngStream(kSeed, 70));
  r.require(std::abs(z.estimate - 8.0 * std::log(2.0)) <= kC7ZeroTol,
            fmt("W = 0: |AIS - 8 ln 2| = %.3g", std::abs(z.estimate - 8.0 * std::log(2.0))));
  RngStream rng(kSeed, 7);
  const auto model = random_boltzmann(8, rng);
  const auto est = ais_log_z(model, AisConfig{}, RngStream(kSeed, 70));
  const double exact = exact_log_z(model);
  r.require(std::abs(est.estimate - exact) <= kC7Tol,
            fmt("random W: AIS %.5f (se %.4f), exact %.5f, |diff| = %.4f <= %.1f", est.estimate, est.std_error, exact,
                std::abs(est.estimate - exact), kC7Tol));
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC7MaxSeconds, fmt("runtime %.2f s < %.0f s", elapsed, kC7MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 8

Result table_trend() {
  Result r;
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, int>> estimators = {{"pl", 1}, {"pl", 2}, {"rm", 1},
                                                               {"rm", 2}, {"ps:1", 1}, {"ps:3", 1}};
  std::vector<std::vector<double>> losses(estimators.size());
  std::vector<double> mle_losses;
  for (std::uint64_t seed = 1; seed <= kC8Seeds; ++seed) {
    RngStream rng(seed, 8);
    const auto truth = random_boltzmann(8, rng);
    const auto p = normalize(truth);
    const auto train = exact_sample(p, kC8Train, rng);
    const auto test = exact_sample(p, kC8Test, rng);
    std::string line = fmt("seed %llu:", static_cast<unsigned long long>(seed));
    for (std::size_t e = 0; e < estimators.size(); ++e) {
      const auto rule = LocalScore::from_spec(parse_score_spec(estimators[e].first), truth.space(), estimators[e].second);
      const auto res = fit(rule, BoltzmannModel::zeros(8), train, FitConfig{});
      const BoltzmannModel m(8, res.parameters);
      losses[e].push_back(negative_log_loss(m, test, exact_log_z(m)));
      line += fmt(" %s/n%d=%.3f%s", estimators[e].first, estimators[e].second, losses[e].back(), res.converged ? "" : "*");
    }
    const auto res = mle_fit(BoltzmannModel::zeros(8), train, FitConfig{});
    const BoltzmannModel m(8, res.parameters);
    mle_losses.push_back(negative_log_loss(m, test, exact_log_z(m)));
    line += fmt(" mle=%.3f%s", mle_losses.back(), res.converged ? "" : "*");
    r.note(line);
  }
  r.note("(* = iteration limit reached)");
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const double worst = *std::max_element(losses[e].begin(), losses[e].end());
    const double mean = std::accumulate(losses[e].begin(), losses[e].end(), 0.0) / losses[e].size();
    r.require(worst < kC8UniformLoss, fmt("%s/n%d: worst loss %.3f < %.4f (mean %.3f)", estimators[e].first,
                                          estimators[e].second, worst, kC8UniformLoss, mean));
  }
  const double mean1 = std::accumulate(losses[0].begin(), losses[0].end(), 0.0) / kC8Seeds;
  const double mean2 = std::accumulate(losses[1].begin(), losses[1].end(), 0.0) / kC8Seeds;
  std::size_t violations = 0;
  for (std::size_t s = 0; s < kC8Seeds; ++s) violations += losses[1][s] > losses[0][s] ? 1 : 0;
  r.require(mean2 <= mean1, fmt("mean pl/n2 loss %.4f <= mean pl/n1 loss %.4f", mean2, mean1));
  r.require(violations <= kC8AllowedViolations,
            fmt("seeds with pl/n2 > pl/n1: %zu <= %zu", violations, kC8AllowedViolations));
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC8MaxSeconds, fmt("runtime %.1f s < %.0f s", elapsed, kC8MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 9

// Systematic-scan kernel, built one coordinate at a time.
std::vector<double> stationarity_residual_kernel(const BoltzmannModel& model, const Probability& p) {
  const Index n = model.space().size();
  std::vector<double> mass(p.weights());
  for (int i = 0; i < model.dimension(); ++i) {
    std::vector<double> next(n, 0.0);
    for (Index y = 0; y < n; ++y) {
      const double plus = gibbs_conditional_plus(model, y, i);
      next[y | (Index{1} << i)] += mass[y] * plus;
      next[y & ~(Index{1} << i)] += mass[y] * (1.0 - plus);
    }
    mass = std::move(next);
  }
  return mass;
}

Result gibbs() {
  Result r;
  const auto t0 = Clock::now();
  RngStream kernel_rng(kSeed, 90);
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto model = random_boltzmann(d, kernel_rng);
      const auto p = normalize(model);
      const auto after = stationarity_residual_kernel(model, p);
      for (Index y = 0; y < p.size(); ++y) worst = std::max(worst, std::abs(after[y] - p[y]));
    }
  }
  r.require(worst <= kC9StationarityTol, fmt("D <= 4: max |pK - p| = %.3g <= %.0e", worst, kC9StationarityTol));
  RngStream rng(kSeed, 9);
  const auto model = random_boltzmann(8, rng);
  const auto samples = gibbs_sample(model, kC9Samples, GibbsConfig{}, rng);
  const auto p = normalize(model);
  std::vector<double> freq(p.size(), 0.0);
  for (Index y : samples) freq[y] += 1.0 / static_cast<double>(samples.size());
  double tv = 0.0;
  for (Index y = 0; y < p.size(); ++y) tv += 0.5 * std::abs(freq[y] - p[y]);
  r.require(tv <= kC9TvTol, fmt("D = 8, n = %zu: total variation %.4f <= %.2f", kC9Samples, tv, kC9TvTol));
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC9MaxSeconds, fmt("runtime %.2f s < %.0f s", elapsed, kC9MaxSeconds));
  return r;
}

// ------------------------------------------------------------------ 10

Result classification() {
  Result r;
  const char* path = std::getenv("OPTDIGITS_PATH");
  if (!path || !*path) {
    r.outcome = Outcome::Skip;
    r.note("OPTDIGITS_PATH is not set; point it at the labeled digits CSV (64 features + label per row)");
    return r;
  }
  const auto t0 = Clock::now();
  const auto all = ingest_optdigits(path, {}, false);
  if (all.size() <= kC10Train) {
    r.require(false, fmt("%s has %zu rows, need more than %zu", path, all.size(), kC10Train));
    return r;
  }
  FitConfig config;
  config.max_iterations = kC10MaxIterations;
  const auto init = ConditionalModel::zeros(kOptdigitsLabels, all.features.front().size());
  const double ln10 = std::log(10.0);
  for (std::uint64_t seed = 1; seed <= kC10Splits; ++seed) {
    RngStream split_rng(seed, 100);
    auto [train, test] = split(all, kC10Train, split_rng);
    RngStream noise_rng(seed, 101);
    inject_label_noise(train, kC10Noise, kOptdigitsLabels, noise_rng);
    struct Row {
      std::string name;
      double loss;
      double error;
    };
    std::vector<Row> rows;
    const auto evaluate = [&](const std::string& name, const FitResult& res) {
      const auto m = init.with_parameters(res.parameters);
      rows.push_back({name + (res.converged ? "" : "*"), negative_log_loss(m, test), test_error(m, test)});
    };
    evaluate("mle", mle_fit(init, train, config));
    for (const char* spec : {"pl", "rm", "ps:1", "cl", "mcl"}) {
      for (int band : {1, 2}) {
        const auto rule = LocalScore::from_spec(parse_score_spec(spec), init.space(), band);
        evaluate(fmt("%s/k%d", spec, band), fit(rule, init, train, config));
      }
    }
    std::string line = fmt("split %llu (train %zu, test %zu):", static_cast<unsigned long long>(seed), train.size(),
                           test.size());
    for (const auto& row : rows) line += fmt(" %s=%.3f/%.3f", row.name.c_str(), row.loss, row.error);
    r.note(line);
    for (const auto& row : rows) {
      r.require(row.loss < ln10 && row.error < 0.9,
                fmt("split %llu %s: loss %.4f < ln 10, error %.4f < 0.9", static_cast<unsigned long long>(seed),
                    row.name.c_str(), row.loss, row.error));
      if (row.name.rfind("mle", 0) != 0) {
        r.require(rows.front().loss <= row.loss + kC10MleSlack,
                  fmt("split %llu MLE loss %.4f <= %s loss + %.1f", static_cast<unsigned long long>(seed),
                      rows.front().loss, row.name.c_str(), kC10MleSlack));
      }
    }
  }
  r.note("(loss/error on the held-out rows; * = iteration limit reached)");
  const double elapsed = seconds_since(t0);
  r.require(elapsed < kC10MaxSeconds, fmt("runtime %.1f s < %.0f s", elapsed, kC10MaxSeconds));
  return r;
}

std::set<int> parse_set(const std::string& text) {
  std::set<int> out;
  std::stringstream parts(text);
  for (std::string item; std::getline(parts, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"pseudo-spherical radius-1 counterexample", counterexample},
      {"properness of every rule", properness},
      {"score, homogeneity and divergence identities", identities},
      {"graph connectivity and rank condition", graph_conditions},
      {"CL equals mCL with singleton blocks", cl_equals_mcl},
      {"estimator consistency, D = 4", consistency},
      {"AIS log-partition estimates", ais},
      {"synthetic Boltzmann losses, D = 8", table_trend},
      {"Gibbs sampler correctness", gibbs},
      {"digit classification harness", classification},
  };
  std::set<int> only;
  std::set<int> expected_failures;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") {
      only = parse_set(argv[i + 1]);
    } else if (flag == "--expect-fail") {
      expected_failures = parse_set(argv[i + 1]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N,...] [--expect-fail N,...]\n");
      return 2;
    }
  }
  std::set<int> failures;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Result result;
    try {
      result = criteria[k].second();
    } catch (const std::exception& e) {
      result.require(false, std::string("exception: ") + e.what());
    }
    const char* tag = result.outcome == Outcome::Pass ? "PASS" : result.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::string suffix;
    if (result.outcome == Outcome::Fail) {
      failures.insert(id);
      if (expected_failures.count(id)) suffix = " [expected failure]";
    }
    std::printf("%s criterion %d: %s (%.2f s)%s\n", tag, id, criteria[k].first, seconds_since(t0), suffix.c_str());
    for (const auto& d : result.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::set<int> expected_run;
  for (int id : expected_failures) {
    if (only.empty() || only.count(id)) expected_run.insert(id);
  }
  for (int id : expected_run) {
    if (!failures.count(id)) std::printf("note: criterion %d was expected to fail but did not\n", id);
  }
  return failures == expected_run ? 0 : 1;
}
