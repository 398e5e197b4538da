#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "localscore/divergence.hpp"
#include "localscore/errors.hpp"
#include "localscore/oracle.hpp"
#include "support.hpp"

using namespace localscore;
using namespace testing_support;

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::vector<LocalPotentialFamily> small_families() {
  std::vector<LocalPotentialFamily> out;
  out.emplace_back(PotentialKind::pseudo_likelihood(), hamming(3, 1));
  out.emplace_back(PotentialKind::pseudo_likelihood(), hamming(3, 2));
  out.emplace_back(PotentialKind::ratio_matching(), hamming(3, 1));
  out.emplace_back(PotentialKind::density_power(1.0), hamming(3, 1));
  out.emplace_back(PotentialKind::density_power(0.5), hamming(2, 2));
  out.emplace_back(PotentialKind::pseudo_spherical(1.0), hamming(3, 1));
  out.emplace_back(PotentialKind::pseudo_spherical(3.0), hamming(3, 2));
  out.emplace_back(PotentialKind::composite_likelihood(), blocks(3, "1;2,3"));
  out.emplace_back(PotentialKind::composite_likelihood(), blocks(4, "1;2;1,2;3;4;3,4"));
  out.emplace_back(PotentialKind::pseudo_likelihood(), std::make_shared<LabelBandNeighborhood>(6, 2));
  out.emplace_back(PotentialKind::composite_likelihood(), std::make_shared<LabelBandNeighborhood>(6, 2));
  return out;
}

// phi(t) = t log t, convex on t > 0.
PotentialKind entropy_kind(bool with_second) {
  CustomAdditivePotential c;
  c.name = "xlogx";
  c.value = [](double t) { return t * std::log(t); };
  c.derivative = [](double t) { return std::log(t) + 1.0; };
  if (with_second) c.second_derivative = [](double t) { return 1.0 / t; };
  return PotentialKind::custom_additive(c);
}

double fd_partial(const LocalPotentialFamily& fam, Index y, std::vector<double> g, std::size_t k) {
  const double h = 1e-5 * g[k];
  g[k] += h;
  const double up = fam.local_potential(y, g);
  g[k] -= 2.0 * h;
  const double down = fam.local_potential(y, g);
  return (up - down) / (2.0 * h);
}

}  // namespace

TEST_CASE("local potentials at hand-checked points") {
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(2, 1));
  const std::vector<double> ones{1.0, 1.0};
  CHECK(pl.local_potential(0, ones) == doctest::Approx(-2.0 * kLn2).epsilon(1e-15));
  LocalPotentialFamily ps(PotentialKind::pseudo_spherical(1.0), hamming(2, 1));
  const std::vector<double> g34{3.0, 4.0};
  CHECK(ps.local_potential(0, g34) == doctest::Approx(5.0).epsilon(1e-15));
  LocalPotentialFamily rm(PotentialKind::ratio_matching(), hamming(3, 1));
  const std::vector<double> three{1.0, 1.0, 1.0};
  CHECK(rm.local_potential(0, three) == doctest::Approx(-0.75).epsilon(1e-15));

  std::vector<double> out(2);
  pl.local_potential_gradient(0, ones, out);
  CHECK(out[0] == doctest::Approx(-0.5));
  CHECK(out[1] == doctest::Approx(-0.5));
  LocalPotentialFamily dp(PotentialKind::density_power(1.0), hamming(2, 1));
  const std::vector<double> g23{2.0, 3.0};
  dp.local_potential_gradient(0, g23, out);
  CHECK(out[0] == doctest::Approx(2.0));
  CHECK(out[1] == doctest::Approx(3.0));
  ps.local_potential_gradient(0, g34, out);
  CHECK(out[0] == doctest::Approx(0.6));
  CHECK(out[1] == doctest::Approx(0.8));

  CHECK_THROWS_AS(pl.local_potential(0, three), InputError);
  const std::vector<double> negative{1.0, -1.0};
  CHECK_THROWS_AS(pl.local_potential(0, negative), InputError);
  LocalPotentialFamily partial(PotentialKind::pseudo_likelihood(), hamming(2, 1), std::vector<Index>{0});
  CHECK_THROWS_AS(partial.local_potential(3, ones), InputError);
}

TEST_CASE("local potential gradients match finite differences") {
  RngStream rng(21, 0);
  auto families = small_families();
  families.emplace_back(entropy_kind(true), hamming(3, 1));
  for (const auto& fam : families) {
    for (int t = 0; t < 10; ++t) {
      const Index y = rng.below(fam.space().size());
      const auto nb = fam.neighborhood().neighbors(y);
      std::vector<double> g(nb.size());
      for (double& x : g) x = std::exp(rng.uniform(-3.0, 3.0));
      std::vector<double> grad(nb.size());
      fam.local_potential_gradient(y, g, grad);
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(close_rel(grad[k], fd_partial(fam, y, g, k), 1e-6));
      }
    }
  }
}

TEST_CASE("local potentials are convex along random segments") {
  RngStream rng(22, 0);
  for (const auto& fam : small_families()) {
    for (int t = 0; t < 20; ++t) {
      const Index y = rng.below(fam.space().size());
      const std::size_t m = fam.neighborhood().neighbors(y).size();
      std::vector<double> a(m), b(m), mid(m);
      for (std::size_t k = 0; k < m; ++k) {
        a[k] = std::exp(rng.uniform(-3.0, 3.0));
        b[k] = std::exp(rng.uniform(-3.0, 3.0));
        mid[k] = 0.5 * (a[k] + b[k]);
      }
      const double lhs = fam.local_potential(y, mid);
      const double rhs = 0.5 * (fam.local_potential(y, a) + fam.local_potential(y, b));
      CHECK(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("composite potential examples and homogeneity") {
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(1, 1));
  CHECK(composite_potential(pl, UnnormalizedVector::from_values({1.0, 1.0})) ==
        doctest::Approx(-2.0 * kLn2).epsilon(1e-15));
  LocalPotentialFamily dp(PotentialKind::density_power(1.0), hamming(1, 1));
  CHECK(composite_potential(dp, UnnormalizedVector::from_values({1.0, 2.0})) == doctest::Approx(2.25).epsilon(1e-15));

  RngStream rng(23, 0);
  for (const auto& fam : small_families()) {
    const auto f = UnnormalizedVector::from_log(random_log_values(fam.space().size(), rng));
    const double base = composite_potential(fam, f);
    CHECK(close_rel(composite_potential(fam, f.scaled(7.0)), 7.0 * base, 1e-9));
  }
}

TEST_CASE("scores at the uniform vector") {
  const auto uniform = UnnormalizedVector::from_values({1.0, 1.0, 1.0, 1.0});
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(2, 1));
  LocalPotentialFamily rm(PotentialKind::ratio_matching(), hamming(2, 1));
  for (Index y = 0; y < 4; ++y) {
    CHECK(score(pl, y, uniform.log_density()) == doctest::Approx(2.0 * kLn2).epsilon(1e-15));
    CHECK(score(rm, y, uniform.log_density()) == doctest::Approx(0.5).epsilon(1e-15));
  }
  HypercubeBlockNeighborhood joint(BlockSystem::parse(2, "1,2"));
  CHECK(cl_score(joint, 0, uniform.log_density()) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  const auto p = Probability::normalized({1.0, 1.0, 1.0, 1.0});
  CHECK(expected_score(pl, p, uniform) == doctest::Approx(2.0 * kLn2).epsilon(1e-15));
}

TEST_CASE("named closed forms written out by hand") {
  RngStream rng(24, 0);
  const auto lv = random_log_values(8, rng);
  const auto f = UnnormalizedVector::from_log(lv);
  auto ratio = [&](Index z, Index y) { return std::exp(lv[z] - lv[y]); };
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(3, 1));
  LocalPotentialFamily rm(PotentialKind::ratio_matching(), hamming(3, 1));
  LocalPotentialFamily dp(PotentialKind::density_power(2.0), hamming(3, 1));
  LocalPotentialFamily ps(PotentialKind::pseudo_spherical(1.0), hamming(3, 1));
  for (Index y = 0; y < 8; ++y) {
    double s_pl = 0.0, s_rm = 0.0, s_dp = 0.0, s_ps = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Index z = y ^ (Index{1} << i);
      s_pl += std::log(1.0 + ratio(z, y));
      s_rm += 1.0 / std::pow(1.0 + ratio(y, z), 2.0);
      s_dp += 2.0 / 3.0 * std::pow(ratio(z, y), 3.0) - std::pow(ratio(y, z), 2.0);
      double norm2 = 0.0;
      for (int j = 0; j < 3; ++j) norm2 += std::pow(ratio(z ^ (Index{1} << j), y), 2.0);
      s_ps -= 1.0 / std::sqrt(norm2);
    }
    CHECK(close_rel(named_closed_form_score(pl, y, f.log_density()), s_pl, 1e-12));
    CHECK(close_rel(named_closed_form_score(rm, y, f.log_density()), s_rm, 1e-12));
    CHECK(close_rel(named_closed_form_score(dp, y, f.log_density()), s_dp, 1e-12));
    CHECK(close_rel(named_closed_form_score(ps, y, f.log_density()), s_ps, 1e-12));
  }
  LocalPotentialFamily custom(entropy_kind(true), hamming(3, 1));
  CHECK_THROWS_AS(named_closed_form_score(custom, 0, f.log_density()), UnsupportedError);
}

TEST_CASE("psi identities for the additive kinds") {
  for (double r : {0.01, 0.3, 1.0, 2.5, 40.0}) {
    CHECK(psi(PotentialKind::pseudo_likelihood(), r) == doctest::Approx(std::log1p(r)));
    CHECK(psi(PotentialKind::ratio_matching(), r) == doctest::Approx(1.0 / std::pow(1.0 + 1.0 / r, 2.0)));
    const double g = 1.5;
    CHECK(psi(PotentialKind::density_power(g), r) ==
          doctest::Approx(g / (1.0 + g) * std::pow(r, 1.0 + g) - std::pow(r, -g)));
  }
  CHECK_THROWS_AS(psi(PotentialKind::pseudo_spherical(1.0), 1.0), UnsupportedError);
}

TEST_CASE("score evaluation paths agree") {
  RngStream rng(25, 0);
  auto families = small_families();
  families.emplace_back(entropy_kind(true), hamming(3, 1));
  families.emplace_back(entropy_kind(false), hamming(2, 1));
  for (const auto& fam : families) {
    const auto report = check_score_paths(fam, 3, rng);
    INFO(report.to_text());
    CHECK(report.pass);
  }
  // Generic and additive paths agree to rounding.
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(4, 2));
  const auto f = UnnormalizedVector::from_log(random_log_values(16, rng));
  for (Index y = 0; y < 16; ++y) {
    CHECK(close_rel(generic_score(pl, y, f.log_density()), additive_score(pl, y, f.log_density()), 1e-10));
    CHECK(close_rel(generic_score(pl, y, f.log_density()), named_closed_form_score(pl, y, f.log_density()), 1e-10));
  }
}

TEST_CASE("partial active sets use the indicator terms") {
  RngStream rng(26, 0);
  const std::vector<Index> active{0, 3, 5, 6};
  for (auto kind : {PotentialKind::pseudo_likelihood(), PotentialKind::pseudo_spherical(1.0)}) {
    LocalPotentialFamily fam(kind, hamming(3, 1), active);
    const auto report = check_score_paths(fam, 3, rng);
    INFO(report.to_text());
    CHECK(report.pass);
    const auto f = UnnormalizedVector::from_log(random_log_values(8, rng));
    CHECK_THROWS_AS(named_closed_form_score(fam, 0, f.log_density()), UnsupportedError);
  }
  CHECK_THROWS_AS(LocalPotentialFamily(PotentialKind::pseudo_likelihood(),
                                       graph_system(NeighborhoodGraph::from_edges(
                                           SampleSpace::enumerated({"a", "b", "c"}), {{0, 1}})),
                                       std::vector<Index>{2}),
                  InputError);
}

TEST_CASE("scores are invariant to scaling f") {
  RngStream rng(27, 0);
  for (const auto& fam : small_families()) {
    const LocalScore rule(fam);
    const auto f = UnnormalizedVector::from_log(random_log_values(fam.space().size(), rng));
    for (double lambda : {1e-3, 0.5, 2.0, 1e3}) {
      const auto g = f.scaled(lambda);
      for (Index y = 0; y < fam.space().size(); ++y) {
        const double a = generic_score(fam, y, f.log_density());
        const double b = generic_score(fam, y, g.log_density());
        CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)));
        const double c = rule.value(y, f.log_density());
        const double d = rule.value(y, g.log_density());
        CHECK(std::abs(c - d) <= 1e-9 * (1.0 + std::abs(c)));
      }
    }
  }
}

TEST_CASE("score gradients with respect to log f match finite differences") {
  RngStream rng(28, 0);
  std::vector<LocalScore> rules;
  for (const auto& fam : small_families()) rules.emplace_back(fam);
  rules.emplace_back(LocalPotentialFamily(PotentialKind::composite_likelihood(), blocks(3, "1;2,3")), true);
  rules.emplace_back(LocalPotentialFamily(entropy_kind(true), hamming(3, 1)));
  rules.emplace_back(LocalPotentialFamily(entropy_kind(false), hamming(3, 1)));
  rules.emplace_back(LocalPotentialFamily(PotentialKind::ratio_matching(), hamming(3, 1), std::vector<Index>{1, 2, 7}));
  for (const auto& rule : rules) {
    const auto lv = random_log_values(rule.family().space().size(), rng);
    for (Index y = 0; y < lv.size(); ++y) {
      const auto sg = rule.value_and_gradient(y, UnnormalizedVector::from_log(lv).log_density());
      CHECK(close_rel(sg.value, rule.value(y, UnnormalizedVector::from_log(lv).log_density()), 1e-12));
      std::vector<double> dense(lv.size(), 0.0);
      for (const auto& [z, d] : sg.d_log_f) dense[z] = d;
      for (Index z = 0; z < lv.size(); ++z) {
        auto up = lv;
        auto down = lv;
        up[z] += 1e-6;
        down[z] -= 1e-6;
        const double fd = (rule.value(y, UnnormalizedVector::from_log(up).log_density()) -
                           rule.value(y, UnnormalizedVector::from_log(down).log_density())) /
                          2e-6;
        INFO(rule.name(), " y=", y, " z=", z);
        CHECK(std::abs(dense[z] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("scores only read the extended neighborhood") {
  // Radius-1 on a 10-cube, evaluated without enumerating the space.
  LocalPotentialFamily ps(PotentialKind::pseudo_spherical(1.0), hamming(10, 1));
  PartialLogDensity f;
  const Index y = 0b1011001110;
  f.set(y, 0.3);
  for (int i = 0; i < 10; ++i) {
    const Index z = y ^ (Index{1} << i);
    f.set(z, 0.1 * i);
    for (int j = 0; j < 10; ++j) f.set(z ^ (Index{1} << j), -0.05 * j);
  }
  LogDensity lf = [&](Index z) { return f(z); };
  CHECK(std::isfinite(generic_score(ps, y, lf)));
  CHECK(close_rel(generic_score(ps, y, lf), named_closed_form_score(ps, y, lf), 1e-10));

  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(10, 1));
  PartialLogDensity narrow;
  narrow.set(y, 0.0);
  for (int i = 0; i < 10; ++i) narrow.set(y ^ (Index{1} << i), 0.1 * i);
  LogDensity ln = [&](Index z) { return narrow(z); };
  CHECK(std::isfinite(score(pl, y, ln)));
  CHECK_THROWS_AS(generic_score(ps, y, ln), InputError);

  // Large hypercubes work through the implicit neighborhood.
  LocalPotentialFamily big(PotentialKind::pseudo_likelihood(), hamming(48, 1));
  LogDensity zero = [](Index) { return 0.0; };
  CHECK(score(big, 12345, zero) == doctest::Approx(48.0 * kLn2));
}

TEST_CASE("divergence is zero on the diagonal and matches the score identity") {
  RngStream rng(29, 0);
  for (const auto& fam : small_families()) {
    if (fam.space().size() > 16) continue;
    const auto f = UnnormalizedVector::from_log(random_log_values(fam.space().size(), rng));
    CHECK(divergence(fam, f, f) == 0.0);
    const auto report = check_divergence_identity(fam, 20, rng);
    INFO(report.to_text());
    CHECK(report.pass);
  }
}

TEST_CASE("expected score gap equals the divergence between probabilities") {
  RngStream rng(30, 0);
  for (const auto& fam : small_families()) {
    if (fam.space().size() > 16) continue;
    const std::size_t n = fam.space().size();
    const auto p = Probability::normalized(random_positive(n, rng));
    const auto q = Probability::normalized(random_positive(n, rng));
    const double gap =
        expected_score(fam, p, q.as_unnormalized()) - expected_score(fam, p, p.as_unnormalized());
    CHECK(std::abs(gap - divergence(fam, p.as_unnormalized(), q.as_unnormalized())) <= 1e-9);
    CHECK(close_rel(expected_score(fam, p, p.as_unnormalized()), -composite_potential(fam, p.as_unnormalized()),
                    1e-9));
  }
}

TEST_CASE("parity counterexample for the radius-1 pseudo-spherical score") {
  const auto space = SampleSpace::hypercube(2);
  const std::vector<std::vector<int>> pts{{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};
  const std::vector<double> pv{0.1, 0.1, 0.4, 0.4};
  const std::vector<double> qv{0.2, 0.2, 0.3, 0.3};
  std::vector<double> p(4), q(4);
  for (std::size_t i = 0; i < 4; ++i) {
    p[space.from_signs(pts[i])] = pv[i];
    q[space.from_signs(pts[i])] = qv[i];
  }
  const auto P = Probability::from_weights(p).as_unnormalized();
  const auto Q = Probability::from_weights(q).as_unnormalized();
  for (double gamma : {0.5, 1.0, 3.0}) {
    LocalPotentialFamily r1(PotentialKind::pseudo_spherical(gamma), hamming(2, 1));
    CHECK(std::abs(divergence(r1, P, Q)) <= 1e-12);
  }
  // Frozen from an independent 40-digit evaluation.
  LocalPotentialFamily r2(PotentialKind::pseudo_spherical(1.0), hamming(2, 2));
  CHECK(divergence(r2, P, Q) == doctest::Approx(0.11268294156602299).epsilon(1e-12));
  LocalPotentialFamily r2_half(PotentialKind::pseudo_spherical(0.5), hamming(2, 2));
  CHECK(divergence(r2_half, P, Q) == doctest::Approx(0.077649250484726233).epsilon(1e-12));
  LocalPotentialFamily r2_three(PotentialKind::pseudo_spherical(3.0), hamming(2, 2));
  CHECK(divergence(r2_three, P, Q) == doctest::Approx(0.11852093750977288).epsilon(1e-12));
}

TEST_CASE("rank condition examples") {
  CHECK(rank_condition(BlockSystem::parse(3, "1;2"), 0));
  CHECK_FALSE(rank_condition(BlockSystem::parse(3, "1;2,3"), 0));
  CHECK(rank_condition(BlockSystem::parse(2, "1;2"), 0));
  CHECK(rank_condition(BlockSystem::parse(4, "1;2;1,2;3;4;3,4"), 0));
  // Six neighbors, four blocks: the rank cannot reach |b(y)|.
  CHECK_FALSE(rank_condition(BlockSystem::parse(4, "1;3;1,2;3,4"), 0));
  CHECK_FALSE(rank_condition(BlockSystem::parse(4, "1,2;2,3"), 0));
  for (const char* text : {"1;2", "1;2,3", "1,2;2,3", "1;3;1,2,3"}) {
    const BlockSystem sys = BlockSystem::parse(3, text);
    const bool at_zero = rank_condition(sys, 0);
    for (Index y = 1; y < 8; ++y) CHECK(rank_condition(sys, y) == at_zero);
  }
  CHECK(exact_rank({{1, 1, 0}, {0, 1, 1}, {1, 0, -1}}) == 2);
  CHECK(exact_rank({{1, 0}, {0, 1}}) == 2);
  LocalPotentialFamily good(PotentialKind::composite_likelihood(), blocks(3, "1;2"));
  LocalPotentialFamily bad(PotentialKind::composite_likelihood(), blocks(3, "1;2,3"));
  CHECK(good.locally_strictly_convex());
  CHECK_FALSE(bad.locally_strictly_convex());
}

TEST_CASE("standard composite likelihood") {
  RngStream rng(31, 0);
  HypercubeBlockNeighborhood singletons(BlockSystem::parse(3, "1;2;3"));
  LocalPotentialFamily pl(PotentialKind::pseudo_likelihood(), hamming(3, 1));
  LocalPotentialFamily mcl(PotentialKind::composite_likelihood(), blocks(3, "1;2;3"));
  LocalPotentialFamily mcl_mixed(PotentialKind::composite_likelihood(), blocks(3, "1,2;2,3;1"));
  HypercubeBlockNeighborhood mixed(BlockSystem::parse(3, "1,2;2,3;1"));
  for (int t = 0; t < 100; ++t) {
    const auto f = UnnormalizedVector::from_log(random_log_values(8, rng));
    for (Index y = 0; y < 8; ++y) {
      const double cl = cl_score(singletons, y, f.log_density());
      CHECK(std::abs(cl - named_closed_form_score(pl, y, f.log_density())) <= 1e-12);
      CHECK(std::abs(cl - named_closed_form_score(mcl, y, f.log_density())) <= 1e-10);
      CHECK(std::abs(cl_score(mixed, y, f.log_density()) - named_closed_form_score(mcl_mixed, y, f.log_density())) <=
            1e-10);
    }
  }
  CHECK(is_equivalence_function(mixed));
  CHECK_FALSE(is_equivalence_function(LabelBandNeighborhood(6, 2)));
}

TEST_CASE("score specification grammar") {
  CHECK(parse_score_spec("pl").family == ScoreSpec::Family::PseudoLikelihood);
  CHECK(parse_score_spec("rm").family == ScoreSpec::Family::RatioMatching);
  const auto dp = parse_score_spec("dp:0.5");
  CHECK(dp.family == ScoreSpec::Family::DensityPower);
  CHECK(dp.gamma == 0.5);
  CHECK(parse_score_spec("ps:3").gamma == 3.0);
  const auto cl = parse_score_spec("cl:1,2;3,4");
  CHECK(cl.family == ScoreSpec::Family::CompositeLikelihood);
  CHECK(*cl.blocks == "1,2;3,4");
  CHECK(parse_score_spec("mcl").family == ScoreSpec::Family::ModifiedCompositeLikelihood);
  CHECK(to_string(parse_score_spec("mcl:1;2")) == "mcl:1;2");
  CHECK(to_string(parse_score_spec("dp:0.25")) == "dp:0.25");
  for (const char* bad : {"", "xx", "dp", "dp:-1", "ps:abc", "pl:2", "cl:"}) {
    CHECK_THROWS_AS(parse_score_spec(bad), InputError);
  }
  const auto rule = LocalScore::from_spec(parse_score_spec("cl:1;2"), SampleSpace::hypercube(3), 1);
  CHECK(rule.standard_cl());
  CHECK(rule.name() == "cl");
  CHECK_THROWS_AS(LocalScore::from_spec(parse_score_spec("cl:1;2"), SampleSpace::label_range(5), 1), InputError);
  CHECK_THROWS_AS(LocalScore::from_spec(parse_score_spec("mcl"), SampleSpace::hypercube(3), 1), InputError);
  CHECK(LocalScore::from_spec(parse_score_spec("mcl"), SampleSpace::label_range(10), 1).name() == "mcl");
}

TEST_CASE("invalid potential parameters are rejected") {
  CHECK_THROWS_AS(PotentialKind::density_power(0.0), InputError);
  CHECK_THROWS_AS(PotentialKind::pseudo_spherical(-1.0), InputError);
  CustomAdditivePotential concave{"concave", [](double t) { return -t * t; }, [](double t) { return -2.0 * t; }, {}};
  CHECK_THROWS_AS(PotentialKind::custom_additive(concave), InputError);
  CHECK_THROWS_AS(LocalPotentialFamily(PotentialKind::composite_likelihood(), hamming(3, 1)), InputError);
}
