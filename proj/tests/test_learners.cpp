#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mclearn/errors.hpp"
#include "mclearn/hypothesis.hpp"
#include "mclearn/learners.hpp"
#include "mclearn/rng.hpp"
#include "oracles.hpp"

using namespace mclearn;

namespace {

Hypothesis hyp(std::vector<Label> t) { return Hypothesis{std::move(t)}; }

HypothesisClass make(int d, int k, std::vector<std::vector<Label>> tables) {
  std::vector<Hypothesis> hs;
  for (auto& t : tables) hs.push_back(hyp(std::move(t)));
  return HypothesisClass(d, k, std::move(hs));
}

HypothesisClass random_class(Rng& rng, int max_d, int max_k, int max_n) {
  const int d = 1 + static_cast<int>(rng.below(max_d));
  const int k = 1 + static_cast<int>(rng.below(max_k));
  const int n = 1 + static_cast<int>(rng.below(max_n));
  std::vector<Hypothesis> hs;
  for (int i = 0; i < n; ++i) {
    std::vector<Label> t(d);
    for (int x = 0; x < d; ++x) t[x] = static_cast<Label>(rng.below(k));
    hs.push_back(hyp(std::move(t)));
  }
  return HypothesisClass(d, k, std::move(hs));
}

LabeledSample random_sample(Rng& rng, const HypothesisClass& h, int len) {
  LabeledSample s;
  for (int i = 0; i < len; ++i)
    s.push_back({static_cast<Instance>(rng.below(h.domain_size())),
                 static_cast<Label>(rng.below(h.label_count()))});
  return s;
}

LabeledSample realizable_sample(Rng& rng, const HypothesisClass& h, int len) {
  const Hypothesis& f = h[rng.below(h.size())];
  LabeledSample s;
  for (int i = 0; i < len; ++i) {
    const auto x = static_cast<Instance>(rng.below(h.domain_size()));
    s.push_back({x, f(x)});
  }
  return s;
}

GShatterWitness cantor_witness(int d) {
  GShatterWitness w;
  for (int x = 0; x < d; ++x) w.set.push_back(x);
  w.f.assign(static_cast<std::size_t>(d), cantor_star_label(d));
  return w;
}

}  // namespace

TEST_CASE("empirical error helpers") {
  auto h = build_full_class(2, 2);
  LabeledSample s{{0, 1}, {1, 0}, {0, 1}};
  CHECK(empirical_errors(hyp({1, 0}), s) == 0);
  CHECK(empirical_errors(hyp({0, 0}), s) == 2);
  CHECK(empirical_errors(hyp({0, 1}), s) == 3);
  CHECK(min_empirical_errors(h, s) == 0);
  CHECK(min_empirical_errors(make(2, 2, {{0, 1}}), s) == 3);

  CHECK_THROWS_AS(validate_sample(h, {{2, 0}}), argument_error);
  CHECK_THROWS_AS(validate_sample(h, {{-1, 0}}), argument_error);
  CHECK_THROWS_AS(validate_sample(h, {{0, 2}}), argument_error);
  CHECK_THROWS_AS(erm_generic(h, {{0, 5}}), argument_error);
}

TEST_CASE("generic minimizer picks the canonical first") {
  auto full22 = build_full_class(2, 2);
  auto r = erm_generic(full22, {{0, 1}});
  CHECK(r.hypothesis.table == std::vector<Label>{1, 0});
  CHECK_FALSE(r.fallback);

  // empty sample: first hypothesis, vacuously a minimizer
  CHECK(erm_generic(full22, {}).hypothesis.table == std::vector<Label>{0, 0});

  auto single = make(2, 3, {{1, 2}});
  CHECK(erm_generic(single, {{0, 0}, {1, 0}}).hypothesis.table == std::vector<Label>{1, 2});

  auto cantor2 = build_cantor_class(2);
  const Label star = cantor_star_label(2);
  auto consistent = erm_generic(cantor2, {{0, star}, {1, star}});
  CHECK(consistent.hypothesis.table == std::vector<Label>(2, star));
}

TEST_CASE("adversarial minimizer follows the witness pattern") {
  auto cantor3 = build_cantor_class(3);
  const Label star3 = cantor_star_label(3);
  auto w3 = cantor_witness(3);

  // instance 0 sampled with the star label: agree there, differ on {1, 2}
  auto r = erm_bad(cantor3, {{0, star3}}, w3);
  CHECK(r.hypothesis.table == std::vector<Label>{star3, 6, 6});
  CHECK_FALSE(r.fallback);

  // empty sample: differ from star everywhere — the full-subset hypothesis
  auto empty = erm_bad(cantor3, {}, w3);
  CHECK(empty.hypothesis.table == std::vector<Label>{7, 7, 7});
  CHECK_FALSE(empty.fallback);

  // all witness instances sampled consistently: must agree everywhere
  auto cantor2 = build_cantor_class(2);
  const Label star2 = cantor_star_label(2);
  auto w2 = cantor_witness(2);
  auto all = erm_bad(cantor2, {{0, star2}, {1, star2}}, w2);
  CHECK(all.hypothesis.table == std::vector<Label>(2, star2));
  CHECK_FALSE(all.fallback);
  CHECK(empirical_errors(all.hypothesis, {{0, star2}, {1, star2}}) ==
        min_empirical_errors(cantor2, {{0, star2}, {1, star2}}));

  // sample contradicting the witness function: generic fallback, flagged
  auto fb = erm_bad(cantor2, {{0, 1}}, w2);
  CHECK(fb.fallback);
  CHECK(fb.hypothesis.table == std::vector<Label>{1, star2});

  // invalid witnesses are rejected
  GShatterWitness bad = w2;
  bad.f[0] = 0;
  CHECK_THROWS_AS(erm_bad(cantor2, {}, bad), argument_error);
  GShatterWitness dup = w2;
  dup.set = {0, 0};
  CHECK_THROWS_AS(erm_bad(cantor2, {}, dup), argument_error);
}

TEST_CASE("observed-labels minimizer restricts its range") {
  auto cantor3 = build_cantor_class(3);
  const Label star = cantor_star_label(3);

  auto r = erm_good_observed_labels(cantor3, {{0, star}, {1, star}, {2, star}}, {star});
  CHECK(r.hypothesis.table == std::vector<Label>(3, star));
  CHECK_FALSE(r.fallback);

  // subset {1} has mask 2; the only consistent hypothesis maps 1 to it
  auto one = erm_good_observed_labels(cantor3, {{1, 2}}, {star});
  CHECK(one.hypothesis.table == std::vector<Label>{star, 2, star});
  CHECK_FALSE(one.fallback);

  auto full23 = build_full_class(2, 3);
  auto c = erm_good_observed_labels(full23, {{0, 2}}, {});
  CHECK(c.hypothesis.table == std::vector<Label>{2, 2});
  CHECK_FALSE(c.fallback);

  // no minimizer stays within the observed labels: flagged generic result
  auto stuck = make(2, 3, {{1, 2}});
  auto fb = erm_good_observed_labels(stuck, {{0, 1}}, {});
  CHECK(fb.fallback);
  CHECK(fb.hypothesis.table == std::vector<Label>{1, 2});

  CHECK_THROWS_AS(erm_good_observed_labels(full23, {}, {3}), argument_error);
}

TEST_CASE("symmetric minimizer relabels into the pool") {
  auto full15 = build_full_class(1, 5);
  auto r = erm_symmetric(full15, {{0, 4}}, {0});
  CHECK(r.hypothesis.table == std::vector<Label>{4});
  CHECK_FALSE(r.fallback);

  // no sample: the canonical consistent hypothesis relabeled into the pool
  auto consts = build_constants_class(2, 3);
  CHECK(erm_symmetric(consts, {}, {2}).hypothesis.table == std::vector<Label>{2, 2});
  CHECK(erm_symmetric(consts, {}, {0, 1, 2}).hypothesis.table == std::vector<Label>{0, 0});

  // a symmetrized two-value class keeps its range within labels(S) and Z
  auto sym = symmetrize(make(2, 3, {{0, 1}}));
  CHECK(sym.size() == 6);
  auto s = erm_symmetric(sym, {{0, 1}}, {0});
  CHECK_FALSE(s.fallback);
  CHECK(s.hypothesis.table == std::vector<Label>{1, 0});

  // unrealizable sample: flagged generic result
  auto fb = erm_symmetric(build_constants_class(1, 2), {{0, 0}, {0, 1}}, {0});
  CHECK(fb.fallback);
  CHECK(fb.hypothesis.table == std::vector<Label>{0});

  // pool too small for the needed distinct labels: flagged generic result
  auto tri = symmetrize(make(3, 3, {{0, 1, 2}}));
  auto small = erm_symmetric(tri, {{0, 0}}, {1});
  CHECK(small.fallback);
  CHECK(small.hypothesis.table == std::vector<Label>{0, 1, 2});

  CHECK_THROWS_AS(erm_symmetric(build_cantor_class(2), {}, {0}), argument_error);
  CHECK_THROWS_AS(erm_symmetric(consts, {}, {}), argument_error);
  CHECK_THROWS_AS(erm_symmetric(consts, {}, {3}), argument_error);
  CHECK_THROWS_AS(erm_symmetric(consts, {}, {0, 0}), argument_error);
}

TEST_CASE("policy dispatcher validates its parameters") {
  auto consts = build_constants_class(2, 3);
  ErmPolicy generic;
  CHECK(run_erm(generic, consts, {{0, 1}}).hypothesis.table == std::vector<Label>{1, 1});

  ErmPolicy bad;
  bad.kind = ErmKind::bad;
  CHECK_THROWS_AS(run_erm(bad, consts, {}), argument_error);

  ErmPolicy sym;
  sym.kind = ErmKind::symmetric_z;
  CHECK_THROWS_AS(run_erm(sym, consts, {}), argument_error);

  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  good.defaults = {0};
  CHECK(run_erm(good, consts, {}).hypothesis.table == std::vector<Label>{0, 0});
}

TEST_CASE("every policy returns an empirical minimizer") {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    auto h = random_class(rng, 3, 3, 8);
    auto s = random_sample(rng, h, static_cast<int>(rng.below(5)));
    const std::size_t target = min_empirical_errors(h, s);
    CAPTURE(to_hclass_text(h));

    CHECK(empirical_errors(erm_generic(h, s).hypothesis, s) == target);
    CHECK(empirical_errors(erm_good_observed_labels(h, s, {}).hypothesis, s) == target);

    auto g = graph_dim(h);
    if (g.dim >= 1) {
      auto r = erm_bad(h, s, g.witness);
      CHECK(empirical_errors(r.hypothesis, s) == target);
    }

    if (h.label_count() <= 3) {
      auto sym = symmetrize(h);
      auto ss = random_sample(rng, sym, static_cast<int>(rng.below(4)));
      std::vector<Label> z;
      for (Label y = 0; y < sym.label_count(); ++y) z.push_back(y);
      CHECK(empirical_errors(erm_symmetric(sym, ss, z).hypothesis, ss) ==
            min_empirical_errors(sym, ss));
    }
  }
}

TEST_CASE("observed-labels range property") {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    auto h = random_class(rng, 3, 4, 10);
    auto s = random_sample(rng, h, 1 + static_cast<int>(rng.below(4)));
    std::vector<Label> defaults;
    if (rng.below(2) == 0) defaults.push_back(static_cast<Label>(rng.below(h.label_count())));
    auto r = erm_good_observed_labels(h, s, defaults);
    if (r.fallback) continue;
    std::vector<bool> allowed(static_cast<std::size_t>(h.label_count()), false);
    for (const auto& [x, y] : s) {
      (void)x;
      allowed[static_cast<std::size_t>(y)] = true;
    }
    for (Label y : defaults) allowed[static_cast<std::size_t>(y)] = true;
    for (Label y : r.hypothesis.table) CHECK(allowed[static_cast<std::size_t>(y)]);
  }
}

TEST_CASE("symmetric minimizer range stays within sample labels plus pool") {
  Rng rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    auto h = symmetrize(random_class(rng, 3, 3, 4));
    auto s = realizable_sample(rng, h, static_cast<int>(rng.below(4)));
    std::vector<Label> z;
    for (Label y = 0; y < h.label_count(); ++y)
      if (rng.below(2) == 0) z.push_back(y);
    if (z.empty()) z.push_back(0);
    auto r = erm_symmetric(h, s, z);
    CHECK(empirical_errors(r.hypothesis, s) == 0);
    if (r.fallback) continue;
    std::vector<bool> allowed(static_cast<std::size_t>(h.label_count()), false);
    for (const auto& [x, y] : s) {
      (void)x;
      allowed[static_cast<std::size_t>(y)] = true;
    }
    for (Label y : z) allowed[static_cast<std::size_t>(y)] = true;
    for (Label y : r.hypothesis.table) CHECK(allowed[static_cast<std::size_t>(y)]);
  }
}

TEST_CASE("growth function on pinned instances") {
  ErmPolicy generic;
  auto single = make(2, 3, {{1, 2}});
  CHECK(growth_function(generic, single, 1, SampleMode::realizable) == 1);
  CHECK(growth_function(generic, single, 1, SampleMode::agnostic) == 1);
  CHECK(growth_function(generic, single, 2, SampleMode::agnostic) == 1);

  CHECK(growth_function(generic, build_full_class(1, 2), 1, SampleMode::agnostic) == 2);

  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  good.defaults = {cantor_star_label(2)};
  auto cantor2 = build_cantor_class(2);
  CHECK(growth_function(good, cantor2, 1, SampleMode::realizable) ==
        oracle::growth_function(oracle::RefErm::observed_labels, cantor2, 1, true,
                                good.defaults));
}

TEST_CASE("essential range on pinned instances") {
  ErmPolicy generic;
  CHECK(essential_range(generic, build_constants_class(2, 1), 1, SampleMode::realizable) == 1);
  CHECK(essential_range(generic, build_constants_class(2, 1), 1, SampleMode::agnostic) == 1);

  CHECK(essential_range(generic, build_full_class(1, 3), 1, SampleMode::agnostic) == 3);

  // observed-labels policy on the subset-pointer class: sample labels plus star
  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  good.defaults = {cantor_star_label(4)};
  auto cantor4 = build_cantor_class(4);
  for (int m = 1; m <= 2; ++m) {
    const int r = essential_range(good, cantor4, m, SampleMode::realizable);
    CHECK(r >= 1);
    CHECK(r <= 2 * m + 1);
  }
}

TEST_CASE("growth instrumentation matches the brute-force reference") {
  Rng rng(555);
  ErmPolicy generic;
  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  for (int trial = 0; trial < 25; ++trial) {
    auto h = random_class(rng, 3, 3, 6);
    CAPTURE(to_hclass_text(h));
    for (int m = 1; m <= 2; ++m) {
      for (bool realizable : {true, false}) {
        const auto mode = realizable ? SampleMode::realizable : SampleMode::agnostic;
        CHECK(growth_function(generic, h, m, mode) ==
              oracle::growth_function(oracle::RefErm::generic, h, m, realizable));
        CHECK(essential_range(generic, h, m, mode) ==
              oracle::essential_range(oracle::RefErm::generic, h, m, realizable));
        CHECK(growth_function(good, h, m, mode) ==
              oracle::growth_function(oracle::RefErm::observed_labels, h, m, realizable));
        CHECK(essential_range(good, h, m, mode) ==
              oracle::essential_range(oracle::RefErm::observed_labels, h, m, realizable));
      }
    }
  }
}

TEST_CASE("growth obeys the range-power bound") {
  Rng rng(808);
  ErmPolicy generic;
  ErmPolicy good;
  good.kind = ErmKind::good_observed_labels;
  for (int trial = 0; trial < 40; ++trial) {
    auto h = random_class(rng, 3, 3, 8);
    const int dn = natarajan_dim(h).dim;
    CAPTURE(to_hclass_text(h));
    for (int m = 1; m <= 2; ++m) {
      for (const ErmPolicy& policy : {generic, good}) {
        const double pi = growth_function(policy, h, m, SampleMode::realizable);
        const double r = essential_range(policy, h, m, SampleMode::realizable);
        CHECK(pi <= std::pow(2.0 * m, dn) * std::pow(r, 2.0 * dn) + 1e-9);
      }
    }
  }
}

TEST_CASE("sampled growth never exceeds the exhaustive value") {
  Rng rng(99);
  ErmPolicy generic;
  for (int trial = 0; trial < 20; ++trial) {
    auto h = random_class(rng, 3, 3, 6);
    const std::uint64_t seed = rng.next();
    for (int m = 1; m <= 2; ++m) {
      const int pi = growth_function(generic, h, m, SampleMode::agnostic);
      const int mc = growth_function_mc(generic, h, m, SampleMode::agnostic, 40, seed);
      CHECK(mc >= 1);
      CHECK(mc <= pi);
      CHECK(mc == growth_function_mc(generic, h, m, SampleMode::agnostic, 40, seed));

      const int er = essential_range(generic, h, m, SampleMode::realizable);
      const int ermc = essential_range_mc(generic, h, m, SampleMode::realizable, 40, seed);
      CHECK(ermc >= 1);
      CHECK(ermc <= er);
    }
  }
  CHECK_THROWS_AS(growth_function_mc(generic, build_full_class(1, 2), 0, SampleMode::agnostic,
                                     10, 0),
                  argument_error);
  CHECK_THROWS_AS(growth_function_mc(generic, build_full_class(1, 2), 1, SampleMode::agnostic,
                                     0, 0),
                  argument_error);
}

TEST_CASE("enumeration budget is enforced") {
  ErmPolicy generic;
  Budget tight;
  tight.max_enum_samples = 3;
  CHECK_THROWS_AS(growth_function(generic, build_full_class(2, 2), 2, SampleMode::agnostic,
                                  tight),
                  budget_error);
  CHECK_THROWS_AS(essential_range(generic, build_full_class(2, 2), 1, SampleMode::realizable,
                                  tight),
                  budget_error);
  CHECK_THROWS_AS(growth_function(generic, build_full_class(1, 2), 0, SampleMode::agnostic),
                  argument_error);
}

TEST_CASE("double sampling bound formulas") {
  auto r = double_sampling_bound(1200, 2.0, 0.1);
  CHECK(r.realizable_bound == doctest::Approx(12.0 * std::log(40.0) / 1200.0).epsilon(1e-12));
  CHECK(r.realizable_bound == doctest::Approx(0.03689).epsilon(1e-3));

  auto a = double_sampling_bound(3200, 1.0, 0.125);
  CHECK(a.agnostic_bound ==
        doctest::Approx(std::sqrt(32.0 * std::log(64.0) / 3200.0)).epsilon(1e-12));
  CHECK(a.agnostic_bound == doctest::Approx(0.2039).epsilon(1e-3));

  // quadrupling the sample size quarters the realizable bound exactly
  auto r4 = double_sampling_bound(4800, 2.0, 0.1);
  CHECK(r.realizable_bound == doctest::Approx(4.0 * r4.realizable_bound).epsilon(1e-12));

  CHECK_THROWS_AS(double_sampling_bound(0, 2.0, 0.1), argument_error);
  CHECK_THROWS_AS(double_sampling_bound(10, 0.5, 0.1), argument_error);
  CHECK_THROWS_AS(double_sampling_bound(10, 2.0, 0.0), argument_error);
  CHECK_THROWS_AS(double_sampling_bound(10, 2.0, 1.0), argument_error);
}

TEST_CASE("restricted range bound composes the growth bound in log space") {
  const double direct = 12.0 * std::log(2.0 * 200.0 * 201.0 * 201.0 / 0.1) / 100.0;
  CHECK(restricted_range_bound(1, 100, 201, 0.1, SampleMode::realizable) ==
        doctest::Approx(direct).epsilon(1e-9));

  CHECK(restricted_range_bound(0, 10, 5, 0.5, SampleMode::realizable) ==
        doctest::Approx(12.0 * std::log(4.0) / 10.0).epsilon(1e-12));

  // agrees with plugging pi into the plain bound when pi is representable
  const double pi = std::pow(2.0 * 3, 1) * std::pow(4.0, 2);
  CHECK(restricted_range_bound(1, 3, 4, 0.2, SampleMode::agnostic) ==
        doctest::Approx(double_sampling_bound(3, pi, 0.2).agnostic_bound).epsilon(1e-9));
  CHECK(restricted_range_bound(1, 3, 4, 0.2, SampleMode::realizable) ==
        doctest::Approx(double_sampling_bound(3, pi, 0.2).realizable_bound).epsilon(1e-9));

  // monotone in the range value; finite far beyond double overflow
  double prev = 0;
  for (int r = 1; r <= 1000; r *= 10) {
    const double b = restricted_range_bound(2, 50, r, 0.1, SampleMode::agnostic);
    CHECK(b >= prev);
    prev = b;
  }
  const double huge = restricted_range_bound(400, 1000, 1000000, 0.01, SampleMode::agnostic);
  CHECK(std::isfinite(huge));
  CHECK(huge > 0);

  CHECK_THROWS_AS(restricted_range_bound(-1, 10, 5, 0.5, SampleMode::realizable),
                  argument_error);
  CHECK_THROWS_AS(restricted_range_bound(1, 0, 5, 0.5, SampleMode::realizable), argument_error);
  CHECK_THROWS_AS(restricted_range_bound(1, 10, 0, 0.5, SampleMode::realizable),
                  argument_error);
  CHECK_THROWS_AS(restricted_range_bound(1, 10, 5, 1.5, SampleMode::realizable),
                  argument_error);
}
