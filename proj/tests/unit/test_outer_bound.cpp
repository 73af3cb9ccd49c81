#include "doctest.h"

#include <bit>
#include <numbers>
#include <numeric>

#include "fixtures.hpp"
#include "ifc/achievability.hpp"
#include "ifc/construct.hpp"
#include "ifc/gaussian_info.hpp"
#include "ifc/oracle.hpp"
#include "ifc/outer_bound.hpp"

using namespace ifc;

namespace {


OptimizerConfig quick() {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_evals = 800;
  return cfg;
}

// Brute force: every nonempty bitmask, times the factorial of its size.
std::uint64_t brute_force_count(int k) {
  std::uint64_t total = 0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::uint64_t f = 1;
    for (int i = 2; i <= std::popcount(mask); ++i) f *= static_cast<std::uint64_t>(i);
    total += f;
  }
  return total;
}

}  // namespace

TEST_CASE("term counts") {
  CHECK(count_terms(1) == 1);
  CHECK(count_terms(2) == 4);
  CHECK(count_terms(3) == 15);
  CHECK(count_terms(5) == 325);
  // The closed form sum_k C(K,k) k! gives 64 at K = 4.
  CHECK(count_terms(4) == 64);
  for (int k = 1; k <= 12; ++k) CHECK(count_terms(k) == brute_force_count(k));
  for (int k = 1; k <= 6; ++k) CHECK(enumerate_terms(k).size() == count_terms(k));
  CHECK_THROWS_WITH_AS(enumerate_terms(9), doctest::Contains("TooLarge"), Error);
  CHECK_THROWS_WITH_AS(sum_rate_terms(11), doctest::Contains("TooLarge"), Error);
  CHECK(sum_rate_terms(4).size() == 24);
  CHECK_THROWS_AS(count_terms(0), Error);
}

TEST_CASE("term enumeration order") {
  const auto one = enumerate_terms(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == BoundTerm{{0}, {0}});

  const auto terms = enumerate_terms(3);
  CHECK(terms[0] == BoundTerm{{0}, {0}});
  CHECK(terms[2] == BoundTerm{{2}, {2}});
  CHECK(terms[3] == BoundTerm{{0, 1}, {0, 1}});
  CHECK(terms[4] == BoundTerm{{0, 1}, {1, 0}});
  CHECK(terms[5] == BoundTerm{{0, 2}, {0, 2}});
  CHECK(terms[9] == BoundTerm{{0, 1, 2}, {0, 1, 2}});
  CHECK(terms[14] == BoundTerm{{0, 1, 2}, {2, 1, 0}});
  for (const auto& t : terms) CHECK_NOTHROW(check_term(3, t));

  CHECK_THROWS_AS(check_term(3, {{0, 1}, {0, 2}}), Error);
  CHECK_THROWS_AS(check_term(3, {{1, 0}, {1, 0}}), Error);
  CHECK_THROWS_AS(check_term(2, {{0, 2}, {0, 2}}), Error);
}

TEST_CASE("KRA term values") {
  const ChannelMatrix diag = ChannelMatrix::validate(CMatrix::Identity(2, 2));
  CHECK(std::abs(kra_term_value(diag, NoiseCorrelation::identity(2), {{0, 1}, {0, 1}}) - 2.0) < 1e-14);

  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelMatrix h = fixtures::random_channel(rng, 3);
    const NoiseCorrelation s = fixtures::random_sigma(rng, 3);
    for (int k = 0; k < 3; ++k) {
      const double g = h.direct_gain(k);
      CHECK(std::abs(kra_term_value(h, s, {{k}, {k}}) - std::log2(1.0 + g * g)) < 1e-12);
    }
  }
}

TEST_CASE("KRA term matches the four-entropy identity evaluation") {
  CounterRng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    const ChannelMatrix h = fixtures::random_channel(rng, n);
    const NoiseCorrelation s = fixtures::random_sigma(rng, n);
    const BoundTerm t{{0, 1, 2}, {1, 2, 0}};
    const auto j = build_joint(h, s);
    double oracle = 0.0;
    IndexSet given;
    for (int k = 0; k < 3; ++k) {
      IndexSet inputs;
      for (int r = k; r < 3; ++r) inputs.push_back(x_index(t.perm[r]));
      oracle += mi_by_entropy_identity(j, {y_index(n, t.perm[k])}, inputs, given);
      given.push_back(x_index(t.perm[k]));
      given.push_back(y_index(n, t.perm[k]));
    }
    CHECK(std::abs(kra_term_value(h, s, t) - oracle) < 1e-9);
  }
}

TEST_CASE("KRA minimization brackets") {
  const ChannelMatrix diag = ChannelMatrix::validate(CMatrix::Identity(2, 2));
  const KraMinimum m = kra_term_min(diag, {{0, 1}, {0, 1}}, quick());
  CHECK(m.value <= 2.0 + 1e-12);
  CHECK(m.value >= tin_sum_rate(diag) - 1e-9);

  CounterRng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 3;
    const ChannelMatrix h = fixtures::random_channel(rng, n);
    BoundTerm t;
    for (int i = 0; i < n; ++i) t.subset.push_back(i);
    t.perm = t.subset;
    std::reverse(t.perm.begin(), t.perm.end());
    const KraMinimum best = kra_term_min(h, t, quick());
    CHECK(std::abs(kra_term_value(h, best.sigma, t) - best.value) < 1e-12);
    for (int r = 0; r < 10; ++r) CHECK(best.value <= kra_term_value(h, fixtures::random_sigma(rng, n), t) + 1e-12);
    CHECK(best.value <= kra_term_value(h, NoiseCorrelation::identity(n), t) + 1e-12);
  }
}

TEST_CASE("KRA minimum on a Z channel reaches the successive-decoding sum") {
  CounterRng rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    const NoiseCorrelation s = fixtures::random_sigma(rng, n);
    const ChannelMatrix h = build_z_channel(s, fixtures::log_uniform(rng, n, 0.25, 4.0));
    const BoundTerm t = sum_rate_terms(n).front();
    const double at_generator = kra_term_value(h, s, t);
    const auto r = succ_dec_rates(h);
    CHECK(std::abs(at_generator - std::accumulate(r.begin(), r.end(), 0.0)) < 1e-9);
    CHECK(kra_term_min(h, t, quick()).value <= at_generator + 1e-12);
  }
}

TEST_CASE("KRA minimum agrees with the two-user grid search") {
  CounterRng rng(47);
  for (int trial = 0; trial < 4; ++trial) {
    const ChannelMatrix h = fixtures::random_channel(rng, 2);
    const BoundTerm t{{0, 1}, {trial % 2, 1 - trial % 2}};
    const double grid = grid_min_sigma(h, t, 200).value;
    CHECK(std::abs(kra_term_min(h, t, OptimizerConfig{}).value - grid) < 1e-4);
  }
}

TEST_CASE("genie-aided summands") {
  const ChannelMatrix diag = ChannelMatrix::validate(CMatrix::Identity(2, 2));
  CHECK(std::abs(etw_term_value(diag, {{0, 1}, {1, 0}}, {0.0, 0.0}) - 2.0) < 1e-12);
  CHECK_THROWS_AS(etw_term_value(diag, {{0, 1}, {1, 0}}, {0.0}), Error);
  CHECK_THROWS_WITH_AS(etw_summand(diag, 0, 1, Complex(0.9999999, 0.0)), doctest::Contains("RhoTooLarge"), Error);

  // Symmetric channel at rho = 0: Var(Y1) = 2 + g^2, Cov(Y1, G2) = g,
  // Var(G2) = 1 + g^2, so each summand is log2(2 + g^2 - g^2 / (1 + g^2)).
  for (double g : {0.5, 1.0, 2.0}) {
    const ChannelMatrix h = fixtures::channel({{1.0, g}, {g, 1.0}});
    const double hand = 2.0 * std::log2(2.0 + g * g - g * g / (1.0 + g * g));
    CHECK(std::abs(etw_term_value(h, {{0, 1}, {1, 0}}, {0.0, 0.0}) - hand) < 1e-12);
  }

  CounterRng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = rng.uniform(0.1, 3.0);
    const ChannelMatrix h = fixtures::channel({{1.0, g}, {g, 1.0}});
    for (int k = 0; k < 2; ++k)
      CHECK(etw_summand(h, k, 1 - k, Complex(kRhoCap, 0.0)) >= etw_summand(h, k, 1 - k, 0.0));
  }
}

TEST_CASE("genie-aided minimization") {
  CounterRng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelMatrix h = fixtures::random_channel(rng, 2, /*real=*/true);
    const BoundTerm t{{0, 1}, {1, 0}};
    const EtwMinimum m = etw_term_min(h, t, quick());
    CHECK(m.value <= etw_term_value(h, t, {0.0, 0.0}));
    for (int k = 0; k < 2; ++k) {
      // Dense sweep over real rho in [-cap, cap].
      double sweep = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 4000; ++i) {
        const double r = kRhoCap * (2.0 * i / 4000.0 - 1.0);
        sweep = std::min(sweep, etw_summand(h, k, t.perm[k], r));
      }
      const double part = etw_summand(h, k, t.perm[k], m.rhos[k]);
      CHECK(part <= sweep + 1e-9);
      CHECK(part >= sweep - 1e-5);
      // Real channels: the optimal phase is 0 or pi.
      if (std::abs(m.rhos[k]) > 1e-4) CHECK(std::abs(std::sin(std::arg(m.rhos[k]))) < 1e-3);
    }
  }

  // Single user: the genie carries no signal and rho = 0 is optimal.
  const double g = 1.7;
  const ChannelMatrix single = fixtures::channel({{g}});
  const EtwSummandMinimum s = etw_summand_min(single, 0, 0, quick());
  CHECK(std::abs(s.value - std::log2(1.0 + g * g)) < 1e-9);
  CHECK(std::abs(s.rho) < 1e-6);
  for (int i = 0; i <= 200; ++i) CHECK(etw_summand(single, 0, 0, kRhoCap * i / 200.0) >= s.value - 1e-12);
}

TEST_CASE("region") {
  const double g = 1.3;
  const BoundReport one = region(fixtures::channel({{g}}), quick());
  REQUIRE(one.inequalities.size() == 2);
  for (const auto& ineq : one.inequalities) CHECK(std::abs(ineq.value - std::log2(1.0 + g * g)) < 1e-9);
  const BoundReport one_kra = region(fixtures::channel({{g}}), quick(), {Family::KRA});
  CHECK(one_kra.inequalities.size() == 1);

  const BoundReport diag = region(ChannelMatrix::validate(CMatrix::Identity(2, 2)), quick());
  CHECK(diag.inequalities.size() == 6);
  for (const auto& ineq : diag.inequalities)
    CHECK(std::abs(ineq.value - static_cast<double>(ineq.subset.size())) < 1e-9);
  CHECK(std::abs(diag.sum_rate_upper - 2.0) < 1e-9);
  CHECK(diag.consistent);

  CounterRng rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 2 + trial;
    const NoiseCorrelation s = fixtures::random_sigma(rng, n);
    const ChannelMatrix h = build_z_channel(s, fixtures::log_uniform(rng, n, 0.25, 4.0));
    const BoundReport r = region(h, quick(), {Family::KRA, Family::ETW}, n > 2);
    CHECK(std::abs(r.sum_rate_upper - tin_sum_rate(h)) < 1e-9);
    CHECK(r.consistent);
  }

  const ChannelMatrix h = fixtures::random_channel(rng, 3);
  const BoundReport r = region(h, quick());
  CHECK(r.inequalities.size() == 14);
  CHECK(r.sum_rate_upper >= tin_sum_rate(h) - 1e-9);
  for (const auto& ineq : r.inequalities) {
    if (ineq.family != Family::KRA || ineq.subset.size() != 3) continue;
    for (const auto& t : sum_rate_terms(3))
      for (int i = 0; i < 3; ++i) CHECK(ineq.value <= kra_term_value(h, fixtures::random_sigma(rng, 3), t) + 1e-12);
  }

  const BoundReport again = region(h, quick());
  for (std::size_t i = 0; i < r.inequalities.size(); ++i) CHECK(r.inequalities[i].value == again.inequalities[i].value);

  CHECK_THROWS_AS(region(h, quick(), {}), Error);
  CHECK_THROWS_AS(region(h, quick(), {Family::BC}), Error);
}

TEST_CASE("genie cancellation holds for every term") {
  CounterRng rng(67);
  const int n = 3;
  const ChannelMatrix h = fixtures::random_channel(rng, n);
  for (const auto& t : enumerate_terms(n)) {
    std::vector<GenieSpec> genies;
    for (std::size_t i = 0; i < t.subset.size(); ++i)
      genies.push_back({t.perm[i], std::polar(rng.uniform(0.0, 0.99), rng.uniform(0.0, 6.0)), t.subset[i]});
    const auto j = build_joint(h, NoiseCorrelation::identity(n), genies);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < t.subset.size(); ++i) {
      lhs += diff_entropy(j, {genie_index(n, static_cast<int>(i))});
      rhs += conditional_entropy(j, {y_index(n, t.subset[i])}, {x_index(t.subset[i])});
    }
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}
