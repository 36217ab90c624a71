#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "acq/experiments.hpp"
#include "acq/poisson_analysis.hpp"

namespace acq::experiments {
namespace {

RunOptions seeded(std::uint64_t seed, unsigned threads = 0) {
  RunOptions o;
  o.rng = RngConfig{seed};
  o.threads = threads;
  return o;
}

TEST(SimulatePoisson, DeterministicAcrossThreadCounts) {
  auto a = simulate_poisson(5000, 64, seeded(99, 1));
  auto b = simulate_poisson(5000, 64, seeded(99, 4));
  EXPECT_EQ(a.mean_ratio, b.mean_ratio);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.min_ratio, b.min_ratio);
  EXPECT_NE(a.mean_ratio, simulate_poisson(5000, 64, seeded(100)).mean_ratio);
}

TEST(SimulatePoisson, ThreeVertexMeanMatchesEnumeration) {
  poisson::EnumerationOptions plain;
  plain.model = poisson::WeightModel::Unconditioned;
  const double exact = poisson::enumerate_bounds(3, 20, plain).lower;
  auto r = simulate_poisson(3, 1'000'000, seeded(5));
  EXPECT_NEAR(3.0 * r.mean_ratio, exact, 3.0 * 3.0 * r.std_error);
}

TEST(SimulatePoisson, ReportInvariants) {
  auto r = simulate_poisson(2000, 50, seeded(1));
  EXPECT_EQ(r.replicates, 50u);
  EXPECT_LE(r.min_ratio, r.mean_ratio);
  EXPECT_GE(r.max_ratio, r.mean_ratio);
  EXPECT_GE(r.min_ratio, 0.0);
  EXPECT_LE(r.max_ratio, 1.0);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_THROW(simulate_poisson(0, 1), Error);
}

TEST(Enumeration, ExpectationIncreasesWithLength) {
  poisson::EnumerationOptions plain;
  plain.model = poisson::WeightModel::Unconditioned;
  double prev = 0.0;
  for (std::size_t j = 1; j <= 9; ++j) {
    double lower = poisson::enumerate_bounds(j, 6, plain).lower;
    EXPECT_GT(lower, prev) << j;
    prev = lower;
  }
}

TEST(Depoissonized, ZeroChips) {
  auto r = simulate_depoissonized(100, 0, 10, seeded(3));
  EXPECT_EQ(r.mean_ratio, 0.0);
  EXPECT_EQ(r.max_ratio, 0.0);
}

TEST(Depoissonized, CloseToPoissonModel) {
  const std::size_t n = 4000, reps = 400;
  auto d = simulate_depoissonized(n, n, reps, seeded(8));
  auto p = simulate_poisson(n, reps, seeded(9));
  EXPECT_EQ(d.flags.at("sampler"), "throw");
  // fixed total removes one source of variance, so the difference is well inside 4 sigma
  EXPECT_NEAR(d.mean_ratio, p.mean_ratio, 4.0 * std::hypot(d.std_error, p.std_error) + 2e-3);
  auto big = simulate_depoissonized(50, 5000, 4, seeded(8));
  EXPECT_EQ(big.flags.at("sampler"), "conditional-binomial");
}

TEST(PoissonMultinomial, IndistinguishableFromPoisson) {
  const std::size_t n = 1000, reps = 2000;
  auto m = simulate_poisson_multinomial(n, reps, seeded(21));
  auto p = simulate_poisson(n, reps, seeded(22));
  EXPECT_NEAR(m.mean_ratio, p.mean_ratio, 4.0 * std::hypot(m.std_error, p.std_error));
  EXPECT_NEAR(m.std_error, p.std_error, 0.2 * p.std_error);
}

TEST(JointPmf, ProductForm) {
  const double e2 = std::exp(-2.0);
  for (std::uint64_t x = 0; x <= 2; ++x) {
    for (std::uint64_t y = 0; y <= 2; ++y) {
      auto c = joint_pmf_check(6, x, y, 200000, seeded(31 + 3 * x + y));
      double fact = (x == 2 ? 2.0 : 1.0) * (y == 2 ? 2.0 : 1.0);
      EXPECT_NEAR(c.analytic, e2 / fact, 1e-15);
      EXPECT_TRUE(c.within(4.0)) << x << "," << y << " empirical " << c.empirical;
    }
  }
  EXPECT_THROW(joint_pmf_check(1, 0, 0, 10), Error);
}

TEST(Concentration, BoundHolds) {
  auto r = concentration_suite(10000, 4000, 4.0, seeded(41));
  EXPECT_NEAR(r.bound, 2.0 * std::exp(-4.0), 1e-15);
  EXPECT_TRUE(r.passed) << r.violation_rate;
  EXPECT_NEAR(r.estimated_mean / 10000.0, 0.2955, 0.003);
  auto vacuous = concentration_suite(100, 50, 0.01, seeded(41));
  EXPECT_EQ(vacuous.bound, 1.0);
  EXPECT_TRUE(vacuous.passed);
}

TEST(Subadditivity, NoViolations) {
  auto r = subadditivity_suite(13, 29, 20000, seeded(51));
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(r.counterexample.has_value());
  std::vector<Weight> w{2, 1, 2};
  std::span<const Weight> all(w);
  EXPECT_EQ(path::acquisition_number(all), 2u);
  EXPECT_EQ(path::acquisition_number(all.first(2)) + path::acquisition_number(all.last(1)), 2u);
}

// P(two Binomial(t, 1/2) halves are equal) = C(t, t/2) / 2^t
double exact_two_vertex_tie(std::uint64_t t) {
  if (t % 2) return 0.0;
  double td = static_cast<double>(t);
  return std::exp(std::lgamma(td + 1) - 2 * std::lgamma(td / 2 + 1) - td * std::numbers::ln2);
}

// Exhaustive count over all n^t chip assignments.
double exact_tie_probability(std::size_t n, std::uint64_t t) {
  std::vector<std::size_t> chip(t, 0);
  std::uint64_t total = 0, ties = 0;
  while (true) {
    std::vector<std::uint64_t> count(n, 0);
    for (auto c : chip) ++count[c];
    std::sort(count.begin(), count.end());
    ties += std::adjacent_find(count.begin(), count.end()) != count.end();
    ++total;
    std::size_t pos = 0;
    while (pos < t && ++chip[pos] == n) chip[pos++] = 0;
    if (pos == t) break;
  }
  return static_cast<double>(ties) / static_cast<double>(total);
}

TEST(Collision, TwoVerticesMatchBinomial) {
  for (std::uint64_t t : {10ULL, 10000ULL}) {
    const std::size_t reps = 200000;
    auto r = collision_probability(2, t, reps, seeded(61));
    double p = exact_two_vertex_tie(t);
    EXPECT_NEAR(r.probability, p, 4.0 * std::sqrt(p * (1 - p) / reps)) << t;
    EXPECT_EQ(r.multinomial_sampler, t > 32);
  }
}

TEST(Collision, FourVerticesTenChipsExhaustive) {
  const double p = exact_tie_probability(4, 10);
  EXPECT_GT(p, 0.5);
  const std::size_t reps = 100000;
  auto r = collision_probability(4, 10, reps, seeded(62));
  EXPECT_NEAR(r.probability, p, 4.0 * std::sqrt(p * (1 - p) / reps));
}

TEST(Collision, DecreasesWithChipCount) {
  auto opts = seeded(63);
  double a = collision_probability(3, 100, 20000, opts).probability;
  double b = collision_probability(3, 10000, 20000, opts).probability;
  double c = collision_probability(3, 1000000, 20000, opts).probability;
  EXPECT_GT(a, b);
  EXPECT_GT(b, c);
  EXPECT_THROW(collision_probability(1000, 10000, 10000000, opts), Error);
}

}  // namespace
}  // namespace acq::experiments
