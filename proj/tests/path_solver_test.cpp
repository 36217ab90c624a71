#include <gtest/gtest.h>

#include <random>

#include "acq/oracle.hpp"
#include "acq/path_solver.hpp"

namespace acq::path {
namespace {

std::vector<Weight> random_weights(std::mt19937_64& gen, std::size_t n, Weight max_value) {
  std::vector<Weight> w(n);
  for (auto& x : w) x = gen() % (max_value + 1);
  return w;
}

// Quadratic reference greedy: extend while collapsible_to_one holds on the extended run.
std::size_t naive_greedy(const std::vector<Weight>& w) {
  std::size_t count = 0, s = 0;
  while (s < w.size()) {
    if (w[s] == 0) {
      ++s;
      continue;
    }
    std::size_t e = s;
    while (e + 1 < w.size() && w[e + 1] != 0 &&
           collapsible_to_one(std::span<const Weight>(w).subspan(s, e + 2 - s))) {
      ++e;
    }
    ++count;
    s = e + 1;
  }
  return count;
}

TEST(CollapsibleToOne, Examples) {
  EXPECT_TRUE(collapsible_to_one(std::vector<Weight>{1, 1, 2}));
  EXPECT_FALSE(collapsible_to_one(std::vector<Weight>{2, 1, 2}));
  EXPECT_TRUE(collapsible_to_one(std::vector<Weight>{1, 1, 2, 4, 8}));
  EXPECT_TRUE(collapsible_to_one(std::vector<Weight>{0, 5}));
  EXPECT_FALSE(collapsible_to_one(std::vector<Weight>{3, 0, 5}));
  EXPECT_THROW(collapsible_to_one(std::vector<Weight>{0, 0}), Error);
}

TEST(SolvePath, Examples) {
  EXPECT_EQ(solve_path(std::vector<Weight>(8, 1)).acquisition_number, 2u);
  EXPECT_EQ(solve_path(std::vector<Weight>{0, 0, 0}).acquisition_number, 0u);
  EXPECT_EQ(solve_path(std::vector<Weight>{2, 1, 2}).acquisition_number, 2u);
  EXPECT_EQ(solve_path(std::vector<Weight>{}).acquisition_number, 0u);
}

TEST(SolvePath, UnitWeightsGiveCeilQuarter) {
  for (std::size_t n = 1; n <= 60; ++n) {
    EXPECT_EQ(acquisition_number(std::vector<Weight>(n, 1)), (n + 3) / 4) << n;
  }
}

TEST(SolvePath, MatchesOracleOnAllSmallWeightings) {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto g = GraphFamily::path(n);
    std::vector<Weight> w(n, 0);
    std::size_t mismatches = 0;
    while (true) {
      auto exact = oracle::solve_exact(g, WeightSequence(w));
      if (exact.min_residual != acquisition_number(w)) ++mismatches;
      std::size_t pos = 0;
      while (pos < n && ++w[pos] == 4) w[pos++] = 0;
      if (pos == n) break;
    }
    EXPECT_EQ(mismatches, 0u) << "n=" << n;
  }
}

TEST(SolvePath, StreamingMatchesNaiveGreedy) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 3000; ++trial) {
    auto w = random_weights(gen, 1 + gen() % 40, 1 + gen() % 9);
    ASSERT_EQ(acquisition_number(w), naive_greedy(w));
  }
}

TEST(SolvePath, WitnessTraceReachesReportedSize) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto w = random_weights(gen, 1 + gen() % 30, 6);
    auto result = solve_path(w, true);
    ASSERT_TRUE(result.trace.has_value());
    auto g = GraphFamily::path(w.size());
    WeightSequence end = replay(g, WeightSequence(w), *result.trace);
    EXPECT_TRUE(is_terminal(g, end));
    EXPECT_EQ(residual_set(end).size(), result.acquisition_number);
    EXPECT_EQ(result.segments.size(), result.acquisition_number);
  }
}

TEST(SolvePath, AcceptedPrefixesStayCollapsible) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 500; ++trial) {
    auto w = random_weights(gen, 2 + gen() % 25, 5);
    for (const Segment& seg : solve_path(w).segments) {
      for (std::size_t len = 1; len <= seg.length; ++len) {
        EXPECT_TRUE(collapsible_to_one(std::span<const Weight>(w).subspan(seg.start, len)));
      }
    }
  }
}

TEST(Islands, Examples) {
  EXPECT_EQ(islands(std::vector<Weight>{2, 0, 1, 1, 0, 0, 3}).sizes(), (std::vector<std::size_t>{1, 2, 0, 1}));
  EXPECT_EQ(islands(std::vector<Weight>{1, 1, 1}).sizes(), (std::vector<std::size_t>{3}));
  auto d = islands(std::vector<Weight>{0, 5});
  EXPECT_EQ(d.sizes(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(d.island_count(), 2u);
}

TEST(Islands, AdditivityAndReconstruction) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 10000; ++trial) {
    auto w = random_weights(gen, 1 + gen() % 50, 3);
    auto d = islands(w);
    std::size_t zeros = static_cast<std::size_t>(std::count(w.begin(), w.end(), Weight{0}));
    ASSERT_EQ(d.island_count(), zeros + 1);
    std::size_t sum = 0, covered = 0;
    for (const auto& isl : d.islands) {
      auto part = std::span<const Weight>(w).subspan(isl.start, isl.length);
      EXPECT_EQ(std::count(part.begin(), part.end(), Weight{0}), 0);
      sum += acquisition_number(part);
      covered += isl.length;
    }
    EXPECT_EQ(covered + zeros, w.size());
    EXPECT_EQ(sum, acquisition_number(w));
  }
}

TEST(Perturbation, Examples) {
  long d = perturbation_delta(std::vector<Weight>{1, 1, 1, 1}, 0, 0);
  EXPECT_LE(std::abs(d), 1);
  EXPECT_EQ(perturbation_delta(std::vector<Weight>{2, 1, 2}, 1, 2), -1);
}

TEST(Perturbation, SingleVertexChangeMovesByAtMostOne) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 100000; ++trial) {
    auto w = random_weights(gen, 1 + gen() % 60, 4);
    std::size_t v = gen() % w.size();
    Weight value = gen() % 8;
    ASSERT_LE(std::abs(perturbation_delta(w, v, value)), 1);
  }
}

TEST(Subadditivity, PerRealization) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 20000; ++trial) {
    auto w = random_weights(gen, 2 + gen() % 40, 3);
    std::size_t cut = 1 + gen() % (w.size() - 1);
    std::span<const Weight> all(w);
    ASSERT_LE(acquisition_number(all), acquisition_number(all.first(cut)) + acquisition_number(all.subspan(cut)));
  }
}

}  // namespace
}  // namespace acq::path
