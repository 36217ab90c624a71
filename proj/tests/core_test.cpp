#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "acq/core.hpp"
#include "acq/rng.hpp"

namespace acq {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected acq::Error";
  return ErrorCode::ParseError;
}

TEST(ApplyMove, TransfersWholeCurrentWeight) {
  auto g = GraphFamily::path(3);
  EXPECT_EQ(apply_move(g, {1, 1, 2}, 0, 1), (WeightSequence{0, 2, 2}));
  EXPECT_EQ(apply_move(g, {0, 2, 2}, 1, 2), (WeightSequence{0, 0, 4}));
}

TEST(ApplyMove, RejectsIllegalMovesWithoutMutation) {
  auto g = GraphFamily::path(3);
  const WeightSequence w{2, 1, 2};
  EXPECT_EQ(code_of([&] { apply_move(g, w, 0, 1); }), ErrorCode::InsufficientReceiverWeight);
  EXPECT_EQ(code_of([&] { apply_move(g, w, 0, 2); }), ErrorCode::NonAdjacent);
  EXPECT_EQ(code_of([&] { apply_move(g, {0, 1, 2}, 0, 1); }), ErrorCode::EmptyDonor);
  EXPECT_EQ(w, (WeightSequence{2, 1, 2}));
}

TEST(ResidualSet, PositiveVertices) {
  EXPECT_EQ(residual_set(WeightSequence{0, 0, 4}), (std::vector<Vertex>{2}));
  EXPECT_TRUE(residual_set(WeightSequence{0, 0, 0, 0}).empty());
  EXPECT_EQ(residual_set(WeightSequence{2, 0, 2}), (std::vector<Vertex>{0, 2}));
}

TEST(IsTerminal, Examples) {
  auto p3 = GraphFamily::path(3);
  EXPECT_FALSE(is_terminal(p3, {2, 1, 2}));
  EXPECT_TRUE(is_terminal(p3, {2, 0, 2}));
  EXPECT_FALSE(is_terminal(GraphFamily::path(2), {1, 1}));
}

TEST(GraphFamily, VertexCountsAndAdjacency) {
  EXPECT_EQ(GraphFamily::star(4).vertex_count(), 5u);
  EXPECT_EQ(GraphFamily::wheel(5).vertex_count(), 6u);
  EXPECT_EQ(GraphFamily::bipartite(2, 3).vertex_count(), 5u);
  EXPECT_EQ(GraphFamily::multipartite({2, 2, 2}).vertex_count(), 6u);
  EXPECT_EQ(GraphFamily::grid(2, 3).vertex_count(), 6u);

  auto c5 = GraphFamily::cycle(5);
  EXPECT_TRUE(c5.adjacent(0, 4));
  EXPECT_FALSE(c5.adjacent(0, 2));
  auto w4 = GraphFamily::wheel(4);
  EXPECT_TRUE(w4.adjacent(0, 3));
  EXPECT_TRUE(w4.adjacent(1, 4));
  EXPECT_FALSE(w4.adjacent(1, 3));
  auto k23 = GraphFamily::bipartite(2, 3);
  EXPECT_TRUE(k23.adjacent(1, 2));
  EXPECT_FALSE(k23.adjacent(0, 1));
  EXPECT_FALSE(k23.adjacent(2, 4));
  auto mp = GraphFamily::multipartite({1, 2, 2});
  EXPECT_FALSE(mp.adjacent(1, 2));
  EXPECT_TRUE(mp.adjacent(2, 3));
  auto grid = GraphFamily::grid(2, 3);
  EXPECT_TRUE(grid.adjacent(1, 4));
  EXPECT_FALSE(grid.adjacent(2, 3));
}

TEST(GraphFamily, NeighborsAgreeWithAdjacent) {
  for (const auto& g : {GraphFamily::path(5), GraphFamily::cycle(6), GraphFamily::star(3), GraphFamily::wheel(5),
                        GraphFamily::complete(4), GraphFamily::bipartite(2, 3), GraphFamily::multipartite({1, 2, 3}),
                        GraphFamily::grid(3, 4)}) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      auto nb = g.neighbors(v);
      for (Vertex u = 0; u < g.vertex_count(); ++u) {
        bool listed = std::find(nb.begin(), nb.end(), u) != nb.end();
        EXPECT_EQ(listed, g.adjacent(v, u)) << g.to_string() << " " << v << "," << u;
        EXPECT_EQ(g.adjacent(v, u), g.adjacent(u, v));
      }
    }
  }
}

TEST(GraphFamily, RejectsInvalidSizes) {
  EXPECT_EQ(code_of([] { GraphFamily::cycle(2); }), ErrorCode::InvalidGraph);
  EXPECT_EQ(code_of([] { GraphFamily::wheel(2); }), ErrorCode::InvalidGraph);
  EXPECT_EQ(code_of([] { GraphFamily::path(0); }), ErrorCode::InvalidGraph);
  EXPECT_EQ(code_of([] { GraphFamily::multipartite({3}); }), ErrorCode::InvalidGraph);
}

TEST(CanonicalText, ParseAndFormat) {
  auto wg = WeightedGraph::parse("path:5|1,0,2,1,3");
  EXPECT_EQ(wg.graph, GraphFamily::path(5));
  EXPECT_EQ(wg.weights, (WeightSequence{1, 0, 2, 1, 3}));
  EXPECT_EQ(wg.to_string(), "path:5|1,0,2,1,3");
  EXPECT_EQ(WeightedGraph::parse("bipartite:2,3|1,2,3,4,5").graph, GraphFamily::bipartite(2, 3));
  EXPECT_EQ(code_of([] { WeightedGraph::parse("path:3|1,2"); }), ErrorCode::InvalidWeights);
  EXPECT_EQ(code_of([] { WeightedGraph::parse("path:3|1,x,2"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { WeightedGraph::parse("blob:3|1,1,2"); }), ErrorCode::ParseError);
}

TEST(MoveSemantics, RandomTracesConserveWeightAndEndIndependent) {
  std::mt19937_64 gen(42);
  for (const auto& g : {GraphFamily::path(7), GraphFamily::cycle(7), GraphFamily::wheel(6), GraphFamily::grid(3, 3),
                        GraphFamily::bipartite(3, 4)}) {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Weight> raw(g.vertex_count());
      for (auto& x : raw) x = gen() % 5;
      WeightSequence w(raw);
      const Weight total = w.total_weight();
      MoveTrace trace;
      WeightSequence cur = w;
      while (!is_terminal(g, cur)) {
        std::vector<Move> legal;
        for (Vertex v = 0; v < cur.size(); ++v) {
          for (Vertex u : g.neighbors(v)) {
            if (!check_move(g, cur, v, u)) legal.push_back({v, u});
          }
        }
        ASSERT_FALSE(legal.empty());
        Move m = legal[gen() % legal.size()];
        cur = apply_move(g, cur, m.from, m.to);
        trace.moves.push_back(m);
        EXPECT_EQ(cur.total_weight(), total);
      }
      EXPECT_EQ(replay(g, w, trace), cur);
      auto res = residual_set(cur);
      for (Vertex a : res) {
        for (Vertex b : res) EXPECT_FALSE(g.adjacent(a, b));
      }
    }
  }
}

TEST(Rng, SubstreamsDependOnlyOnSeedAndIndex) {
  RngConfig a{123}, b{123}, c{124};
  EXPECT_EQ(a.substream(7)(), b.substream(7)());
  EXPECT_NE(a.substream(7)(), a.substream(8)());
  EXPECT_NE(a.substream(7)(), c.substream(7)());
}

TEST(Rng, PoissonOneMoments) {
  Engine eng = RngConfig{9}.substream(0);
  Poisson1Sampler poisson;
  const int n = 400000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(poisson(eng));
    sum += x;
    sq += x * x;
  }
  double mean = sum / n, var = sq / n - mean * mean;
  // Var(X) = 1, Var(X^2) = E X^4 - (E X^2)^2 = 15 - 4 = 11 for Poisson(1)
  EXPECT_NEAR(mean, 1.0, 4.0 * std::sqrt(1.0 / n));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(11.0 / n) + 1e-3);
}

TEST(Rng, PermutationAndMultinomial) {
  Engine eng = RngConfig{5}.substream(3);
  auto ranks = random_ranks(eng, 50);
  std::vector<std::uint64_t> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i + 1);
  auto counts = multinomial_uniform(eng, 1'000'000, 7);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}), 1'000'000u);
  for (auto c : counts) EXPECT_NEAR(static_cast<double>(c), 1e6 / 7, 5 * std::sqrt(1e6 / 7));
}

}  // namespace
}  // namespace acq
