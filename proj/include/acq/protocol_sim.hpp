#pragma once

// Highest-weight-first acquisition protocol on graphs with distinct vertex weights.
//
// Each round the heaviest vertex that still has a positive neighbour takes the weight of all
// its neighbours at once. Afterwards every neighbour is empty, so the acquirer never moves
// again and no other vertex's weight has changed. The protocol is therefore a single sweep
// in decreasing order of initial weight: a vertex still holding weight when reached is a
// residual vertex and empties its neighbourhood.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "acq/core.hpp"
#include "acq/parallel.hpp"
#include "acq/rng.hpp"

namespace acq::protocol {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

struct ProtocolOutcome {
  std::size_t residual_size = 0;
  std::size_t rounds = 0;  // rounds in which something was absorbed
  MoveTrace trace;
};

inline void require_distinct_positive(const WeightSequence& w) {
  std::vector<Weight> sorted = w.vector();
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() == 0) {
    throw Error(ErrorCode::InvalidWeights, "protocol needs positive weights");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::DuplicateWeights, "protocol needs distinct weights: " + w.to_string());
  }
}

namespace detail {

inline ProtocolOutcome sweep(const std::vector<std::vector<Vertex>>& adj, const WeightSequence& w, bool with_trace) {
  const std::size_t n = w.size();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] > w[b]; });
  std::vector<char> holding(n, 1);
  ProtocolOutcome out;
  for (Vertex v : order) {
    if (!holding[v]) continue;
    ++out.residual_size;
    bool absorbed = false;
    for (Vertex u : adj[v]) {
      if (!holding[u]) continue;
      holding[u] = 0;
      absorbed = true;
      if (with_trace) out.trace.moves.push_back({u, v});
    }
    if (absorbed) ++out.rounds;
  }
  return out;
}

}  // namespace detail

inline ProtocolOutcome run_protocol(const GraphFamily& g, const WeightSequence& w, bool with_trace = true) {
  if (w.size() != g.vertex_count()) throw Error(ErrorCode::InvalidWeights, "weight count does not match graph");
  require_distinct_positive(w);
  return detail::sweep(g.adjacency(), w, with_trace);
}

/// Residual size on a path whose weights are the ranks 1..n (a permutation).
inline std::size_t run_protocol_path_ranks(std::span<const std::uint64_t> ranks) {
  const std::size_t n = ranks.size();
  std::vector<std::size_t> at(n + 1);
  for (std::size_t v = 0; v < n; ++v) at[ranks[v]] = v;
  std::vector<char> holding(n, 1);
  std::size_t residual = 0;
  for (std::size_t r = n; r >= 1; --r) {
    std::size_t v = at[r];
    if (!holding[v]) continue;
    ++residual;
    if (v > 0) holding[v - 1] = 0;
    if (v + 1 < n) holding[v + 1] = 0;
  }
  return residual;
}

/// E[A(P_n)] from E_0 = 0 and E_n = 1 + (2/n) sum_{i=0}^{n-2} E_i, for all lengths 0..n.
inline std::vector<Rational> expected_path_recurrence_table(std::size_t n) {
  std::vector<Rational> e(n + 1);
  Rational prefix = 0;  // sum_{i <= m-2} E_i while computing E_m
  for (std::size_t m = 1; m <= n; ++m) {
    if (m >= 2) prefix += e[m - 2];
    e[m] = 1 + Rational(2, static_cast<long long>(m)) * prefix;
  }
  return e;
}

inline Rational expected_path_recurrence(std::size_t n) { return expected_path_recurrence_table(n).back(); }

/// -1/2 sum_{i=0}^{n} (n+1-i) (-2)^i / i!  +  (n+1)/2, exactly.
inline Rational expected_path_closed_form_exact(std::size_t n) {
  Rational sum = 0;
  Rational term = 1;  // (-2)^i / i!
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) term *= Rational(-2, static_cast<long long>(i));
    sum += static_cast<long long>(n + 1 - i) * term;
  }
  return Rational(-1, 2) * sum + Rational(static_cast<long long>(n + 1), 2);
}

inline double expected_path_closed_form(std::size_t n) {
  CompensatedSum sum;
  double term = 1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) term *= -2.0 / static_cast<double>(i);
    sum.add(static_cast<double>(n + 1 - i) * term);
  }
  return -0.5 * sum.value() + 0.5 * static_cast<double>(n + 1);
}

/// lim E[A(P_n)]/n = (e^2 - 1) / (2 e^2).
inline double path_limit_ratio() {
  const double e2 = std::numbers::e * std::numbers::e;
  return (e2 - 1.0) / (2.0 * e2);
}

/// Expected residual size of one family: the published closed form next to the value derived
/// from the protocol's case analysis. For stars and wheels the published expression is
/// evaluated under both vertex-count readings (n = all vertices, and n = leaves / rim).
struct FamilyExpectation {
  double published = 0.0;
  std::optional<double> published_alt;
  Rational derived = 0;
  std::string note;

  double derived_value() const { return to_double(derived); }
  bool published_matches(double tol = 1e-12) const {
    double d = derived_value();
    return std::abs(published - d) <= tol || (published_alt && std::abs(*published_alt - d) <= tol);
  }
};

inline FamilyExpectation expected_family(const GraphFamily& g) {
  auto p = g.params();
  auto path_e = [](long long len) { return len <= 0 ? Rational(0) : expected_path_recurrence(static_cast<std::size_t>(len)); };
  auto ll = [](std::size_t x) { return static_cast<long long>(x); };
  FamilyExpectation out;
  switch (g.kind()) {
    case FamilyKind::Path:
      out.derived = expected_path_recurrence(p[0]);
      out.published = expected_path_closed_form(p[0]);
      return out;
    case FamilyKind::Cycle:
      // the maximum takes itself and both neighbours, leaving a path on n - 3 vertices
      out.derived = 1 + path_e(ll(p[0]) - 3);
      out.published = to_double(out.derived);
      return out;
    case FamilyKind::Star: {
      // center is the maximum with probability 1/N (residual 1); otherwise a leaf takes the
      // center and the other N - 2 leaves are stranded (residual N - 1)
      long long leaves = ll(p[0]), total = leaves + 1;
      if (leaves < 1) break;
      out.derived = Rational(1 + leaves * leaves, total);
      auto printed = [](double n) { return (n * n - 2.0 * n) / n; };
      out.published = printed(static_cast<double>(total));
      out.published_alt = printed(static_cast<double>(leaves));
      out.note = "published (n^2-2n)/n; case analysis gives (1+(N-1)^2)/N for N vertices";
      return out;
    }
    case FamilyKind::Wheel: {
      // center is the maximum with probability 1/(r+1); otherwise a rim vertex takes the
      // center and both rim neighbours, leaving a rim path on r - 3 vertices
      long long rim = ll(p[0]), total = rim + 1;
      out.derived = Rational(1, total) + Rational(rim, total) * (1 + path_e(rim - 3));
      auto printed = [&](long long n) {
        return 1.0 / static_cast<double>(n) +
               static_cast<double>(n - 1) / static_cast<double>(n) * (1.0 + to_double(path_e(n - 3)));
      };
      out.published = printed(total);
      out.published_alt = printed(rim);
      out.note = "published 1/n + (n-1)/n (1 + E[P_{n-3}]); case analysis gives 1/(r+1) + r/(r+1) (1 + E[P_{r-3}])";
      return out;
    }
    case FamilyKind::Complete:
      out.derived = 1;
      out.published = 1.0;
      return out;
    case FamilyKind::CompleteBipartite:
    case FamilyKind::Multipartite: {
      // the part holding the maximum survives whole
      long long sq = 0, total = 0;
      for (std::size_t s : p) {
        sq += ll(s) * ll(s);
        total += ll(s);
      }
      out.derived = Rational(sq, total);
      out.published = static_cast<double>(sq) / static_cast<double>(total);
      return out;
    }
    default: break;
  }
  throw Error(ErrorCode::UnsupportedSize, "no expectation formula for " + g.to_string());
}

struct ExhaustiveOptions {
  std::size_t max_vertices = 10;
  bool verify_replay = false;  // replay each trace through apply_move and recount
};

/// Mean residual size over all n! assignments of ranks 1..n to the vertices.
inline Rational exhaustive_permutation_expectation(const GraphFamily& g, const ExhaustiveOptions& opts = {}) {
  const std::size_t n = g.vertex_count();
  if (n > opts.max_vertices) {
    throw Error(ErrorCode::BudgetExceeded, g.to_string() + " has more than " + std::to_string(opts.max_vertices) +
                                               " vertices");
  }
  const auto adj = g.adjacency();
  std::vector<Weight> ranks(n);
  std::iota(ranks.begin(), ranks.end(), Weight{1});
  std::uint64_t total = 0, count = 0;
  do {
    WeightSequence w(ranks);
    ProtocolOutcome out = detail::sweep(adj, w, opts.verify_replay);
    if (opts.verify_replay) {
      WeightSequence end = replay(g, w, out.trace);
      if (!is_terminal(g, end) || residual_set(end).size() != out.residual_size) {
        throw Error(ErrorCode::InvalidWeights, "protocol trace replay disagrees on " + w.to_string());
      }
    }
    total += out.residual_size;
    ++count;
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return Rational(static_cast<long long>(total), static_cast<long long>(count));
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
};

/// Mean residual size over uniformly random rank assignments (ranks stand in for any
/// distinct weights since only their order matters).
inline MonteCarloEstimate simulate_protocol(const GraphFamily& g, std::size_t replicates, const RngConfig& rng,
                                            unsigned threads = 0) {
  std::vector<double> sizes(replicates);
  const bool is_path = g.kind() == FamilyKind::Path;
  const auto adj = is_path ? std::vector<std::vector<Vertex>>{} : g.adjacency();
  parallel_for(replicates, threads, [&](std::size_t i) {
    Engine eng = rng.substream(i);
    auto ranks = random_ranks(eng, g.vertex_count());
    sizes[i] = static_cast<double>(is_path ? run_protocol_path_ranks(ranks)
                                           : detail::sweep(adj, WeightSequence(std::move(ranks)), false).residual_size);
  });
  CompensatedSum sum;
  for (double s : sizes) sum.add(s);
  MonteCarloEstimate est;
  est.replicates = replicates;
  est.mean = replicates ? sum.value() / static_cast<double>(replicates) : 0.0;
  if (replicates > 1) {
    CompensatedSum sq;
    for (double s : sizes) sq.add((s - est.mean) * (s - est.mean));
    est.std_error = std::sqrt(sq.value() / static_cast<double>(replicates - 1) / static_cast<double>(replicates));
  }
  return est;
}

}  // namespace acq::protocol
