#pragma once

// Exhaustive search over acquisition-move sequences on small weighted graphs.
//
// Every reachable weight vector is visited once (memoized on the vector itself, folded
// under path reversal / cycle rotation) and the set of residual sizes reachable from it is
// stored as a bitmask. This is the ground truth the fast solvers are checked against.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acq/core.hpp"

namespace acq::oracle {

struct Budget {
  std::size_t max_vertices = 10;
  Weight max_total_weight = 24;
  std::size_t max_states = 20'000'000;
};

struct ReachabilityResult {
  std::size_t min_residual = 0;  // a_t
  std::size_t max_residual = 0;  // a_max
  std::vector<std::size_t> achievable_sizes;
  std::size_t states_explored = 0;
  bool complete = true;

  bool achievable(std::size_t size) const {
    return std::find(achievable_sizes.begin(), achievable_sizes.end(), size) != achievable_sizes.end();
  }
};

inline ReachabilityResult incomplete() {
  ReachabilityResult r;
  r.complete = false;
  return r;
}

/// Raised when the state budget runs out mid-search; carries what was found so far.
class StateSpaceBudgetExceeded : public Error {
 public:
  StateSpaceBudgetExceeded(const std::string& what, ReachabilityResult partial)
      : Error(ErrorCode::StateSpaceBudgetExceeded, what), partial_(std::move(partial)) {}
  const ReachabilityResult& partial() const noexcept { return partial_; }

 private:
  ReachabilityResult partial_;
};

namespace detail {

using SizeMask = std::uint64_t;
using StateKey = std::u16string;

inline ReachabilityResult from_mask(SizeMask mask, std::size_t states, bool complete) {
  ReachabilityResult r;
  r.states_explored = states;
  r.complete = complete;
  for (std::size_t s = 0; s < 64; ++s) {
    if (mask & (SizeMask{1} << s)) r.achievable_sizes.push_back(s);
  }
  if (!r.achievable_sizes.empty()) {
    r.min_residual = r.achievable_sizes.front();
    r.max_residual = r.achievable_sizes.back();
  }
  return r;
}

class Search {
 public:
  Search(const GraphFamily& g, const Budget& budget) : graph_(g), adj_(g.adjacency()), budget_(budget) {}

  SizeMask run(std::vector<Weight>& w) {
    StateKey key = canonical(w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_.max_states) {
      throw StateSpaceBudgetExceeded("more than " + std::to_string(budget_.max_states) + " states",
                                     from_mask(seen_, memo_.size(), false));
    }

    SizeMask mask = 0;
    bool any_move = false;
    for (Vertex v = 0; v < w.size(); ++v) {
      if (w[v] == 0) continue;
      for (Vertex u : adj_[v]) {
        if (w[u] < w[v]) continue;
        any_move = true;
        Weight moved = w[v];
        w[u] += moved;
        w[v] = 0;
        mask |= run(w);
        w[v] = moved;
        w[u] -= moved;
      }
    }
    if (!any_move) {
      auto positive = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Weight x) { return x > 0; }));
      mask = SizeMask{1} << positive;
      seen_ |= mask;
    }
    memo_.emplace(std::move(key), mask);
    return mask;
  }

  std::size_t states() const noexcept { return memo_.size(); }

 private:
  StateKey canonical(const std::vector<Weight>& w) const {
    StateKey key(w.begin(), w.end());
    if (graph_.kind() == FamilyKind::Path) {
      StateKey rev(key.rbegin(), key.rend());
      if (rev < key) key = std::move(rev);
    } else if (graph_.kind() == FamilyKind::Cycle) {
      StateKey best = key;
      StateKey rot = key;
      for (std::size_t r = 1; r < rot.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
      }
      key = std::move(best);
    }
    return key;
  }

  const GraphFamily& graph_;
  std::vector<std::vector<Vertex>> adj_;
  Budget budget_;
  std::unordered_map<StateKey, SizeMask> memo_;
  SizeMask seen_ = 0;
};

inline void check_budget(const GraphFamily& g, const WeightSequence& w, const Budget& budget) {
  if (w.size() != g.vertex_count()) {
    throw Error(ErrorCode::InvalidWeights, "weight count does not match " + g.to_string());
  }
  if (g.vertex_count() > budget.max_vertices || g.vertex_count() >= 64) {
    throw StateSpaceBudgetExceeded(g.to_string() + " exceeds the vertex ceiling", incomplete());
  }
  Weight total = w.total_weight();
  if (total > budget.max_total_weight || total > 0xffff) {
    throw StateSpaceBudgetExceeded("total weight " + std::to_string(total) + " exceeds the ceiling",
                                   incomplete());
  }
}

}  // namespace detail

inline ReachabilityResult solve_exact(const GraphFamily& g, const WeightSequence& w, const Budget& budget = {}) {
  detail::check_budget(g, w, budget);
  detail::Search search(g, budget);
  std::vector<Weight> state = w.vector();
  detail::SizeMask mask = search.run(state);
  return detail::from_mask(mask, search.states(), true);
}

namespace detail {

// Calls visit(weights) for every vector over `values` (length n) whose maximum is `top`;
// stops early when visit returns true. Returns whether any visit returned true.
inline bool for_each_with_max(std::size_t n, const std::vector<Weight>& values, Weight top,
                              const std::function<bool(const WeightSequence&)>& visit) {
  std::vector<std::size_t> digit(n, 0);
  std::vector<Weight> w(n);
  while (true) {
    Weight hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = values[digit[i]];
      hi = std::max(hi, w[i]);
    }
    if (hi == top && visit(WeightSequence(w))) return true;
    std::size_t pos = 0;
    while (pos < n && ++digit[pos] == values.size()) digit[pos++] = 0;
    if (pos == n) return false;
  }
}

inline std::vector<Weight> doubling_values(Weight m) {
  std::vector<Weight> out;
  for (Weight p = 1; p < m; p *= 2) out.push_back(p);
  out.push_back(m);
  return out;
}

inline std::vector<Weight> full_values(Weight m) {
  std::vector<Weight> out;
  for (Weight v = 1; v <= m; ++v) out.push_back(v);
  return out;
}

// Whether some weighting over `values` with maximum `top` has a_t = 1. Candidates over the
// total-weight ceiling are skipped; `skipped` reports whether that happened.
inline bool some_collapses(const GraphFamily& g, const std::vector<Weight>& values, Weight top,
                           const Budget& budget, bool& skipped) {
  return for_each_with_max(g.vertex_count(), values, top, [&](const WeightSequence& w) {
    if (w.total_weight() > budget.max_total_weight) {
      skipped = true;
      return false;
    }
    return solve_exact(g, w, budget).min_residual == 1;
  });
}

}  // namespace detail

/// Smallest m such that some weighting with all entries in [1, m] and maximum m has a_t = 1.
///
/// Candidates for each m use entries from {1, 2, 4, ..., m}. Once such an m is found, every
/// weighting with entries in [1, m-1] is checked to have a_t > 1, which certifies that m is
/// the minimum; if that check fails the search falls back to full ranges from m = 1.
inline Weight smv_search(const GraphFamily& g, Weight max_weight_cap, const Budget& budget = {}) {
  if (g.vertex_count() > budget.max_vertices) {
    throw StateSpaceBudgetExceeded(g.to_string() + " exceeds the vertex ceiling", incomplete());
  }
  auto budget_error = [&](Weight m) {
    return StateSpaceBudgetExceeded("smv search for " + g.to_string() + " hit the weight ceiling at m=" +
                                        std::to_string(m),
                                    incomplete());
  };

  auto certified_lower = [&](Weight m) {
    // no weighting with max < m collapses
    if (m == 1) return true;
    bool skipped = false;
    std::vector<Weight> values = detail::full_values(m - 1);
    for (Weight top = 1; top < m; ++top) {
      if (detail::some_collapses(g, values, top, budget, skipped)) return false;
    }
    if (skipped) throw budget_error(m - 1);
    return true;
  };

  for (Weight m = 1; m <= max_weight_cap; ++m) {
    bool skipped = false;
    if (detail::some_collapses(g, detail::doubling_values(m), m, budget, skipped)) {
      if (certified_lower(m)) return m;
      break;
    }
    if (skipped) throw budget_error(m);
  }
  for (Weight m = 1; m <= max_weight_cap; ++m) {
    bool skipped = false;
    if (detail::some_collapses(g, detail::full_values(m), m, budget, skipped)) return m;
    if (skipped) throw budget_error(m);
  }
  throw budget_error(max_weight_cap);
}

/// Closed-form smv value, or bracketing interval [lower, upper] for grids.
struct SmvBounds {
  Weight lower = 1;
  Weight upper = 1;
  bool exact() const noexcept { return lower == upper; }
  bool contains(Weight v) const noexcept { return lower <= v && v <= upper; }
};

namespace detail {
// 2^e clamped below at 1: every weighting has entries >= 1.
inline Weight pow2_at_least_one(long e) { return e <= 0 ? 1 : Weight{1} << e; }
inline long ceil_half(std::size_t n) { return static_cast<long>((n + 1) / 2); }
}  // namespace detail

inline SmvBounds smv_formula(const GraphFamily& g) {
  auto p = g.params();
  switch (g.kind()) {
    case FamilyKind::Complete:
    case FamilyKind::Star:
    case FamilyKind::Wheel:
    case FamilyKind::CompleteBipartite: return {1, 1};
    case FamilyKind::Path:
    case FamilyKind::Cycle: {
      Weight v = detail::pow2_at_least_one(detail::ceil_half(p[0]) - 2);
      return {v, v};
    }
    case FamilyKind::Grid: {
      std::size_t rows = p[0], cols = p[1];
      if (rows == 1 || cols == 1) return smv_formula(GraphFamily::path(rows * cols));
      Weight lo = detail::pow2_at_least_one(detail::ceil_half(rows - 1) + detail::ceil_half(cols - 1) - 4);
      Weight hi = detail::pow2_at_least_one(detail::ceil_half(rows) + detail::ceil_half(cols) - 4);
      return {lo, hi};
    }
    default: break;
  }
  throw Error(ErrorCode::UnsupportedFamily, "no smv formula for " + g.to_string());
}

namespace detail {

// Weights for a run of `len` vertices gathered onto offset `at`: chains 1,1,2,4,... grow
// toward it from both ends and the collecting vertex holds 2^max(left, right).
inline void fill_chain(std::vector<Weight>& w, const std::vector<Vertex>& order, std::size_t at) {
  const std::size_t left = at, right = order.size() - 1 - at;
  for (std::size_t d = 1; d <= left; ++d) {
    std::size_t from_end = left - d;  // 0 for the far end
    w[order[at - d]] = from_end == 0 ? 1 : Weight{1} << (from_end - 1);
  }
  for (std::size_t d = 1; d <= right; ++d) {
    std::size_t from_end = right - d;
    w[order[at + d]] = from_end == 0 ? 1 : Weight{1} << (from_end - 1);
  }
  w[order[at]] = Weight{1} << std::max(left, right);
}

inline std::vector<std::size_t> balanced_sizes(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> sizes(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++sizes[i];
  return sizes;  // nonincreasing
}

inline std::vector<Weight> cycle_construction(std::size_t n, std::size_t target, Vertex first) {
  // target collectors equally spaced; each gap's first half joins the collector before it
  std::vector<Weight> w(n + first, 0);
  auto gaps = balanced_sizes(n - target, target);
  std::vector<std::size_t> collector(target);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < target; ++t) {
    collector[t] = pos;
    pos += 1 + gaps[t];
  }
  for (std::size_t t = 0; t < target; ++t) {
    std::size_t before = gaps[(t + target - 1) % target] / 2;
    std::size_t after = (gaps[t] + 1) / 2;
    std::vector<Vertex> order;
    for (std::size_t d = before; d > 0; --d) order.push_back(first + (collector[t] + n - d) % n);
    order.push_back(first + collector[t]);
    for (std::size_t d = 1; d <= after; ++d) order.push_back(first + (collector[t] + d) % n);
    fill_chain(w, order, before);
  }
  return w;
}

}  // namespace detail

/// A weighting for which `target` is an achievable residual-set size.
inline WeightSequence residual_size_construction(const GraphFamily& g, std::size_t target) {
  auto p = g.params();
  auto out_of_range = [&](std::size_t max) {
    return Error(ErrorCode::TargetOutOfRange, "target " + std::to_string(target) + " not in [1, " +
                                                  std::to_string(max) + "] for " + g.to_string());
  };
  switch (g.kind()) {
    case FamilyKind::Path: {
      std::size_t n = p[0], max = (n + 1) / 2;
      if (target < 1 || target > max) throw out_of_range(max);
      std::vector<Weight> w(n, 0);
      std::size_t start = 0;
      // blocks in nonincreasing size, so a lone 1-vertex block can only come last
      for (std::size_t len : detail::balanced_sizes(n, target)) {
        std::vector<Vertex> order(len);
        for (std::size_t i = 0; i < len; ++i) order[i] = start + i;
        detail::fill_chain(w, order, (len - 1) / 2);
        start += len;
      }
      return WeightSequence(std::move(w));
    }
    case FamilyKind::Cycle: {
      std::size_t n = p[0], max = n / 2;
      if (target < 1 || target > max) throw out_of_range(max);
      return WeightSequence(detail::cycle_construction(n, target, 0));
    }
    case FamilyKind::Wheel: {
      std::size_t rim = p[0], max = rim / 2;
      if (target < 1 || target > max) throw out_of_range(max);
      auto w = detail::cycle_construction(rim, target, 1);
      w[0] = 1;  // the lightest vertex; it moves onto a rim collector first
      return WeightSequence(std::move(w));
    }
    case FamilyKind::Star:
    case FamilyKind::CompleteBipartite: {
      std::size_t n = g.kind() == FamilyKind::Star ? 1 : p[0];
      std::size_t m = g.kind() == FamilyKind::Star ? p[0] : p[1];
      std::size_t large = std::max(n, m);
      if (target < 1 || target > large) throw out_of_range(large);
      // the larger side holds `target` heavy survivors; everything else is weight 1, one
      // small-side vertex sweeps up the light large-side vertices and then everything
      // small-side moves onto survivors
      std::vector<Weight> w(n + m, 1);
      Vertex large_first = n >= m ? 0 : n;
      Weight heavy = static_cast<Weight>(n + m + 1);
      for (std::size_t i = 0; i < target; ++i) w[large_first + i] = heavy;
      return WeightSequence(std::move(w));
    }
    case FamilyKind::Complete: {
      if (target != 1) throw out_of_range(1);
      return WeightSequence(std::vector<Weight>(g.vertex_count(), 1));
    }
    default: break;
  }
  throw Error(ErrorCode::UnsupportedFamily, "no residual-size construction for " + g.to_string());
}

}  // namespace acq::oracle
