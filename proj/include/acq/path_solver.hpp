#pragma once

// Exact total acquisition number of a weighted path in linear time.
//
// A zero vertex can neither give nor receive, so zeros split the path into independent
// islands. Inside an island the greedy prefix rule is optimal: keep extending the current
// segment while it can still be gathered onto a single vertex, and start a new segment at
// the first vertex that breaks it. The answer is the number of segments.
//
// For a segment [s, e] the left-to-right chain from s stops at the last index k with
// w[i+1] >= w[s] + ... + w[i] for every i < k. Beyond k the segment is collapsible iff the
// right-to-left chain from e reaches k + 1, i.e. sum(w[j..e]) <= w[j-1] for j in [k+2, e].
// With T(e) = w[s] + ... + w[e] that reads T(e) <= min_j (w[j-1] + T(j-1)), a running
// minimum that only shrinks while T grows, so a failed extension never recovers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "acq/core.hpp"

namespace acq::path {

struct Segment {
  std::size_t start;
  std::size_t length;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Maximal zero-free runs, including empty runs before/between/after zeros.
struct IslandDecomposition {
  std::vector<Segment> islands;

  std::size_t island_count() const noexcept { return islands.size(); }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    out.reserve(islands.size());
    for (const auto& s : islands) out.push_back(s.length);
    return out;
  }
};

struct PathSolveResult {
  std::size_t acquisition_number = 0;
  std::vector<Segment> segments;  // nonempty, each gathered onto one vertex
  std::optional<MoveTrace> trace;
};

/// One forward pass over the weights with O(1) state; feed weights in order with push().
class StreamingSolver {
 public:
  explicit StreamingSolver(std::vector<Segment>* segments = nullptr) : segments_(segments) {}

  void push(Weight x) {
    const std::size_t e = index_++;
    if (x == 0) {
      close(e);
      return;
    }
    if (!open_) {
      open(e, x);
      return;
    }
    if (chaining_) {
      if (x >= chain_) {
        chain_ += x;
      } else {
        chaining_ = false;  // e == k + 1 always fits: the smaller end merges into v_k
        bound_ = kNoBound;
      }
      advance(x);
      return;
    }
    bound_ = std::min(bound_, prev_weight_ + total_);
    if (total_ + x <= bound_) {
      advance(x);
    } else {
      close(e);
      open(e, x);
    }
  }

  std::size_t finish() {
    close(index_);
    return count_;
  }

  std::size_t count_so_far() const noexcept { return count_ + (open_ ? 1 : 0); }

 private:
  static constexpr Weight kNoBound = std::numeric_limits<Weight>::max();

  void open(std::size_t e, Weight x) {
    open_ = true;
    chaining_ = true;
    start_ = e;
    chain_ = x;
    total_ = x;
    prev_weight_ = x;
  }

  void advance(Weight x) {
    total_ += x;
    prev_weight_ = x;
  }

  void close(std::size_t end) {
    if (!open_) return;
    open_ = false;
    ++count_;
    if (segments_) segments_->push_back({start_, end - start_});
  }

  std::vector<Segment>* segments_;
  std::size_t index_ = 0;
  std::size_t count_ = 0;
  bool open_ = false;
  bool chaining_ = false;
  std::size_t start_ = 0;
  Weight chain_ = 0;
  Weight total_ = 0;
  Weight prev_weight_ = 0;
  Weight bound_ = kNoBound;
};

inline std::size_t acquisition_number(std::span<const Weight> w) {
  StreamingSolver solver;
  for (Weight x : w) solver.push(x);
  return solver.finish();
}

/// Whether all weight of the path can be gathered onto one vertex, by the two independent
/// pushes from either end over the initial weighting (k >= l - 1).
inline bool collapsible_to_one(std::span<const Weight> w) {
  auto first = std::find_if(w.begin(), w.end(), [](Weight x) { return x > 0; });
  if (first == w.end()) throw Error(ErrorCode::ZeroTotalWeight, "collapsible_to_one needs positive total weight");
  auto last = std::find_if(w.rbegin(), w.rend(), [](Weight x) { return x > 0; }).base();
  std::span<const Weight> core(first, last);
  if (std::find(core.begin(), core.end(), Weight{0}) != core.end()) return false;

  const std::size_t n = core.size();
  std::size_t k = 0;
  for (Weight acc = core[0]; k + 1 < n && core[k + 1] >= acc; ++k) acc += core[k + 1];
  std::size_t l = n - 1;
  for (Weight acc = core[n - 1]; l > 0 && core[l - 1] >= acc; --l) acc += core[l - 1];
  return k + 1 >= l;
}

namespace detail {

// Moves gathering segment w[s, s + len) onto one vertex.
inline void gather_segment(std::span<const Weight> w, Segment seg, std::vector<Move>& moves) {
  const std::size_t s = seg.start, e = seg.start + seg.length - 1;
  Weight left = w[s];
  std::size_t k = s;
  while (k < e && w[k + 1] >= left) {
    moves.push_back({k, k + 1});
    left += w[++k];
  }
  if (k == e) return;
  Weight right = w[e];
  for (std::size_t j = e; j > k + 1; --j) {
    moves.push_back({j, j - 1});
    right += w[j - 1];
  }
  if (right <= left) {
    moves.push_back({k + 1, k});
  } else {
    moves.push_back({k, k + 1});
  }
}

}  // namespace detail

inline PathSolveResult solve_path(std::span<const Weight> w, bool with_trace = false) {
  PathSolveResult result;
  StreamingSolver solver(&result.segments);
  for (Weight x : w) solver.push(x);
  result.acquisition_number = solver.finish();
  if (with_trace) {
    MoveTrace trace;
    for (const Segment& seg : result.segments) detail::gather_segment(w, seg, trace.moves);
    result.trace = std::move(trace);
  }
  return result;
}

inline PathSolveResult solve_path(const WeightSequence& w, bool with_trace = false) {
  return solve_path(w.values(), with_trace);
}

inline IslandDecomposition islands(std::span<const Weight> w) {
  IslandDecomposition out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) {
      out.islands.push_back({start, i - start});
      start = i + 1;
    }
  }
  out.islands.push_back({start, w.size() - start});
  return out;
}

/// a_t after setting w[vertex] = new_weight, minus a_t before.
inline long perturbation_delta(std::span<const Weight> w, std::size_t vertex, Weight new_weight) {
  if (vertex >= w.size()) throw Error(ErrorCode::VertexOutOfRange, "perturbation vertex out of range");
  std::vector<Weight> changed(w.begin(), w.end());
  changed[vertex] = new_weight;
  return static_cast<long>(acquisition_number(changed)) - static_cast<long>(acquisition_number(w));
}

}  // namespace acq::path
