#pragma once

// Weighted graph families and acquisition-move semantics.
//
// Vertex numbering (0-based everywhere):
//   path/cycle      0..n-1 in order
//   star/wheel      0 is the center, 1..leaves (1..rim) follow; rim vertices in cyclic order
//   complete        0..n-1
//   bipartite       side U first (0..n-1), then side V (n..n+m-1)
//   multipartite    parts laid out consecutively in the order given
//   grid            row-major, vertex (r, c) = r * cols + c

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acq/error.hpp"

namespace acq {

using Vertex = std::size_t;
using Weight = std::uint64_t;

enum class FamilyKind { Path, Cycle, Star, Wheel, Complete, CompleteBipartite, Multipartite, Grid };

constexpr std::string_view family_name(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::Path: return "path";
    case FamilyKind::Cycle: return "cycle";
    case FamilyKind::Star: return "star";
    case FamilyKind::Wheel: return "wheel";
    case FamilyKind::Complete: return "complete";
    case FamilyKind::CompleteBipartite: return "bipartite";
    case FamilyKind::Multipartite: return "multipartite";
    case FamilyKind::Grid: return "grid";
  }
  return "unknown";
}

inline std::optional<FamilyKind> parse_family_name(std::string_view name) noexcept {
  for (auto kind : {FamilyKind::Path, FamilyKind::Cycle, FamilyKind::Star, FamilyKind::Wheel,
                    FamilyKind::Complete, FamilyKind::CompleteBipartite, FamilyKind::Multipartite,
                    FamilyKind::Grid}) {
    if (family_name(kind) == name) return kind;
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<std::uint64_t> parse_uint_list(std::string_view text, std::string_view what) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::ParseError, "bad " + std::string(what) + " entry '" + std::string(item) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string join_uints(std::span<const std::uint64_t> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace detail

/// One of the supported graph families together with its size parameters.
class GraphFamily {
 public:
  static GraphFamily path(std::size_t n) { return make(FamilyKind::Path, {n}); }
  static GraphFamily cycle(std::size_t n) { return make(FamilyKind::Cycle, {n}); }
  static GraphFamily star(std::size_t leaves) { return make(FamilyKind::Star, {leaves}); }
  static GraphFamily wheel(std::size_t rim) { return make(FamilyKind::Wheel, {rim}); }
  static GraphFamily complete(std::size_t n) { return make(FamilyKind::Complete, {n}); }
  static GraphFamily bipartite(std::size_t n, std::size_t m) {
    return make(FamilyKind::CompleteBipartite, {n, m});
  }
  static GraphFamily multipartite(std::vector<std::size_t> parts) {
    return make(FamilyKind::Multipartite, std::move(parts));
  }
  static GraphFamily grid(std::size_t rows, std::size_t cols) { return make(FamilyKind::Grid, {rows, cols}); }

  /// Parses `family:p1,p2,...`, e.g. `path:5`, `bipartite:2,3`, `grid:3,3`.
  static GraphFamily parse(std::string_view text) {
    std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "expected family:params, got '" + std::string(text) + "'");
    }
    auto kind = parse_family_name(text.substr(0, colon));
    if (!kind) throw Error(ErrorCode::ParseError, "unknown family '" + std::string(text.substr(0, colon)) + "'");
    auto raw = detail::parse_uint_list(text.substr(colon + 1), "parameter");
    return make(*kind, std::vector<std::size_t>(raw.begin(), raw.end()));
  }

  FamilyKind kind() const noexcept { return kind_; }
  std::span<const std::size_t> params() const noexcept { return params_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }

  bool adjacent(Vertex u, Vertex v) const noexcept {
    if (u == v || u >= vertex_count_ || v >= vertex_count_) return false;
    switch (kind_) {
      case FamilyKind::Path: return (u > v ? u - v : v - u) == 1;
      case FamilyKind::Cycle: {
        std::size_t d = u > v ? u - v : v - u;
        return d == 1 || d == vertex_count_ - 1;
      }
      case FamilyKind::Star: return u == 0 || v == 0;
      case FamilyKind::Wheel: {
        if (u == 0 || v == 0) return true;
        std::size_t d = u > v ? u - v : v - u;
        return d == 1 || d == params_[0] - 1;
      }
      case FamilyKind::Complete: return true;
      case FamilyKind::CompleteBipartite: return (u < params_[0]) != (v < params_[0]);
      case FamilyKind::Multipartite: return part_of(u) != part_of(v);
      case FamilyKind::Grid: {
        std::size_t cols = params_[1];
        std::size_t ru = u / cols, cu = u % cols, rv = v / cols, cv = v % cols;
        if (ru == rv) return (cu > cv ? cu - cv : cv - cu) == 1;
        if (cu == cv) return (ru > rv ? ru - rv : rv - ru) == 1;
        return false;
      }
    }
    return false;
  }

  std::vector<Vertex> neighbors(Vertex v) const {
    std::vector<Vertex> out;
    switch (kind_) {
      case FamilyKind::Path:
        if (v > 0) out.push_back(v - 1);
        if (v + 1 < vertex_count_) out.push_back(v + 1);
        return out;
      case FamilyKind::Cycle:
        out.push_back((v + vertex_count_ - 1) % vertex_count_);
        out.push_back((v + 1) % vertex_count_);
        return out;
      case FamilyKind::Grid: {
        std::size_t rows = params_[0], cols = params_[1], r = v / cols, c = v % cols;
        if (r > 0) out.push_back(v - cols);
        if (c > 0) out.push_back(v - 1);
        if (c + 1 < cols) out.push_back(v + 1);
        if (r + 1 < rows) out.push_back(v + cols);
        return out;
      }
      default:
        for (Vertex u = 0; u < vertex_count_; ++u) {
          if (adjacent(v, u)) out.push_back(u);
        }
        return out;
    }
  }

  std::vector<std::vector<Vertex>> adjacency() const {
    std::vector<std::vector<Vertex>> adj(vertex_count_);
    for (Vertex v = 0; v < vertex_count_; ++v) adj[v] = neighbors(v);
    return adj;
  }

  std::string to_string() const {
    std::vector<std::uint64_t> p(params_.begin(), params_.end());
    return std::string(family_name(kind_)) + ":" + detail::join_uints(p);
  }

  friend bool operator==(const GraphFamily&, const GraphFamily&) = default;

 private:
  GraphFamily(FamilyKind kind, std::vector<std::size_t> params) : kind_(kind), params_(std::move(params)) {}

  static GraphFamily make(FamilyKind kind, std::vector<std::size_t> params) {
    auto fail = [&](const char* why) -> GraphFamily {
      throw Error(ErrorCode::InvalidGraph, std::string(family_name(kind)) + ": " + why);
    };
    auto all_positive = [&] { return std::all_of(params.begin(), params.end(), [](std::size_t p) { return p >= 1; }); };
    std::size_t expected = kind == FamilyKind::CompleteBipartite || kind == FamilyKind::Grid ? 2 : 1;
    if (kind == FamilyKind::Multipartite) {
      if (params.size() < 2) return fail("needs at least two parts");
    } else if (params.size() != expected) {
      return fail("wrong number of parameters");
    }
    if (!all_positive()) return fail("sizes must be positive");
    if (kind == FamilyKind::Cycle && params[0] < 3) return fail("cycle needs n >= 3");
    if (kind == FamilyKind::Wheel && params[0] < 3) return fail("wheel needs rim >= 3");

    GraphFamily g(kind, std::move(params));
    switch (kind) {
      case FamilyKind::Star:
      case FamilyKind::Wheel: g.vertex_count_ = g.params_[0] + 1; break;
      case FamilyKind::CompleteBipartite: g.vertex_count_ = g.params_[0] + g.params_[1]; break;
      case FamilyKind::Grid: g.vertex_count_ = g.params_[0] * g.params_[1]; break;
      case FamilyKind::Multipartite:
        g.vertex_count_ = std::accumulate(g.params_.begin(), g.params_.end(), std::size_t{0});
        break;
      default: g.vertex_count_ = g.params_[0]; break;
    }
    return g;
  }

  std::size_t part_of(Vertex v) const noexcept {
    std::size_t part = 0;
    while (v >= params_[part]) v -= params_[part++];
    return part;
  }

  FamilyKind kind_;
  std::vector<std::size_t> params_;
  std::size_t vertex_count_ = 0;
};

/// Non-negative chip counts, one per vertex.
class WeightSequence {
 public:
  WeightSequence() = default;
  explicit WeightSequence(std::vector<Weight> weights) : weights_(std::move(weights)) {}
  WeightSequence(std::initializer_list<Weight> weights) : weights_(weights) {}

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  Weight operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const Weight> values() const noexcept { return weights_; }
  const std::vector<Weight>& vector() const noexcept { return weights_; }
  auto begin() const noexcept { return weights_.begin(); }
  auto end() const noexcept { return weights_.end(); }

  Weight total_weight() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), Weight{0}); }

  WeightSequence with(std::size_t i, Weight value) const {
    WeightSequence copy = *this;
    copy.weights_.at(i) = value;
    return copy;
  }

  std::string to_string() const { return detail::join_uints(weights_); }

  friend bool operator==(const WeightSequence&, const WeightSequence&) = default;

 private:
  std::vector<Weight> weights_;
};

struct Move {
  Vertex from;
  Vertex to;
  friend bool operator==(const Move&, const Move&) = default;
};

struct MoveTrace {
  std::vector<Move> moves;
};

/// A graph family paired with a weighting of matching length.
struct WeightedGraph {
  GraphFamily graph;
  WeightSequence weights;

  WeightedGraph(GraphFamily g, WeightSequence w) : graph(std::move(g)), weights(std::move(w)) {
    if (weights.size() != graph.vertex_count()) {
      throw Error(ErrorCode::InvalidWeights, graph.to_string() + " has " + std::to_string(graph.vertex_count()) +
                                                 " vertices but " + std::to_string(weights.size()) + " weights given");
    }
  }

  /// Canonical text form `family:params|w0,w1,...`, e.g. `path:5|1,0,2,1,3`.
  static WeightedGraph parse(std::string_view text) {
    std::size_t bar = text.find('|');
    if (bar == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "expected family:params|weights, got '" + std::string(text) + "'");
    }
    auto g = GraphFamily::parse(text.substr(0, bar));
    auto w = detail::parse_uint_list(text.substr(bar + 1), "weight");
    return WeightedGraph(std::move(g), WeightSequence(std::move(w)));
  }

  std::string to_string() const { return graph.to_string() + "|" + weights.to_string(); }
};

/// Why `from -> to` would be rejected, or nullopt when the move is legal.
inline std::optional<ErrorCode> check_move(const GraphFamily& g, const WeightSequence& w, Vertex from, Vertex to) {
  if (from >= w.size() || to >= w.size()) return ErrorCode::VertexOutOfRange;
  if (!g.adjacent(from, to)) return ErrorCode::NonAdjacent;
  if (w[from] == 0) return ErrorCode::EmptyDonor;
  if (w[to] < w[from]) return ErrorCode::InsufficientReceiverWeight;
  return std::nullopt;
}

/// Moves the donor's entire current weight onto an adjacent receiver holding at least as much.
inline WeightSequence apply_move(const GraphFamily& g, const WeightSequence& w, Vertex from, Vertex to) {
  if (auto err = check_move(g, w, from, to)) {
    throw Error(*err, "move " + std::to_string(from) + "->" + std::to_string(to) + " on " + w.to_string());
  }
  std::vector<Weight> next = w.vector();
  next[to] += next[from];
  next[from] = 0;
  return WeightSequence(std::move(next));
}

inline WeightSequence replay(const GraphFamily& g, WeightSequence w, const MoveTrace& trace) {
  for (const Move& m : trace.moves) w = apply_move(g, w, m.from, m.to);
  return w;
}

inline std::vector<Vertex> residual_set(const WeightSequence& w) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < w.size(); ++v) {
    if (w[v] > 0) out.push_back(v);
  }
  return out;
}

inline std::vector<Vertex> residual_set(const GraphFamily&, const WeightSequence& w) { return residual_set(w); }

inline bool is_terminal(const GraphFamily& g, const WeightSequence& w) {
  for (Vertex v = 0; v < w.size(); ++v) {
    if (w[v] == 0) continue;
    for (Vertex u : g.neighbors(v)) {
      // Between two positive neighbours the lighter (or either, on a tie) can always move.
      if (w[u] > 0) return false;
    }
  }
  return true;
}

}  // namespace acq
