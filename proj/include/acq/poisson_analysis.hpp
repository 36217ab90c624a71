#pragma once

// Expected acquisition number of Poisson(1)-weighted paths: truncated exact enumeration,
// the P(a_t(P_3) = 2) series and the island-decomposition bound coefficients.
//
// Zeros split a Poisson-weighted path into islands whose sizes are geometric, P(size = j)
// = (1 - 1/e)^j / e, and there are n/e + O(1) of them, so
//   E a_t(P_n) / n  ->  (1/e) * sum_j E_j (1 - 1/e)^j / e
// where E_j is the expectation on a j-vertex path whose weights are all positive, i.e.
// i.i.d. zero-truncated Poisson(1). The enumeration below bounds E_j.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "acq/error.hpp"
#include "acq/parallel.hpp"
#include "acq/path_solver.hpp"

namespace acq::poisson {

enum class WeightModel {
  PositiveConditioned,  // entries 1..k, zero-truncated Poisson(1): one island of size j
  Unconditioned,        // entries 0..k-1, plain Poisson(1): a whole path of length j
};

struct EnumerationBounds {
  std::size_t j = 0;
  std::size_t k = 0;
  WeightModel model = WeightModel::PositiveConditioned;
  double lower = 0.0;
  double upper = 0.0;        // uncovered mass charged at ceil(j/2), the largest possible a_t
  double upper_j_cap = 0.0;  // uncovered mass charged at j
  double covered_mass = 0.0;
  std::uint64_t configurations = 0;
};

struct EnumerationOptions {
  WeightModel model = WeightModel::PositiveConditioned;
  unsigned threads = 0;
  std::uint64_t max_configurations = 4'000'000'000ULL;
};

/// Per-vertex probabilities of the enumerated entries and the entry values themselves.
struct TruncatedPmf {
  std::vector<Weight> values;
  std::vector<double> probs;

  static TruncatedPmf make(std::size_t k, WeightModel model) {
    TruncatedPmf out;
    const double positive_mass = 1.0 - std::exp(-1.0);
    double pmf = std::exp(-1.0);  // Poisson(1) pmf at 0
    for (std::size_t i = 0; i <= k; ++i) {
      bool take = model == WeightModel::Unconditioned ? i < k : i >= 1;
      if (take) {
        out.values.push_back(i);
        out.probs.push_back(model == WeightModel::Unconditioned ? pmf : pmf / positive_mass);
      }
      pmf /= static_cast<double>(i + 1);
    }
    return out;
  }

  double mass() const {
    CompensatedSum s;
    for (double p : probs) s.add(p);
    return s.value();
  }
};

inline std::size_t max_path_acquisition(std::size_t j) { return (j + 1) / 2; }

/// Exact sum of a_t(w) P(w) over all k^j weight vectors, plus the mass left uncovered.
inline EnumerationBounds enumerate_bounds(std::size_t j, std::size_t k, const EnumerationOptions& opts = {}) {
  if (j < 1 || k < 1) throw Error(ErrorCode::BudgetExceeded, "enumerate_bounds needs j >= 1 and k >= 1");
  double configs = std::pow(static_cast<double>(k), static_cast<double>(j));
  if (configs > static_cast<double>(opts.max_configurations)) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(k) + "^" + std::to_string(j) + " configurations exceed " +
                                               std::to_string(opts.max_configurations));
  }
  const TruncatedPmf pmf = TruncatedPmf::make(k, opts.model);
  const std::size_t radix = pmf.values.size();
  const std::size_t fixed = std::min<std::size_t>(j, 2);  // leading digits that pick a block
  std::size_t blocks = 1;
  for (std::size_t i = 0; i < fixed; ++i) blocks *= radix;
  const std::size_t max_at = max_path_acquisition(j);

  // block b accumulates probability mass per a_t value; merged in block order
  std::vector<std::vector<CompensatedSum>> by_block(blocks, std::vector<CompensatedSum>(max_at + 1));
  parallel_for(blocks, opts.threads, [&](std::size_t block) {
    std::vector<std::size_t> digit(j, 0);
    for (std::size_t i = fixed, rest = block; i-- > 0; rest /= radix) digit[i] = rest % radix;
    std::vector<path::StreamingSolver> solver(j + 1);
    std::vector<double> prob(j + 1, 1.0);
    auto& acc = by_block[block];
    std::size_t from = 0;
    while (true) {
      for (std::size_t i = from; i < j; ++i) {
        solver[i + 1] = solver[i];
        solver[i + 1].push(pmf.values[digit[i]]);
        prob[i + 1] = prob[i] * pmf.probs[digit[i]];
      }
      acc[solver[j].count_so_far()].add(prob[j]);
      std::size_t pos = j;
      while (pos > fixed && ++digit[pos - 1] == radix) digit[--pos] = 0;
      if (pos == fixed) break;
      from = pos - 1;
    }
  });

  std::vector<CompensatedSum> mass_at(max_at + 1);
  for (const auto& block : by_block) {
    for (std::size_t a = 0; a <= max_at; ++a) mass_at[a].add(block[a]);
  }
  CompensatedSum lower;
  for (std::size_t a = 1; a <= max_at; ++a) lower.add(static_cast<double>(a) * mass_at[a].value());

  EnumerationBounds out;
  out.j = j;
  out.k = k;
  out.model = opts.model;
  out.configurations = static_cast<std::uint64_t>(configs);
  out.covered_mass = std::pow(pmf.mass(), static_cast<double>(j));
  out.lower = lower.value();
  const double uncovered = 1.0 - out.covered_mass;
  out.upper = out.lower + uncovered * static_cast<double>(max_at);
  out.upper_j_cap = out.lower + uncovered * static_cast<double>(j);
  return out;
}

/// Weight caps k(j) used by the published enumeration table for j = 3..21.
inline std::size_t default_weight_cap(std::size_t j) {
  if (j <= 8) return 8;
  if (j <= 11) return 7;
  if (j <= 14) return 6;
  if (j == 15) return 5;
  if (j <= 18) return 4;
  return 3;
}

/// Residual-set size 2 probability on P_3 with positive Poisson weights:
///   (e - 1)^-3 * sum_{k>=1} (1/k!) (sum_{i>k} 1/i!)^2,
/// truncated once the tail bound drops below `tolerance`.
inline double prob_p3_equals_2(double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::BudgetExceeded, "tolerance must be positive");
  const double scale = 1.0 / std::pow(std::numbers::e - 1.0, 3);
  // tail(k) = sum_{i>k} 1/i!, summed directly to avoid cancellation against e
  auto tail = [](int k) {
    double term = 1.0, sum = 0.0;
    for (int i = 1; i <= k + 1; ++i) term /= i;
    for (int i = k + 1; term > 1e-300 && i < k + 200; ++i) {
      sum += term;
      term /= (i + 1);
    }
    return sum;
  };
  CompensatedSum total;
  double inv_fact = 1.0;
  for (int k = 1; k < 170; ++k) {
    inv_fact /= k;
    double t = tail(k);
    total.add(inv_fact * t * t);
    // remaining terms: (1/m!) tail(m)^2 <= (1/m!) (2/(m+1)!)^2, decaying faster than 1/2 per step
    double next_inv = inv_fact / (k + 1);
    double next_tail_bound = 2.0 * next_inv / (k + 2);
    double remainder_bound = 2.0 * next_inv * next_tail_bound * next_tail_bound * scale;
    if (remainder_bound < tolerance) break;
  }
  return total.value() * scale;
}

/// E[a_t(P_3)] when all three weights are positive.
inline double expected_p3_positive(double tolerance) { return 1.0 + prob_p3_equals_2(tolerance); }

struct Coefficients {
  double lower = 0.0;
  double upper = 0.0;
};

/// Hand bounds on E a_t(P_n)/n: islands of size <= 3 exactly, monotone extension of E_3
/// for the lower bound, a_t(P_j) <= (j+1)/2 for the upper tail.
inline Coefficients theorem33_constants() {
  const double e = std::numbers::e;
  const double p = 1.0 / e, q = 1.0 - p;
  const double e3 = expected_p3_positive(1e-15);
  Coefficients c;
  c.lower = p * (q * p + q * q * p + e3 * q * q * q);
  const double small = p * (q * p + q * q * p + e3 * q * q * q * p);
  // sum_{j>=4} j q^(j-1) = (e-1)^3 (3+e) / e^2
  const double tail_j = std::pow(e - 1.0, 3) * (3.0 + e) / (e * e);
  const double tail_half_j = p * (q / (2.0 * e)) * tail_j;
  const double tail_half = std::pow(q, 4) / (2.0 * e);
  c.upper = small + tail_half_j + tail_half;
  return c;
}

enum class TailCap {
  HalfCeil,     // ceil(j/2)
  HalfPlusOne,  // (j+1)/2 as a real number
};

inline double tail_cap_value(TailCap cap, std::size_t j) {
  return cap == TailCap::HalfCeil ? static_cast<double>((j + 1) / 2) : (static_cast<double>(j) + 1.0) / 2.0;
}

/// Expectation bounds for positive-weight paths of each length j.
struct IslandTable {
  std::map<std::size_t, Coefficients> by_length;  // lower/upper of E_j

  void set(std::size_t j, double lower, double upper) { by_length[j] = {lower, upper}; }
  static IslandTable from(std::span<const EnumerationBounds> rows) {
    IslandTable t;
    for (const auto& r : rows) t.set(r.j, r.lower, r.upper);
    return t;
  }
};

/// Combines per-island bounds up to max_j with the geometric island-size law. Lengths 1 and
/// 2 default to their exact value 1. Beyond max_j the lower bound uses monotonicity of E_j
/// (the largest lower value seen so far) and the upper bound charges the cap.
inline Coefficients bounds_from_table(const IslandTable& table, std::size_t max_j, TailCap cap = TailCap::HalfCeil) {
  const double p = 1.0 / std::numbers::e, q = 1.0 - p;
  auto row = [&](std::size_t j) -> Coefficients {
    if (auto it = table.by_length.find(j); it != table.by_length.end()) return it->second;
    if (j <= 2) return {1.0, 1.0};
    throw Error(ErrorCode::InsufficientTableDepth, "no enumeration bounds for j=" + std::to_string(j));
  };
  CompensatedSum lower, upper;
  double best_lower = 0.0;
  double weight = 1.0;  // q^j
  for (std::size_t j = 1; j <= max_j; ++j) {
    weight *= q;
    Coefficients r = row(j);
    best_lower = std::max(best_lower, r.lower);
    lower.add(best_lower * weight * p);
    upper.add(r.upper * weight * p);
  }
  lower.add(best_lower * weight * q);  // sum_{j>max_j} q^j p = q^(max_j+1)
  for (std::size_t j = max_j + 1; weight > 1e-30; ++j) {
    weight *= q;
    upper.add(tail_cap_value(cap, j) * weight * p);
  }
  return {p * lower.value(), p * upper.value()};
}

}  // namespace acq::poisson
