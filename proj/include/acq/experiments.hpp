#pragma once

// Seeded Monte Carlo estimates of E a_t(P_n)/n under the Poisson and chip-throwing models,
// and the property suites (concentration, subadditivity, Poissonization, tie probability).
//
// Replicate i always draws from RngConfig::substream(i); per-replicate results land in
// index-addressed slots and are reduced in index order, so every number reported here is
// a function of (seed, arguments) only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "acq/error.hpp"
#include "acq/parallel.hpp"
#include "acq/path_solver.hpp"
#include "acq/rng.hpp"

namespace acq::experiments {

enum class ModelKind {
  Poisson,             // i.i.d. Poisson(1) weights
  Multinomial,         // exactly `chips` chips thrown uniformly
  PoissonMultinomial,  // Poisson(n) chips thrown uniformly
  UniformChips,        // t chips thrown uniformly, tie statistics
};

struct Model {
  ModelKind kind = ModelKind::Poisson;
  std::uint64_t chips = 0;

  std::string to_string() const {
    switch (kind) {
      case ModelKind::Poisson: return "poisson";
      case ModelKind::Multinomial: return "multinomial:chips=" + std::to_string(chips);
      case ModelKind::PoissonMultinomial: return "poisson-multinomial";
      case ModelKind::UniformChips: return "uniform:t=" + std::to_string(chips);
    }
    return "unknown";
  }
  friend bool operator==(const Model&, const Model&) = default;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;

  Model model;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double mean_ratio = 0.0;  // sample mean of a_t / n
  double std_error = 0.0;   // sample standard deviation / sqrt(replicates)
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  std::map<std::string, std::string> flags;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct RunOptions {
  RngConfig rng;
  unsigned threads = 0;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void summarize(ExperimentReport& r, const std::vector<double>& ratios) {
  r.replicates = ratios.size();
  if (ratios.empty()) return;
  CompensatedSum sum;
  for (double x : ratios) sum.add(x);
  r.mean_ratio = sum.value() / static_cast<double>(ratios.size());
  auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  r.min_ratio = *lo;
  r.max_ratio = *hi;
  if (ratios.size() > 1) {
    CompensatedSum sq;
    for (double x : ratios) sq.add((x - r.mean_ratio) * (x - r.mean_ratio));
    double var = sq.value() / static_cast<double>(ratios.size() - 1);
    r.std_error = std::sqrt(var / static_cast<double>(ratios.size()));
  }
}

// Chip counts per vertex; throws chips one by one when that is cheap, else samples the
// multinomial through conditional binomials. Both have the same distribution.
inline std::vector<std::uint64_t> occupancy(Engine& eng, std::uint64_t chips, std::size_t n) {
  return chips <= 16 * static_cast<std::uint64_t>(n) ? throw_chips(eng, chips, n) : multinomial_uniform(eng, chips, n);
}

inline std::uint64_t poisson_total(Engine& eng, const Poisson1Sampler& poisson, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += poisson(eng);
  return total;
}

inline std::vector<Weight> poisson_weights(Engine& eng, const Poisson1Sampler& poisson, std::size_t n) {
  std::vector<Weight> w(n);
  for (auto& x : w) x = poisson(eng);
  return w;
}

}  // namespace detail

/// a_t of a fresh Poisson(1)-weighted path of length n, computed while drawing.
inline std::size_t poisson_path_acquisition(Engine& eng, const Poisson1Sampler& poisson, std::size_t n) {
  path::StreamingSolver solver;
  for (std::size_t i = 0; i < n; ++i) solver.push(poisson(eng));
  return solver.finish();
}

inline ExperimentReport simulate_poisson(std::size_t n, std::size_t replicates, const RunOptions& opts = {}) {
  if (n < 1 || replicates < 1) throw Error(ErrorCode::UnsupportedSize, "simulate_poisson needs n, replicates >= 1");
  detail::Stopwatch clock;
  const Poisson1Sampler poisson;
  std::vector<double> ratios(replicates);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    ratios[i] = static_cast<double>(poisson_path_acquisition(eng, poisson, n)) / static_cast<double>(n);
  });
  ExperimentReport r;
  r.model = {ModelKind::Poisson, 0};
  r.n = n;
  r.seed = opts.rng.seed;
  detail::summarize(r, ratios);
  r.seconds = clock.seconds();
  return r;
}

/// Exactly `chips` distinguishable chips thrown uniformly onto the n vertices.
inline ExperimentReport simulate_depoissonized(std::size_t n, std::uint64_t chips, std::size_t replicates,
                                               const RunOptions& opts = {}) {
  if (n < 1 || replicates < 1) throw Error(ErrorCode::UnsupportedSize, "simulate_depoissonized needs n, replicates >= 1");
  detail::Stopwatch clock;
  std::vector<double> ratios(replicates);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    auto w = detail::occupancy(eng, chips, n);
    ratios[i] = static_cast<double>(path::acquisition_number(w)) / static_cast<double>(n);
  });
  ExperimentReport r;
  r.model = {ModelKind::Multinomial, chips};
  r.n = n;
  r.seed = opts.rng.seed;
  r.flags["sampler"] = chips <= 16 * static_cast<std::uint64_t>(n) ? "throw" : "conditional-binomial";
  detail::summarize(r, ratios);
  r.seconds = clock.seconds();
  return r;
}

/// Poisson(n) chips (a sum of n Poisson(1) draws) thrown uniformly onto the n vertices;
/// distributed exactly like i.i.d. Poisson(1) weights.
inline ExperimentReport simulate_poisson_multinomial(std::size_t n, std::size_t replicates,
                                                     const RunOptions& opts = {}) {
  if (n < 1 || replicates < 1) throw Error(ErrorCode::UnsupportedSize, "needs n, replicates >= 1");
  detail::Stopwatch clock;
  const Poisson1Sampler poisson;
  std::vector<double> ratios(replicates);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    auto w = detail::occupancy(eng, detail::poisson_total(eng, poisson, n), n);
    ratios[i] = static_cast<double>(path::acquisition_number(w)) / static_cast<double>(n);
  });
  ExperimentReport r;
  r.model = {ModelKind::PoissonMultinomial, 0};
  r.n = n;
  r.seed = opts.rng.seed;
  detail::summarize(r, ratios);
  r.seconds = clock.seconds();
  return r;
}

struct PmfCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double sigma = 0.0;  // binomial standard error at the analytic value
  std::size_t replicates = 0;

  bool within(double sigmas) const { return std::abs(empirical - analytic) <= sigmas * sigma; }
};

/// P(w(0) = x, w(1) = y) when Poisson(n) chips are thrown uniformly on n vertices, against
/// the product form e^-2 / (x! y!).
inline PmfCheck joint_pmf_check(std::size_t n, std::uint64_t x, std::uint64_t y, std::size_t replicates,
                                const RunOptions& opts = {}) {
  if (n < 2) throw Error(ErrorCode::UnsupportedSize, "joint_pmf_check needs n >= 2");
  const Poisson1Sampler poisson;
  std::vector<char> hit(replicates, 0);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    auto w = throw_chips(eng, detail::poisson_total(eng, poisson, n), n);
    hit[i] = w[0] == x && w[1] == y;
  });
  PmfCheck out;
  out.replicates = replicates;
  out.empirical = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(replicates);
  out.analytic = std::exp(-2.0 - std::lgamma(static_cast<double>(x) + 1.0) - std::lgamma(static_cast<double>(y) + 1.0));
  out.sigma = std::sqrt(out.analytic * (1.0 - out.analytic) / static_cast<double>(replicates));
  return out;
}

struct ConcentrationResult {
  double estimated_mean = 0.0;  // pilot estimate of E a_t
  double threshold = 0.0;       // sqrt(2 n phi)
  std::size_t violations = 0;
  std::size_t replicates = 0;
  double violation_rate = 0.0;
  double bound = 0.0;  // min(1, 2 e^-phi)
  double slack = 0.0;  // 4 binomial standard errors at the bound
  bool passed = false;
};

/// Fraction of replicates with |a_t - E| > sqrt(2 n phi), E estimated by an independent
/// pilot run of `pilot_replicates` paths.
inline ConcentrationResult concentration_suite(std::size_t n, std::size_t replicates, double phi,
                                               const RunOptions& opts = {}, std::size_t pilot_replicates = 0) {
  if (!(phi > 0.0)) throw Error(ErrorCode::UnsupportedSize, "phi must be positive");
  if (pilot_replicates == 0) pilot_replicates = std::max<std::size_t>(1, replicates / 10);
  RunOptions pilot = opts;
  pilot.rng = opts.rng.derived(1);
  ConcentrationResult out;
  out.estimated_mean = simulate_poisson(n, pilot_replicates, pilot).mean_ratio * static_cast<double>(n);
  out.threshold = std::sqrt(2.0 * static_cast<double>(n) * phi);
  const Poisson1Sampler poisson;
  std::vector<char> off(replicates, 0);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    double a = static_cast<double>(poisson_path_acquisition(eng, poisson, n));
    off[i] = std::abs(a - out.estimated_mean) > out.threshold;
  });
  out.replicates = replicates;
  out.violations = static_cast<std::size_t>(std::count(off.begin(), off.end(), 1));
  out.violation_rate = static_cast<double>(out.violations) / static_cast<double>(replicates);
  out.bound = std::min(1.0, 2.0 * std::exp(-phi));
  out.slack = 4.0 * std::sqrt(out.bound * (1.0 - out.bound) / static_cast<double>(replicates));
  out.passed = out.violation_rate <= out.bound + out.slack;
  return out;
}

struct SubadditivityResult {
  std::size_t replicates = 0;
  std::size_t violations = 0;
  std::optional<std::vector<Weight>> counterexample;  // first violating weighting, verbatim
  bool passed() const noexcept { return violations == 0; }
};

/// a_t(w) <= a_t(w[0, n)) + a_t(w[n, n+m)) on random Poisson weightings of length n + m.
inline SubadditivityResult subadditivity_suite(std::size_t n, std::size_t m, std::size_t replicates,
                                               const RunOptions& opts = {}) {
  if (n < 1 || m < 1) throw Error(ErrorCode::UnsupportedSize, "subadditivity_suite needs n, m >= 1");
  const Poisson1Sampler poisson;
  std::vector<char> bad(replicates, 0);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    auto w = detail::poisson_weights(eng, poisson, n + m);
    std::span<const Weight> all(w);
    bad[i] = path::acquisition_number(all) > path::acquisition_number(all.first(n)) + path::acquisition_number(all.last(m));
  });
  SubadditivityResult out;
  out.replicates = replicates;
  for (std::size_t i = 0; i < replicates; ++i) {
    if (!bad[i]) continue;
    if (out.violations++ == 0) {
      Engine eng = opts.rng.substream(i);
      out.counterexample = detail::poisson_weights(eng, poisson, n + m);
    }
  }
  return out;
}

struct CollisionResult {
  std::size_t hits = 0;
  std::size_t replicates = 0;
  double probability = 0.0;
  bool multinomial_sampler = false;
};

/// Empirical probability that some two of n vertices receive the same number of chips when
/// t chips are thrown uniformly.
inline CollisionResult collision_probability(std::size_t n, std::uint64_t t, std::size_t replicates,
                                             const RunOptions& opts = {},
                                             double max_work = 2e10) {
  if (n < 1 || t < 1) throw Error(ErrorCode::UnsupportedSize, "collision_probability needs n, t >= 1");
  CollisionResult out;
  out.replicates = replicates;
  out.multinomial_sampler = t > 16 * static_cast<std::uint64_t>(n);
  double per_rep = out.multinomial_sampler ? static_cast<double>(n) : static_cast<double>(t);
  if (per_rep * static_cast<double>(replicates) > max_work) {
    throw Error(ErrorCode::BudgetExceeded, "collision_probability work exceeds budget");
  }
  std::vector<char> tie(replicates, 0);
  parallel_for(replicates, opts.threads, [&](std::size_t i) {
    Engine eng = opts.rng.substream(i);
    auto w = detail::occupancy(eng, t, n);
    std::sort(w.begin(), w.end());
    tie[i] = std::adjacent_find(w.begin(), w.end()) != w.end();
  });
  out.hits = static_cast<std::size_t>(std::count(tie.begin(), tie.end(), 1));
  out.probability = static_cast<double>(out.hits) / static_cast<double>(replicates);
  return out;
}

}  // namespace acq::experiments
