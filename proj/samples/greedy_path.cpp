// Solves a few weighted paths with the greedy solver, checks them against the exhaustive
// oracle and replays the witness move sequence.

#include <cstdio>

#include "acq/acq.hpp"

int main() {
  using namespace acq;
  for (const char* text : {"path:5|1,0,2,1,3", "path:8|1,1,1,1,1,1,1,1", "path:6|1,1,2,4,1,1", "path:3|2,1,2"}) {
    auto wg = WeightedGraph::parse(text);
    auto res = path::solve_path(wg.weights, true);
    auto exact = oracle::solve_exact(wg.graph, wg.weights);
    WeightSequence end = replay(wg.graph, wg.weights, *res.trace);
    std::printf("%-26s a_t = %zu (oracle %zu, max %zu), %zu moves -> %s\n", text, res.acquisition_number,
                exact.min_residual, exact.max_residual, res.trace->moves.size(), end.to_string().c_str());
  }

  experiments::RunOptions opts;
  opts.rng = RngConfig{2024};
  auto r = experiments::simulate_poisson(1'000'000, 8, opts);
  std::printf("Poisson(1) path, n = 10^6: E a_t / n ~ %.5f +- %.5f\n", r.mean_ratio, r.std_error);
}
