// acquire: command-line front end for the acquisition library.
//
// Exit status: 0 on success, 2 when a checked property fails, 1 on usage or input errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "acq/acq.hpp"

namespace {

using namespace acq;
using nlohmann::ordered_json;

constexpr int kPropertyViolation = 2;
constexpr int kUsageError = 1;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
};

experiments::RunOptions run_options(const Globals& g) {
  experiments::RunOptions o;
  o.rng = RngConfig{g.seed};
  o.threads = g.threads;
  return o;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + "\n";
}

std::string num(double x) { return experiments::format_double(x); }

ordered_json envelope(const std::string& command) {
  ordered_json j;
  j["schema_version"] = experiments::ExperimentReport::kSchemaVersion;
  j["command"] = command;
  j["git_describe"] = experiments::git_describe();
  return j;
}

void write_payload(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::UnsupportedFormat, "cannot open " + g.out + " for writing");
  f << text;
}

// JSON documents are emitted as-is; CSV takes a header line and rows.
void emit(const Globals& g, const ordered_json& j, const std::string& csv) {
  write_payload(g, experiments::parse_format(g.format) == experiments::Format::Json ? j.dump(2) + "\n" : csv);
}

void emit_report(const Globals& g, const experiments::ExperimentReport& r) {
  write_payload(g, experiments::emit_report(r, experiments::parse_format(g.format)));
}

// ---- module commands ----

int cmd_solve(const Globals& g, const std::string& text, bool with_trace) {
  auto wg = WeightedGraph::parse(text);
  if (wg.graph.kind() != FamilyKind::Path) {
    throw Error(ErrorCode::UnsupportedFamily, "solve handles paths; use `oracle` for " + wg.graph.to_string());
  }
  auto res = path::solve_path(wg.weights, true);
  WeightSequence end = replay(wg.graph, wg.weights, *res.trace);
  bool ok = is_terminal(wg.graph, end) && residual_set(end).size() == res.acquisition_number;

  auto j = envelope("solve");
  j["graph"] = wg.to_string();
  j["acquisition_number"] = res.acquisition_number;
  ordered_json segs = ordered_json::array();
  for (const auto& s : res.segments) segs.push_back({s.start, s.length});
  j["segments"] = segs;
  if (with_trace) {
    ordered_json moves = ordered_json::array();
    for (const auto& m : res.trace->moves) moves.push_back({m.from, m.to});
    j["trace"] = moves;
  }
  j["final_weights"] = end.to_string();
  j["trace_verified"] = ok;
  emit(g, j, csv_line({"graph", "acquisition_number", "segments", "trace_verified"}) +
                 csv_line({"\"" + wg.to_string() + "\"", std::to_string(res.acquisition_number),
                           std::to_string(res.segments.size()), ok ? "true" : "false"}));
  return ok ? 0 : kPropertyViolation;
}

int cmd_oracle(const Globals& g, const std::string& text, std::size_t max_vertices, Weight max_total) {
  auto wg = WeightedGraph::parse(text);
  oracle::Budget budget;
  budget.max_vertices = max_vertices;
  budget.max_total_weight = max_total;
  auto r = oracle::solve_exact(wg.graph, wg.weights, budget);
  auto j = envelope("oracle");
  j["graph"] = wg.to_string();
  j["min_residual"] = r.min_residual;
  j["max_residual"] = r.max_residual;
  j["achievable_sizes"] = r.achievable_sizes;
  j["states_explored"] = r.states_explored;
  bool agrees = true;
  if (wg.graph.kind() == FamilyKind::Path) {
    std::size_t greedy = path::acquisition_number(wg.weights.values());
    j["greedy_path_solver"] = greedy;
    agrees = greedy == r.min_residual;
  }
  std::string sizes;
  for (auto s : r.achievable_sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
  emit(g, j, csv_line({"graph", "min_residual", "max_residual", "achievable_sizes", "states_explored"}) +
                 csv_line({"\"" + wg.to_string() + "\"", std::to_string(r.min_residual), std::to_string(r.max_residual),
                           sizes, std::to_string(r.states_explored)}));
  return agrees ? 0 : kPropertyViolation;
}

int cmd_smv(const Globals& g, const std::string& family, Weight cap, std::size_t target) {
  auto graph = GraphFamily::parse(family);
  auto j = envelope("smv");
  j["family"] = graph.to_string();
  Weight found = oracle::smv_search(graph, cap);
  j["search"] = found;
  bool ok = true;
  std::string lo = "", hi = "";
  try {
    auto f = oracle::smv_formula(graph);
    j["formula"] = {{"lower", f.lower}, {"upper", f.upper}};
    lo = std::to_string(f.lower);
    hi = std::to_string(f.upper);
    ok = f.contains(found);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedFamily) throw;
    j["formula"] = nullptr;
  }
  j["consistent"] = ok;
  if (target > 0) {
    auto w = oracle::residual_size_construction(graph, target);
    j["construction"] = {{"target", target}, {"weights", w.to_string()}};
  }
  emit(g, j, csv_line({"family", "search", "formula_lower", "formula_upper"}) +
                 csv_line({"\"" + graph.to_string() + "\"", std::to_string(found), lo, hi}));
  return ok ? 0 : kPropertyViolation;
}

int cmd_table(const Globals& g, std::size_t j_from, std::size_t j_to, std::size_t k, bool unconditioned) {
  if (j_from < 1 || j_to < j_from) throw Error(ErrorCode::UnsupportedSize, "need 1 <= --from <= --to");
  poisson::EnumerationOptions opts;
  opts.threads = g.threads;
  opts.model = unconditioned ? poisson::WeightModel::Unconditioned : poisson::WeightModel::PositiveConditioned;
  auto j = envelope("table");
  j["model"] = unconditioned ? "unconditioned" : "positive-conditioned";
  ordered_json rows = ordered_json::array();
  std::vector<poisson::EnumerationBounds> all;
  std::string csv = csv_line({"j", "k", "lower", "upper", "upper_j_cap", "covered_mass", "configurations"});
  for (std::size_t jj = j_from; jj <= j_to; ++jj) {
    std::size_t kk = k ? k : poisson::default_weight_cap(jj);
    auto b = poisson::enumerate_bounds(jj, kk, opts);
    all.push_back(b);
    rows.push_back({{"j", b.j}, {"k", b.k}, {"lower", b.lower}, {"upper", b.upper}, {"upper_j_cap", b.upper_j_cap},
                    {"covered_mass", b.covered_mass}, {"configurations", b.configurations}});
    csv += csv_line({std::to_string(b.j), std::to_string(b.k), num(b.lower), num(b.upper), num(b.upper_j_cap),
                     num(b.covered_mass), std::to_string(b.configurations)});
  }
  j["rows"] = rows;
  if (!unconditioned) {
    try {
      auto c = poisson::bounds_from_table(poisson::IslandTable::from(all), j_to);
      j["coefficients"] = {{"lower", c.lower}, {"upper", c.upper}};
    } catch (const Error&) {
      j["coefficients"] = nullptr;  // rows do not start low enough
    }
  }
  auto hand = poisson::theorem33_constants();
  j["hand_bounds"] = {{"lower", hand.lower}, {"upper", hand.upper}};
  j["p3_equals_2"] = poisson::prob_p3_equals_2(1e-12);
  emit(g, j, csv);
  return 0;
}

int cmd_protocol(const Globals& g, const std::string& graph_text, const std::string& family, bool exhaustive,
                 std::size_t replicates) {
  auto j = envelope("protocol");
  int status = 0;
  std::string csv;
  if (!graph_text.empty()) {
    auto wg = WeightedGraph::parse(graph_text);
    auto out = protocol::run_protocol(wg.graph, wg.weights);
    WeightSequence end = replay(wg.graph, wg.weights, out.trace);
    bool ok = is_terminal(wg.graph, end) && residual_set(end).size() == out.residual_size;
    j["graph"] = wg.to_string();
    j["residual_size"] = out.residual_size;
    j["rounds"] = out.rounds;
    j["final_weights"] = end.to_string();
    j["trace_verified"] = ok;
    csv = csv_line({"graph", "residual_size", "rounds"}) +
          csv_line({"\"" + wg.to_string() + "\"", std::to_string(out.residual_size), std::to_string(out.rounds)});
    if (!ok) status = kPropertyViolation;
  } else {
    auto graph = GraphFamily::parse(family);
    j["family"] = graph.to_string();
    csv = csv_line({"family", "derived", "published", "exhaustive", "monte_carlo", "stderr"});
    std::string derived_s, published_s, exhaustive_s, mc_s, se_s;
    try {
      auto fam = protocol::expected_family(graph);
      j["derived"] = fam.derived.str();
      j["derived_value"] = fam.derived_value();
      j["published"] = fam.published;
      if (fam.published_alt) j["published_alt"] = *fam.published_alt;
      j["published_matches"] = fam.published_matches();
      if (!fam.note.empty()) j["note"] = fam.note;
      derived_s = num(fam.derived_value());
      published_s = num(fam.published);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedSize) throw;
    }
    if (exhaustive) {
      protocol::ExhaustiveOptions opts;
      opts.verify_replay = true;
      try {
        auto ex = protocol::exhaustive_permutation_expectation(graph, opts);
        j["exhaustive"] = ex.str();
        exhaustive_s = num(protocol::to_double(ex));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidWeights) throw;
        j["replay_error"] = e.what();
        status = kPropertyViolation;
      }
    }
    if (replicates > 0) {
      auto est = protocol::simulate_protocol(graph, replicates, RngConfig{g.seed}, g.threads);
      j["monte_carlo"] = {{"mean", est.mean}, {"stderr", est.std_error}, {"replicates", est.replicates},
                          {"seed", g.seed}};
      mc_s = num(est.mean);
      se_s = num(est.std_error);
    }
    csv += csv_line({"\"" + graph.to_string() + "\"", derived_s, published_s, exhaustive_s, mc_s, se_s});
  }
  emit(g, j, csv);
  return status;
}

// ---- experiment commands ----

int cmd_concentration(const Globals& g, std::size_t n, std::size_t reps, double phi, std::size_t pilot) {
  if (phi <= 0) phi = std::log(static_cast<double>(n));
  auto r = experiments::concentration_suite(n, reps, phi, run_options(g), pilot);
  auto j = envelope("concentration");
  j["n"] = n;
  j["replicates"] = r.replicates;
  j["phi"] = phi;
  j["seed"] = g.seed;
  j["estimated_mean"] = r.estimated_mean;
  j["threshold"] = r.threshold;
  j["violations"] = r.violations;
  j["violation_rate"] = r.violation_rate;
  j["bound"] = r.bound;
  j["slack"] = r.slack;
  j["passed"] = r.passed;
  emit(g, j, csv_line({"n", "replicates", "phi", "violations", "violation_rate", "bound", "slack", "seed"}) +
                 csv_line({std::to_string(n), std::to_string(reps), num(phi), std::to_string(r.violations),
                           num(r.violation_rate), num(r.bound), num(r.slack), std::to_string(g.seed)}));
  return r.passed ? 0 : kPropertyViolation;
}

int cmd_subadd(const Globals& g, std::size_t n, std::size_t m, std::size_t reps) {
  auto r = experiments::subadditivity_suite(n, m, reps, run_options(g));
  auto j = envelope("subadd");
  j["n"] = n;
  j["m"] = m;
  j["replicates"] = r.replicates;
  j["seed"] = g.seed;
  j["violations"] = r.violations;
  j["counterexample"] = r.counterexample ? ordered_json(WeightSequence(*r.counterexample).to_string()) : ordered_json();
  emit(g, j, csv_line({"n", "m", "replicates", "violations", "seed"}) +
                 csv_line({std::to_string(n), std::to_string(m), std::to_string(reps), std::to_string(r.violations),
                           std::to_string(g.seed)}));
  return r.passed() ? 0 : kPropertyViolation;
}

int cmd_collide(const Globals& g, std::size_t n, std::uint64_t t, std::size_t reps) {
  auto r = experiments::collision_probability(n, t, reps, run_options(g));
  auto j = envelope("collide");
  j["n"] = n;
  j["t"] = t;
  j["replicates"] = r.replicates;
  j["seed"] = g.seed;
  j["hits"] = r.hits;
  j["probability"] = r.probability;
  j["sampler"] = r.multinomial_sampler ? "conditional-binomial" : "throw";
  emit(g, j, csv_line({"n", "t", "replicates", "hits", "probability", "seed"}) +
                 csv_line({std::to_string(n), std::to_string(t), std::to_string(reps), std::to_string(r.hits),
                           num(r.probability), std::to_string(g.seed)}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acquisition number solvers, oracles and simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed for all random streams");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--out", g.out, "Write the payload to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  int status = 0;
  auto run = [&](auto&& f) { return [&, f] { status = f(); }; };

  std::string graph_text, family;
  bool with_trace = false, exhaustive = false, unconditioned = false;
  std::size_t n = 1000, m = 1000, replicates = 100, target = 0, j_from = 3, j_to = 6, k = 0, pilot = 0;
  std::size_t max_vertices = 10;
  Weight max_total = 24, cap = 64;
  std::uint64_t chips = 0, t = 1000;
  double phi = 0;

  auto* solve = app.add_subcommand("solve", "Greedy acquisition number of a weighted path");
  solve->add_option("graph", graph_text, "Weighted graph, e.g. path:5|1,0,2,1,3")->required();
  solve->add_flag("--trace", with_trace, "Include the witness move sequence");
  solve->callback(run([&] { return cmd_solve(g, graph_text, with_trace); }));

  auto* orc = app.add_subcommand("oracle", "Exhaustive reachable residual sizes on a small graph");
  orc->add_option("graph", graph_text, "Weighted graph, e.g. cycle:6|2,1,2,1,2,1")->required();
  orc->add_option("--max-vertices", max_vertices, "Vertex ceiling");
  orc->add_option("--max-total", max_total, "Total weight ceiling");
  orc->callback(run([&] { return cmd_oracle(g, graph_text, max_vertices, max_total); }));

  auto* smv = app.add_subcommand("smv", "Smallest maximum weight that always collapses to one vertex");
  smv->add_option("family", family, "Graph family, e.g. path:6")->required();
  smv->add_option("--cap", cap, "Largest maximum weight tried");
  smv->add_option("--construct", target, "Also print a weighting with this achievable residual size");
  smv->callback(run([&] { return cmd_smv(g, family, cap, target); }));

  auto* table = app.add_subcommand("table", "Truncated enumeration bounds on expected path acquisition");
  table->add_option("--from", j_from, "Smallest path length");
  table->add_option("--to", j_to, "Largest path length");
  table->add_option("--k", k, "Weight cap (0 = published k(j))");
  table->add_flag("--unconditioned", unconditioned, "Entries 0..k-1 under plain Poisson(1)");
  table->callback(run([&] { return cmd_table(g, j_from, j_to, k, unconditioned); }));

  auto* proto = app.add_subcommand("protocol", "Highest-weight-first protocol");
  auto* pg = proto->add_option("--graph", graph_text, "Run once on this weighted graph (distinct weights)");
  proto->add_option("--family", family, "Expected residual size on this family")->excludes(pg);
  proto->add_flag("--exhaustive", exhaustive, "Average over every rank assignment");
  proto->add_option("--replicates", replicates, "Monte Carlo replicates (0 = none)");
  proto->callback(run([&] {
    if (graph_text.empty() == family.empty()) throw CLI::ValidationError("protocol", "give exactly one of --graph, --family");
    return cmd_protocol(g, graph_text, family, exhaustive, family.empty() ? 0 : replicates);
  }));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo E a_t/n under i.i.d. Poisson(1) weights");
  sim->add_option("--n", n, "Path length");
  sim->add_option("--replicates", replicates, "Replicates");
  sim->callback(run([&] { return emit_report(g, experiments::simulate_poisson(n, replicates, run_options(g))), 0; }));

  auto* dep = app.add_subcommand("depoissonize", "Monte Carlo E a_t/n with a fixed number of chips");
  dep->add_option("--n", n, "Path length");
  dep->add_option("--chips", chips, "Chips thrown (default n)");
  dep->add_option("--replicates", replicates, "Replicates");
  dep->add_flag("--poisson-total", unconditioned, "Draw the total from Poisson(n) instead");
  dep->callback(run([&] {
    auto opts = run_options(g);
    auto r = unconditioned ? experiments::simulate_poisson_multinomial(n, replicates, opts)
                           : experiments::simulate_depoissonized(n, chips ? chips : n, replicates, opts);
    emit_report(g, r);
    return 0;
  }));

  auto* conc = app.add_subcommand("concentration", "Deviation frequency against the martingale bound");
  conc->add_option("--n", n, "Path length");
  conc->add_option("--replicates", replicates, "Replicates");
  conc->add_option("--phi", phi, "Deviation parameter (default ln n)");
  conc->add_option("--pilot", pilot, "Pilot replicates for the mean (default replicates/10)");
  conc->callback(run([&] { return cmd_concentration(g, n, replicates, phi, pilot); }));

  auto* sub = app.add_subcommand("subadd", "Check a_t(P_{n+m}) <= a_t(P_n) + a_t(P_m) on random weightings");
  sub->add_option("--n", n, "Prefix length");
  sub->add_option("--m", m, "Suffix length");
  sub->add_option("--replicates", replicates, "Replicates");
  sub->callback(run([&] { return cmd_subadd(g, n, m, replicates); }));

  auto* col = app.add_subcommand("collide", "Probability that two vertices receive equal chip counts");
  col->add_option("--n", n, "Vertices");
  col->add_option("--t", t, "Chips");
  col->add_option("--replicates", replicates, "Replicates");
  col->callback(run([&] { return cmd_collide(g, n, t, replicates); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const Error& e) {
    std::cerr << "acquire: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "acquire: " << e.what() << "\n";
    return kUsageError;
  }
  return status;
}
