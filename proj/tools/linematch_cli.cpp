// Command-line harness: generate instances, run matching algorithms,
// sweep families, analyze permutation graphs, and solve two-sided cases.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linematch/harness.hpp"
#include "linematch/instances.hpp"
#include "linematch/optimal.hpp"
#include "linematch/ordermatch.hpp"
#include "linematch/permgraph.hpp"
#include "linematch/twosided.hpp"

using namespace linematch;

namespace {

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(out_path, j);
}

int run_gen(const std::string& family, int n, uint64_t seed,
            const std::string& eps_text, const std::string& delta_text,
            int count, bool two_sided, bool distinct, bool clustered,
            int64_t lo, int64_t hi, const std::vector<int>& queried,
            const std::string& out) {
  Rational eps = parse_rational(eps_text);
  Rational delta = parse_rational(delta_text);
  nlohmann::json j;
  if (family == "random") {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.distinct = distinct;
    spec.coord_min = lo;
    spec.coord_max = hi;
    spec.dist = clustered ? Distribution::clustered : Distribution::uniform_int;
    if (count == 1) {
      j = two_sided ? to_json(gen_random_two_sided(spec))
                    : to_json(gen_random(spec));
    } else {
      j = nlohmann::json::array();
      for (int i = 0; i < count; ++i) {
        spec.seed = mix_seed(seed, i);
        j.push_back(two_sided ? to_json(gen_random_two_sided(spec))
                              : to_json(gen_random(spec)));
      }
    }
  } else if (family == "lb-k1") {
    j = to_json(gen_lower_bound(n, KMode::k1, eps, n - 1, delta));
  } else if (family == "lb-kgeq2") {
    j = to_json(gen_lower_bound(n, KMode::kgeq2, eps, n - 1, delta));
  } else if (family == "tiebreak-k1") {
    j = to_json(gen_tiebreak_pathology(n, KMode::k1, eps, delta));
  } else if (family == "tiebreak-kgeq2") {
    j = to_json(gen_tiebreak_pathology(n, KMode::kgeq2, eps, delta));
  } else if (family == "query-lb") {
    std::vector<int> queried0;
    for (int g : queried) queried0.push_back(g - 1);
    auto pair = fullpref_lb_witness(n, queried0);
    j["top"] = to_json(pair.top);
    j["bottom"] = to_json(pair.bottom);
    j["displaced"] = {pair.gi + 1, pair.gj + 1};
  } else {
    std::cerr << "unknown family: " << family << "\n";
    return 2;
  }
  emit(j, out);
  return 0;
}

int run_algo(const std::string& algo, const std::string& instance_path,
             const std::string& profile_path, const std::string& anchors,
             std::optional<int> k, const std::string& out) {
  std::optional<Instance> inst;
  OrdinalProfile profile;
  if (!instance_path.empty()) {
    inst = load_instance(instance_path);
    profile = derive_profile(*inst);
  } else if (!profile_path.empty()) {
    profile = load_profile(profile_path);
  } else {
    std::cerr << "run: need --instance or --profile\n";
    return 2;
  }

  Matching m;
  if (algo == "ordermatch") {
    m = order_match(profile);
  } else if (algo == "ordermatch-naive") {
    auto comma = anchors.find(',');
    if (comma == std::string::npos) {
      std::cerr << "run: --anchors i,j required for ordermatch-naive\n";
      return 2;
    }
    int i = std::stoi(anchors.substr(0, comma)) - 1;
    int jdx = std::stoi(anchors.substr(comma + 1)) - 1;
    m = order_match_naive(profile, {i, jdx});
  } else if (algo == "serial-dictatorship") {
    std::vector<int> order(profile.n());
    std::iota(order.begin(), order.end(), 0);
    m = serial_dictatorship(profile, order);
  } else if (algo == "optimal") {
    if (!inst) {
      std::cerr << "run: --algo optimal needs ground truth (--instance)\n";
      return 2;
    }
    m = greedy_optimal(*inst).matching;
  } else {
    std::cerr << "unknown algorithm: " << algo << "\n";
    return 2;
  }

  nlohmann::json j;
  j["algorithm"] = algo;
  j["matching"] = to_json(m);
  if (inst) {
    auto costs = cost_profile(*inst, m);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : costs) arr.push_back(to_string(c));
    j["cost_per_k"] = arr;
    if (k) j["cost_k"] = to_string(costs.at(*k - 1));
  }
  emit(j, out);
  return 0;
}

int run_eval(const std::string& config_path, std::string out_csv,
             std::string out_json) {
  SweepConfig cfg = parse_config(config_path);
  if (!out_csv.empty()) cfg.out_csv = out_csv;
  if (!out_json.empty()) cfg.out_json = out_json;
  auto res = eval_sweep(cfg);
  if (!cfg.out_csv.empty()) write_csv(cfg.out_csv, res.rows);
  auto report = sweep_report_json(cfg, res);
  if (!cfg.out_json.empty())
    save_json(cfg.out_json, report);
  else
    std::cout << report["max_ratio"].dump(2) << "\n";
  std::cerr << "rows: " << res.rows.size()
            << ", fallback activations: " << res.fallback_activations << "\n";
  if (!res.all_ok) {
    std::cerr << "invariant violation; reproducer at " << res.first_violation
              << "\n";
    return 1;
  }
  return 0;
}

int run_analyze(const std::string& instance_path, const std::string& algo,
                const std::string& out) {
  Instance inst = load_instance(instance_path);
  auto profile = derive_profile(inst);
  Matching m = algo == "optimal" ? greedy_optimal(inst).matching
                                 : order_match(profile);
  auto graph = build_graph(inst, m);
  nlohmann::json j;
  j["algorithm"] = algo;
  j["matching"] = to_json(m);
  nlohmann::json edges = nlohmann::json::array();
  for (int a = 0; a < graph.n(); ++a) {
    edges.push_back({{"tail", a + 1},
                     {"head", graph.head[a] + 1},
                     {"kind", to_string(graph.kind(a))},
                     {"cost", to_string(edge_cost(inst, graph, a))}});
  }
  j["edges"] = edges;
  j["dot"] = to_dot(graph);
  if (!graph.has_kind(EdgeKind::backward)) {
    auto rfe = remove_forward_edges(graph, inst);
    nlohmann::json swaps = nlohmann::json::array();
    for (const auto& s : rfe.swaps) {
      swaps.push_back({{"a1", s.a1 + 1},
                       {"a2", s.a2 + 1},
                       {"a3", s.a3 + 1},
                       {"a4", s.a4 + 1},
                       {"removed_max", to_string(s.removed_max)},
                       {"added_max", to_string(s.added_max)},
                       {"removed_sum", to_string(s.removed_sum)},
                       {"added_sum", to_string(s.added_sum)}});
    }
    j["swaps"] = swaps;
    nlohmann::json final_edges = nlohmann::json::array();
    for (int a = 0; a < rfe.graph.n(); ++a) {
      final_edges.push_back({{"tail", a + 1},
                             {"head", rfe.graph.head[a] + 1},
                             {"kind", to_string(rfe.graph.kind(a))}});
    }
    j["transformed_edges"] = final_edges;
    j["transformed_dot"] = to_dot(rfe.graph);
    j["edge_bound_violations"] = check_edge_bound(inst, rfe.graph).size();
  }
  emit(j, out);
  return 0;
}

int run_twosided(const std::string& mode, const std::string& instance_path,
                 int n, uint64_t seed, const std::string& out) {
  TwoSidedInstance inst;
  if (!instance_path.empty()) {
    inst = load_two_sided(instance_path);
  } else {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    inst = gen_random_two_sided(spec);
  }
  nlohmann::json j;
  j["mode"] = mode;
  if (mode == "optimal") {
    auto m = two_sided_optimal(taker_profile(inst), giver_profile(inst));
    j["matching"] = to_json(m);
    j["rank_queries"] = 0;
    j["full_queries"] = 0;
    j["bound"] = nullptr;
    j["within_bound"] = true;
  } else {
    QueryOracle oracle(inst);
    SolveResult res;
    if (mode == "ranks1side")
      res = solve_one_sided_ranks(oracle);
    else if (mode == "zeroknowledge")
      res = solve_zero_knowledge(oracle);
    else {
      std::cerr << "unknown mode: " << mode << "\n";
      return 2;
    }
    j["matching"] = to_json(res.matching);
    j["rank_queries"] = res.rank_queries;
    j["full_queries"] = res.full_queries;
    j["bound"] = res.bound;
    j["within_bound"] = res.within_bound;
  }
  emit(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact matching on the line: algorithms, adversaries, analysis"};
  app.require_subcommand(1);

  // gen
  std::string family = "random", eps_text = "1/1000", delta_text = "0", out;
  int n = 5, count = 1;
  uint64_t seed = 0;
  bool two_sided = false, distinct = false, clustered = false;
  int64_t lo = 0, hi = 100;
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->add_option("--family", family,
                  "random|lb-k1|lb-kgeq2|tiebreak-k1|tiebreak-kgeq2|query-lb");
  gen->add_option("--n", n, "Instance size");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--eps", eps_text, "Epsilon as p/q");
  gen->add_option("--delta", delta_text,
                  "Spread coincident points by multiples of delta (p/q)");
  std::vector<int> queried;
  gen->add_option("--queried", queried,
                  "Already-queried giver ids (1-based, query-lb family)");
  gen->add_option("--count", count, "Number of instances (random family)");
  gen->add_flag("--two-sided", two_sided, "Generate takers/givers");
  gen->add_flag("--distinct", distinct, "All coordinates pairwise distinct");
  gen->add_flag("--clustered", clustered, "Clustered mixture distribution");
  gen->add_option("--min", lo, "Minimum coordinate");
  gen->add_option("--max", hi, "Maximum coordinate");
  gen->add_option("--out", out, "Output file (default stdout)");

  // run
  std::string algo = "ordermatch", instance_path, profile_path, anchors;
  int k_value = 0;
  auto* run = app.add_subcommand("run", "Run a matching algorithm");
  run->add_option("--algo", algo,
                  "ordermatch|ordermatch-naive|serial-dictatorship|optimal");
  run->add_option("--instance", instance_path, "Instance JSON");
  run->add_option("--profile", profile_path, "Profile JSON");
  run->add_option("--anchors", anchors, "i,j (1-based) for ordermatch-naive");
  run->add_option("--k", k_value, "Report SC_k for this k");
  run->add_option("--out", out, "Output file (default stdout)");

  // eval
  std::string config_path, out_csv, out_json;
  auto* eval = app.add_subcommand("eval", "Sweep families and check invariants");
  eval->add_option("--config", config_path, "Config file")->required();
  eval->add_option("--out-csv", out_csv, "CSV report path");
  eval->add_option("--out-json", out_json, "JSON report path");

  // analyze
  std::string analyze_instance, analyze_algo = "ordermatch";
  auto* analyze = app.add_subcommand("analyze", "Permutation-graph analysis");
  analyze->add_option("--instance", analyze_instance, "Instance JSON")->required();
  analyze->add_option("--algo", analyze_algo, "ordermatch|optimal");
  analyze->add_option("--out", out, "Output file (default stdout)");

  // twosided
  std::string mode = "optimal", ts_instance;
  auto* ts = app.add_subcommand("twosided", "Two-sided matching and queries");
  ts->add_option("--mode", mode, "optimal|ranks1side|zeroknowledge");
  ts->add_option("--instance", ts_instance, "Two-sided instance JSON");
  ts->add_option("--n", n, "Size when generating");
  ts->add_option("--seed", seed, "Seed when generating");
  ts->add_option("--out", out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return run_gen(family, n, seed, eps_text, delta_text, count, two_sided,
                     distinct, clustered, lo, hi, queried, out);
    if (run->parsed())
      return run_algo(algo, instance_path, profile_path, anchors,
                      k_value > 0 ? std::optional<int>(k_value) : std::nullopt,
                      out);
    if (eval->parsed()) return run_eval(config_path, out_csv, out_json);
    if (analyze->parsed())
      return run_analyze(analyze_instance, analyze_algo, out);
    if (ts->parsed()) return run_twosided(mode, ts_instance, n, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
