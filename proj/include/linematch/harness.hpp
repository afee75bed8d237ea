#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "linematch/instances.hpp"
#include "linematch/optimal.hpp"
#include "linematch/ordermatch.hpp"
#include "linematch/permgraph.hpp"

namespace linematch {

/// Each agent in sequence takes its most-preferred unmatched item
/// (comparison baseline only).
inline Matching serial_dictatorship(const OrdinalProfile& profile,
                                    const std::vector<int>& order) {
  profile.validate();
  const int n = profile.n();
  if (static_cast<int>(order.size()) != n)
    throw std::domain_error("dictatorship order must cover all agents");
  {
    std::vector<char> seen(n, 0);
    for (int a : order) {
      if (a < 0 || a >= n || seen[a])
        throw std::domain_error("dictatorship order is not a permutation");
      seen[a] = 1;
    }
  }
  Matching m;
  m.item_of.assign(n, -1);
  std::vector<char> taken(n, 0);
  for (int a : order) {
    for (int g : profile.rankings[a]) {
      if (!taken[g]) {
        taken[g] = 1;
        m.item_of[a] = g;
        break;
      }
    }
  }
  return m;
}

struct SweepConfig {
  std::string family = "random";  // random | lb-k1 | lb-kgeq2 | tiebreak-k1 | tiebreak-kgeq2
  std::vector<int> ns = {2, 3, 4, 5, 6, 7, 8};
  int count = 100;  // instances per n (random family)
  uint64_t seed = 1;
  std::vector<std::string> algos = {"ordermatch", "optimal"};
  std::vector<int> ks;  // empty = all k in [n]
  Rational eps = Rational(1, 1000);
  Rational delta = Rational(0);  // family perturbation; 0 keeps paper-exact points
  int64_t coord_min = 0;
  int64_t coord_max = 100;
  bool distinct = false;
  bool clustered = false;
  int workers = 1;
  std::string out_csv;
  std::string out_json;
  std::string reproducer_path = "violation_reproducer.json";
};

struct ReportRow {
  long instance_id = 0;
  std::string family;
  int n = 0;
  int k = 0;
  std::string algorithm;
  Rational alg_cost, opt_cost, ratio;
  bool no_backward_edges = true;
  bool edge_bound_ok = true;
  bool pi_g_ok = true;
  bool ratio_ok = true;  // ordermatch rows: ratio <= 3 exactly

  bool flags_ok() const {
    return no_backward_edges && edge_bound_ok && pi_g_ok && ratio_ok;
  }
};

struct SweepResult {
  std::vector<ReportRow> rows;
  bool all_ok = true;
  long fallback_activations = 0;
  std::string first_violation;  // reproducer path if any flag failed
};

/// Ground-truth comparison for pi_g: the recovered order must equal the
/// coordinate order of G_in up to reversal; coincident clusters compare as
/// sets (ordinal data cannot order them beyond the documented tie-break).
inline bool item_order_matches_truth(const Instance& inst,
                                     const std::vector<int>& recovered) {
  auto clusters_of = [&](std::vector<int> seq, bool by_position) {
    if (by_position)
      std::sort(seq.begin(), seq.end(), [&](int a, int b) {
        if (inst.items[a] != inst.items[b]) return inst.items[a] < inst.items[b];
        return a < b;
      });
    std::vector<std::vector<int>> out;
    for (int g : seq) {
      if (!out.empty() && inst.items[out.back().back()] == inst.items[g])
        out.back().push_back(g);
      else
        out.push_back({g});
    }
    for (auto& c : out) std::sort(c.begin(), c.end());
    return out;
  };
  auto truth = clusters_of(recovered, true);
  auto got = clusters_of(recovered, false);
  if (got == truth) return true;
  std::reverse(got.begin(), got.end());
  return got == truth;
}

namespace detail {

struct InstanceEval {
  Instance instance;
  std::vector<ReportRow> rows;
  bool fallback_used = false;
};

inline Instance make_instance(const SweepConfig& cfg, int n, long id) {
  if (cfg.family == "random") {
    GenSpec spec;
    spec.n = n;
    spec.seed = mix_seed(cfg.seed, static_cast<uint64_t>(id) * 5 + n);
    spec.coord_min = cfg.coord_min;
    spec.coord_max = cfg.coord_max;
    spec.distinct = cfg.distinct;
    spec.dist = cfg.clustered ? Distribution::clustered : Distribution::uniform_int;
    return gen_random(spec);
  }
  if (cfg.family == "lb-k1")
    return gen_lower_bound(n, KMode::k1, cfg.eps, n - 1, cfg.delta);
  if (cfg.family == "lb-kgeq2")
    return gen_lower_bound(n, KMode::kgeq2, cfg.eps, n - 1, cfg.delta);
  if (cfg.family == "tiebreak-k1")
    return gen_tiebreak_pathology(n, KMode::k1, cfg.eps, cfg.delta);
  if (cfg.family == "tiebreak-kgeq2")
    return gen_tiebreak_pathology(n, KMode::kgeq2, cfg.eps, cfg.delta);
  throw std::domain_error("unknown family: " + cfg.family);
}

inline std::pair<int, int> naive_anchors(const SweepConfig& cfg,
                                         const OrdinalProfile& profile, int n) {
  if (cfg.family == "tiebreak-k1") return {1, n - 2};  // a_2, a_{n-1}
  if (cfg.family == "tiebreak-kgeq2") return {0, n - 1};  // a_1, a_n
  auto [g_ell, g_r] = identify_extremes(profile);
  int a_ell = -1, a_r = -1;
  for (int a = 0; a < n; ++a) {
    if (a_ell < 0 && profile.top(a) == g_ell) a_ell = a;
    if (a_r < 0 && profile.top(a) == g_r) a_r = a;
  }
  return {a_ell, a_r};
}

inline InstanceEval evaluate_instance(const SweepConfig& cfg, int n, long id) {
  InstanceEval ev;
  ev.instance = make_instance(cfg, n, id);
  const Instance& inst = ev.instance;
  auto profile = derive_profile(inst);
  auto opt = greedy_optimal(inst);

  std::vector<int> ks = cfg.ks;
  if (ks.empty())
    for (int k = 1; k <= n; ++k) ks.push_back(k);

  for (const auto& algo : cfg.algos) {
    Matching m;
    bool is_ordermatch = algo == "ordermatch";
    bool no_backward = true, edge_ok = true, pig_ok = true;
    if (is_ordermatch) {
      long before = fallback_activations().load();
      auto full = order_match_full(profile);
      ev.fallback_used = fallback_activations().load() != before;
      m = full.matching;
      pig_ok = item_order_matches_truth(inst, full.item_order.sequence);
      auto graph = build_graph(inst, m);
      no_backward = !graph.has_kind(EdgeKind::backward);
      if (no_backward) {
        auto rfe = remove_forward_edges(graph, inst);
        edge_ok = !rfe.graph.has_kind(EdgeKind::forward) &&
                  !rfe.graph.has_kind(EdgeKind::backward) &&
                  static_cast<int>(rfe.swaps.size()) <= n &&
                  check_edge_bound(inst, rfe.graph).empty();
        for (const auto& s : rfe.swaps)
          edge_ok = edge_ok && s.removed_max <= s.added_max &&
                    s.removed_sum <= s.added_sum;
        auto before_costs = graph_cost_profile(inst, graph);
        auto after_costs = graph_cost_profile(inst, rfe.graph);
        for (int k = 1; k <= n; ++k)
          edge_ok = edge_ok && before_costs[k - 1] <= after_costs[k - 1];
      } else {
        edge_ok = false;
      }
    } else if (algo == "optimal") {
      m = opt.matching;
    } else if (algo == "serial-dictatorship") {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      m = serial_dictatorship(profile, order);
    } else if (algo == "ordermatch-naive") {
      auto [a_ell, a_r] = naive_anchors(cfg, profile, n);
      m = order_match_naive(profile, {a_ell, a_r});
    } else {
      throw std::domain_error("unknown algorithm: " + algo);
    }

    auto costs = cost_profile(inst, m);
    for (int k : ks) {
      if (k < 1 || k > n) continue;
      ReportRow row;
      row.instance_id = id;
      row.family = cfg.family;
      row.n = n;
      row.k = k;
      row.algorithm = algo;
      row.alg_cost = costs[k - 1];
      row.opt_cost = opt.cost_per_k[k - 1];
      if (row.opt_cost == 0)
        row.ratio = row.alg_cost == 0 ? Rational(1) : Rational(-1);
      else
        row.ratio = row.alg_cost / row.opt_cost;
      row.no_backward_edges = no_backward;
      row.edge_bound_ok = edge_ok;
      row.pi_g_ok = pig_ok;
      if (is_ordermatch)
        row.ratio_ok = row.opt_cost == 0 ? row.alg_cost == 0
                                         : row.ratio <= Rational(3);
      ev.rows.push_back(std::move(row));
    }
  }
  return ev;
}

}  // namespace detail

inline void dump_reproducer(const std::string& path, const Instance& inst,
                            const SweepConfig& cfg, const ReportRow& row) {
  nlohmann::json j;
  j["instance"] = to_json(inst);
  j["family"] = cfg.family;
  j["seed"] = cfg.seed;
  j["instance_id"] = row.instance_id;
  j["n"] = row.n;
  j["k"] = row.k;
  j["algorithm"] = row.algorithm;
  j["alg_cost"] = to_string(row.alg_cost);
  j["opt_cost"] = to_string(row.opt_cost);
  j["flags"] = {{"no_backward_edges", row.no_backward_edges},
                {"edge_bound_ok", row.edge_bound_ok},
                {"pi_g_ok", row.pi_g_ok},
                {"ratio_ok", row.ratio_ok}};
  save_json(path, j);
}

/// Runs every (instance, algorithm, k) cell of the sweep; rows come back
/// ordered by instance id regardless of worker completion order.
inline SweepResult eval_sweep(const SweepConfig& cfg) {
  struct Job {
    int n;
    long id;
  };
  std::vector<Job> jobs;
  long id = 0;
  for (int n : cfg.ns) {
    int reps = cfg.family == "random" ? cfg.count : 1;
    for (int r = 0; r < reps; ++r) jobs.push_back({n, id++});
  }

  std::vector<detail::InstanceEval> evals(jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size() || failed.load()) break;
      try {
        evals[i] = detail::evaluate_instance(cfg, jobs[i].n, jobs[i].id);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed = true;
      }
    }
  };
  int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) throw std::runtime_error("sweep failed: " + error_message);

  SweepResult result;
  for (auto& ev : evals) {
    if (ev.fallback_used) ++result.fallback_activations;
    for (auto& row : ev.rows) {
      if (!row.flags_ok() && result.all_ok) {
        result.all_ok = false;
        result.first_violation = cfg.reproducer_path;
        dump_reproducer(cfg.reproducer_path, ev.instance, cfg, row);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Report output. CSV and JSON carry the same fields, row for row.

inline const char* kCsvHeader =
    "instance_id,family,n,k,algorithm,alg_cost,opt_cost,ratio,ratio_decimal,"
    "no_backward_edges,edge_bound_ok,pi_g_ok";

inline std::string csv_line(const ReportRow& r) {
  std::ostringstream os;
  os << r.instance_id << ',' << r.family << ',' << r.n << ',' << r.k << ','
     << r.algorithm << ',' << to_string(r.alg_cost) << ','
     << to_string(r.opt_cost) << ',' << to_string(r.ratio) << ','
     << approx(r.ratio) << ',' << (r.no_backward_edges ? 1 : 0) << ','
     << (r.edge_bound_ok ? 1 : 0) << ',' << (r.pi_g_ok ? 1 : 0);
  return os.str();
}

inline void write_csv(const std::string& path,
                      const std::vector<ReportRow>& rows) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open " + path + " for writing");
  out << kCsvHeader << "\n";
  for (const auto& r : rows) out << csv_line(r) << "\n";
}

inline nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"instance_id", r.instance_id},
                   {"family", r.family},
                   {"n", r.n},
                   {"k", r.k},
                   {"algorithm", r.algorithm},
                   {"alg_cost", to_string(r.alg_cost)},
                   {"opt_cost", to_string(r.opt_cost)},
                   {"ratio", to_string(r.ratio)},
                   {"ratio_decimal", approx(r.ratio)},
                   {"no_backward_edges", r.no_backward_edges},
                   {"edge_bound_ok", r.edge_bound_ok},
                   {"pi_g_ok", r.pi_g_ok}});
  }
  return arr;
}

inline nlohmann::json sweep_report_json(const SweepConfig& cfg,
                                        const SweepResult& res) {
  nlohmann::json j;
  j["rows"] = rows_to_json(res.rows);
  j["all_ok"] = res.all_ok;
  j["fallback_activations"] = res.fallback_activations;
  std::map<std::string, Rational> max_ratio;
  for (const auto& r : res.rows) {
    if (r.ratio < 0) continue;
    std::string key = r.family + "/" + r.algorithm + "/k=" + std::to_string(r.k);
    auto it = max_ratio.find(key);
    if (it == max_ratio.end() || it->second < r.ratio) max_ratio[key] = r.ratio;
  }
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [key, value] : max_ratio) summary[key] = to_string(value);
  j["max_ratio"] = summary;
  j["config"] = {{"family", cfg.family}, {"seed", cfg.seed},
                 {"count", cfg.count},   {"eps", to_string(cfg.eps)}};
  return j;
}

// ---------------------------------------------------------------------------
// Config files: plain "key = value" lines, '#' comments.

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    int lo = std::stoi(text.substr(0, dots));
    int hi = std::stoi(text.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(std::stoi(part));
  return out;
}

inline std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

inline SweepConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open config " + path);
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "family") cfg.family = value;
      else if (key == "n") cfg.ns = parse_int_list(value);
      else if (key == "count") cfg.count = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "algos") cfg.algos = parse_string_list(value);
      else if (key == "k") cfg.ks = value == "all" ? std::vector<int>{} : parse_int_list(value);
      else if (key == "eps") cfg.eps = parse_rational(value);
      else if (key == "delta") cfg.delta = parse_rational(value);
      else if (key == "coord_min") cfg.coord_min = std::stoll(value);
      else if (key == "coord_max") cfg.coord_max = std::stoll(value);
      else if (key == "distinct") cfg.distinct = value == "true" || value == "1";
      else if (key == "clustered") cfg.clustered = value == "true" || value == "1";
      else if (key == "workers") cfg.workers = std::stoi(value);
      else if (key == "out_csv") cfg.out_csv = value;
      else if (key == "out_json") cfg.out_json = value;
      else if (key == "reproducer") cfg.reproducer_path = value;
      else throw parse_error("unknown config key '" + key + "'");
    } catch (const parse_error&) {
      throw;
    } catch (const std::exception&) {
      throw parse_error(path + ":" + std::to_string(lineno) +
                        ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace linematch
