#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "linematch/harness.hpp"

using namespace linematch;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("lm_harness_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("serial dictatorship basics") {
  OrdinalProfile one{{{0}}};
  CHECK(serial_dictatorship(one, {0}).item_of == std::vector<int>{0});

  // All-identical rankings: agent i ends up with item i.
  OrdinalProfile same{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
  CHECK(serial_dictatorship(same, {0, 1, 2}).item_of ==
        std::vector<int>{0, 1, 2});
  CHECK(serial_dictatorship(same, {2, 1, 0}).item_of ==
        std::vector<int>{2, 1, 0});
  CHECK_THROWS_AS(serial_dictatorship(same, {0, 0, 1}), std::domain_error);
}

TEST_CASE("sweep: optimal rows have ratio exactly 1, ordermatch <= 3") {
  SweepConfig cfg;
  cfg.family = "random";
  cfg.ns = {2, 4, 6};
  cfg.count = 40;
  cfg.seed = 12;
  cfg.algos = {"ordermatch", "optimal", "serial-dictatorship"};
  auto res = eval_sweep(cfg);
  CHECK(res.all_ok);
  CHECK_FALSE(res.rows.empty());
  for (const auto& row : res.rows) {
    if (row.algorithm == "optimal") CHECK(row.ratio == 1);
    if (row.algorithm == "ordermatch") {
      CHECK(row.ratio <= 3);
      CHECK(row.no_backward_edges);
      CHECK(row.edge_bound_ok);
      CHECK(row.pi_g_ok);
    }
    if (row.algorithm == "serial-dictatorship") CHECK(row.ratio >= 1);
  }
}

TEST_CASE("sweep rows are reproducible and order-stable under parallelism") {
  SweepConfig cfg;
  cfg.ns = {3, 5};
  cfg.count = 25;
  cfg.seed = 77;
  cfg.algos = {"ordermatch"};
  auto serial = eval_sweep(cfg);
  cfg.workers = 4;
  auto parallel = eval_sweep(cfg);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].instance_id == parallel.rows[i].instance_id);
    CHECK(serial.rows[i].ratio == parallel.rows[i].ratio);
    CHECK(serial.rows[i].alg_cost == parallel.rows[i].alg_cost);
  }
}

TEST_CASE("adversarial families sweep cleanly") {
  for (const char* family :
       {"lb-k1", "lb-kgeq2", "tiebreak-k1", "tiebreak-kgeq2"}) {
    SweepConfig cfg;
    cfg.family = family;
    cfg.ns = std::string(family) == "tiebreak-k1"
                 ? std::vector<int>{4, 6, 8}
                 : std::vector<int>{3, 6, 9};
    cfg.algos = {"ordermatch", "ordermatch-naive", "optimal"};
    auto res = eval_sweep(cfg);
    CAPTURE(family);
    CHECK(res.all_ok);
    for (const auto& row : res.rows)
      if (row.algorithm == "ordermatch") CHECK(row.ratio <= 3);
  }
}

TEST_CASE("CSV and JSON reports agree field for field") {
  SweepConfig cfg;
  cfg.ns = {4};
  cfg.count = 10;
  cfg.seed = 3;
  cfg.algos = {"ordermatch", "optimal"};
  auto res = eval_sweep(cfg);

  TempFile csv("report.csv");
  write_csv(csv.path, res.rows);
  std::ifstream in(csv.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  auto rows_json = rows_to_json(res.rows);
  size_t i = 0;
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE(i < rows_json.size());
    const auto& j = rows_json[i];
    std::ostringstream expect;
    expect << j["instance_id"].get<long>() << ','
           << j["family"].get<std::string>() << ',' << j["n"].get<int>() << ','
           << j["k"].get<int>() << ',' << j["algorithm"].get<std::string>()
           << ',' << j["alg_cost"].get<std::string>() << ','
           << j["opt_cost"].get<std::string>() << ','
           << j["ratio"].get<std::string>() << ','
           << j["ratio_decimal"].get<double>() << ','
           << (j["no_backward_edges"].get<bool>() ? 1 : 0) << ','
           << (j["edge_bound_ok"].get<bool>() ? 1 : 0) << ','
           << (j["pi_g_ok"].get<bool>() ? 1 : 0);
    CHECK(line == expect.str());
    ++i;
  }
  CHECK(i == rows_json.size());
}

TEST_CASE("replaying a row's (family, seed, id) reproduces it") {
  SweepConfig cfg;
  cfg.ns = {5};
  cfg.count = 15;
  cfg.seed = 999;
  cfg.algos = {"ordermatch"};
  auto res = eval_sweep(cfg);
  const auto& row = res.rows[7];

  SweepConfig replay = cfg;
  auto res2 = eval_sweep(replay);
  const auto& row2 = res2.rows[7];
  CHECK(row.instance_id == row2.instance_id);
  CHECK(row.alg_cost == row2.alg_cost);
  CHECK(row.opt_cost == row2.opt_cost);
  CHECK(row.ratio == row2.ratio);
}

TEST_CASE("reproducer dumps are complete, self-contained JSON") {
  TempFile f("repro.json");
  GenSpec spec;
  spec.n = 4;
  spec.seed = 1;
  auto inst = gen_random(spec);
  SweepConfig cfg;
  ReportRow row;
  row.instance_id = 9;
  row.n = 4;
  row.k = 2;
  row.algorithm = "ordermatch";
  row.alg_cost = Rational(5);
  row.opt_cost = Rational(2);
  row.pi_g_ok = false;
  dump_reproducer(f.path, inst, cfg, row);
  auto j = load_json(f.path);
  CHECK(instance_from_json(j["instance"]).agents == inst.agents);
  CHECK(j["flags"]["pi_g_ok"] == false);
  CHECK(j["k"] == 2);
}

TEST_CASE("config parsing") {
  TempFile f("config.txt");
  {
    std::ofstream out(f.path);
    out << "# sweep configuration\n"
        << "family = random\n"
        << "n = 2..5\n"
        << "count = 17\n"
        << "seed = 21\n"
        << "algos = ordermatch, optimal\n"
        << "k = all\n"
        << "eps = 1/500\n"
        << "workers = 2\n"
        << "distinct = true\n";
  }
  auto cfg = parse_config(f.path);
  CHECK(cfg.family == "random");
  CHECK(cfg.ns == std::vector<int>{2, 3, 4, 5});
  CHECK(cfg.count == 17);
  CHECK(cfg.seed == 21);
  CHECK(cfg.algos == std::vector<std::string>{"ordermatch", "optimal"});
  CHECK(cfg.ks.empty());
  CHECK(cfg.eps == Rational(1, 500));
  CHECK(cfg.workers == 2);
  CHECK(cfg.distinct);

  {
    std::ofstream out(f.path);
    out << "bogus_key = 1\n";
  }
  CHECK_THROWS_AS(parse_config(f.path), parse_error);
}
