#include "doctest.h"

#include "otreg/error.hpp"
#include "otreg/io.hpp"
#include "otreg/lab/config.hpp"
#include "otreg/lab/domains.hpp"
#include "otreg/lab/experiments.hpp"
#include "otreg/lab/output.hpp"
#include "otreg/lab/report.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

using namespace otreg;
using namespace otreg::lab;
namespace fs = std::filesystem;

namespace {

Json minimal_config() {
  return Json::parse(R"({
    "name": "t", "experiment": "obliqueness-scan", "seed": 4,
    "source": {"generator": "regular", "sides": 4},
    "target": {"generator": "source", "rotate_deg": 20},
    "solver": {"n_targets": 400},
    "params": {"samples": 40},
    "thresholds": [{"metric": "margin_min", "op": ">", "value": 0.05}]
  })");
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("otreg_test_lab_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("domain generators") {
  for (std::size_t sides : {3, 4, 5, 8}) {
    const ConvexPolygon p = regular_polygon(sides);
    CHECK(p.size() == sides);
    CHECK(p.area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.centroid().norm() < 1e-12);
    const auto [lo, hi] = p.bbox();
    std::size_t bottom = 0;  // vertices on a horizontal bottom edge
    for (const Vec2& v : p.vertices()) bottom += std::abs(v.y() - lo.y()) < 1e-15 ? 1 : 0;
    CHECK(bottom == 2);
  }
  const ConvexPolygon h1 = random_hull(12, 7), h2 = random_hull(12, 7), h3 = random_hull(12, 8);
  CHECK(h1.vertices() == h2.vertices());
  CHECK(h1.vertices() != h3.vertices());
  CHECK(h1.area() == doctest::Approx(1.0).epsilon(1e-12));

  const ConvexPolygon r = rectangle(4.0);
  CHECK(r.area() == doctest::Approx(1.0));
  const auto [lo, hi] = r.bbox();
  CHECK((hi - lo).x() == doctest::Approx(2.0));

  const ConvexPolygon w = wedge(std::numbers::pi / 3.0);
  CHECK(w.area() == doctest::Approx(1.0));
  CHECK(w.contains(Vec2(0.1, 0.0)));

  const ConvexPolygon s = critical_corner_source(), t = critical_corner_target();
  CHECK(s.area() == doctest::Approx(1.0));
  CHECK(t.area() == doctest::Approx(1.0));
  for (const ConvexPolygon* p : {&s, &t}) {
    bool corner = false;
    for (const Vec2& v : p->vertices()) corner = corner || v.norm() < 1e-12;
    CHECK(corner);
    for (const Vec2& v : p->vertices()) CHECK((v.x() <= 1e-12 && v.y() >= -1e-12));
  }
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = parse_config(minimal_config());
  CHECK(c.name == "t");
  CHECK(c.seed == 4);
  CHECK(c.solver.n_targets == 400);
  CHECK(c.solver.tol == 1e-8);
  REQUIRE(c.thresholds.size() == 1);
  CHECK(c.thresholds[0].holds(0.06));
  CHECK_FALSE(c.thresholds[0].holds(0.05));
  CHECK_FALSE(c.thresholds[0].holds(std::numeric_limits<double>::quiet_NaN()));

  const ConvexPolygon u1 = build_domain(c.source), u2 = build_domain(c.target, &u1);
  CHECK(u2.area() == doctest::Approx(u1.area()));
  CHECK(u2[0].x() != doctest::Approx(u1[0].x()));

  const auto rejects = [](const std::function<void(Json&)>& edit, const std::string& field) {
    Json doc = minimal_config();
    edit(doc);
    try {
      parse_config(doc);
      FAIL("accepted an invalid config: " << field);
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(field) != std::string::npos, e.what());
    }
  };
  rejects([](Json& d) { d["experiment"] = "nope"; }, "experiment");
  rejects([](Json& d) { d.erase("seed"); }, "seed");
  rejects([](Json& d) { d["extra"] = 1; }, "extra");
  rejects([](Json& d) { d["solver"]["n_targets"] = 0; }, "solver.n_targets");
  rejects([](Json& d) { d["solver"]["tolerance"] = 1e-8; }, "tolerance");
  rejects([](Json& d) { d["source"] = Json{{"generator", "random_hull"}, {"points", 8}}; }, "seed");
  rejects([](Json& d) { d["source"] = Json{{"generator", "source"}}; }, "source.generator");
  rejects([](Json& d) { d["source"]["sides"] = 2; }, "source.sides");
  rejects([](Json& d) { d["target"] = Json{{"vertices", {{0, 0}, {1, 0}}}}; }, "target.vertices");
  rejects([](Json& d) { d["thresholds"][0]["op"] = "=="; }, "thresholds[].op");
  rejects([](Json& d) { d["source"] = Json{{"vertices", {{0, 0}, {1, 1}, {2, 2}}}}; }, "domains");

  Json params = {{"a", 2}, {"b", "x"}, {"c", {1, 2.5}}};
  CHECK(param_number(params, "a", 0.0) == 2.0);
  CHECK(param_number(params, "z", 7.0) == 7.0);
  CHECK(param_string(params, "b", "") == "x");
  CHECK(param_numbers(params, "c", {}) == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(param_count(params, "b", 0), ConfigError);
}

TEST_CASE("number and table formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CsvTable t({"a", "b"});
  t.add_row({1.0, 0.5});
  CHECK(t.str() == "a,b\n1,0.5\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("small experiment runs are deterministic and respect thresholds") {
  const ExperimentConfig c = parse_config(minimal_config());
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  const ExperimentReport ra = run_experiment(c, a), rb = run_experiment(c, b);
  CHECK(ra.exit_code() == rb.exit_code());
  CHECK(read_file(a / "obliqueness.csv") == read_file(b / "obliqueness.csv"));
  CHECK(read_file(a / "result.json") == read_file(b / "result.json"));
  CHECK(ra.metrics.count("weak_obliqueness_min") == 1);
  CHECK(ra.metrics.count("solver_residual_rel") == 1);

  Json doc = minimal_config();
  doc["thresholds"][0]["value"] = 5.0;
  const ExperimentReport strict = run_experiment(parse_config(doc), scratch_dir("strict"));
  CHECK(strict.status == RunStatus::ThresholdFail);
  CHECK(strict.exit_code() == 2);

  doc = minimal_config();
  doc["thresholds"][0]["metric"] = "no_such_metric";
  CHECK(run_experiment(parse_config(doc), scratch_dir("missing")).status == RunStatus::ThresholdFail);

  doc = minimal_config();
  doc["solver"]["max_iter"] = 0;
  doc["solver"]["tol"] = 1e-14;
  const fs::path failed = scratch_dir("failed");
  const ExperimentReport f = run_experiment(parse_config(doc), failed);
  CHECK(f.status == RunStatus::SolverFail);
  CHECK(f.exit_code() == 3);
  CHECK_FALSE(Json::parse(read_file(failed / "result.json")).at("pass").get<bool>());

  const fs::path root = scratch_dir("agg");
  fs::copy(a, root / "one");
  CHECK(aggregate_results(root).exit_code == 0);
  fs::copy(failed, root / "two");
  const AggregateReport agg = aggregate_results(root);
  CHECK(agg.exit_code == 3);
  CHECK(agg.json.at("runs").size() == 2);
  CHECK(agg.json.dump() == aggregate_results(root).json.dump());
}

TEST_CASE("solve keys") {
  const ExperimentConfig c = parse_config(minimal_config());
  CHECK(solve_key(c) == solve_key(c, 400));
  CHECK(solve_key(c) != solve_key(c, 800));
  Json doc = minimal_config();
  doc["params"]["samples"] = 10;  // analysis parameters do not change the solve
  CHECK(solve_key(parse_config(doc)) == solve_key(c));
  doc["seed"] = 5;
  CHECK(solve_key(parse_config(doc)) != solve_key(c));
}
