#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "polyflood/runner.hpp"
#include "support.hpp"

using namespace polyflood;
namespace fs = std::filesystem;

namespace {

nlohmann::json manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

RunConfig small_1d() {
  RunConfig c = preset("table1-dflu");
  c.cells = 50;
  c.T = 0.5;
  c.output_times = {0.25};
  return c;
}

}  // namespace

TEST_CASE("1D run writes snapshots and an ok manifest") {
  const std::string dir = testing::temp_path("run1d");
  RunConfig c = small_1d();
  c.format = OutputFormat::Both;
  const RunOutcome r = run_experiment(c, dir);
  REQUIRE(r.ok);
  REQUIRE(r.snapshots.size() == 3);
  CHECK(r.snapshots[0].t == 0.0);
  CHECK(r.snapshots[1].t == doctest::Approx(0.25));
  CHECK(r.snapshots[2].t == doctest::Approx(0.5));
  for (const auto& s : r.snapshots) {
    CHECK(fs::exists(fs::path(dir) / s.csv));
    CHECK(fs::exists(fs::path(dir) / s.vtk));
  }
  const Table t = read_csv((fs::path(dir) / r.snapshots[2].csv).string());
  CHECK(t.header == std::vector<std::string>{"x_center", "s", "c1", "c2"});
  CHECK(t.rows() == 50);
  const auto m = manifest(dir);
  CHECK(m["status"] == "ok");
  CHECK(m["dimension"] == 1);
  CHECK(m["invariant_violations"] == 0);
  CHECK(m["steps"].get<long>() == r.steps);
  CHECK(m["snapshots"].size() == 3);
  CHECK(parse_config(m["config"].get<std::string>()) == c);
}

TEST_CASE("T = 0 writes only the initial snapshot") {
  const std::string dir = testing::temp_path("t0");
  RunConfig c = small_1d();
  c.T = 0.0;
  c.output_times.clear();
  const RunOutcome r = run_experiment(c, dir);
  CHECK(r.ok);
  CHECK(r.steps == 0);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.snapshots[0].t == 0.0);
}

TEST_CASE("a failing run still writes its manifest") {
  const std::string dir = testing::temp_path("fail2d");
  RunConfig c = preset("expt1-polymer");
  c.nx = c.ny = 16;
  c.cg.max_iter = 1;
  c.cg.precond = Preconditioner::None;
  const RunOutcome r = run_experiment(c, dir);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.error.empty());
  const auto m = manifest(dir);
  CHECK(m["status"] == "failed");
  CHECK(m["error"].get<std::string>().find("CG") != std::string::npos);

  const std::string dir2 = testing::temp_path("fail_config");
  write_failure_manifest(dir2, "broken", "run.theta: theta out of [1,2]");
  const auto m2 = manifest(dir2);
  CHECK(m2["status"] == "failed");
  CHECK(m2["name"] == "broken");
}

TEST_CASE("2D snapshot columns") {
  const std::string dir = testing::temp_path("run2d");
  RunConfig c = preset("expt4-mixed");
  c.nx = c.ny = 12;
  c.T = 0.01;
  c.output_times.clear();
  const RunOutcome r = run_experiment(c, dir);
  REQUIRE(r.ok);
  const Table t = read_csv((fs::path(dir) / r.snapshots.back().csv).string());
  CHECK(t.header == std::vector<std::string>{"x", "y", "s", "c1", "c2", "K", "p"});
  CHECK(t.rows() == 144);
  const auto m = manifest(dir);
  CHECK(m["dimension"] == 2);
}

TEST_CASE("convergence study against an identical reference has zero error") {
  RunConfig c = small_1d();
  c.output_times.clear();
  const auto tables = convergence_study(c, {FluxKind::Godunov}, {40, 80}, {80, FluxKind::Godunov, 2});
  REQUIRE(tables.size() == 1);
  REQUIRE(tables[0].rows.size() == 2);
  const ConvergenceRow& fine = tables[0].rows[1];
  for (double e : fine.error) CHECK(e == 0.0);
  CHECK(tables[0].rows[0].error[0] > 0.0);
  for (const auto& a : fine.alpha) CHECK_FALSE(a.has_value());
  const Table csv = convergence_csv(tables[0], 2);
  CHECK(csv.header == std::vector<std::string>{"cells", "h", "e_s", "alpha_s", "e_c1", "alpha_c1",
                                               "e_c2", "alpha_c2"});
  CHECK(std::isnan(csv.column("alpha_s")[0]));
  CHECK(csv.column("h")[1] == doctest::Approx(1.0 / 80));
}

TEST_CASE("fan table samples the fan") {
  const PhysicsModel m;
  RiemannProblem p{{0.1, {1.0, 0.6}}, {1.0, {}}, {0.2, 1.0, Direction::Vertical},
                   {0.2, 1.0, Direction::Vertical}};
  const WaveFan fan = solve(p, m);
  const Table t = fan_table(fan, m, -2.0, 2.0, 5);
  CHECK(t.header == std::vector<std::string>{"xi", "s", "c1", "c2"});
  CHECK(t.column("xi") == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
  CHECK(t.column("s").front() == 0.1);
  CHECK(t.column("s").back() == 1.0);
}
