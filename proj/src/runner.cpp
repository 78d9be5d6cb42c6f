#include "polyflood/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace polyflood {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string snapshot_stem(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu", index);
  return buf;
}

std::vector<std::string> component_names(int m) {
  std::vector<std::string> names;
  for (int l = 1; l <= m; ++l) names.push_back("c" + std::to_string(l));
  return names;
}

json violations_json(const ViolationCounts& v) {
  return {{"s_bound", v.s_bound},
          {"c_local", v.c_local},
          {"tv", v.tv},
          {"conservation", v.conservation}};
}

void write_manifest(const std::string& out_dir, const json& manifest) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  out << manifest.dump(2) << "\n";
}

void write_snapshot(const std::string& out_dir, OutputFormat format, const Table& table,
                    const VtkGrid& vgrid, double t, size_t index, RunOutcome& outcome) {
  SnapshotFile f;
  f.t = t;
  const std::string stem = snapshot_stem(index);
  if (format != OutputFormat::Vtk) {
    f.csv = stem + ".csv";
    write_csv((fs::path(out_dir) / f.csv).string(), table);
  }
  if (format != OutputFormat::Csv) {
    f.vtk = stem + ".vtk";
    std::vector<std::pair<std::string, std::vector<double>>> fields;
    // Coordinates are implied by the structured-points header.
    for (size_t k = 0; k < table.header.size(); ++k) {
      const std::string& name = table.header[k];
      if (name == "x" || name == "y" || name == "x_center") continue;
      fields.emplace_back(name, table.columns[k]);
    }
    char title[64];
    std::snprintf(title, sizeof title, "t = %.17g", t);
    write_vtk((fs::path(out_dir) / f.vtk).string(), vgrid, title, fields);
  }
  outcome.snapshots.push_back(f);
}

json run_1d(const RunConfig& config, const std::string& out_dir, RunOutcome& outcome) {
  const Run1DConfig rc = config.to_1d();
  const Run1DResult res = run1d(rc);
  outcome.steps = res.steps;
  outcome.violations = res.violations;
  const VtkGrid vgrid{rc.grid.n_cells, 1, rc.grid.dx(), 1.0};
  size_t index = 0;
  write_snapshot(out_dir, config.format, snapshot_table(initial_state(rc), rc.grid, rc.model.m),
                 vgrid, 0.0, index++, outcome);
  for (const Sim1DState& s : res.snapshots)
    write_snapshot(out_dir, config.format, snapshot_table(s, rc.grid, rc.model.m), vgrid, s.t,
                   index++, outcome);
  if (config.T > 0.0)
    write_snapshot(out_dir, config.format, snapshot_table(res.final_state, rc.grid, rc.model.m),
                   vgrid, res.final_state.t, index++, outcome);
  return {{"M", res.M},
          {"dt", res.dt},
          {"max_conservation_residual", res.max_conservation_residual},
          {"max_s_bound_excess", res.max_s_bound_excess},
          {"max_c_local_excess_step", res.max_c_local_excess},
          {"max_c_local_excess_stage", res.max_c_stage_excess},
          {"max_tv_increase", res.max_tv_increase},
          {"max_face_speed", res.max_face_speed},
          {"boundary_leak", res.boundary_leak}};
}

json run_2d(const RunConfig& config, const std::string& out_dir, RunOutcome& outcome) {
  const Run2DConfig rc = config.to_2d();
  Sim2DState initial = initial_state(rc);
  solve_pressure(initial, rc);
  const Run2DResult res = run2d(rc);
  outcome.steps = res.steps;
  outcome.violations = res.violations;
  outcome.warnings = res.warnings;
  const VtkGrid vgrid{rc.grid.nx, rc.grid.ny, rc.grid.dx(), rc.grid.dy()};
  size_t index = 0;
  write_snapshot(out_dir, config.format, snapshot_table(initial, rc.grid, rc.model.m), vgrid, 0.0,
                 index++, outcome);
  for (const Sim2DState& s : res.snapshots)
    write_snapshot(out_dir, config.format, snapshot_table(s, rc.grid, rc.model.m), vgrid, s.t,
                   index++, outcome);
  if (config.T > 0.0)
    write_snapshot(out_dir, config.format, snapshot_table(res.final_state, rc.grid, rc.model.m),
                   vgrid, res.final_state.t, index++, outcome);
  return {{"cg_iterations", res.cg_iterations},
          {"max_cg_iterations", res.max_cg_iterations},
          {"max_conservation_residual", res.max_conservation_residual},
          {"max_s_bound_excess", res.max_s_bound_excess},
          {"max_c_local_excess_step", res.max_c_local_excess},
          {"max_c_local_excess_stage", res.max_c_stage_excess}};
}

}  // namespace

Table snapshot_table(const Sim1DState& state, const Grid1D& grid, int m) {
  Table t;
  t.header = {"x_center", "s"};
  for (const auto& n : component_names(m)) t.header.push_back(n);
  t.columns.assign(t.header.size(), {});
  for (int i = 0; i < grid.n_cells; ++i) {
    const State& q = state.cells[static_cast<size_t>(i)];
    t.columns[0].push_back(grid.center(i));
    t.columns[1].push_back(q.s);
    for (int l = 0; l < m; ++l)
      t.columns[static_cast<size_t>(2 + l)].push_back(q.c[static_cast<size_t>(l)]);
  }
  return t;
}

Table snapshot_table(const Sim2DState& state, const Grid2D& grid, int m) {
  Table t;
  t.header = {"x", "y", "s"};
  for (const auto& n : component_names(m)) t.header.push_back(n);
  t.header.push_back("K");
  t.header.push_back("p");
  t.columns.assign(t.header.size(), {});
  const auto w = static_cast<size_t>(m);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const auto c = static_cast<size_t>(grid.cell(i, j));
      const State& q = state.cells[c];
      t.columns[0].push_back((i + 0.5) * grid.dx());
      t.columns[1].push_back((j + 0.5) * grid.dy());
      t.columns[2].push_back(q.s);
      for (size_t l = 0; l < w; ++l) t.columns[3 + l].push_back(q.c[l]);
      t.columns[3 + w].push_back(state.K[c]);
      t.columns[4 + w].push_back(state.p.empty() ? std::nan("") : state.p[c]);
    }
  return t;
}

RunOutcome run_experiment(const RunConfig& config, const std::string& out_dir) {
  RunOutcome outcome;
  json manifest = {{"name", config.name},
                   {"dimension", config.dimension},
                   {"config", serialize(config)}};
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(config);
    fs::create_directories(out_dir);
    manifest["diagnostics"] = config.dimension == 1 ? run_1d(config, out_dir, outcome)
                                                    : run_2d(config, out_dir, outcome);
    outcome.ok = outcome.violations.total() == 0;
    if (!outcome.ok)
      outcome.error = "invariant violations: " + std::to_string(outcome.violations.total());
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
  }
  outcome.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json snaps = json::array();
  for (const SnapshotFile& f : outcome.snapshots) snaps.push_back({{"t", f.t}, {"csv", f.csv}, {"vtk", f.vtk}});
  manifest["status"] = outcome.ok ? "ok" : "failed";
  manifest["error"] = outcome.error;
  manifest["steps"] = outcome.steps;
  manifest["wall_time_s"] = outcome.wall_time;
  manifest["invariant_violations"] = outcome.violations.total();
  manifest["violations"] = violations_json(outcome.violations);
  manifest["snapshots"] = snaps;
  manifest["warnings"] = outcome.warnings;
  write_manifest(out_dir, manifest);
  return outcome;
}

void write_failure_manifest(const std::string& out_dir, const std::string& name,
                            const std::string& error) {
  write_manifest(out_dir, {{"name", name},
                           {"status", "failed"},
                           {"error", error},
                           {"steps", 0},
                           {"invariant_violations", 0},
                           {"snapshots", json::array()}});
}

std::vector<ConvergenceTable> convergence_study(const RunConfig& base,
                                                const std::vector<FluxKind>& fluxes,
                                                const std::vector<int>& grids,
                                                const ReferenceSpec& reference) {
  validate(base);
  if (base.dimension != 1) throw std::invalid_argument("convergence: needs a 1D config");
  Run1DConfig ref = base.to_1d();
  ref.grid.n_cells = reference.cells;
  ref.step.flux = reference.flux;
  ref.step.order = reference.order;
  ref.output_times.clear();
  if (!ref.K.empty()) ref.K.assign(static_cast<size_t>(reference.cells), base.permeability);
  const Sim1DState ref_state = run1d(ref).final_state;
  const int width = 1 + base.model.m;

  std::vector<ConvergenceTable> tables;
  for (FluxKind flux : fluxes) {
    ConvergenceTable table;
    table.flux = flux;
    std::vector<Sim1DState> finals;
    for (int n : grids) {
      RunConfig c = base;
      c.cells = n;
      c.step.flux = flux;
      c.output_times.clear();
      finals.push_back(run1d(c.to_1d()).final_state);
    }
    for (size_t g = 0; g < grids.size(); ++g) {
      ConvergenceRow row;
      row.cells = grids[g];
      row.h = 1.0 / grids[g];
      for (int k = 0; k < width; ++k) {
        const auto r = profile(ref_state, k);
        if (g + 1 < grids.size()) {
          const ErrorPair e = l1_error_and_order(profile(finals[g], k), profile(finals[g + 1], k), r);
          row.error.push_back(e.e_coarse);
          row.alpha.push_back(e.alpha);
        } else {
          row.error.push_back(l1_error(profile(finals[g], k), r));
          row.alpha.push_back(std::nullopt);
        }
      }
      table.rows.push_back(row);
    }
    tables.push_back(table);
  }
  return tables;
}

Table convergence_csv(const ConvergenceTable& table, int m) {
  Table t;
  t.header = {"cells", "h", "e_s", "alpha_s"};
  for (const auto& n : component_names(m)) {
    t.header.push_back("e_" + n);
    t.header.push_back("alpha_" + n);
  }
  t.columns.assign(t.header.size(), {});
  for (const ConvergenceRow& row : table.rows) {
    t.columns[0].push_back(row.cells);
    t.columns[1].push_back(row.h);
    for (size_t k = 0; k < row.error.size(); ++k) {
      t.columns[2 + 2 * k].push_back(row.error[k]);
      t.columns[3 + 2 * k].push_back(row.alpha[k] ? *row.alpha[k] : std::nan(""));
    }
  }
  return t;
}

Table fan_table(const WaveFan& fan, const PhysicsModel& model, double xi_min, double xi_max,
                int samples) {
  if (samples < 2 || !(xi_max > xi_min)) throw std::invalid_argument("fan: need samples >= 2, xi_max > xi_min");
  Table t;
  t.header = {"xi", "s"};
  for (const auto& n : component_names(model.m)) t.header.push_back(n);
  t.columns.assign(t.header.size(), {});
  for (int k = 0; k < samples; ++k) {
    const double xi = xi_min + (xi_max - xi_min) * k / (samples - 1);
    const State q = sample(fan, xi, model);
    t.columns[0].push_back(xi);
    t.columns[1].push_back(q.s);
    for (int l = 0; l < model.m; ++l)
      t.columns[static_cast<size_t>(2 + l)].push_back(q.c[static_cast<size_t>(l)]);
  }
  return t;
}

}  // namespace polyflood
