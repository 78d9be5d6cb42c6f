#ifndef POLYFLOOD_RUNNER_HPP_
#define POLYFLOOD_RUNNER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "polyflood/config.hpp"
#include "polyflood/io.hpp"
#include "polyflood/riemann.hpp"

namespace polyflood {

struct SnapshotFile {
  double t = 0.0;
  std::string csv;  // paths relative to the output directory; empty when not written
  std::string vtk;
};

struct RunOutcome {
  bool ok = false;
  std::string error;
  long steps = 0;
  double wall_time = 0.0;
  ViolationCounts violations;
  std::vector<SnapshotFile> snapshots;
  std::vector<std::string> warnings;
};

// 1D columns x_center, s, c1..cm; 2D columns x, y, s, c1..cm, K, p.
Table snapshot_table(const Sim1DState& state, const Grid1D& grid, int m);
Table snapshot_table(const Sim2DState& state, const Grid2D& grid, int m);

// Runs the config and writes the initial snapshot, one per output time in (0, T), the
// final state and manifest.json into out_dir (created if missing). Solver errors and
// invariant violations yield ok = false; the manifest is written in every case.
RunOutcome run_experiment(const RunConfig& config, const std::string& out_dir);

// Manifest for a run that never started, e.g. a config that failed to parse.
void write_failure_manifest(const std::string& out_dir, const std::string& name,
                            const std::string& error);

struct ReferenceSpec {
  int cells = 3200;
  FluxKind flux = FluxKind::Godunov;
  int order = 1;
};

// One grid of a convergence table. alpha fields pair this grid with the next finer one.
struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  std::vector<double> error;                 // s, then c_1..c_m
  std::vector<std::optional<double>> alpha;  // same layout; absent on the finest grid
};

struct ConvergenceTable {
  FluxKind flux = FluxKind::Dflu;
  std::vector<ConvergenceRow> rows;
};

// Runs every grid (coarse to fine) with the base 1D config and `flux`, and the reference
// once, then takes L1 errors against cell averages of the reference at t = T.
std::vector<ConvergenceTable> convergence_study(const RunConfig& base,
                                                const std::vector<FluxKind>& fluxes,
                                                const std::vector<int>& grids,
                                                const ReferenceSpec& reference);

// Columns cells, h, e_s, alpha_s, e_c1, alpha_c1, ...; a missing alpha is written as nan.
Table convergence_csv(const ConvergenceTable& table, int m);

// Columns xi, s, c1..cm sampled at `samples` evenly spaced xi in [xi_min, xi_max].
Table fan_table(const WaveFan& fan, const PhysicsModel& model, double xi_min, double xi_max,
                int samples);

}  // namespace polyflood

#endif  // POLYFLOOD_RUNNER_HPP_
