#ifndef POLYFLOOD_SOLVER1D_HPP_
#define POLYFLOOD_SOLVER1D_HPP_

#include <optional>
#include <vector>

#include "polyflood/numflux.hpp"
#include "polyflood/physics.hpp"
#include "polyflood/scheme.hpp"

namespace polyflood {

// Unique c in [0, c_max] with s*c + a(c) = rhs. Newton from c_guess (1e-12,
// 50 iterations) with bisection fallback; affine laws use the closed form.
// Throws std::range_error when the root leaves [0, c_max] by more than 1e-10.
double recover_concentration(double s, double rhs, const AdsorptionLaw& law, double c_max,
                             double c_guess = 0.0);

struct Grid1D {
  int n_cells = 100;
  double dx() const { return 1.0 / n_cells; }
  double center(int i) const { return (i + 0.5) / n_cells; }
};

// Cells are interior only; the single ghost on each side is frozen at
// ghost_left / ghost_right (Dirichlet end states).
struct Sim1DState {
  std::vector<State> cells;
  std::vector<double> K;
  State ghost_left;
  State ghost_right;
  double K_left = 1.0;
  double K_right = 1.0;
  double v = 0.0;
  Direction dir = Direction::Vertical;
  double t = 0.0;
  long n = 0;
};

struct StepDiagnostics {
  double dt = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
  // Residuals of the discrete conservation identities (water, then each polymer).
  std::vector<double> conservation_residual;
  std::vector<double> tv_c;
  // Largest excursions beyond the respective bounds; <= 0 means satisfied.
  double s_bound_excess = 0.0;
  // Step output against the three-point range of the step input; SSP-RK3 widens
  // the dependency stencil, so this can be positive at second order.
  double c_local_excess = 0.0;
  // Each forward Euler stage against the three-point range of that stage's input.
  double c_stage_excess = 0.0;
  double tv_increase = 0.0;
  // Largest |F_s| or |F|/(s+h) met at a face this step, for the CFL bound check.
  double max_face_speed = 0.0;
};

// Thresholds for counting invariant violations in run results.
inline constexpr double kBoundTolerance = 1e-12;
inline constexpr double kConservationTolerance = 1e-10;

// Steps that broke an invariant. The concentration and TV counts are kept only
// for DFLU and Godunov; upstream mobility carries no local max principle.
struct ViolationCounts {
  long s_bound = 0;
  long c_local = 0;
  long tv = 0;
  long conservation = 0;
  long total() const { return s_bound + c_local + tv + conservation; }
  void record(FluxKind flux, double s_excess, double c_stage_excess, double tv_increase,
              const std::vector<double>& conservation_residual);
};

struct StepOptions {
  FluxKind flux = FluxKind::Dflu;
  int order = 2;
  LimiterConfig limiter;
};

StepDiagnostics first_order_step(Sim1DState& state, const PhysicsModel& model, FluxKind flux,
                                 double dt);
StepDiagnostics high_order_step(Sim1DState& state, const PhysicsModel& model, FluxKind flux,
                                const LimiterConfig& cfg, double dt);

struct Run1DConfig {
  PhysicsModel model;
  StepOptions step;
  Grid1D grid;
  double cfl_safety = 1.0;
  double T = 1.0;
  double v = 0.2;
  Direction dir = Direction::Vertical;
  State left{0.1, {1.0, 0.6}};
  State right{1.0, {0.0, 0.0}};
  double x_jump = 0.4;
  // Per-cell K; empty means K = 1 everywhere.
  std::vector<double> K;
  // Snapshot times in (0, T); T itself is always the final state.
  std::vector<double> output_times;
};

struct Run1DResult {
  Sim1DState final_state;
  std::vector<Sim1DState> snapshots;
  double M = 0.0;
  double dt = 0.0;
  long steps = 0;
  // Worst values over all steps.
  double max_conservation_residual = 0.0;
  double max_s_bound_excess = 0.0;
  double max_c_local_excess = 0.0;
  double max_c_stage_excess = 0.0;
  double max_tv_increase = 0.0;
  double max_face_speed = 0.0;
  ViolationCounts violations;
  // Largest departure of the end cells from the frozen ghost states.
  double boundary_leak = 0.0;
  std::vector<double> mass_water;  // per recorded step, including t = 0
};

Sim1DState initial_state(const Run1DConfig& config);
Run1DResult run1d(const Run1DConfig& config);

// Wave-speed bound for a 1D run: contexts v with K over the run's range.
double run_wave_speed_bound(const Run1DConfig& config);

struct ErrorPair {
  double e_coarse;
  double e_fine;
  std::optional<double> alpha;  // absent when either error is 0
};

// L1 distance between a coarse profile and the cell averages of a reference
// whose cell count is a multiple of the coarse one; throws otherwise.
double l1_error(const std::vector<double>& coarse, const std::vector<double>& reference);
ErrorPair l1_error_and_order(const std::vector<double>& coarse, const std::vector<double>& fine,
                             const std::vector<double>& reference);

// Component extraction: index 0 is s, l+1 is c_l.
std::vector<double> profile(const Sim1DState& state, int component);

}  // namespace polyflood

#endif  // POLYFLOOD_SOLVER1D_HPP_
