#ifndef POLYFLOOD_SOLVER2D_HPP_
#define POLYFLOOD_SOLVER2D_HPP_

#include <vector>

#include "polyflood/fields.hpp"
#include "polyflood/pressure2d.hpp"
#include "polyflood/solver1d.hpp"

namespace polyflood {

struct Sim2DState {
  std::vector<State> cells;
  std::vector<double> K;
  std::vector<double> p;
  FaceVelocities vel;
  double t = 0.0;
  long n = 0;
};

// Transport boundary data; the pressure solve reads only the BC geometry.
struct TransportBC {
  PressureBC bc;
  Conc c_inlet{};
};

// Cell states padded by one ghost layer, (nx+2)*(ny+2), index (j+1)*(nx+2)+(i+1).
// Inlet ghosts hold s = 1 and the injected c; wall and outlet ghosts copy the
// adjacent cell (mirror and zero-gradient coincide for one layer). Corners are unused.
std::vector<State> apply_boundary(const std::vector<State>& cells, const Grid2D& grid,
                                  const TransportBC& tbc);

struct Step2DDiagnostics {
  double dt = 0.0;
  double M = 0.0;
  int cg_iterations = 0;
  bool pressure_solved = false;
  double s_bound_excess = 0.0;
  // Step output against the five-point range of the step input. SSP-RK3 widens
  // the dependency stencil, so this can be positive at second order.
  double c_local_excess = 0.0;
  // Each forward Euler stage against the five-point range of that stage's input.
  double c_stage_excess = 0.0;
  // Water, then each conserved polymer quantity.
  std::vector<double> conservation_residual;
};

// One transport step with fixed face velocities. Wall faces carry no flux.
Step2DDiagnostics transport_update(Sim2DState& state, const Grid2D& grid,
                                   const PhysicsModel& model, const TransportBC& tbc,
                                   const StepOptions& step, double dt);

struct Run2DConfig {
  PhysicsModel model;
  StepOptions step;
  Grid2D grid;
  TransportBC boundary;
  double cfl_safety = 1.0;
  double T = 1.0;
  State initial{};
  FieldSpec field;
  // Overrides `field` when non-empty.
  std::vector<double> K;
  int pressure_every = 1;
  CgOptions cg;
  std::vector<double> output_times;
};

// Pressure and velocities from the current saturation and concentrations.
void solve_pressure(Sim2DState& state, const Run2DConfig& config, int* iterations = nullptr);

// Bound over the current face velocities: x-faces horizontal, y-faces vertical with side K;
// c over the range of the cells and the injected concentrations.
double velocity_wave_speed_bound(const Sim2DState& state, const Grid2D& grid,
                                 const PhysicsModel& model, const Conc& c_inlet);

// Pressure (every pressure_every steps), CFL from the current velocities, transport.
// dt_cap clips the step to hit output times.
Step2DDiagnostics sequential_step(Sim2DState& state, const Run2DConfig& config, double dt_cap);

Sim2DState initial_state(const Run2DConfig& config);

struct Run2DResult {
  Sim2DState final_state;
  std::vector<Sim2DState> snapshots;
  std::vector<std::string> warnings;
  long steps = 0;
  long cg_iterations = 0;
  int max_cg_iterations = 0;
  double max_conservation_residual = 0.0;
  double max_s_bound_excess = 0.0;
  double max_c_local_excess = 0.0;
  double max_c_stage_excess = 0.0;
  ViolationCounts violations;
};

Run2DResult run2d(const Run2DConfig& config);

}  // namespace polyflood

#endif  // POLYFLOOD_SOLVER2D_HPP_
