#ifndef POLYFLOOD_RIEMANN_HPP_
#define POLYFLOOD_RIEMANN_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "polyflood/physics.hpp"

namespace polyflood {

struct RiemannProblem {
  State left;
  State right;
  FluxContext ctx_left;
  FluxContext ctx_right;
};

class UnsupportedRiemann : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RiemannOptions {
  // The construction is symmetric in the ordering of c; strict mode still
  // refuses c_L < c_R so oracle uses stay on the classically documented branch.
  bool allow_increasing_c = false;
  // Concentration differences at or below this are treated as equal.
  double c_equal_tol = 0.0;
};

enum class WaveType { Rarefaction, Shock, Contact };

struct Wave {
  WaveType type;
  State in;
  State out;
  double speed_lo;
  double speed_hi;
  FluxContext ctx;
};

// Waves ordered left to right; speed_lo == speed_hi for shocks and contacts.
struct WaveFan {
  State left;
  State right;
  std::vector<Wave> waves;
  double hbar = 0.0;
  // One letter per wave: R rarefaction, S shock, C contact.
  std::string pattern;
};

WaveFan solve(const RiemannProblem& problem, const PhysicsModel& model,
              const RiemannOptions& options = {});

State sample(const WaveFan& fan, double xi, const PhysicsModel& model);

// s_bar on the target curve with F(s_bar)/(s_bar+hbar) equal to the source ratio
// and F_s(s_bar) >= 0; throws UnsupportedRiemann when that branch has no root.
double match_c_wave(double s_from, const Conc& c_from, const Conc& c_to, double hbar,
                    const FluxContext& ctx_from, const FluxContext& ctx_to,
                    const PhysicsModel& model);

struct InterfaceFlux {
  double F = 0.0;
  // Side whose concentrations are carried by F; ignored when F == 0.
  bool from_left = true;
};

// Value at xi = 0 of the exact fan without building it.
InterfaceFlux godunov_interface_flux(const RiemannProblem& problem, const PhysicsModel& model,
                                     const RiemannOptions& options = {});

// Scalar Godunov flux (Osher form) for fixed concentration and context.
double scalar_godunov_flux(double s_left, double s_right, double mu_w, const FluxContext& ctx,
                           const PhysicsModel& model);

// Speed of the c-contact: Lagrangian interface flux of w_t + (F/(s+hbar))_psi = 0.
struct ContactTraces {
  double sigma;
  double s_minus;
  double s_plus;
};
ContactTraces contact_traces(const RiemannProblem& problem, double hbar, const PhysicsModel& model);

}  // namespace polyflood

#endif  // POLYFLOOD_RIEMANN_HPP_
