#ifndef POLYFLOOD_SCHEME_HPP_
#define POLYFLOOD_SCHEME_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "polyflood/physics.hpp"

namespace polyflood {

struct LimiterConfig {
  double theta = 2.0;
  // Throws std::invalid_argument("theta out of [1,2]").
  void validate() const;
};

double minmod_slope(double u_minus, double u_center, double u_plus, const LimiterConfig& cfg);

struct FaceValues {
  double left;   // value at the cell's left face
  double right;  // value at the cell's right face
};

FaceValues reconstruct_faces(double u_minus, double u_center, double u_plus,
                             const LimiterConfig& cfg);

using Residual = std::function<void(const std::vector<double>& u, std::vector<double>& r)>;

// Shu-Osher three-stage scheme; r is overwritten by the residual, du/dt = -R(u).
std::vector<double> ssp_rk3(const std::vector<double>& u, const Residual& residual, double dt);

struct CflBound {
  double M = 0.0;
  double safety = 1.0;
};

// 1D: safety*dx/(2M); 2D: safety*min(dx,dy)/(4M). Throws on M <= 0.
double cfl_dt(const CflBound& bound, double dx, std::optional<double> dy, int dimension);

// Range of flux contexts a run can present at its interfaces.
struct SpeedBox {
  double v_min = 0.0;
  double v_max = 0.0;
  double K_min = 1.0;
  double K_max = 1.0;
  Direction dir = Direction::Horizontal;
  // Concentrations the run can reach; unset means [0, c_max] in every component.
  std::optional<Conc> c_min;
  std::optional<Conc> c_max;
};

// sup of |F_s| and |F|/(s + h_l) over s in [0,1], c in the box range and the box.
// Both are affine in (v, K) at fixed s and mu_w, so box corners suffice.
double wave_speed_bound(const PhysicsModel& model, const SpeedBox& box);

}  // namespace polyflood

#endif  // POLYFLOOD_SCHEME_HPP_
