#ifndef POLYFLOOD_PHYSICS_HPP_
#define POLYFLOOD_PHYSICS_HPP_

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace polyflood {

inline constexpr int kMaxComponents = 4;

using Conc = std::array<double, kMaxComponents>;

struct State {
  double s = 0.0;
  Conc c{};
};

enum class ViscosityKind { LinearSum, SqrtSum, Affine };

// mu_w(c) = base + sum_l coeff_l * g(c_l), g = identity or sqrt.
// LinearSum and SqrtSum use unit coefficients.
struct ViscosityLaw {
  ViscosityKind kind = ViscosityKind::LinearSum;
  double base = 0.5;
  std::vector<double> coeff;

  double operator()(const Conc& c, int m) const;
};

// a(c) = a0 + a1*c unless a custom pair is installed (tests only; not serializable).
struct AdsorptionLaw {
  double a0 = 1.0;
  double a1 = 0.5;
  std::function<double(double)> custom_value;
  std::function<double(double)> custom_slope;

  double value(double c) const;
  double slope(double c) const;
  bool affine() const { return !custom_value; }
};

struct PhysicsModel {
  double mu_o = 1.0;
  ViscosityLaw viscosity;
  double rho_w_g = 2.0;
  double rho_o_g = 1.0;
  bool gravity_on = true;
  int m = 2;
  double c_max = 1.0;
  std::vector<AdsorptionLaw> adsorption{AdsorptionLaw{}, AdsorptionLaw{}};

  double mu_w(const Conc& c) const { return viscosity(c, m); }
  const AdsorptionLaw& ads(int l) const { return adsorption[static_cast<size_t>(l)]; }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class Direction { Horizontal, Vertical };

struct FluxContext {
  double v = 0.0;
  double K = 1.0;
  Direction dir = Direction::Horizontal;
};

double water_mobility(double s, const Conc& c, const PhysicsModel& model);
double oil_mobility(double s, const PhysicsModel& model);
double fractional_flow(double s, const Conc& c, const PhysicsModel& model);

// (rho_w - rho_o) g K for a vertical context with gravity on, else 0.
double gravity_coefficient(const FluxContext& ctx, const PhysicsModel& model);

// Kernels taking mu_w directly; every public flux routine reduces to these.
double flux_mu(double s, double mu_w, const FluxContext& ctx, const PhysicsModel& model);
double flux_ds_mu(double s, double mu_w, const FluxContext& ctx, const PhysicsModel& model);

double flux(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model);
double flux_ds(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model);

enum class ExtremumKind { Minimum, Maximum };

struct CriticalPoint {
  double s;
  ExtremumKind kind;
};

// Root in (0,1) of r s^3 - (1-s)^3 + z = 0, the unique zero of F_s there.
std::optional<CriticalPoint> critical_saturation_mu(double mu_w, const FluxContext& ctx,
                                                    const PhysicsModel& model);
std::optional<CriticalPoint> critical_saturation(const Conc& c, const FluxContext& ctx,
                                                 const PhysicsModel& model);

// Closed-form cubic root without guards; nullopt when alpha + sqrt(beta) <= 0.
std::optional<double> cubic_closed_form(double r, double z);

double argmin_flux_mu(double mu_w, const FluxContext& ctx, const PhysicsModel& model);
double argmin_flux(const Conc& c, const FluxContext& ctx, const PhysicsModel& model);

struct Eigenvalues {
  double lambda_s = 0.0;
  std::array<double, kMaxComponents> lambda_c{};
};

Eigenvalues eigenvalues(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model);

double secant_adsorption(double c_left, double c_right, const AdsorptionLaw& law);

}  // namespace polyflood

#endif  // POLYFLOOD_PHYSICS_HPP_
