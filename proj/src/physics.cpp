#include "polyflood/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace polyflood {

double ViscosityLaw::operator()(const Conc& c, int m) const {
  double mu = base;
  for (int l = 0; l < m; ++l) {
    const double cl = c[static_cast<size_t>(l)] > 0.0 ? c[static_cast<size_t>(l)] : 0.0;
    switch (kind) {
      case ViscosityKind::LinearSum: mu += cl; break;
      case ViscosityKind::SqrtSum: mu += std::sqrt(cl); break;
      case ViscosityKind::Affine: mu += coeff[static_cast<size_t>(l)] * cl; break;
    }
  }
  return mu;
}

double AdsorptionLaw::value(double c) const { return custom_value ? custom_value(c) : a0 + a1 * c; }

double AdsorptionLaw::slope(double c) const { return custom_slope ? custom_slope(c) : a1; }

void PhysicsModel::validate() const {
  if (!(mu_o > 0.0)) throw std::invalid_argument("physics.mu_o must be > 0");
  if (m < 0 || m > kMaxComponents) throw std::invalid_argument("physics.m out of [0,4]");
  if (!(c_max > 0.0)) throw std::invalid_argument("physics.c_max must be > 0");
  if (!std::isfinite(rho_w_g) || !std::isfinite(rho_o_g))
    throw std::invalid_argument("physics.rho_g must be finite");
  if (!(viscosity.base > 0.0)) throw std::invalid_argument("physics.mu_w_base must be > 0");
  if (viscosity.kind == ViscosityKind::Affine) {
    if (static_cast<int>(viscosity.coeff.size()) != m)
      throw std::invalid_argument("physics.mu_w_coeff needs m entries");
    for (double a : viscosity.coeff)
      if (!(a >= 0.0)) throw std::invalid_argument("physics.mu_w_coeff must be >= 0");
  }
  if (static_cast<int>(adsorption.size()) != m)
    throw std::invalid_argument("physics.adsorption needs m laws");
  for (const auto& law : adsorption) {
    if (law.affine() && !(law.a1 > 0.0))
      throw std::invalid_argument("physics.adsorption_a1 must be > 0");
  }
}

double water_mobility(double s, const Conc& c, const PhysicsModel& model) {
  return s * s / model.mu_w(c);
}

double oil_mobility(double s, const PhysicsModel& model) { return (1.0 - s) * (1.0 - s) / model.mu_o; }

double fractional_flow(double s, const Conc& c, const PhysicsModel& model) {
  const double lw = water_mobility(s, c, model);
  const double lo = oil_mobility(s, model);
  return lw / (lw + lo);
}

double gravity_coefficient(const FluxContext& ctx, const PhysicsModel& model) {
  if (!model.gravity_on || ctx.dir != Direction::Vertical) return 0.0;
  return (model.rho_w_g - model.rho_o_g) * ctx.K;
}

double flux_mu(double s, double mu_w, const FluxContext& ctx, const PhysicsModel& model) {
  const double lw = s * s / mu_w;
  const double lo = (1.0 - s) * (1.0 - s) / model.mu_o;
  const double f = lw / (lw + lo);
  return (ctx.v - gravity_coefficient(ctx, model) * lo) * f;
}

double flux_ds_mu(double s, double mu_w, const FluxContext& ctx, const PhysicsModel& model) {
  const double lw = s * s / mu_w;
  const double lo = (1.0 - s) * (1.0 - s) / model.mu_o;
  const double tot = lw + lo;
  const double pre = 2.0 * s * (1.0 - s) / (mu_w * model.mu_o * tot * tot);
  return pre * (ctx.v + gravity_coefficient(ctx, model) * (s * lw - (1.0 - s) * lo));
}

double flux(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model) {
  return flux_mu(s, model.mu_w(c), ctx, model);
}

double flux_ds(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model) {
  return flux_ds_mu(s, model.mu_w(c), ctx, model);
}

std::optional<double> cubic_closed_form(double r, double z) {
  const double alpha = -27.0 * r + 27.0 * r * r - 27.0 * z - 54.0 * r * z - 27.0 * r * r * z;
  const double beta = 2916.0 * r * r * r + alpha * alpha;
  const double w = alpha + std::sqrt(beta);
  if (!(w > 0.0)) return std::nullopt;
  const double q = std::cbrt(w);
  const double c2 = std::cbrt(2.0);
  return (1.0 - 3.0 * c2 * r / q + q / (3.0 * c2)) / (1.0 + r);
}

std::optional<CriticalPoint> critical_saturation_mu(double mu_w, const FluxContext& ctx,
                                                    const PhysicsModel& model) {
  const double d = gravity_coefficient(ctx, model);
  if (d == 0.0) return std::nullopt;
  const double r = model.mu_o / mu_w;
  const double z = ctx.v * model.mu_o / d;
  // g increases from z-1 at s=0 to r+z at s=1.
  if (!(z < 1.0 && z > -r)) return std::nullopt;
  auto g = [&](double s) { return r * s * s * s - (1.0 - s) * (1.0 - s) * (1.0 - s) + z; };
  double s = -1.0;
  if (auto root = cubic_closed_form(r, z); root && *root > 0.0 && *root < 1.0) {
    s = *root;
    for (int it = 0; it < 3; ++it) {
      const double dg = 3.0 * r * s * s + 3.0 * (1.0 - s) * (1.0 - s);
      const double next = s - g(s) / dg;
      if (!(next > 0.0 && next < 1.0)) break;
      s = next;
    }
    if (std::abs(g(s)) > 1e-12 * (1.0 + r + std::abs(z))) s = -1.0;
  }
  if (s < 0.0) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    s = 0.5 * (lo + hi);
  }
  return CriticalPoint{s, d > 0.0 ? ExtremumKind::Minimum : ExtremumKind::Maximum};
}

std::optional<CriticalPoint> critical_saturation(const Conc& c, const FluxContext& ctx,
                                                 const PhysicsModel& model) {
  return critical_saturation_mu(model.mu_w(c), ctx, model);
}

double argmin_flux_mu(double mu_w, const FluxContext& ctx, const PhysicsModel& model) {
  // F(0) = 0 and F(1) = v; ties go to the smaller s.
  double best_s = 0.0;
  double best_f = 0.0;
  if (auto cp = critical_saturation_mu(mu_w, ctx, model); cp && cp->kind == ExtremumKind::Minimum) {
    const double fc = flux_mu(cp->s, mu_w, ctx, model);
    if (fc < best_f) {
      best_s = cp->s;
      best_f = fc;
    }
  }
  if (ctx.v < best_f) best_s = 1.0;
  return best_s;
}

double argmin_flux(const Conc& c, const FluxContext& ctx, const PhysicsModel& model) {
  return argmin_flux_mu(model.mu_w(c), ctx, model);
}

Eigenvalues eigenvalues(double s, const Conc& c, const FluxContext& ctx, const PhysicsModel& model) {
  const double mu = model.mu_w(c);
  Eigenvalues ev;
  ev.lambda_s = flux_ds_mu(s, mu, ctx, model);
  const double f = flux_mu(s, mu, ctx, model);
  for (int l = 0; l < model.m; ++l) {
    const auto k = static_cast<size_t>(l);
    ev.lambda_c[k] = f / (s + model.ads(l).slope(c[k]));
  }
  return ev;
}

double secant_adsorption(double c_left, double c_right, const AdsorptionLaw& law) {
  if (law.affine()) return law.a1;
  const double dc = c_right - c_left;
  if (std::abs(dc) <= 1e-12 * (1.0 + std::abs(c_left))) return law.slope(0.5 * (c_left + c_right));
  return (law.value(c_right) - law.value(c_left)) / dc;
}

}  // namespace polyflood
