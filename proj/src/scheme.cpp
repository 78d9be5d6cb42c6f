#include "polyflood/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyflood {

void LimiterConfig::validate() const {
  if (!(theta >= 1.0 && theta <= 2.0)) throw std::invalid_argument("theta out of [1,2]");
}

double minmod_slope(double u_minus, double u_center, double u_plus, const LimiterConfig& cfg) {
  const double a = cfg.theta * (u_center - u_minus);
  const double b = 0.5 * (u_plus - u_minus);
  const double c = cfg.theta * (u_plus - u_center);
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

FaceValues reconstruct_faces(double u_minus, double u_center, double u_plus,
                             const LimiterConfig& cfg) {
  const double half = 0.5 * minmod_slope(u_minus, u_center, u_plus, cfg);
  return {u_center - half, u_center + half};
}

std::vector<double> ssp_rk3(const std::vector<double>& u, const Residual& residual, double dt) {
  const size_t n = u.size();
  std::vector<double> r(n), v1(n), v2(n), out(n);
  residual(u, r);
  for (size_t i = 0; i < n; ++i) v1[i] = u[i] - dt * r[i];
  residual(v1, r);
  for (size_t i = 0; i < n; ++i) v2[i] = 0.75 * u[i] + 0.25 * (v1[i] - dt * r[i]);
  residual(v2, r);
  for (size_t i = 0; i < n; ++i) out[i] = u[i] / 3.0 + 2.0 / 3.0 * (v2[i] - dt * r[i]);
  return out;
}

double cfl_dt(const CflBound& bound, double dx, std::optional<double> dy, int dimension) {
  if (!(bound.M > 0.0)) throw std::invalid_argument("cfl: M must be > 0");
  if (dimension == 1) return bound.safety * dx / (2.0 * bound.M);
  const double h = dy ? std::min(dx, *dy) : dx;
  return bound.safety * h / (4.0 * bound.M);
}

namespace {

double min_adsorption_slope(const PhysicsModel& model) {
  double h = HUGE_VAL;
  for (int l = 0; l < model.m; ++l) {
    const auto& law = model.ads(l);
    if (law.affine()) {
      h = std::min(h, law.a1);
      continue;
    }
    for (int k = 0; k <= 200; ++k) h = std::min(h, law.slope(model.c_max * k / 200.0));
  }
  return h;
}

// Maximizes a smooth nonnegative g on [0,1]: grid scan, then golden section
// around the best node.
template <class G>
double maximize(G g, int nodes) {
  int best = 0;
  double best_g = g(0.0);
  for (int k = 1; k <= nodes; ++k) {
    const double val = g(static_cast<double>(k) / nodes);
    if (val > best_g) {
      best_g = val;
      best = k;
    }
  }
  double a = std::max(0.0, (best - 1.0) / nodes);
  double b = std::min(1.0, (best + 1.0) / nodes);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 40; ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + phi * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - phi * (b - a);
      g1 = g(x1);
    }
  }
  return std::max({best_g, g1, g2});
}

}  // namespace

double wave_speed_bound(const PhysicsModel& model, const SpeedBox& box) {
  Conc full{};
  for (int l = 0; l < model.m; ++l) full[static_cast<size_t>(l)] = model.c_max;
  // mu_w is nondecreasing in each c_l, so the range endpoints bound it.
  const double mu_lo = model.mu_w(box.c_min.value_or(Conc{}));
  const double mu_hi = model.mu_w(box.c_max.value_or(full));
  const double h_min = model.m > 0 ? min_adsorption_slope(model) : HUGE_VAL;
  auto corner = [&](double v, double K) {
    const FluxContext ctx{v, K, box.dir};
    auto over_s = [&](double t) {
      const double mu = mu_lo + (mu_hi - mu_lo) * t;
      double best =
          maximize([&](double s) { return std::abs(flux_ds_mu(s, mu, ctx, model)); }, 120);
      if (model.m > 0)
        best = std::max(best, maximize([&](double s) {
                          return std::abs(flux_mu(s, mu, ctx, model)) / (s + h_min);
                        }, 120));
      return best;
    };
    return mu_hi > mu_lo ? maximize(over_s, 12) : over_s(0.0);
  };
  // Without gravity F = v f: the bound is |v| times the unit-velocity bound.
  if (gravity_coefficient(FluxContext{1.0, box.K_max, box.dir}, model) == 0.0 &&
      gravity_coefficient(FluxContext{1.0, box.K_min, box.dir}, model) == 0.0)
    return std::max(std::abs(box.v_min), std::abs(box.v_max)) * corner(1.0, box.K_max);
  // Otherwise F_s is affine in v and in K for each s, so corners suffice.
  double M = 0.0;
  for (double v : {box.v_min, box.v_max})
    for (double K : {box.K_min, box.K_max}) M = std::max(M, corner(v, K));
  return M;
}

}  // namespace polyflood
