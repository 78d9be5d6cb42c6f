#include "polyflood/numflux.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyflood {

FluxKind parse_flux_kind(const std::string& name) {
  if (name == "dflu") return FluxKind::Dflu;
  if (name == "godunov") return FluxKind::Godunov;
  if (name == "upstream") return FluxKind::Upstream;
  throw std::invalid_argument("unknown flux '" + name + "' (dflu|godunov|upstream)");
}

std::string to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::Dflu: return "dflu";
    case FluxKind::Godunov: return "godunov";
    case FluxKind::Upstream: return "upstream";
  }
  return "dflu";
}

InterfaceFlux dflu(const InterfaceInput& in, const PhysicsModel& model) {
  const double mu_l = model.mu_w(in.left.c);
  const double mu_r = model.mu_w(in.right.c);
  const double th_l = argmin_flux_mu(mu_l, in.ctx_left, model);
  const double th_r = argmin_flux_mu(mu_r, in.ctx_right, model);
  const double fl = flux_mu(std::max(in.left.s, th_l), mu_l, in.ctx_left, model);
  const double fr = flux_mu(std::min(in.right.s, th_r), mu_r, in.ctx_right, model);
  const double F = std::max(fl, fr);
  return {F, F > 0.0};
}

namespace {

void refresh(DfluSideMemo& memo, const Conc& c, const FluxContext& ctx, const PhysicsModel& model) {
  if (memo.valid && memo.c == c && memo.ctx.v == ctx.v && memo.ctx.K == ctx.K &&
      memo.ctx.dir == ctx.dir)
    return;
  memo.c = c;
  memo.ctx = ctx;
  memo.mu_w = model.mu_w(c);
  memo.theta = argmin_flux_mu(memo.mu_w, ctx, model);
  memo.valid = true;
}

}  // namespace

InterfaceFlux dflu(const InterfaceInput& in, const PhysicsModel& model, DfluSideMemo& left,
                   DfluSideMemo& right) {
  refresh(left, in.left.c, in.ctx_left, model);
  refresh(right, in.right.c, in.ctx_right, model);
  const double fl = flux_mu(std::max(in.left.s, left.theta), left.mu_w, in.ctx_left, model);
  const double fr = flux_mu(std::min(in.right.s, right.theta), right.mu_w, in.ctx_right, model);
  const double F = std::max(fl, fr);
  return {F, F > 0.0};
}

InterfaceFlux godunov(const InterfaceInput& in, const PhysicsModel& model) {
  RiemannOptions opt;
  opt.allow_increasing_c = true;
  opt.c_equal_tol = 1e-14;
  return godunov_interface_flux({in.left, in.right, in.ctx_left, in.ctx_right}, model, opt);
}

InterfaceFlux upstream_mobility(const InterfaceInput& in, const PhysicsModel& model) {
  const double v = in.ctx_left.v;
  const bool vertical = model.gravity_on && in.ctx_left.dir == Direction::Vertical;
  const double drho = vertical ? model.rho_w_g - model.rho_o_g : 0.0;
  const double lw_l = in.ctx_left.K * water_mobility(in.left.s, in.left.c, model);
  const double lo_l = in.ctx_left.K * oil_mobility(in.left.s, model);
  const double lw_r = in.ctx_right.K * water_mobility(in.right.s, in.right.c, model);
  const double lo_r = in.ctx_right.K * oil_mobility(in.right.s, model);
  // Each phase moves with the sign of v minus the buoyancy driven by the other
  // phase's mobility, evaluated on the left side.
  const double lw = v - drho * lo_l > 0.0 ? lw_l : lw_r;
  const double lo = v + drho * lw_l > 0.0 ? lo_l : lo_r;
  const double tot = lw + lo;
  if (tot <= 0.0) return {0.0, true};
  const double F = lw / tot * (v - drho * lo);
  return {F, F > 0.0};
}

InterfaceFlux interface_flux(FluxKind kind, const InterfaceInput& in, const PhysicsModel& model) {
  switch (kind) {
    case FluxKind::Dflu: return dflu(in, model);
    case FluxKind::Godunov: return godunov(in, model);
    case FluxKind::Upstream: return upstream_mobility(in, model);
  }
  return dflu(in, model);
}

void concentration_flux(const InterfaceInput& in, const InterfaceFlux& flux, int m, double* G) {
  const Conc& c = flux.from_left ? in.left.c : in.right.c;
  for (int l = 0; l < m; ++l) G[l] = flux.F == 0.0 ? 0.0 : c[static_cast<size_t>(l)] * flux.F;
}

}  // namespace polyflood
