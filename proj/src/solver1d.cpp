#include "polyflood/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyflood {

double recover_concentration(double s, double rhs, const AdsorptionLaw& law, double c_max,
                             double c_guess) {
  double c;
  if (law.affine()) {
    c = (rhs - law.a0) / (s + law.a1);
  } else {
    auto g = [&](double x) { return s * x + law.value(x) - rhs; };
    c = std::clamp(c_guess, 0.0, c_max);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const double step = g(c) / (s + law.slope(c));
      c -= step;
      if (!std::isfinite(c)) break;
      if (std::abs(step) <= 1e-12 * (1.0 + std::abs(c))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      // g is increasing; widen past [0, c_max] slightly so tolerated overshoot is found.
      double lo = -1e-9 * (1.0 + c_max), hi = c_max * (1.0 + 1e-9) + 1e-9;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + c_max); ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
      }
      c = 0.5 * (lo + hi);
    }
  }
  if (c < -1e-10 || c > c_max + 1e-10 || !std::isfinite(c))
    throw std::range_error("recovered concentration " + std::to_string(c) + " outside [0, c_max]");
  return std::clamp(c, 0.0, c_max);
}

namespace {

class Stepper {
 public:
  Stepper(Sim1DState& st, const PhysicsModel& model, FluxKind flux, int order,
          const LimiterConfig& cfg)
      : st_(st), model_(model), flux_(flux), order_(order), cfg_(cfg),
        n_(static_cast<int>(st.cells.size())), m_(model.m), w_(1 + model.m) {}

  StepDiagnostics step(double dt) {
    const std::vector<State> old = st_.cells;
    std::vector<double> u0 = pack(old);
    bnd_.assign(2 * static_cast<size_t>(w_), 0.0);
    std::vector<double> u1;
    StepDiagnostics d;
    d.dt = dt;
    guess_ = old;
    dt_ = dt;
    stage_excess_ = m_ > 0 ? -HUGE_VAL : 0.0;
    if (order_ == 1) {
      std::vector<double> r(u0.size());
      residual(u0, r, 1.0);
      u1.resize(u0.size());
      for (size_t i = 0; i < u0.size(); ++i) u1[i] = u0[i] - dt * r[i];
    } else {
      // Stage weights of the effective update U + dt*(R0 + R1 + 4 R2)/6.
      int stage = 0;
      const double weight[3] = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
      u1 = ssp_rk3(u0, [&](const std::vector<double>& u, std::vector<double>& r) {
        residual(u, r, weight[stage++]);
      }, dt);
    }
    st_.cells = unpack(u1);
    st_.t += dt;
    st_.n += 1;
    diagnose(old, u0, u1, dt, d);
    d.c_stage_excess = stage_excess_;
    return d;
  }

 private:
  std::vector<double> pack(const std::vector<State>& cells) const {
    std::vector<double> u(cells.size() * static_cast<size_t>(w_));
    for (int i = 0; i < n_; ++i) {
      const State& c = cells[static_cast<size_t>(i)];
      u[idx(i, 0)] = c.s;
      for (int l = 0; l < m_; ++l)
        u[idx(i, 1 + l)] = c.s * c.c[static_cast<size_t>(l)] +
                           model_.ads(l).value(c.c[static_cast<size_t>(l)]);
    }
    return u;
  }

  std::vector<State> unpack(const std::vector<double>& u) const {
    std::vector<State> cells(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      State& c = cells[static_cast<size_t>(i)];
      c.s = u[idx(i, 0)];
      for (int l = 0; l < m_; ++l) {
        const auto k = static_cast<size_t>(l);
        c.c[k] = recover_concentration(c.s, u[idx(i, 1 + l)], model_.ads(l), model_.c_max,
                                       guess_[static_cast<size_t>(i)].c[k]);
      }
    }
    return cells;
  }

  size_t idx(int cell, int comp) const {
    return static_cast<size_t>(cell) * static_cast<size_t>(w_) + static_cast<size_t>(comp);
  }

  // Padded cell j in [0, n+1]; j = 0 and j = n+1 are the ghosts.
  const State& padded(const std::vector<State>& cells, int j) const {
    if (j == 0) return st_.ghost_left;
    if (j == n_ + 1) return st_.ghost_right;
    return cells[static_cast<size_t>(j - 1)];
  }
  double padded_K(int j) const {
    if (j == 0) return st_.K_left;
    if (j == n_ + 1) return st_.K_right;
    return st_.K[static_cast<size_t>(j - 1)];
  }
  FluxContext ctx(int j) const { return {st_.v, padded_K(j), st_.dir}; }

  double face_speed(const State& q, const FluxContext& c) const {
    const double mu = model_.mu_w(q.c);
    double sp = std::abs(flux_ds_mu(q.s, mu, c, model_));
    const double f = std::abs(flux_mu(q.s, mu, c, model_));
    for (int l = 0; l < m_; ++l)
      sp = std::max(sp, f / (q.s + model_.ads(l).slope(q.c[static_cast<size_t>(l)])));
    return sp;
  }

  void residual(const std::vector<double>& u, std::vector<double>& r, double bnd_weight) {
    const std::vector<State> cells = unpack(u);
    // Face states per padded cell: [left face, right face].
    std::vector<State> lf(static_cast<size_t>(n_ + 2)), rf(static_cast<size_t>(n_ + 2));
    for (int j = 0; j <= n_ + 1; ++j) {
      const State& q = padded(cells, j);
      lf[static_cast<size_t>(j)] = q;
      rf[static_cast<size_t>(j)] = q;
      if (order_ == 1 || j == 0 || j == n_ + 1) continue;
      const State& a = padded(cells, j - 1);
      const State& b = padded(cells, j + 1);
      const FaceValues fs = reconstruct_faces(a.s, q.s, b.s, cfg_);
      lf[static_cast<size_t>(j)].s = fs.left;
      rf[static_cast<size_t>(j)].s = fs.right;
      for (int l = 0; l < m_; ++l) {
        const auto k = static_cast<size_t>(l);
        const FaceValues fc = reconstruct_faces(a.c[k], q.c[k], b.c[k], cfg_);
        lf[static_cast<size_t>(j)].c[k] = fc.left;
        rf[static_cast<size_t>(j)].c[k] = fc.right;
      }
    }
    std::vector<double> F(static_cast<size_t>(n_ + 1));
    std::vector<double> G(static_cast<size_t>((n_ + 1) * w_), 0.0);
    for (int f = 0; f <= n_; ++f) {
      const InterfaceInput in{rf[static_cast<size_t>(f)], lf[static_cast<size_t>(f + 1)], ctx(f),
                              ctx(f + 1)};
      const InterfaceFlux fl = interface_flux(flux_, in, model_);
      F[static_cast<size_t>(f)] = fl.F;
      concentration_flux(in, fl, m_, &G[static_cast<size_t>(f * w_)]);
      max_speed_ = std::max({max_speed_, face_speed(in.left, in.ctx_left),
                             face_speed(in.right, in.ctx_right)});
    }
    const double inv = static_cast<double>(n_);
    for (int i = 0; i < n_; ++i) {
      const auto a = static_cast<size_t>(i), b = static_cast<size_t>(i + 1);
      r[idx(i, 0)] = (F[b] - F[a]) * inv;
      for (int l = 0; l < m_; ++l)
        r[idx(i, 1 + l)] = (G[b * static_cast<size_t>(w_) + static_cast<size_t>(l)] -
                            G[a * static_cast<size_t>(w_) + static_cast<size_t>(l)]) * inv;
    }
    const size_t last = static_cast<size_t>(n_);
    bnd_[0] += bnd_weight * F[0];
    bnd_[static_cast<size_t>(w_)] += bnd_weight * F[last];
    for (int l = 0; l < m_; ++l) {
      bnd_[static_cast<size_t>(1 + l)] += bnd_weight * G[static_cast<size_t>(l)];
      bnd_[static_cast<size_t>(w_ + 1 + l)] +=
          bnd_weight * G[last * static_cast<size_t>(w_) + static_cast<size_t>(l)];
    }
    if (m_ > 0) check_stage(u, r, cells);
    guess_ = cells;
  }

  // The forward Euler stage u - dt r against the three-point range of its input.
  void check_stage(const std::vector<double>& u, const std::vector<double>& r,
                   const std::vector<State>& cells) {
    for (int i = 0; i < n_; ++i) {
      const double s = u[idx(i, 0)] - dt_ * r[idx(i, 0)];
      for (int l = 0; l < m_; ++l) {
        const auto k = static_cast<size_t>(l);
        const double a = padded(cells, i).c[k], b = padded(cells, i + 1).c[k],
                     e = padded(cells, i + 2).c[k];
        const double lo = std::min({a, b, e}), hi = std::max({a, b, e});
        const double c = recover_concentration(s, u[idx(i, 1 + l)] - dt_ * r[idx(i, 1 + l)],
                                               model_.ads(l), model_.c_max, b);
        stage_excess_ = std::max({stage_excess_, lo - c, c - hi});
      }
    }
  }

  static double tv(const std::vector<State>& cells, const State& gl, const State& gr, size_t k) {
    double sum = std::abs(cells.front().c[k] - gl.c[k]) + std::abs(gr.c[k] - cells.back().c[k]);
    for (size_t i = 1; i < cells.size(); ++i) sum += std::abs(cells[i].c[k] - cells[i - 1].c[k]);
    return sum;
  }

  void diagnose(const std::vector<State>& old, const std::vector<double>& u0,
                const std::vector<double>& u1, double dt, StepDiagnostics& d) {
    const double dx = 1.0 / n_;
    d.s_min = HUGE_VAL;
    d.s_max = -HUGE_VAL;
    d.s_bound_excess = -HUGE_VAL;
    d.c_local_excess = -HUGE_VAL;
    for (const State& q : st_.cells) {
      d.s_min = std::min(d.s_min, q.s);
      d.s_max = std::max(d.s_max, q.s);
    }
    d.s_bound_excess = std::max(-d.s_min, d.s_max - 1.0);
    for (int c = 0; c < w_; ++c) {
      double before = 0.0, after = 0.0;
      for (int i = 0; i < n_; ++i) {
        before += u0[idx(i, c)];
        after += u1[idx(i, c)];
      }
      const double net = bnd_[static_cast<size_t>(c)] - bnd_[static_cast<size_t>(w_ + c)];
      d.conservation_residual.push_back(std::abs((after - before) * dx - dt * net));
    }
    for (int l = 0; l < m_; ++l) {
      const auto k = static_cast<size_t>(l);
      for (int i = 0; i < n_; ++i) {
        double lo = HUGE_VAL, hi = -HUGE_VAL;
        for (int j = i; j <= i + 2; ++j) {
          const double c = padded(old, j).c[k];
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        const double c = st_.cells[static_cast<size_t>(i)].c[k];
        d.c_local_excess = std::max({d.c_local_excess, lo - c, c - hi});
      }
      const double tv0 = tv(old, st_.ghost_left, st_.ghost_right, k);
      const double tv1 = tv(st_.cells, st_.ghost_left, st_.ghost_right, k);
      d.tv_c.push_back(tv1);
      d.tv_increase = std::max(d.tv_increase, tv1 - tv0);
    }
    if (m_ == 0) d.c_local_excess = 0.0;
    d.max_face_speed = max_speed_;
  }

  Sim1DState& st_;
  const PhysicsModel& model_;
  FluxKind flux_;
  int order_;
  LimiterConfig cfg_;
  int n_, m_, w_;
  std::vector<double> bnd_;
  std::vector<State> guess_;
  double dt_ = 0.0;
  double stage_excess_ = 0.0;
  double max_speed_ = 0.0;
};

}  // namespace

StepDiagnostics first_order_step(Sim1DState& state, const PhysicsModel& model, FluxKind flux,
                                 double dt) {
  return Stepper(state, model, flux, 1, LimiterConfig{}).step(dt);
}

StepDiagnostics high_order_step(Sim1DState& state, const PhysicsModel& model, FluxKind flux,
                                const LimiterConfig& cfg, double dt) {
  return Stepper(state, model, flux, 2, cfg).step(dt);
}

Sim1DState initial_state(const Run1DConfig& config) {
  const int n = config.grid.n_cells;
  if (n < 2) throw std::invalid_argument("grid.n_cells must be >= 2");
  if (!config.K.empty() && static_cast<int>(config.K.size()) != n)
    throw std::invalid_argument("K needs n_cells entries");
  Sim1DState st;
  st.cells.resize(static_cast<size_t>(n));
  st.K = config.K.empty() ? std::vector<double>(static_cast<size_t>(n), 1.0) : config.K;
  for (int i = 0; i < n; ++i)
    st.cells[static_cast<size_t>(i)] = config.grid.center(i) < config.x_jump ? config.left
                                                                            : config.right;
  st.ghost_left = config.left;
  st.ghost_right = config.right;
  st.K_left = st.K.front();
  st.K_right = st.K.back();
  st.v = config.v;
  st.dir = config.dir;
  return st;
}

double run_wave_speed_bound(const Run1DConfig& config) {
  SpeedBox box;
  box.v_min = box.v_max = config.v;
  box.dir = config.dir;
  if (!config.K.empty()) {
    const auto [lo, hi] = std::minmax_element(config.K.begin(), config.K.end());
    box.K_min = *lo;
    box.K_max = *hi;
  }
  return wave_speed_bound(config.model, box);
}

void ViolationCounts::record(FluxKind flux, double s_excess, double c_stage_excess,
                             double tv_increase, const std::vector<double>& conservation_residual) {
  if (s_excess > kBoundTolerance) ++s_bound;
  if (flux != FluxKind::Upstream) {
    if (c_stage_excess > kBoundTolerance) ++c_local;
    if (tv_increase > kBoundTolerance) ++tv;
  }
  for (double r : conservation_residual)
    if (r > kConservationTolerance) {
      ++conservation;
      break;
    }
}

Run1DResult run1d(const Run1DConfig& config) {
  config.model.validate();
  config.step.limiter.validate();
  if (config.step.order != 1 && config.step.order != 2)
    throw std::invalid_argument("order must be 1 or 2");
  if (!(config.T >= 0.0)) throw std::invalid_argument("T must be >= 0");
  Run1DResult res;
  res.final_state = initial_state(config);
  Sim1DState& st = res.final_state;
  res.M = run_wave_speed_bound(config);
  const double dx = config.grid.dx();
  res.dt = cfl_dt({res.M, config.cfl_safety}, dx, std::nullopt, 1);
  auto mass = [&]() {
    double sum = 0.0;
    for (const State& q : st.cells) sum += q.s * dx;
    return sum;
  };
  res.mass_water.push_back(mass());

  std::vector<double> stops = config.output_times;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::remove_if(stops.begin(), stops.end(),
                             [&](double t) { return !(t > 0.0 && t < config.T); }),
              stops.end());
  stops.push_back(config.T);
  size_t next = 0;
  const double eps = 1e-12 * std::max(1.0, config.T);
  while (st.t < config.T - eps) {
    const double target = stops[next];
    double dt = res.dt;
    if (st.t + dt > target - eps) dt = target - st.t;
    const StepDiagnostics d = config.step.order == 1
                                  ? first_order_step(st, config.model, config.step.flux, dt)
                                  : high_order_step(st, config.model, config.step.flux,
                                                    config.step.limiter, dt);
    if (std::abs(st.t - target) <= eps) {
      st.t = target;
      if (next + 1 < stops.size()) res.snapshots.push_back(st);
      ++next;
    }
    res.steps += 1;
    for (double r : d.conservation_residual)
      res.max_conservation_residual = std::max(res.max_conservation_residual, r);
    res.max_s_bound_excess = std::max(res.max_s_bound_excess, d.s_bound_excess);
    res.max_c_local_excess = std::max(res.max_c_local_excess, d.c_local_excess);
    res.max_c_stage_excess = std::max(res.max_c_stage_excess, d.c_stage_excess);
    res.max_tv_increase = std::max(res.max_tv_increase, d.tv_increase);
    res.max_face_speed = std::max(res.max_face_speed, d.max_face_speed);
    res.violations.record(config.step.flux, d.s_bound_excess, d.c_stage_excess, d.tv_increase,
                          d.conservation_residual);
    res.mass_water.push_back(mass());
  }
  auto dist = [&](const State& a, const State& b) {
    double e = std::abs(a.s - b.s);
    for (int l = 0; l < config.model.m; ++l)
      e = std::max(e, std::abs(a.c[static_cast<size_t>(l)] - b.c[static_cast<size_t>(l)]));
    return e;
  };
  res.boundary_leak = std::max(dist(st.cells.front(), st.ghost_left),
                               dist(st.cells.back(), st.ghost_right));
  return res;
}

std::vector<double> profile(const Sim1DState& state, int component) {
  std::vector<double> out;
  out.reserve(state.cells.size());
  for (const State& q : state.cells)
    out.push_back(component == 0 ? q.s : q.c[static_cast<size_t>(component - 1)]);
  return out;
}

double l1_error(const std::vector<double>& coarse, const std::vector<double>& reference) {
  if (coarse.empty() || reference.size() % coarse.size() != 0)
    throw std::invalid_argument("reference grid does not refine the coarse grid");
  const size_t r = reference.size() / coarse.size();
  double sum = 0.0;
  for (size_t i = 0; i < coarse.size(); ++i) {
    double avg = 0.0;
    for (size_t k = 0; k < r; ++k) avg += reference[i * r + k];
    sum += std::abs(coarse[i] - avg / static_cast<double>(r));
  }
  return sum / static_cast<double>(coarse.size());
}

ErrorPair l1_error_and_order(const std::vector<double>& coarse, const std::vector<double>& fine,
                             const std::vector<double>& reference) {
  ErrorPair e{l1_error(coarse, reference), l1_error(fine, reference), std::nullopt};
  if (e.e_coarse > 0.0 && e.e_fine > 0.0) e.alpha = std::log(e.e_coarse / e.e_fine) / std::log(2.0);
  return e;
}

}  // namespace polyflood
