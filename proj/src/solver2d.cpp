#include "polyflood/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyflood/numflux.hpp"
#include "polyflood/scheme.hpp"

namespace polyflood {

namespace {

int pad(const Grid2D& g, int i, int j) { return (j + 1) * (g.nx + 2) + (i + 1); }

struct Faces {
  std::vector<BoundaryKind> x;  // per x-face; interior faces hold Wall but are unused
  std::vector<BoundaryKind> y;
};

Faces classify_faces(const Grid2D& g, const PressureBC& bc) {
  Faces f{std::vector<BoundaryKind>(static_cast<size_t>(g.n_xfaces()), BoundaryKind::Wall),
          std::vector<BoundaryKind>(static_cast<size_t>(g.n_yfaces()), BoundaryKind::Wall)};
  for (int j = 0; j < g.ny; ++j) {
    const double y = (j + 0.5) * g.dy();
    f.x[static_cast<size_t>(g.xface(0, j))] = bc.classify(Edge::Left, y);
    f.x[static_cast<size_t>(g.xface(g.nx, j))] = bc.classify(Edge::Right, y);
  }
  for (int i = 0; i < g.nx; ++i) {
    const double x = (i + 0.5) * g.dx();
    f.y[static_cast<size_t>(g.yface(i, 0))] = bc.classify(Edge::Bottom, x);
    f.y[static_cast<size_t>(g.yface(i, g.ny))] = bc.classify(Edge::Top, x);
  }
  return f;
}

State ghost(const State& inside, BoundaryKind kind, const Conc& c_inlet) {
  if (kind != BoundaryKind::Inlet) return inside;
  State q;
  q.s = 1.0;
  q.c = c_inlet;
  return q;
}

class Transport {
 public:
  Transport(Sim2DState& st, const Grid2D& g, const PhysicsModel& model, const TransportBC& tbc,
            const StepOptions& opt)
      : st_(st), g_(g), model_(model), tbc_(tbc), opt_(opt), faces_(classify_faces(g, tbc.bc)),
        m_(model.m), w_(1 + model.m), memo_x_(2 * static_cast<size_t>(g.n_xfaces())),
        memo_y_(2 * static_cast<size_t>(g.n_yfaces())) {}

  Step2DDiagnostics step(double dt) {
    Step2DDiagnostics d;
    d.dt = dt;
    const std::vector<State> old = st_.cells;
    const std::vector<State> old_padded = apply_boundary(old, g_, tbc_);
    guess_ = old;
    const std::vector<double> u0 = pack(old);
    net_.assign(static_cast<size_t>(w_), 0.0);
    std::vector<double> u1;
    dt_ = dt;
    stage_excess_ = m_ > 0 ? -HUGE_VAL : 0.0;
    if (opt_.order == 1) {
      std::vector<double> r(u0.size());
      residual(u0, r, 1.0);
      u1.resize(u0.size());
      for (size_t k = 0; k < u0.size(); ++k) u1[k] = u0[k] - dt * r[k];
    } else {
      int stage = 0;
      const double weight[3] = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
      u1 = ssp_rk3(u0, [&](const std::vector<double>& u, std::vector<double>& r) {
        residual(u, r, weight[stage++]);
      }, dt);
    }
    st_.cells = unpack(u1);
    st_.t += dt;
    st_.n += 1;

    const double area = g_.dx() * g_.dy();
    for (int c = 0; c < w_; ++c) {
      double before = 0.0, after = 0.0;
      for (int k = 0; k < g_.n_cells(); ++k) {
        before += u0[idx(k, c)];
        after += u1[idx(k, c)];
      }
      d.conservation_residual.push_back(
          std::abs((after - before) * area - dt * net_[static_cast<size_t>(c)]));
    }
    d.c_stage_excess = stage_excess_;
    d.s_bound_excess = -HUGE_VAL;
    d.c_local_excess = m_ > 0 ? -HUGE_VAL : 0.0;
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        const State& q = st_.cells[static_cast<size_t>(g_.cell(i, j))];
        d.s_bound_excess = std::max({d.s_bound_excess, -q.s, q.s - 1.0});
        for (int l = 0; l < m_; ++l) {
          const auto k = static_cast<size_t>(l);
          double lo = HUGE_VAL, hi = -HUGE_VAL;
          for (const int p : {pad(g_, i, j), pad(g_, i - 1, j), pad(g_, i + 1, j),
                              pad(g_, i, j - 1), pad(g_, i, j + 1)}) {
            const double c = old_padded[static_cast<size_t>(p)].c[k];
            lo = std::min(lo, c);
            hi = std::max(hi, c);
          }
          d.c_local_excess = std::max({d.c_local_excess, lo - q.c[k], q.c[k] - hi});
        }
      }
    return d;
  }

 private:
  size_t idx(int cell, int comp) const {
    return static_cast<size_t>(cell) * static_cast<size_t>(w_) + static_cast<size_t>(comp);
  }

  std::vector<double> pack(const std::vector<State>& cells) const {
    std::vector<double> u(cells.size() * static_cast<size_t>(w_));
    for (int k = 0; k < g_.n_cells(); ++k) {
      const State& q = cells[static_cast<size_t>(k)];
      u[idx(k, 0)] = q.s;
      for (int l = 0; l < m_; ++l)
        u[idx(k, 1 + l)] = q.s * q.c[static_cast<size_t>(l)] +
                           model_.ads(l).value(q.c[static_cast<size_t>(l)]);
    }
    return u;
  }

  std::vector<State> unpack(const std::vector<double>& u) const {
    std::vector<State> cells(static_cast<size_t>(g_.n_cells()));
    for (int k = 0; k < g_.n_cells(); ++k) {
      State& q = cells[static_cast<size_t>(k)];
      q.s = u[idx(k, 0)];
      for (int l = 0; l < m_; ++l) {
        const auto c = static_cast<size_t>(l);
        q.c[c] = recover_concentration(q.s, u[idx(k, 1 + l)], model_.ads(l), model_.c_max,
                                       guess_[static_cast<size_t>(k)].c[c]);
      }
    }
    return cells;
  }

  // Value of padded cell p on its high or low face along stride; ghosts stay constant.
  State face_value(const std::vector<State>& P, size_t p, size_t stride, bool high, bool ghost) const {
    const State& q = P[p];
    if (opt_.order == 1 || ghost) return q;
    const State& a = P[p - stride];
    const State& b = P[p + stride];
    State out = q;
    const FaceValues fs = reconstruct_faces(a.s, q.s, b.s, opt_.limiter);
    out.s = high ? fs.right : fs.left;
    for (int l = 0; l < m_; ++l) {
      const auto k = static_cast<size_t>(l);
      const FaceValues fc = reconstruct_faces(a.c[k], q.c[k], b.c[k], opt_.limiter);
      out.c[k] = high ? fc.right : fc.left;
    }
    return out;
  }

  double face_flux(const State& a, const State& b, double v, double Ka, double Kb, Direction dir,
                   DfluSideMemo* memo, double* G) const {
    const InterfaceInput in{a, b, {v, Ka, dir}, {v, Kb, dir}};
    const InterfaceFlux fl = opt_.flux == FluxKind::Dflu ? dflu(in, model_, memo[0], memo[1])
                                                         : interface_flux(opt_.flux, in, model_);
    concentration_flux(in, fl, m_, G);
    return fl.F;
  }

  void residual(const std::vector<double>& u, std::vector<double>& r, double weight) {
    const std::vector<State> cells = unpack(u);
    const std::vector<State> P = apply_boundary(cells, g_, tbc_);
    const int nx = g_.nx, ny = g_.ny;
    const auto row = static_cast<size_t>(nx + 2);
    auto K = [&](int i, int j) {
      i = std::clamp(i, 0, nx - 1);
      j = std::clamp(j, 0, ny - 1);
      return st_.K[static_cast<size_t>(g_.cell(i, j))];
    };
    std::fill(r.begin(), r.end(), 0.0);
    std::vector<double> G(static_cast<size_t>(std::max(m_, 1)));
    const double dx = g_.dx(), dy = g_.dy();
    const double inv_dx = 1.0 / dx, inv_dy = 1.0 / dy;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const auto f = static_cast<size_t>(g_.xface(i, j));
        const bool boundary = i == 0 || i == nx;
        if (boundary && faces_.x[f] == BoundaryKind::Wall) continue;
        const auto pa = static_cast<size_t>(pad(g_, i - 1, j));
        const State a = face_value(P, pa, 1, true, i == 0);
        const State b = face_value(P, pa + 1, 1, false, i == nx);
        const double F = face_flux(a, b, st_.vel.vx[f], K(i - 1, j), K(i, j), Direction::Horizontal,
                                   &memo_x_[2 * f], G.data());
        add(i > 0 ? g_.cell(i - 1, j) : -1, i < nx ? g_.cell(i, j) : -1, F, G.data(), inv_dx, r);
        if (boundary) account(i == 0, F, G.data(), dy, weight);
      }
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const auto f = static_cast<size_t>(g_.yface(i, j));
        const bool boundary = j == 0 || j == ny;
        if (boundary && faces_.y[f] == BoundaryKind::Wall) continue;
        const auto pa = static_cast<size_t>(pad(g_, i, j - 1));
        const State a = face_value(P, pa, row, true, j == 0);
        const State b = face_value(P, pa + row, row, false, j == ny);
        const double F = face_flux(a, b, st_.vel.vy[f], K(i, j - 1), K(i, j), Direction::Vertical,
                                   &memo_y_[2 * f], G.data());
        add(j > 0 ? g_.cell(i, j - 1) : -1, j < ny ? g_.cell(i, j) : -1, F, G.data(), inv_dy, r);
        if (boundary) account(j == 0, F, G.data(), dx, weight);
      }
    if (m_ > 0) check_stage(u, r, P);
    guess_ = cells;
  }

  // The forward Euler stage u - dt r against the five-point range of its input P.
  void check_stage(const std::vector<double>& u, const std::vector<double>& r,
                   const std::vector<State>& P) {
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        const int k = g_.cell(i, j);
        const double s = u[idx(k, 0)] - dt_ * r[idx(k, 0)];
        for (int l = 0; l < m_; ++l) {
          const auto q = static_cast<size_t>(l);
          double lo = HUGE_VAL, hi = -HUGE_VAL;
          for (const int p : {pad(g_, i, j), pad(g_, i - 1, j), pad(g_, i + 1, j),
                              pad(g_, i, j - 1), pad(g_, i, j + 1)}) {
            lo = std::min(lo, P[static_cast<size_t>(p)].c[q]);
            hi = std::max(hi, P[static_cast<size_t>(p)].c[q]);
          }
          const double c = recover_concentration(s, u[idx(k, 1 + l)] - dt_ * r[idx(k, 1 + l)],
                                                 model_.ads(l), model_.c_max, lo);
          stage_excess_ = std::max({stage_excess_, lo - c, c - hi});
        }
      }
  }

  // Face flux leaves cell a and enters cell b; -1 marks a ghost.
  void add(int a, int b, double F, const double* G, double inv_h, std::vector<double>& r) const {
    if (a >= 0) {
      r[idx(a, 0)] += F * inv_h;
      for (int l = 0; l < m_; ++l) r[idx(a, 1 + l)] += G[l] * inv_h;
    }
    if (b >= 0) {
      r[idx(b, 0)] -= F * inv_h;
      for (int l = 0; l < m_; ++l) r[idx(b, 1 + l)] -= G[l] * inv_h;
    }
  }

  void account(bool low_side, double F, const double* G, double len, double weight) {
    const double sgn = low_side ? 1.0 : -1.0;
    net_[0] += weight * sgn * F * len;
    for (int l = 0; l < m_; ++l) net_[static_cast<size_t>(1 + l)] += weight * sgn * G[l] * len;
  }

  Sim2DState& st_;
  const Grid2D& g_;
  const PhysicsModel& model_;
  const TransportBC& tbc_;
  const StepOptions& opt_;
  Faces faces_;
  int m_, w_;
  // Per face, left then right side; valid across the stages of one step.
  std::vector<DfluSideMemo> memo_x_, memo_y_;
  std::vector<double> net_;
  std::vector<State> guess_;
  double dt_ = 0.0;
  double stage_excess_ = 0.0;
};

}  // namespace

std::vector<State> apply_boundary(const std::vector<State>& cells, const Grid2D& g,
                                  const TransportBC& tbc) {
  std::vector<State> P(static_cast<size_t>((g.nx + 2) * (g.ny + 2)));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      P[static_cast<size_t>(pad(g, i, j))] = cells[static_cast<size_t>(g.cell(i, j))];
  for (int j = 0; j < g.ny; ++j) {
    const double y = (j + 0.5) * g.dy();
    P[static_cast<size_t>(pad(g, -1, j))] =
        ghost(cells[static_cast<size_t>(g.cell(0, j))], tbc.bc.classify(Edge::Left, y), tbc.c_inlet);
    P[static_cast<size_t>(pad(g, g.nx, j))] = ghost(cells[static_cast<size_t>(g.cell(g.nx - 1, j))],
                                                    tbc.bc.classify(Edge::Right, y), tbc.c_inlet);
  }
  for (int i = 0; i < g.nx; ++i) {
    const double x = (i + 0.5) * g.dx();
    P[static_cast<size_t>(pad(g, i, -1))] = ghost(cells[static_cast<size_t>(g.cell(i, 0))],
                                                  tbc.bc.classify(Edge::Bottom, x), tbc.c_inlet);
    P[static_cast<size_t>(pad(g, i, g.ny))] = ghost(cells[static_cast<size_t>(g.cell(i, g.ny - 1))],
                                                    tbc.bc.classify(Edge::Top, x), tbc.c_inlet);
  }
  return P;
}

Step2DDiagnostics transport_update(Sim2DState& state, const Grid2D& grid,
                                   const PhysicsModel& model, const TransportBC& tbc,
                                   const StepOptions& step, double dt) {
  return Transport(state, grid, model, tbc, step).step(dt);
}

void solve_pressure(Sim2DState& state, const Run2DConfig& config, int* iterations) {
  const FaceCoefficients co = face_coefficients(config.grid, state.cells, state.K, config.model);
  const PressureSolution sol = assemble_and_solve(co, config.boundary.bc, config.grid, config.cg,
                                                  state.p.empty() ? nullptr : &state.p);
  state.p = sol.p;
  state.vel = face_velocities(state.p, co, config.boundary.bc, config.grid);
  if (iterations) *iterations = sol.iterations;
}

double velocity_wave_speed_bound(const Sim2DState& state, const Grid2D& grid,
                                 const PhysicsModel& model, const Conc& c_inlet) {
  (void)grid;
  const auto [xlo, xhi] = std::minmax_element(state.vel.vx.begin(), state.vel.vx.end());
  const auto [ylo, yhi] = std::minmax_element(state.vel.vy.begin(), state.vel.vy.end());
  const auto [klo, khi] = std::minmax_element(state.K.begin(), state.K.end());
  // By the local max principle every stage stays within the range of the cells
  // and the inlet ghosts.
  Conc c_lo = c_inlet, c_hi = c_inlet;
  for (const State& q : state.cells)
    for (int l = 0; l < model.m; ++l) {
      const auto k = static_cast<size_t>(l);
      c_lo[k] = std::min(c_lo[k], q.c[k]);
      c_hi[k] = std::max(c_hi[k], q.c[k]);
    }
  SpeedBox bx{*xlo, *xhi, *klo, *khi, Direction::Horizontal, c_lo, c_hi};
  SpeedBox by{*ylo, *yhi, *klo, *khi, Direction::Vertical, c_lo, c_hi};
  return std::max(wave_speed_bound(model, bx), wave_speed_bound(model, by));
}

Step2DDiagnostics sequential_step(Sim2DState& state, const Run2DConfig& config, double dt_cap) {
  int its = 0;
  bool solved = false;
  if (state.vel.vx.empty() || state.n % std::max(1, config.pressure_every) == 0) {
    solve_pressure(state, config, &its);
    solved = true;
  }
  const double M = velocity_wave_speed_bound(state, config.grid, config.model, config.boundary.c_inlet);
  double dt = dt_cap;
  if (M > 0.0)
    dt = std::min(dt_cap, cfl_dt({M, config.cfl_safety}, config.grid.dx(), config.grid.dy(), 2));
  Step2DDiagnostics d =
      transport_update(state, config.grid, config.model, config.boundary, config.step, dt);
  d.M = M;
  d.cg_iterations = its;
  d.pressure_solved = solved;
  return d;
}

Sim2DState initial_state(const Run2DConfig& config) {
  config.grid.validate();
  Sim2DState st;
  st.cells.assign(static_cast<size_t>(config.grid.n_cells()), config.initial);
  if (!config.K.empty()) {
    if (config.K.size() != st.cells.size()) throw std::invalid_argument("K needs nx*ny entries");
    st.K = config.K;
  } else {
    st.K = generate(config.field, config.grid).K;
  }
  return st;
}

Run2DResult run2d(const Run2DConfig& config) {
  config.model.validate();
  config.step.limiter.validate();
  config.boundary.bc.validate(config.grid);
  if (config.step.order != 1 && config.step.order != 2)
    throw std::invalid_argument("order must be 1 or 2");
  if (!(config.T >= 0.0)) throw std::invalid_argument("T must be >= 0");
  if (config.K.empty()) config.field.validate();
  Run2DResult res;
  res.final_state = initial_state(config);
  if (config.K.empty()) res.warnings = generate(config.field, config.grid).warnings;
  Sim2DState& st = res.final_state;
  solve_pressure(st, config);

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
    const Step2DDiagnostics d = sequential_step(st, config, target - st.t);
    if (std::abs(st.t - target) <= eps) {
      st.t = target;
      if (next + 1 < stops.size()) res.snapshots.push_back(st);
      ++next;
    }
    res.steps += 1;
    res.cg_iterations += d.cg_iterations;
    res.max_cg_iterations = std::max(res.max_cg_iterations, d.cg_iterations);
    for (double r : d.conservation_residual)
      res.max_conservation_residual = std::max(res.max_conservation_residual, r);
    res.max_s_bound_excess = std::max(res.max_s_bound_excess, d.s_bound_excess);
    res.max_c_local_excess = std::max(res.max_c_local_excess, d.c_local_excess);
    res.max_c_stage_excess = std::max(res.max_c_stage_excess, d.c_stage_excess);
    res.violations.record(config.step.flux, d.s_bound_excess, d.c_stage_excess, 0.0,
                          d.conservation_residual);
  }
  return res;
}

}  // namespace polyflood
