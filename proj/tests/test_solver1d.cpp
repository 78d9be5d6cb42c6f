#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "polyflood/solver1d.hpp"
#include "support.hpp"

using namespace polyflood;
using testing::benchmark_model;

namespace {

Sim1DState uniform_state(int n, State q, double v, Direction dir) {
  Sim1DState st;
  st.cells.assign(static_cast<size_t>(n), q);
  st.K.assign(static_cast<size_t>(n), 1.0);
  st.ghost_left = st.ghost_right = q;
  st.v = v;
  st.dir = dir;
  return st;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("concentration recovery") {
  const AdsorptionLaw affine;
  for (int k = 0; k < 200; ++k) {
    const double s = testing::uniform(), c = testing::uniform();
    const double rhs = s * c + 1.0 + 0.5 * c;
    CHECK(recover_concentration(s, rhs, affine, 1.0) == doctest::Approx(c).epsilon(1e-12));
  }
  AdsorptionLaw curved;
  curved.custom_value = [](double c) { return 0.2 * c * c + c; };
  curved.custom_slope = [](double c) { return 0.4 * c + 1.0; };
  for (int k = 0; k < 200; ++k) {
    const double s = testing::uniform(), c = testing::uniform();
    const double rhs = s * c + 0.2 * c * c + c;
    CHECK(recover_concentration(s, rhs, curved, 1.0, 0.5) == doctest::Approx(c).epsilon(1e-10));
  }
  CHECK_THROWS_AS(recover_concentration(0.5, 3.0, affine, 1.0), std::range_error);
  CHECK_THROWS_AS(recover_concentration(0.5, 0.5, affine, 1.0), std::range_error);
}

TEST_CASE("a constant state is preserved exactly") {
  const PhysicsModel m = benchmark_model();
  for (FluxKind flux : {FluxKind::Dflu, FluxKind::Godunov, FluxKind::Upstream}) {
    Sim1DState st = uniform_state(40, {0.45, {0.3, 0.2}}, 0.2, Direction::Vertical);
    for (int k = 0; k < 20; ++k) high_order_step(st, m, flux, {}, 0.002);
    for (const State& q : st.cells) {
      CHECK(q.s == doctest::Approx(0.45).epsilon(1e-14));
      CHECK(q.c[0] == doctest::Approx(0.3).epsilon(1e-13));
      CHECK(q.c[1] == doctest::Approx(0.2).epsilon(1e-13));
    }
  }
}

TEST_CASE("scalar Buckley-Leverett matches a hand-written upwind scheme") {
  // Horizontal flow with v > 0 and constant c: F is increasing in s, so every
  // monotone flux reduces to F(s_left).
  const PhysicsModel m = benchmark_model();
  const int n = 100;
  const double v = 0.3, dx = 1.0 / n, dt = 0.2 * dx;
  const Conc c{0.2, 0.1};
  const double mu_w = 0.5 + c[0] + c[1];
  Sim1DState st = uniform_state(n, {0.0, c}, v, Direction::Horizontal);
  st.ghost_left = {1.0, c};
  std::vector<double> s(static_cast<size_t>(n), 0.0);
  for (int step = 0; step < 200; ++step) {
    first_order_step(st, m, FluxKind::Dflu, dt);
    std::vector<double> next = s;
    for (int i = 0; i < n; ++i) {
      const double up = i == 0 ? 1.0 : s[static_cast<size_t>(i - 1)];
      const double Fin = testing::oracle_flux(up, mu_w, 1.0, v, 0.0);
      const double Fout = testing::oracle_flux(s[static_cast<size_t>(i)], mu_w, 1.0, v, 0.0);
      next[static_cast<size_t>(i)] -= dt / dx * (Fout - Fin);
    }
    s = next;
  }
  CHECK(max_abs_diff(profile(st, 0), s) <= 1e-12);
}

TEST_CASE("second order on smooth data") {
  // Exact solution by characteristics: s = s0(x - F'(s) t), solved per point by
  // bisection on g(x0) = x0 + F'(s0(x0)) t - x, which is monotone before breaking.
  const PhysicsModel m = benchmark_model();
  const double v = 0.2, T = 0.1;
  const Conc c{};
  const FluxContext ctx{v, 1.0, Direction::Horizontal};
  auto s0 = [](double x) { return 0.3 + 0.3 * std::exp(-std::pow((x - 0.5) / 0.1, 2)); };
  auto exact = [&](double x) {
    auto g = [&](double x0) { return x0 + flux_ds(s0(x0), c, ctx, m) * T - x; };
    return s0(testing::bisect(g, x - 1.0, x + 0.1));
  };
  auto exact_average = [&](double a, double b) {
    const double r = std::sqrt(0.6), mid = 0.5 * (a + b), half = 0.5 * (b - a);
    return (5 * exact(mid - r * half) + 8 * exact(mid) + 5 * exact(mid + r * half)) / 18.0;
  };
  auto error = [&](int n) {
    Sim1DState st = uniform_state(n, {0.3, c}, v, Direction::Horizontal);
    // Initial cell averages by the same three-point Gauss rule.
    for (int i = 0; i < n; ++i) {
      const double a = static_cast<double>(i) / n, b = (i + 1.0) / n;
      const double r = std::sqrt(0.6), mid = 0.5 * (a + b), half = 0.5 * (b - a);
      st.cells[static_cast<size_t>(i)].s =
          (5 * s0(mid - r * half) + 8 * s0(mid) + 5 * s0(mid + r * half)) / 18.0;
    }
    const double M = wave_speed_bound(m, {v, v, 1.0, 1.0, Direction::Horizontal, {}, {}});
    const double dt_max = cfl_dt({M, 0.5}, 1.0 / n, std::nullopt, 1);
    const int steps = static_cast<int>(std::ceil(T / dt_max));
    for (int k = 0; k < steps; ++k) high_order_step(st, m, FluxKind::Dflu, {}, T / steps);
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e += std::abs(st.cells[static_cast<size_t>(i)].s -
                    exact_average(static_cast<double>(i) / n, (i + 1.0) / n)) / n;
    return e;
  };
  const double e1 = error(200), e2 = error(400);
  MESSAGE("smooth L1 errors " << e1 << ", " << e2 << ", order " << std::log2(e1 / e2));
  CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("benchmark run keeps its invariants") {
  Run1DConfig cfg;
  cfg.grid.n_cells = 200;
  for (FluxKind flux : {FluxKind::Dflu, FluxKind::Godunov}) {
    cfg.step.flux = flux;
    const Run1DResult r = run1d(cfg);
    CHECK(r.max_conservation_residual <= kConservationTolerance);
    CHECK(r.max_s_bound_excess <= kBoundTolerance);
    CHECK(r.max_c_stage_excess <= kBoundTolerance);
    CHECK(r.max_tv_increase <= kBoundTolerance);
    CHECK(r.max_face_speed <= r.M * (1.0 + 1e-12));
    CHECK(r.violations.total() == 0);
    CHECK(r.boundary_leak <= 1e-12);
    // The frozen end states make water mass change only through boundary fluxes,
    // which are bounded by max|F| per unit time.
    CHECK(std::abs(r.mass_water.back() - r.mass_water.front()) <= cfg.T * 2.0 * r.M);
  }
}

TEST_CASE("T = 0 returns the initial state") {
  Run1DConfig cfg;
  cfg.T = 0.0;
  const Run1DResult r = run1d(cfg);
  CHECK(r.steps == 0);
  const Sim1DState init = initial_state(cfg);
  CHECK(profile(r.final_state, 0) == profile(init, 0));
  CHECK(profile(r.final_state, 1) == profile(init, 1));
}

TEST_CASE("initial state places the jump") {
  Run1DConfig cfg;
  cfg.grid.n_cells = 10;
  const Sim1DState st = initial_state(cfg);
  for (int i = 0; i < 10; ++i) {
    const State& q = st.cells[static_cast<size_t>(i)];
    CHECK(q.s == (cfg.grid.center(i) < 0.4 ? 0.1 : 1.0));
  }
}

TEST_CASE("L1 error against a refined reference") {
  const std::vector<double> ref{1.0, 3.0, 5.0, 7.0};
  CHECK(l1_error({2.0, 6.0}, ref) == 0.0);
  CHECK(l1_error({2.0, 5.0}, ref) == doctest::Approx(0.5));
  CHECK_THROWS_AS(l1_error({1.0, 2.0, 3.0}, ref), std::invalid_argument);
  const ErrorPair p = l1_error_and_order({2.0, 5.0}, {1.0, 3.0, 5.0, 7.5}, ref);
  CHECK(p.e_coarse == doctest::Approx(0.5));
  CHECK(p.e_fine == doctest::Approx(0.125));
  REQUIRE(p.alpha.has_value());
  CHECK(*p.alpha == doctest::Approx(2.0));
  CHECK_FALSE(l1_error_and_order({2.0, 6.0}, ref, ref).alpha.has_value());
}
