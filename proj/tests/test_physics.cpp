#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "polyflood/physics.hpp"
#include "support.hpp"

using namespace polyflood;
using testing::benchmark_model;
using testing::horizontal;
using testing::vertical;

TEST_CASE("mobilities and fractional flow at reference points") {
  const PhysicsModel m = benchmark_model();
  CHECK(water_mobility(0.0, {0.3, 0.7}, m) == 0.0);
  CHECK(water_mobility(1.0, {0.0, 0.0}, m) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(water_mobility(0.5, {1.0, 0.5}, m) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(oil_mobility(1.0, m) == 0.0);
  CHECK(oil_mobility(0.0, m) == 1.0);
  CHECK(oil_mobility(0.5, m) == 0.25);
  CHECK(fractional_flow(0.0, {}, m) == 0.0);
  CHECK(fractional_flow(1.0, {}, m) == 1.0);
  CHECK(fractional_flow(0.5, {}, m) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("fractional flow is monotone in s and in each concentration") {
  const PhysicsModel m = benchmark_model();
  for (int k = 0; k < 200; ++k) {
    const double s = testing::uniform(), ds = testing::uniform(0.0, 0.1);
    const Conc c{testing::uniform(), testing::uniform()};
    Conc c_up = c;
    c_up[1] += testing::uniform(0.0, 0.5);
    CHECK(fractional_flow(std::min(1.0, s + ds), c, m) >= fractional_flow(s, c, m));
    CHECK(fractional_flow(s, c_up, m) <= fractional_flow(s, c, m));
  }
}

TEST_CASE("directional flux matches the mobility model") {
  const PhysicsModel m = benchmark_model();
  CHECK(flux(0.0, {0.4, 0.1}, vertical(), m) == 0.0);
  CHECK(flux(1.0, {}, vertical(), m) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(flux(0.5, {}, vertical(), m) == doctest::Approx(-1.0 / 30.0).epsilon(1e-14));
  // Horizontal faces never see gravity.
  CHECK(flux(0.5, {}, horizontal(), m) == doctest::Approx(0.2 * 2.0 / 3.0).epsilon(1e-14));
  for (int k = 0; k < 200; ++k) {
    const double s = testing::uniform(), v = testing::uniform(-1.0, 1.0);
    const double K = testing::uniform(0.1, 2.0);
    const Conc c{testing::uniform(), testing::uniform()};
    const double expect = testing::oracle_flux(s, 0.5 + c[0] + c[1], 1.0, v, K);
    CHECK(flux(s, c, vertical(v, K), m) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("flux derivative matches a centred difference") {
  const PhysicsModel m = benchmark_model();
  for (int k = 0; k < 200; ++k) {
    const double s = testing::uniform(0.01, 0.99);
    const Conc c{testing::uniform(), testing::uniform()};
    const FluxContext ctx = vertical(testing::uniform(-1.0, 1.0), testing::uniform(0.1, 2.0));
    const double h = 1e-6;
    const double fd = (flux(s + h, c, ctx, m) - flux(s - h, c, ctx, m)) / (2 * h);
    CHECK(eigenvalues(s, c, ctx, m).lambda_s == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("eigenvalues vanish where the model says they do") {
  const PhysicsModel m = benchmark_model();
  const Conc c{0.3, 0.2};
  for (double s : {0.0, 1.0}) CHECK(std::abs(eigenvalues(s, c, vertical(), m).lambda_s) <= 1e-12);
  const Eigenvalues e0 = eigenvalues(0.0, c, vertical(), m);
  CHECK(e0.lambda_c[0] == 0.0);
  CHECK(e0.lambda_c[1] == 0.0);
  // lambda_l = F / (s + h_l) with h = 0.5 for a = 1 + 0.5 c.
  const double F = flux(0.6, c, vertical(), m);
  CHECK(eigenvalues(0.6, c, vertical(), m).lambda_c[0] == doctest::Approx(F / 1.1).epsilon(1e-14));
}

TEST_CASE("critical saturation is the sign change of F_s") {
  PhysicsModel m = benchmark_model();
  SUBCASE("symmetric cubic") {
    m.mu_o = 0.5;
    const auto cp = critical_saturation({}, vertical(0.0), m);
    REQUIRE(cp.has_value());
    CHECK(cp->s == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("benchmark parameters") {
    const auto cp = critical_saturation({}, vertical(), m);
    REQUIRE(cp.has_value());
    const double oracle = testing::bisect(
        [&](double s) { return flux_ds(s, {}, vertical(), m); }, 1e-9, 1.0 - 1e-9);
    CHECK(cp->s == doctest::Approx(oracle).epsilon(1e-12));
    // For (rho_w - rho_o) g K > 0 the interior extremum is a minimum.
    CHECK(cp->kind == ExtremumKind::Minimum);
    CHECK(flux(cp->s, {}, vertical(), m) < 0.0);
  }
  SUBCASE("strong throughput removes the extremum") {
    const auto cp = critical_saturation({}, vertical(5.0), m);
    CHECK_FALSE(cp.has_value());
    for (int k = 1; k < 10000; ++k) CHECK(flux_ds(k / 10000.0, {}, vertical(5.0), m) > 0.0);
  }
  SUBCASE("random contexts against bisection") {
    for (int k = 0; k < 300; ++k) {
      const Conc c{testing::uniform(), testing::uniform()};
      const FluxContext ctx = vertical(testing::uniform(-0.5, 0.5), testing::uniform(0.1, 2.0));
      const auto cp = critical_saturation(c, ctx, m);
      auto g = [&](double s) { return flux_ds(s, c, ctx, m); };
      const double a = 1e-9, b = 1.0 - 1e-9;
      if ((g(a) < 0.0) != (g(b) < 0.0)) {
        REQUIRE(cp.has_value());
        CHECK(cp->s == doctest::Approx(testing::bisect(g, a, b)).epsilon(1e-10));
      } else if (cp) {
        CHECK(std::abs(g(cp->s)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("argmin of the flux over [0,1]") {
  PhysicsModel m = benchmark_model();
  CHECK(argmin_flux({}, horizontal(0.3), m) == 0.0);
  CHECK(argmin_flux({}, horizontal(-0.3), m) == 1.0);
  SUBCASE("grid scan oracle") {
    m.rho_w_g = 1.0;
    m.rho_o_g = 2.0;
    for (int k = 0; k < 50; ++k) {
      const Conc c{testing::uniform(), testing::uniform()};
      const FluxContext ctx = vertical(testing::uniform(-0.3, 0.3), testing::uniform(0.5, 1.5));
      const double theta = argmin_flux(c, ctx, m);
      double best = HUGE_VAL;
      for (int j = 0; j <= 10000; ++j) best = std::min(best, flux(j / 10000.0, c, ctx, m));
      CHECK(flux(theta, c, ctx, m) <= best + 1e-9);
    }
  }
}

TEST_CASE("cubic closed form solves r s^3 - (1-s)^3 + z = 0") {
  for (int k = 0; k < 200; ++k) {
    const double r = testing::uniform(0.1, 10.0), z = testing::uniform(-0.9, 0.9);
    const auto s = cubic_closed_form(r, z);
    if (!s) continue;
    const double residual = r * *s * *s * *s - std::pow(1.0 - *s, 3) + z;
    CHECK(std::abs(residual) <= 1e-11);
  }
}

TEST_CASE("secant adsorption slope") {
  const AdsorptionLaw law;
  CHECK(secant_adsorption(0.3, 0.3, law) == 0.5);
  CHECK(secant_adsorption(0.0, 1.0, law) == 0.5);
  AdsorptionLaw convex;
  convex.custom_value = [](double c) { return c * c + c; };
  convex.custom_slope = [](double c) { return 2 * c + 1; };
  for (int k = 0; k < 100; ++k) {
    const double a = testing::uniform(), b = testing::uniform();
    const double h = secant_adsorption(a, b, convex);
    CHECK(h >= std::min(convex.slope(a), convex.slope(b)) - 1e-12);
    CHECK(h <= std::max(convex.slope(a), convex.slope(b)) + 1e-12);
  }
}

TEST_CASE("viscosity laws") {
  PhysicsModel m = benchmark_model();
  CHECK(m.mu_w({1.0, 0.5}) == 2.0);
  m.viscosity.kind = ViscosityKind::SqrtSum;
  CHECK(m.mu_w({49.0, 0.0}) == doctest::Approx(7.5));
  CHECK(m.mu_w({25.0, 24.0}) == doctest::Approx(0.5 + 5.0 + std::sqrt(24.0)));
  m.viscosity.kind = ViscosityKind::Affine;
  m.viscosity.base = 1.0;
  m.viscosity.coeff = {2.0, 3.0};
  CHECK(m.mu_w({0.5, 1.0}) == doctest::Approx(5.0));
}

TEST_CASE("model validation names the field") {
  PhysicsModel m = benchmark_model();
  m.mu_o = 0.0;
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("mu_o"), std::invalid_argument);
  m = benchmark_model();
  m.adsorption[1].a1 = 0.0;
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("adsorption"), std::invalid_argument);
  m = benchmark_model();
  m.m = 3;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
