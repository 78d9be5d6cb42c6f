#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "polyflood/numflux.hpp"
#include "support.hpp"

using namespace polyflood;
using testing::benchmark_model;
using testing::horizontal;
using testing::vertical;

namespace {

InterfaceInput input(State l, State r, FluxContext ctx = vertical()) { return {l, r, ctx, ctx}; }

// Scalar Godunov value from a grid scan: min over [a,b] when a <= b, else max.
double scan_godunov(double a, double b, const Conc& c, const FluxContext& ctx,
                    const PhysicsModel& m) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  double best = a <= b ? HUGE_VAL : -HUGE_VAL;
  for (int k = 0; k <= 20000; ++k) {
    const double F = flux(lo + (hi - lo) * k / 20000.0, c, ctx, m);
    best = a <= b ? std::min(best, F) : std::max(best, F);
  }
  return best;
}

}  // namespace

TEST_CASE("flux selection by name") {
  CHECK(parse_flux_kind("dflu") == FluxKind::Dflu);
  CHECK(parse_flux_kind("godunov") == FluxKind::Godunov);
  CHECK(parse_flux_kind("upstream") == FluxKind::Upstream);
  CHECK_THROWS_AS(parse_flux_kind("roe"), std::invalid_argument);
  for (FluxKind k : {FluxKind::Dflu, FluxKind::Godunov, FluxKind::Upstream})
    CHECK(parse_flux_kind(to_string(k)) == k);
}

TEST_CASE("all fluxes are consistent") {
  const PhysicsModel m = benchmark_model();
  for (int k = 0; k < 100; ++k) {
    const State q{testing::uniform(), {testing::uniform(), testing::uniform()}};
    const FluxContext ctx = vertical(testing::uniform(-0.5, 0.5));
    const double F = flux(q.s, q.c, ctx, m);
    for (FluxKind kind : {FluxKind::Dflu, FluxKind::Godunov, FluxKind::Upstream})
      CHECK(interface_flux(kind, input(q, q, ctx), m).F == doctest::Approx(F).epsilon(1e-12));
  }
}

TEST_CASE("monotone flux is upwinded") {
  const PhysicsModel m = benchmark_model();
  const FluxContext ctx = horizontal(0.3);
  for (int k = 0; k < 100; ++k) {
    const State l{testing::uniform(), {testing::uniform(), testing::uniform()}};
    const State r{testing::uniform(), {0.0, 0.0}};
    const double F = flux(l.s, l.c, ctx, m);
    CHECK(dflu(input(l, r, ctx), m).F == doctest::Approx(F).epsilon(1e-13));
    CHECK(upstream_mobility(input(l, r, ctx), m).F == doctest::Approx(F).epsilon(1e-13));
  }
  const Conc c{0.2, 0.3};
  for (int k = 0; k < 50; ++k) {
    const State l{testing::uniform(), c}, r{testing::uniform(), c};
    CHECK(godunov(input(l, r, ctx), m).F ==
          doctest::Approx(flux(l.s, c, ctx, m)).epsilon(1e-12));
  }
}

TEST_CASE("DFLU on non-monotone flux equals the scalar Godunov value") {
  const PhysicsModel m = benchmark_model();
  int checked = 0;
  while (checked < 200) {
    const Conc c{testing::uniform(), testing::uniform()};
    const FluxContext ctx = vertical(testing::uniform(-0.3, 0.3), testing::uniform(0.5, 1.5));
    const double theta = argmin_flux(c, ctx, m);
    if (theta <= 0.01 || theta >= 0.99) continue;
    const State l{testing::uniform(0.0, theta), c}, r{testing::uniform(theta, 1.0), c};
    const double expect = flux(theta, c, ctx, m);
    CHECK(dflu(input(l, r, ctx), m).F == doctest::Approx(expect).epsilon(1e-12));
    CHECK(godunov(input(l, r, ctx), m).F == doctest::Approx(expect).epsilon(1e-10));
    ++checked;
  }
}

TEST_CASE("scalar Godunov against a grid scan") {
  const PhysicsModel m = benchmark_model();
  for (int k = 0; k < 100; ++k) {
    const Conc c{testing::uniform(), testing::uniform()};
    const FluxContext ctx = vertical(testing::uniform(-0.3, 0.3));
    const double a = testing::uniform(), b = testing::uniform();
    const double expect = scan_godunov(a, b, c, ctx, m);
    CHECK(godunov(input({a, c}, {b, c}, ctx), m).F == doctest::Approx(expect).epsilon(1e-7));
    CHECK(dflu(input({a, c}, {b, c}, ctx), m).F == doctest::Approx(expect).epsilon(1e-7));
  }
}

// Upstream mobility mixes lambda_w from one side with lambda_o from the other,
// so only the Riemann-based fluxes are bounded by the two flux curves.
TEST_CASE("benchmark data stays inside the flux envelope") {
  const PhysicsModel m = benchmark_model();
  const State l{0.1, {1.0, 0.6}}, r{1.0, {0.0, 0.0}};
  const InterfaceInput in = input(l, r);
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (int k = 0; k <= 10000; ++k)
    for (const Conc& c : {l.c, r.c}) {
      const double F = flux(k / 10000.0, c, vertical(), m);
      lo = std::min(lo, F);
      hi = std::max(hi, F);
    }
  CHECK(std::isfinite(upstream_mobility(in, m).F));
  for (FluxKind kind : {FluxKind::Dflu, FluxKind::Godunov}) {
    const double F = interface_flux(kind, in, m).F;
    CHECK(F >= lo - 1e-12);
    CHECK(F <= hi + 1e-12);
  }
}

TEST_CASE("upstream mobility with uniform K reduces to v f(s_L)") {
  const PhysicsModel m = benchmark_model();
  const State l{0.7, {0.5, 0.1}}, r{0.2, {0.0, 0.3}};
  const double lw = l.s * l.s / 1.1, lo = (1.0 - l.s) * (1.0 - l.s);
  CHECK(upstream_mobility(input(l, r, horizontal(0.4)), m).F ==
        doctest::Approx(0.4 * lw / (lw + lo)).epsilon(1e-14));
}

TEST_CASE("concentration flux carries the upwind side") {
  const State l{0.5, {0.8, 0.3}}, r{0.5, {0.1, 0.2}};
  const InterfaceInput in = input(l, r);
  double G[2];
  concentration_flux(in, {0.0, true}, 2, G);
  CHECK(G[0] == 0.0);
  CHECK(G[1] == 0.0);
  concentration_flux(in, {0.25, true}, 2, G);
  CHECK(G[0] == doctest::Approx(0.25 * 0.8));
  CHECK(G[1] == doctest::Approx(0.25 * 0.3));
  concentration_flux(in, {-0.25, false}, 2, G);
  CHECK(G[0] == doctest::Approx(-0.25 * 0.1));
  CHECK(G[1] == doctest::Approx(-0.25 * 0.2));
}
