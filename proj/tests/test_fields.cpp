#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "polyflood/fields.hpp"
#include "polyflood/io.hpp"
#include "support.hpp"

using namespace polyflood;

TEST_CASE("SplitMix64 reference stream") {
  // Reference values from an independent implementation of the splitmix64 recurrence.
  SplitMix64 a(1234567);
  CHECK(a.next() == 6457827717110365317ULL);
  CHECK(a.next() == 3203168211198807973ULL);
  CHECK(a.next() == 9817491932198370423ULL);
  SplitMix64 b(1);
  CHECK(b.next() == 10451216379200822465ULL);
  CHECK(b.next() == 13757245211066428519ULL);
  CHECK(b.next() == 17911839290282890590ULL);
  SplitMix64 c(7);
  for (int k = 0; k < 10000; ++k) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("field kinds by name") {
  CHECK(parse_field_kind("pm1") == FieldKind::GaussianBumps);
  CHECK(parse_field_kind("pm2") == FieldKind::HardRock);
  CHECK(parse_field_kind("constant") == FieldKind::Constant);
  CHECK_THROWS_AS(parse_field_kind("fractal"), std::invalid_argument);
  for (FieldKind k : {FieldKind::Constant, FieldKind::GaussianBumps, FieldKind::HardRock})
    CHECK(parse_field_kind(to_string(k)) == k);
}

TEST_CASE("constant and empty bump fields") {
  const Grid2D g{10, 10};
  FieldSpec spec;
  spec.value = 2.5;
  for (double K : generate(spec, g).K) CHECK(K == 2.5);
  spec.kind = FieldKind::GaussianBumps;
  spec.N = 0;
  for (double K : generate(spec, g).K) CHECK(K == 0.5);
}

TEST_CASE("Gaussian bumps match a direct evaluation") {
  const Grid2D g{50, 50};
  FieldSpec spec;
  spec.kind = FieldKind::GaussianBumps;
  spec.N = 20;
  spec.seed = 99;
  const Field f = generate(spec, g);
  SplitMix64 rng(99);
  std::vector<double> px, py;
  for (int k = 0; k < 20; ++k) {
    px.push_back(rng.uniform());
    py.push_back(rng.uniform());
  }
  for (int j = 0; j < g.ny; j += 7)
    for (int i = 0; i < g.nx; i += 3) {
      const double x = (i + 0.5) / 50, y = (j + 0.5) / 50;
      double sum = 0.0;
      for (int k = 0; k < 20; ++k)
        sum += std::exp(-((x - px[k]) * (x - px[k]) + (y - py[k]) * (y - py[k])) / 0.0025);
      CHECK(f.K[static_cast<size_t>(g.cell(i, j))] ==
            doctest::Approx(std::clamp(sum, 0.5, 1.5)).epsilon(1e-14));
    }
  for (double K : f.K) {
    CHECK(K >= 0.5);
    CHECK(K <= 1.5);
  }
}

TEST_CASE("hard rock field takes two values and warns below half a cell") {
  const Grid2D g{100, 100};
  FieldSpec spec;
  spec.kind = FieldKind::HardRock;
  const Field f = generate(spec, g);
  for (double K : f.K) CHECK((K == 0.01 || K == 1.0));
  CHECK(f.warnings.size() == 1);
  spec.radius = 0.05;
  const Field big = generate(spec, g);
  CHECK(big.warnings.empty());
  const long rocks = std::count(big.K.begin(), big.K.end(), 0.01);
  CHECK(rocks > 0);
  CHECK(rocks < g.n_cells());
}

TEST_CASE("fields are reproducible from the seed") {
  const Grid2D g{40, 30};
  FieldSpec spec;
  spec.kind = FieldKind::GaussianBumps;
  spec.seed = 5;
  const auto a = generate(spec, g).K, b = generate(spec, g).K;
  CHECK(a == b);
  spec.seed = 6;
  CHECK(generate(spec, g).K != a);
}

TEST_CASE("field export and import round trip") {
  const Grid2D g{12, 7};
  FieldSpec spec;
  spec.kind = FieldKind::GaussianBumps;
  const std::vector<double> K = generate(spec, g).K;
  const std::string path = testing::temp_path("field.csv");
  export_field(path, g, K);
  CHECK(import_field(path, g) == K);
  CHECK_THROWS_AS(import_field(path, Grid2D{7, 12}), std::runtime_error);
  CHECK_THROWS_AS(import_field(path, Grid2D{12, 8}), std::runtime_error);
}

TEST_CASE("field spec validation") {
  FieldSpec spec;
  spec.N = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = FieldSpec{};
  spec.clip_lo = 2.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = FieldSpec{};
  spec.value = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
