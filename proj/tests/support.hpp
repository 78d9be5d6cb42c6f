#ifndef POLYFLOOD_TESTS_SUPPORT_HPP_
#define POLYFLOOD_TESTS_SUPPORT_HPP_

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "polyflood/physics.hpp"

namespace testing {

// Defaults of the 1D benchmark: mu_w = 0.5 + c1 + c2, mu_o = 1, rho_w g = 2,
// rho_o g = 1, a = 1 + 0.5 c, gravity on.
inline polyflood::PhysicsModel benchmark_model() { return polyflood::PhysicsModel{}; }

inline polyflood::FluxContext vertical(double v = 0.2, double K = 1.0) {
  return {v, K, polyflood::Direction::Vertical};
}

inline polyflood::FluxContext horizontal(double v = 0.2, double K = 1.0) {
  return {v, K, polyflood::Direction::Horizontal};
}

// Flux written out from the mobility model, independent of the library kernels.
inline double oracle_flux(double s, double mu_w, double mu_o, double v, double D) {
  const double lw = s * s / mu_w;
  const double lo = (1.0 - s) * (1.0 - s) / mu_o;
  return (v - D * lo) * lw / (lw + lo);
}

// Bisection for a sign change of g on [a, b].
template <class G>
double bisect(G g, double a, double b, double tol = 1e-14) {
  double ga = g(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

// Fresh per-process scratch path under the system temp directory.
inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("polyflood-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace testing

#endif  // POLYFLOOD_TESTS_SUPPORT_HPP_
