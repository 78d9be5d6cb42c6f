#include "polyflood/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyflood/io.hpp"

namespace polyflood {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

FieldKind parse_field_kind(const std::string& name) {
  if (name == "constant") return FieldKind::Constant;
  if (name == "gaussian-bumps" || name == "pm1") return FieldKind::GaussianBumps;
  if (name == "hard-rock" || name == "pm2") return FieldKind::HardRock;
  throw std::invalid_argument("field.kind: unknown value '" + name + "'");
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Constant: return "constant";
    case FieldKind::GaussianBumps: return "gaussian-bumps";
    case FieldKind::HardRock: return "hard-rock";
  }
  return "constant";
}

void FieldSpec::validate() const {
  if (N < 0) throw std::invalid_argument("field.N must be >= 0");
  if (!(radius > 0.0)) throw std::invalid_argument("field.radius must be > 0");
  if (!(bump_width > 0.0)) throw std::invalid_argument("field.bump_width must be > 0");
  if (!(clip_lo <= clip_hi)) throw std::invalid_argument("field.clip_lo must be <= field.clip_hi");
  if (kind == FieldKind::Constant && !(value > 0.0))
    throw std::invalid_argument("field.value must be > 0");
  if (kind == FieldKind::HardRock && !(rock_value > 0.0 && background > 0.0))
    throw std::invalid_argument("field.rock_value and field.background must be > 0");
}

Field generate(const FieldSpec& spec, const Grid2D& grid) {
  spec.validate();
  grid.validate();
  Field out;
  const size_t n = static_cast<size_t>(grid.n_cells());
  if (spec.kind == FieldKind::Constant) {
    out.K.assign(n, spec.value);
    return out;
  }
  SplitMix64 rng(spec.seed);
  std::vector<double> px(static_cast<size_t>(spec.N)), py(static_cast<size_t>(spec.N));
  for (int k = 0; k < spec.N; ++k) {
    px[static_cast<size_t>(k)] = rng.uniform();
    py[static_cast<size_t>(k)] = rng.uniform();
  }
  out.K.resize(n);
  if (spec.kind == FieldKind::HardRock && spec.radius < 0.5 * std::min(grid.dx(), grid.dy()))
    out.warnings.push_back("rock radius " + std::to_string(spec.radius) +
                           " is below half a cell; rocks act as point samples of cell centers");
  for (int j = 0; j < grid.ny; ++j) {
    const double y = (j + 0.5) * grid.dy();
    for (int i = 0; i < grid.nx; ++i) {
      const double x = (i + 0.5) * grid.dx();
      double K;
      if (spec.kind == FieldKind::GaussianBumps) {
        double sum = 0.0;
        for (size_t k = 0; k < px.size(); ++k) {
          const double r2 = (x - px[k]) * (x - px[k]) + (y - py[k]) * (y - py[k]);
          sum += std::exp(-r2 / (spec.bump_width * spec.bump_width));
        }
        K = std::clamp(sum, spec.clip_lo, spec.clip_hi);
      } else {
        K = spec.background;
        for (size_t k = 0; k < px.size(); ++k) {
          const double r2 = (x - px[k]) * (x - px[k]) + (y - py[k]) * (y - py[k]);
          if (r2 < spec.radius * spec.radius) {
            K = spec.rock_value;
            break;
          }
        }
      }
      out.K[static_cast<size_t>(grid.cell(i, j))] = K;
    }
  }
  return out;
}

void export_field(const std::string& path, const Grid2D& grid, const std::vector<double>& K) {
  Table t;
  t.header = {"x", "y", "K"};
  t.columns.assign(3, {});
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      t.columns[0].push_back((i + 0.5) * grid.dx());
      t.columns[1].push_back((j + 0.5) * grid.dy());
      t.columns[2].push_back(K[static_cast<size_t>(grid.cell(i, j))]);
    }
  write_csv(path, t);
}

std::vector<double> import_field(const std::string& path, const Grid2D& grid) {
  const Table t = read_csv(path);
  const auto& xs = t.column("x");
  const auto& ys = t.column("y");
  const auto& ks = t.column("K");
  if (t.rows() != static_cast<size_t>(grid.n_cells()))
    throw std::runtime_error(path + ": row count does not match the grid");
  std::vector<double> K(static_cast<size_t>(grid.n_cells()), NAN);
  for (size_t r = 0; r < t.rows(); ++r) {
    const double fi = xs[r] / grid.dx() - 0.5, fj = ys[r] / grid.dy() - 0.5;
    const long i = std::lround(fi), j = std::lround(fj);
    if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny || std::abs(fi - i) > 1e-6 ||
        std::abs(fj - j) > 1e-6)
      throw std::runtime_error(path + ": row " + std::to_string(r + 2) + " is not a cell center");
    K[static_cast<size_t>(grid.cell(static_cast<int>(i), static_cast<int>(j)))] = ks[r];
  }
  for (double k : K)
    if (std::isnan(k)) throw std::runtime_error(path + ": some cells are missing");
  for (double k : K)
    if (!(k > 0.0)) throw std::runtime_error(path + ": K must be > 0");
  return K;
}

}  // namespace polyflood
