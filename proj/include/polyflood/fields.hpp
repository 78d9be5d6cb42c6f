#ifndef POLYFLOOD_FIELDS_HPP_
#define POLYFLOOD_FIELDS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "polyflood/pressure2d.hpp"

namespace polyflood {

// splitmix64; the stream for a seed is fixed across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

enum class FieldKind { Constant, GaussianBumps, HardRock };

FieldKind parse_field_kind(const std::string& name);
std::string to_string(FieldKind kind);

struct FieldSpec {
  FieldKind kind = FieldKind::Constant;
  double value = 1.0;  // constant field
  int N = 100;
  std::uint64_t seed = 1;
  double bump_width = 0.05;
  double clip_lo = 0.5;
  double clip_hi = 1.5;
  double radius = 0.0015;
  double rock_value = 0.01;
  double background = 1.0;
  void validate() const;
};

struct Field {
  std::vector<double> K;  // per cell, flat index j*nx + i
  std::vector<std::string> warnings;
};

// Centers x_i drawn as (uniform, uniform) pairs in order from the seeded stream.
Field generate(const FieldSpec& spec, const Grid2D& grid);

// CSV with columns x, y, K at cell centers.
void export_field(const std::string& path, const Grid2D& grid, const std::vector<double>& K);
// Rows must list every cell center of `grid` (any order); throws otherwise.
std::vector<double> import_field(const std::string& path, const Grid2D& grid);

}  // namespace polyflood

#endif  // POLYFLOOD_FIELDS_HPP_
