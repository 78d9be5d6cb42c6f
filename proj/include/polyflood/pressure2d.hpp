#ifndef POLYFLOOD_PRESSURE2D_HPP_
#define POLYFLOOD_PRESSURE2D_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "polyflood/physics.hpp"

namespace polyflood {

// n_x by n_y cells on the unit square; cell (i, j) has flat index j*nx + i.
// x-faces (normal along x) are indexed j*(nx+1) + i, face i sitting left of cell i;
// y-faces are indexed j*nx + i, face j sitting below cell j.
struct Grid2D {
  int nx = 100;
  int ny = 100;
  double dx() const { return 1.0 / nx; }
  double dy() const { return 1.0 / ny; }
  int cell(int i, int j) const { return j * nx + i; }
  int xface(int i, int j) const { return j * (nx + 1) + i; }
  int yface(int i, int j) const { return j * nx + i; }
  int n_cells() const { return nx * ny; }
  int n_xfaces() const { return (nx + 1) * ny; }
  int n_yfaces() const { return nx * (ny + 1); }
  void validate() const;
};

enum class Edge { Left, Right, Bottom, Top };
enum class BoundaryKind { Wall, Inlet, Outlet };

// Boundary faces of `edge` whose center coordinate along the edge lies in [from, to].
struct EdgeSpan {
  Edge edge;
  double from;
  double to;
};

struct PressureBC {
  double p_in = 8.0;
  double p_out = 1.0;
  std::vector<EdgeSpan> inlet;
  std::vector<EdgeSpan> outlet;

  // Inlet on the left and bottom edges next to the origin, outlet on the right
  // and top edges next to (1, 1).
  static PressureBC quarter_five_spot(double fraction_in = 0.1, double fraction_out = 0.1);
  // Whole left edge inlet, whole right edge outlet, walls top and bottom.
  static PressureBC strip();

  BoundaryKind classify(Edge edge, double coord) const;
  // Rejects p_in <= p_out, faces claimed by both lists and grids with no Dirichlet face.
  void validate(const Grid2D& grid) const;
};

struct FaceCoefficients {
  std::vector<double> mu_x;     // per x-face
  std::vector<double> mu_y;     // per y-face
  std::vector<double> theta_y;  // per y-face, 0 with gravity off
};

// mu = (lambda_w + lambda_o) K and theta = (lambda_w rho_w + lambda_o rho_o) g K per
// cell; interior faces take harmonic means, boundary faces the adjacent cell value.
FaceCoefficients face_coefficients(const Grid2D& grid, const std::vector<State>& cells,
                                   const std::vector<double>& K, const PhysicsModel& model);

enum class Preconditioner { None, Jacobi, IncompleteCholesky, ModifiedIncompleteCholesky };

Preconditioner parse_preconditioner(const std::string& name);
std::string to_string(Preconditioner p);

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0 means 5 * n_cells
  Preconditioner precond = Preconditioner::None;
};

struct PressureSolution {
  std::vector<double> p;
  int iterations = 0;
  double rel_residual = 0.0;
};

class PressureNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Five-point system from zero discrete divergence; Dirichlet faces use the
// half-cell transmissibility 2 mu / h. `guess` (may be null) warm-starts CG.
PressureSolution assemble_and_solve(const FaceCoefficients& coeffs, const PressureBC& bc,
                                    const Grid2D& grid, const CgOptions& options = {},
                                    const std::vector<double>* guess = nullptr);

struct FaceVelocities {
  std::vector<double> vx;  // per x-face, positive along +x
  std::vector<double> vy;  // per y-face, positive along +y
};

FaceVelocities face_velocities(const std::vector<double>& p, const FaceCoefficients& coeffs,
                               const PressureBC& bc, const Grid2D& grid);

// Net outward flux sum_f v_f |f| per cell.
std::vector<double> divergence(const FaceVelocities& vel, const Grid2D& grid);

// Largest absolute difference between transmissibility i->j and j->i in the assembled matrix.
double assembled_asymmetry(const FaceCoefficients& coeffs, const PressureBC& bc,
                           const Grid2D& grid);

}  // namespace polyflood

#endif  // POLYFLOOD_PRESSURE2D_HPP_
