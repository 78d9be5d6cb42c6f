#include "polyflood/pressure2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polyflood {

void Grid2D::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid.nx and grid.ny must be >= 2");
}

PressureBC PressureBC::quarter_five_spot(double fraction_in, double fraction_out) {
  PressureBC bc;
  bc.inlet = {{Edge::Left, 0.0, fraction_in}, {Edge::Bottom, 0.0, fraction_in}};
  bc.outlet = {{Edge::Right, 1.0 - fraction_out, 1.0}, {Edge::Top, 1.0 - fraction_out, 1.0}};
  return bc;
}

PressureBC PressureBC::strip() {
  PressureBC bc;
  bc.inlet = {{Edge::Left, 0.0, 1.0}};
  bc.outlet = {{Edge::Right, 0.0, 1.0}};
  return bc;
}

namespace {

bool covers(const std::vector<EdgeSpan>& spans, Edge edge, double coord) {
  for (const EdgeSpan& sp : spans)
    if (sp.edge == edge && coord >= sp.from && coord <= sp.to) return true;
  return false;
}

// Visits every boundary face as (edge, face index, adjacent cell, coordinate along edge).
template <class Fn>
void for_boundary_faces(const Grid2D& g, Fn fn) {
  for (int j = 0; j < g.ny; ++j) {
    const double y = (j + 0.5) * g.dy();
    fn(Edge::Left, g.xface(0, j), g.cell(0, j), y);
    fn(Edge::Right, g.xface(g.nx, j), g.cell(g.nx - 1, j), y);
  }
  for (int i = 0; i < g.nx; ++i) {
    const double x = (i + 0.5) * g.dx();
    fn(Edge::Bottom, g.yface(i, 0), g.cell(i, 0), x);
    fn(Edge::Top, g.yface(i, g.ny), g.cell(i, g.ny - 1), x);
  }
}

// Five-point operator: row c reads diag[c] p_c + sum over neighbours off * p_nb.
struct Stencil {
  std::vector<double> diag, west, east, south, north, rhs;
};

Stencil assemble(const FaceCoefficients& co, const PressureBC& bc, const Grid2D& g) {
  const auto n = static_cast<size_t>(g.n_cells());
  Stencil A{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double dx = g.dx(), dy = g.dy();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double t = dy * co.mu_x[static_cast<size_t>(g.xface(i + 1, j))] / dx;
      const auto a = static_cast<size_t>(g.cell(i, j)), b = static_cast<size_t>(g.cell(i + 1, j));
      A.diag[a] += t;
      A.diag[b] += t;
      A.east[a] = -t;
      A.west[b] = -t;
    }
  }
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const auto f = static_cast<size_t>(g.yface(i, j + 1));
      const double t = dx * co.mu_y[f] / dy;
      const auto a = static_cast<size_t>(g.cell(i, j)), b = static_cast<size_t>(g.cell(i, j + 1));
      A.diag[a] += t;
      A.diag[b] += t;
      A.north[a] = -t;
      A.south[b] = -t;
      A.rhs[a] += dx * co.theta_y[f];
      A.rhs[b] -= dx * co.theta_y[f];
    }
  }
  for_boundary_faces(g, [&](Edge e, int face, int cell, double coord) {
    const BoundaryKind kind = bc.classify(e, coord);
    if (kind == BoundaryKind::Wall) return;
    const double pd = kind == BoundaryKind::Inlet ? bc.p_in : bc.p_out;
    const bool xdir = e == Edge::Left || e == Edge::Right;
    const auto f = static_cast<size_t>(face);
    const auto c = static_cast<size_t>(cell);
    const double area = xdir ? dy : dx;
    const double t = area * 2.0 * (xdir ? co.mu_x[f] / dx : co.mu_y[f] / dy);
    const double grav = xdir ? 0.0 : area * co.theta_y[f];
    A.diag[c] += t;
    const bool low = e == Edge::Left || e == Edge::Bottom;
    A.rhs[c] += t * pd + (low ? -grav : grav);
  });
  return A;
}

// Off-diagonals vanish across the grid edges, so only the first and last rows
// need bounds; elsewhere the wrapped neighbour is multiplied by zero.
void apply(const Stencil& A, const Grid2D& g, const std::vector<double>& x, std::vector<double>& y) {
  const auto nx = static_cast<size_t>(g.nx), n = A.diag.size();
  const double *d = A.diag.data(), *w = A.west.data(), *e = A.east.data();
  const double *so = A.south.data(), *no = A.north.data(), *xp = x.data();
  double* yp = y.data();
  for (size_t c = 0; c < nx; ++c)
    yp[c] = d[c] * xp[c] + (c > 0 ? w[c] * xp[c - 1] : 0.0) + e[c] * xp[c + 1] + no[c] * xp[c + nx];
  for (size_t c = nx; c < n - nx; ++c)
    yp[c] = d[c] * xp[c] + w[c] * xp[c - 1] + e[c] * xp[c + 1] + so[c] * xp[c - nx] + no[c] * xp[c + nx];
  for (size_t c = n - nx; c < n; ++c)
    yp[c] = d[c] * xp[c] + w[c] * xp[c - 1] + (c + 1 < n ? e[c] * xp[c + 1] : 0.0) + so[c] * xp[c - nx];
}

// Zero-fill incomplete Cholesky A ~ (D + L) D^-1 (D + L)^T, L the west/south part
// of A. omega > 0 moves that fraction of the dropped fill onto the diagonal
// (modified variant, near-constant-vector exactness). Off-diagonals are stored
// scaled by 1/D so each sweep carries a single fma per cell.
struct IcFactor {
  std::vector<double> inv, west, south, east, north;
};

IcFactor incomplete_cholesky(const Stencil& A, const Grid2D& g, double omega) {
  const auto nx = static_cast<size_t>(g.nx), ny = static_cast<size_t>(g.ny);
  const size_t n = A.diag.size();
  IcFactor f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
             std::vector<double>(n), std::vector<double>(n)};
  std::vector<double>& inv = f.inv;
  for (size_t j = 0; j < ny; ++j)
    for (size_t i = 0; i < nx; ++i) {
      const size_t c = j * nx + i;
      double v = A.diag[c];
      if (i > 0) {
        const double w = A.west[c] * inv[c - 1];
        v -= w * (A.west[c] + omega * A.north[c - 1]);
      }
      if (j > 0) {
        const double s = A.south[c] * inv[c - nx];
        v -= s * (A.south[c] + omega * A.east[c - nx]);
      }
      // Safeguard the modified variant against near-zero pivots.
      if (v < 0.25 * A.diag[c]) v = A.diag[c];
      inv[c] = 1.0 / v;
    }
  for (size_t c = 0; c < n; ++c) {
    f.west[c] = A.west[c] * inv[c];
    f.south[c] = A.south[c] * inv[c];
    f.east[c] = A.east[c] * inv[c];
    f.north[c] = A.north[c] * inv[c];
  }
  return f;
}

// West/south/east/north vanish across the grid edges, as in apply.
void incomplete_cholesky_solve(const IcFactor& f, const Grid2D& g, const std::vector<double>& r,
                               std::vector<double>& z) {
  const auto nx = static_cast<size_t>(g.nx), n = f.inv.size();
  const double *w = f.west.data(), *e = f.east.data(), *so = f.south.data(), *no = f.north.data();
  const double *iv = f.inv.data(), *rp = r.data();
  double* zp = z.data();
  for (size_t c = 0; c < n; ++c) zp[c] = rp[c] * iv[c];
  for (size_t c = 1; c < nx; ++c) zp[c] -= w[c] * zp[c - 1];
  // The row below is final, so only the west term sits on the dependency chain.
  for (size_t c = nx; c < n; ++c) zp[c] = (zp[c] - so[c] * zp[c - nx]) - w[c] * zp[c - 1];
  for (size_t c = n - 1; c-- > n - nx;) zp[c] -= e[c] * zp[c + 1];
  for (size_t c = n - nx; c-- > 0;) zp[c] = (zp[c] - no[c] * zp[c + nx]) - e[c] * zp[c + 1];
}

// Four fixed accumulators: vectorizable and independent of thread count.
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const size_t n = a.size(), n4 = n - n % 4;
  for (size_t i = 0; i < n4; i += 4)
    for (size_t k = 0; k < 4; ++k) s[k] += a[i + k] * b[i + k];
  for (size_t i = n4; i < n; ++i) s[0] += a[i] * b[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace

Preconditioner parse_preconditioner(const std::string& name) {
  if (name == "none") return Preconditioner::None;
  if (name == "jacobi") return Preconditioner::Jacobi;
  if (name == "ic0") return Preconditioner::IncompleteCholesky;
  if (name == "mic0") return Preconditioner::ModifiedIncompleteCholesky;
  throw std::invalid_argument("pressure.preconditioner: unknown value '" + name + "'");
}

std::string to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::None: return "none";
    case Preconditioner::Jacobi: return "jacobi";
    case Preconditioner::IncompleteCholesky: return "ic0";
    case Preconditioner::ModifiedIncompleteCholesky: return "mic0";
  }
  return "none";
}

BoundaryKind PressureBC::classify(Edge edge, double coord) const {
  if (covers(inlet, edge, coord)) return BoundaryKind::Inlet;
  if (covers(outlet, edge, coord)) return BoundaryKind::Outlet;
  return BoundaryKind::Wall;
}

void PressureBC::validate(const Grid2D& grid) const {
  if (!(p_in > p_out)) throw std::invalid_argument("bc.p_in must exceed bc.p_out");
  int dirichlet = 0;
  for_boundary_faces(grid, [&](Edge e, int, int, double coord) {
    const bool in = covers(inlet, e, coord), out = covers(outlet, e, coord);
    if (in && out) throw std::invalid_argument("bc: boundary face is both inlet and outlet");
    dirichlet += in || out;
  });
  if (dirichlet == 0) throw std::invalid_argument("bc: no Dirichlet face, pressure is singular");
}

FaceCoefficients face_coefficients(const Grid2D& g, const std::vector<State>& cells,
                                   const std::vector<double>& K, const PhysicsModel& model) {
  const size_t n = static_cast<size_t>(g.n_cells());
  if (cells.size() != n || K.size() != n) throw std::invalid_argument("field size mismatch");
  std::vector<double> mu(n), th(n);
  const double rw = model.gravity_on ? model.rho_w_g : 0.0;
  const double ro = model.gravity_on ? model.rho_o_g : 0.0;
  for (size_t c = 0; c < n; ++c) {
    const double lw = water_mobility(cells[c].s, cells[c].c, model);
    const double lo = oil_mobility(cells[c].s, model);
    mu[c] = (lw + lo) * K[c];
    th[c] = (lw * rw + lo * ro) * K[c];
    if (!(mu[c] > 0.0)) throw std::domain_error("degenerate cell: mu = 0 at " + std::to_string(c));
  }
  FaceCoefficients co;
  co.mu_x.assign(static_cast<size_t>(g.n_xfaces()), 0.0);
  co.mu_y.assign(static_cast<size_t>(g.n_yfaces()), 0.0);
  co.theta_y.assign(static_cast<size_t>(g.n_yfaces()), 0.0);
  for (int j = 0; j < g.ny; ++j) {
    co.mu_x[static_cast<size_t>(g.xface(0, j))] = mu[static_cast<size_t>(g.cell(0, j))];
    co.mu_x[static_cast<size_t>(g.xface(g.nx, j))] = mu[static_cast<size_t>(g.cell(g.nx - 1, j))];
    for (int i = 1; i < g.nx; ++i) {
      const double a = mu[static_cast<size_t>(g.cell(i - 1, j))];
      const double b = mu[static_cast<size_t>(g.cell(i, j))];
      co.mu_x[static_cast<size_t>(g.xface(i, j))] = 2.0 / (1.0 / a + 1.0 / b);
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    const auto b0 = static_cast<size_t>(g.cell(i, 0)), t0 = static_cast<size_t>(g.cell(i, g.ny - 1));
    co.mu_y[static_cast<size_t>(g.yface(i, 0))] = mu[b0];
    co.theta_y[static_cast<size_t>(g.yface(i, 0))] = th[b0];
    co.mu_y[static_cast<size_t>(g.yface(i, g.ny))] = mu[t0];
    co.theta_y[static_cast<size_t>(g.yface(i, g.ny))] = th[t0];
    for (int j = 1; j < g.ny; ++j) {
      const auto a = static_cast<size_t>(g.cell(i, j - 1)), b = static_cast<size_t>(g.cell(i, j));
      const auto f = static_cast<size_t>(g.yface(i, j));
      const double m = 2.0 / (1.0 / mu[a] + 1.0 / mu[b]);
      co.mu_y[f] = m;
      co.theta_y[f] = 0.5 * m * (th[a] / mu[a] + th[b] / mu[b]);
    }
  }
  return co;
}

PressureSolution assemble_and_solve(const FaceCoefficients& coeffs, const PressureBC& bc,
                                    const Grid2D& grid, const CgOptions& options,
                                    const std::vector<double>* guess) {
  bc.validate(grid);
  const Stencil A = assemble(coeffs, bc, grid);
  const size_t n = A.diag.size();
  PressureSolution sol;
  sol.p = guess && guess->size() == n ? *guess : std::vector<double>(n, 0.5 * (bc.p_in + bc.p_out));
  std::vector<double> r(n), z(n), d(n), q(n);
  apply(A, grid, sol.p, q);
  for (size_t i = 0; i < n; ++i) r[i] = A.rhs[i] - q[i];
  const double bnorm = std::sqrt(dot(A.rhs, A.rhs));
  const double target = options.rel_tol * (bnorm > 0.0 ? bnorm : 1.0);
  const int max_iter = options.max_iter > 0 ? options.max_iter : 5 * grid.n_cells();
  IcFactor ic;
  if (options.precond == Preconditioner::IncompleteCholesky) ic = incomplete_cholesky(A, grid, 0.0);
  if (options.precond == Preconditioner::ModifiedIncompleteCholesky)
    ic = incomplete_cholesky(A, grid, 0.99);
  auto precondition = [&]() {
    switch (options.precond) {
      case Preconditioner::None: z = r; break;
      case Preconditioner::Jacobi:
        for (size_t i = 0; i < n; ++i) z[i] = r[i] / A.diag[i];
        break;
      case Preconditioner::IncompleteCholesky:
      case Preconditioner::ModifiedIncompleteCholesky:
        incomplete_cholesky_solve(ic, grid, r, z);
        break;
    }
  };
  precondition();
  d = z;
  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));
  int it = 0;
  while (rnorm > target && it < max_iter) {
    apply(A, grid, d, q);
    const double alpha = rz / dot(d, q);
    for (size_t i = 0; i < n; ++i) {
      sol.p[i] += alpha * d[i];
      r[i] -= alpha * q[i];
    }
    precondition();
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
    rnorm = std::sqrt(dot(r, r));
    ++it;
  }
  sol.iterations = it;
  sol.rel_residual = rnorm / (bnorm > 0.0 ? bnorm : 1.0);
  if (rnorm > target)
    throw PressureNotConverged("CG did not converge in " + std::to_string(it) +
                               " iterations, relative residual " + std::to_string(sol.rel_residual));
  return sol;
}

FaceVelocities face_velocities(const std::vector<double>& p, const FaceCoefficients& co,
                               const PressureBC& bc, const Grid2D& g) {
  FaceVelocities v;
  v.vx.assign(static_cast<size_t>(g.n_xfaces()), 0.0);
  v.vy.assign(static_cast<size_t>(g.n_yfaces()), 0.0);
  const double dx = g.dx(), dy = g.dy();
  auto P = [&](int i, int j) { return p[static_cast<size_t>(g.cell(i, j))]; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const auto f = static_cast<size_t>(g.xface(i, j));
      v.vx[f] = -co.mu_x[f] * (P(i, j) - P(i - 1, j)) / dx;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto f = static_cast<size_t>(g.yface(i, j));
      v.vy[f] = -co.mu_y[f] * (P(i, j) - P(i, j - 1)) / dy - co.theta_y[f];
    }
  for_boundary_faces(g, [&](Edge e, int face, int cell, double coord) {
    const BoundaryKind kind = bc.classify(e, coord);
    if (kind == BoundaryKind::Wall) return;
    const double pd = kind == BoundaryKind::Inlet ? bc.p_in : bc.p_out;
    const double pc = p[static_cast<size_t>(cell)];
    const auto f = static_cast<size_t>(face);
    switch (e) {
      case Edge::Left: v.vx[f] = -2.0 * co.mu_x[f] * (pc - pd) / dx; break;
      case Edge::Right: v.vx[f] = -2.0 * co.mu_x[f] * (pd - pc) / dx; break;
      case Edge::Bottom: v.vy[f] = -2.0 * co.mu_y[f] * (pc - pd) / dy - co.theta_y[f]; break;
      case Edge::Top: v.vy[f] = -2.0 * co.mu_y[f] * (pd - pc) / dy - co.theta_y[f]; break;
    }
  });
  return v;
}

std::vector<double> divergence(const FaceVelocities& v, const Grid2D& g) {
  std::vector<double> div(static_cast<size_t>(g.n_cells()));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      div[static_cast<size_t>(g.cell(i, j))] =
          (v.vx[static_cast<size_t>(g.xface(i + 1, j))] - v.vx[static_cast<size_t>(g.xface(i, j))]) *
              g.dy() +
          (v.vy[static_cast<size_t>(g.yface(i, j + 1))] - v.vy[static_cast<size_t>(g.yface(i, j))]) *
              g.dx();
  return div;
}

double assembled_asymmetry(const FaceCoefficients& coeffs, const PressureBC& bc,
                           const Grid2D& g) {
  const Stencil A = assemble(coeffs, bc, g);
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto c = static_cast<size_t>(g.cell(i, j));
      if (i + 1 < g.nx) worst = std::max(worst, std::abs(A.east[c] - A.west[c + 1]));
      if (j + 1 < g.ny)
        worst = std::max(worst, std::abs(A.north[c] - A.south[c + static_cast<size_t>(g.nx)]));
    }
  return worst;
}

}  // namespace polyflood
