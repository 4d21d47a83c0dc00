#include "fracschrod/extension.hpp"

#include "fracschrod/errors.hpp"
#include "fracschrod/solvers.hpp"

#include <cmath>

namespace fracschrod {

std::vector<double> FdSolution::trace() const {
  std::vector<double> row(Nx - 1);
  for (std::size_t i = 1; i < Nx; ++i) {
    row[i - 1] = at(i, 0);
  }
  return row;
}

FdSolution fd_solve_extension_1d(const ProblemSpec& spec, std::size_t Nx, std::size_t Ny, double Y,
                                 const ScalarField& f) {
  require(spec.d() == 1, "finite-difference variant supports d = 1 only");
  require(Nx >= 2 && Ny >= 2, "finite-difference grids need at least 2 cells");
  require(Y > 0.0, "truncation height Y must be positive");

  const double alpha = spec.alpha();
  const double hx = spec.side() / static_cast<double>(Nx);
  const double hy = Y / static_cast<double>(Ny);

  // Unknowns: interior x nodes times y nodes 0..Ny-1. Rows are scaled by -hy so
  // the operator is (-D_xx) (x) W + I (x) K with W, K symmetric.
  auto yk = [&](double k) { return k * hy; };
  std::vector<double> w(Ny), kd(Ny), ko(Ny - 1);
  w[0] = std::pow(0.5 * hy, 1.0 + alpha) / (1.0 + alpha);
  for (std::size_t k = 1; k < Ny; ++k) {
    w[k] = hy * std::pow(yk(static_cast<double>(k)), alpha);
  }
  for (std::size_t k = 0; k < Ny; ++k) {
    const double up = std::pow(yk(static_cast<double>(k) + 0.5), alpha) / hy;
    const double down = k == 0 ? 0.0 : std::pow(yk(static_cast<double>(k) - 0.5), alpha) / hy;
    kd[k] = up + down;
    if (k + 1 < Ny) {
      ko[k] = -up;
    }
  }

  const std::size_t mx = Nx - 1;
  const auto dxx = SymmetricTridiagonal::toeplitz(mx, 2.0 / (hx * hx), -1.0 / (hx * hx));
  const auto weight = SymmetricTridiagonal(w, std::vector<double>(Ny - 1, 0.0));
  const auto flux = SymmetricTridiagonal(kd, ko);
  const KroneckerSum op({{dxx, weight}, {SymmetricTridiagonal::identity(mx), flux}});

  // Neumann datum -lim y^alpha u_y = d_s f enters the k = 0 balance.
  const double ds = ds_constant(spec.s());
  std::vector<double> rhs(mx * Ny, 0.0);
  double x[1];
  for (std::size_t i = 0; i < mx; ++i) {
    x[0] = spec.lo() + static_cast<double>(i + 1) * hx;
    rhs[i * Ny] = ds * f(x);
  }

  FdSolution sol{Nx, Ny, hx, hy, std::vector<double>((Nx + 1) * (Ny + 1), 0.0), 0};
  CgOptions options;
  options.tolerance = 1e-12;
  options.max_iterations = 50 * mx * Ny;
  const CgResult cg = cg_solve(op, rhs, options);
  if (!cg.converged) {
    throw NumericalError("fd_solve_extension_1d: CG did not converge (relative residual " +
                         std::to_string(cg.relative_residual) + ")");
  }
  sol.iterations = cg.iterations;
  for (std::size_t i = 0; i < mx; ++i) {
    for (std::size_t k = 0; k < Ny; ++k) {
      sol.values[(i + 1) * (Ny + 1) + k] = cg.x[i * Ny + k];
    }
  }
  return sol;
}

} // namespace fracschrod
