#pragma once

// Truncated extension discretization on C_Y = Omega x (0, Y): graded grid in
// y, univariate Q1 matrix pairs, the Kronecker-sum operator and its trace.

#include "fracschrod/kronecker.hpp"
#include "fracschrod/problem.hpp"
#include "fracschrod/tridiagonal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fracschrod {

/// y_k = (k/N)^gamma * Y for k = 0..N.
struct GradedGrid {
  std::size_t N = 0;
  double gamma = 1.0;
  double Y = 1.0;
  std::vector<double> points;
};

GradedGrid graded_points(std::size_t N, double gamma, double Y);

/// max(1.01, 3 / (1 - alpha) + 0.5).
double auto_grading_exponent(double alpha);

/// Stiffness and mass matrix over the free nodes of one direction.
struct UnivariatePair {
  SymmetricTridiagonal stiffness;
  SymmetricTridiagonal mass;

  std::size_t size() const { return stiffness.size(); }
};

/// Uniform grid with N cells on an interval of the given length, Dirichlet at
/// both ends: N - 1 free nodes.
UnivariatePair assemble_univariate(std::size_t N, double length);

/// Weight y^alpha, Dirichlet only at the last point. Node 0 stays free, so the
/// pair has points.size() - 1 rows. Cell integrals are exact.
UnivariatePair assemble_weighted_univariate(std::span<const double> points, double alpha);
UnivariatePair assemble_weighted_univariate(const GradedGrid& grid, double alpha);

struct ExtensionSystem {
  KroneckerSum op;
  std::vector<double> rhs;
  std::vector<std::size_t> dims; ///< (M, ..., M, N_y)
  ProblemSpec spec;
  BoxMesh mesh;
  GradedGrid grid;

  std::size_t trace_size() const { return mesh.interior_count(); }
  std::size_t extended_size() const { return dims.back(); }
};

/// A = sum_m F_1^(m) (x) ... (x) F_{d+1}^(m) with the stiffness member at
/// position m. b is d_s (f, phi_j) on the y = 0 slice, zero elsewhere.
ExtensionSystem assemble_extension_system(const ProblemSpec& spec, std::size_t N, const GradedGrid& grid,
                                          const ScalarField& f);

/// Same with the manufactured forcing.
ExtensionSystem assemble_extension_system(const ProblemSpec& spec, std::size_t N, const GradedGrid& grid);

/// Entries with i_{d+1} = 0: flat indices j * dims.back().
std::vector<double> trace_extract(std::span<const double> uY, std::span<const std::size_t> dims);

/// Nodal finite-difference solution on the full (Nx+1) x (Ny+1) grid,
/// x index major: values[i * (Ny + 1) + k].
struct FdSolution {
  std::size_t Nx = 0;
  std::size_t Ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  std::vector<double> values;
  std::size_t iterations = 0;

  double at(std::size_t i, std::size_t k) const { return values[i * (Ny + 1) + k]; }
  /// y = 0 row at the interior x nodes, comparable with a FEM trace.
  std::vector<double> trace() const;
};

/// Conservative central differences for div(y^alpha grad u) = 0 with a
/// half-cell flux balance at y = 0 carrying d_s f. d = 1 only.
FdSolution fd_solve_extension_1d(const ProblemSpec& spec, std::size_t Nx, std::size_t Ny, double Y,
                                 const ScalarField& f);

} // namespace fracschrod
