#pragma once

#include "fracschrod/kronecker.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracschrod {

/// Non-owning view of a real symmetric operator: size plus matvec.
class LinearOperator {
public:
  using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator(std::size_t size, MatVec apply) : size_(size), apply_(std::move(apply)) {}
  LinearOperator(const KroneckerSum& op); // NOLINT: implicit view
  LinearOperator(const CsrMatrix& op);    // NOLINT: implicit view

  std::size_t size() const { return size_; }
  void apply(std::span<const double> v, std::span<double> out) const { apply_(v, out); }
  std::vector<double> operator*(std::span<const double> v) const;

private:
  std::size_t size_;
  MatVec apply_;
};

struct CgOptions {
  double tolerance = 1e-10; ///< on ||A x - b|| / ||b||
  std::size_t max_iterations = 10000;
  /// Called after every iteration with the current iterate.
  std::function<void(std::size_t, std::span<const double>)> observer;
  /// Diagonal preconditioner as 1 / diag(A); empty runs plain CG.
  std::vector<double> inverse_diagonal;
};

/// 1 / diag(A) for CgOptions::inverse_diagonal. Throws if a diagonal entry is not positive.
std::vector<double> jacobi_preconditioner(const KroneckerSum& op);

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients from x0 = 0. Hitting max_iterations returns the last
/// iterate with converged = false; a NaN/breakdown throws NumericalError.
CgResult cg_solve(const LinearOperator& op, std::span<const double> b, const CgOptions& options = {});

/// Sparse Cholesky (LDL^T) on the explicit matrix.
std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b);

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  double tolerance = 0.0;
  std::size_t power_iterations = 0;
  std::size_t inverse_iterations = 0;
};

struct EigOptions {
  double tolerance = 1e-8;         ///< relative change of the Rayleigh quotient
  double inner_tolerance = 1e-8;   ///< CG tolerance for the inverse iteration
  std::size_t max_iterations = 20000;
  unsigned long long seed = 20240531;
};

/// lambda_max by power iteration, lambda_min by inverse iteration with CG.
SpectrumEstimate extreme_eigs(const LinearOperator& op, const EigOptions& options = {});

struct OdeOptions {
  double dt = 0.0;   ///< 0 selects 1.5 / (rate * ||A||) with a Gershgorin-type bound
  double rate = 1.0; ///< integrates du/dt = rate * (b - A u)
  double lambda_max_bound = 0.0; ///< required when dt == 0 and the operator is not a KroneckerSum
};

struct OdeResult {
  std::vector<double> u;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// Classic RK4 for du/dt = rate (b - A u), u(0) = 0, up to time T.
OdeResult ode_steady_solve(const LinearOperator& op, std::span<const double> b, double T,
                           const OdeOptions& options);
OdeResult ode_steady_solve(const KroneckerSum& op, std::span<const double> b, double T,
                           OdeOptions options = {});

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// ||a - b|| / ||b||
double relative_difference(std::span<const double> a, std::span<const double> b);

} // namespace fracschrod
