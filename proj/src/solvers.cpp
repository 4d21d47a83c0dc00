#include "fracschrod/solvers.hpp"

#include "fracschrod/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fracschrod {

LinearOperator::LinearOperator(const KroneckerSum& op)
    : size_(op.size()),
      apply_([&op](std::span<const double> v, std::span<double> out) { op.apply(v, out); }) {}

LinearOperator::LinearOperator(const CsrMatrix& op)
    : size_(op.rows),
      apply_([&op](std::span<const double> v, std::span<double> out) { op.apply(v, out); }) {}

std::vector<double> LinearOperator::operator*(std::span<const double> v) const {
  std::vector<double> out(size_);
  apply(v, out);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double relative_difference(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "relative_difference: size mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(num) / norm2(b);
}

CgResult cg_solve(const LinearOperator& op, std::span<const double> b, const CgOptions& options) {
  const std::size_t n = op.size();
  require(b.size() == n, "cg_solve: rhs length does not match operator size");
  require(options.tolerance > 0.0, "cg_solve: tolerance must be positive");
  const bool preconditioned = !options.inverse_diagonal.empty();
  require(!preconditioned || options.inverse_diagonal.size() == n, "cg_solve: preconditioner size mismatch");

  CgResult result;
  result.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n);
  auto precondition = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = preconditioned ? options.inverse_diagonal[i] * r[i] : r[i];
    }
  };
  precondition();
  std::vector<double> p = z;
  std::vector<double> ap(n);
  double rz = dot(r, z);

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    op.apply(p, ap);
    const double pap = dot(p, ap);
    if (!std::isfinite(pap) || pap <= 0.0) {
      std::ostringstream msg;
      msg << "cg_solve: breakdown at iteration " << it << " (p^T A p = " << pap << ")";
      throw NumericalError(msg.str());
    }
    const double step = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      result.x[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    const double rr = dot(r, r);
    result.iterations = it;
    result.relative_residual = std::sqrt(rr) / bnorm;
    if (options.observer) {
      options.observer(it, result.x);
    }
    if (!std::isfinite(rr)) {
      throw NumericalError("cg_solve: residual became NaN");
    }
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
    precondition();
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = z[i] + beta * p[i];
    }
  }
  return result;
}

std::vector<double> jacobi_preconditioner(const KroneckerSum& op) {
  std::vector<double> d = op.diagonal();
  for (double& v : d) {
    if (!(v > 0.0)) {
      throw NumericalError("jacobi_preconditioner: non-positive diagonal entry");
    }
    v = 1.0 / v;
  }
  return d;
}

std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b) {
  require(a.rows == a.cols && b.size() == a.rows, "direct_solve: size mismatch");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(a.nonzeros());
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(a.col_idx[p]), a.values[p]);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
  m.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("direct_solve: factorization failed");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("direct_solve: back substitution failed");
  }
  return {x.data(), x.data() + x.size()};
}

namespace {

std::vector<double> random_unit_vector(std::size_t n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = dist(rng);
  }
  const double nv = norm2(v);
  for (auto& x : v) {
    x /= nv;
  }
  return v;
}

} // namespace

SpectrumEstimate extreme_eigs(const LinearOperator& op, const EigOptions& options) {
  const std::size_t n = op.size();
  require(n > 0, "extreme_eigs: empty operator");
  SpectrumEstimate est;
  est.tolerance = options.tolerance;

  // Power iteration.
  std::vector<double> v = random_unit_vector(n, options.seed);
  std::vector<double> w(n);
  double lambda = 0.0;
  bool converged = false;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    op.apply(v, w);
    const double next = dot(v, w);
    const double wn = norm2(w);
    if (!std::isfinite(wn) || wn == 0.0) {
      throw NumericalError("extreme_eigs: power iteration broke down");
    }
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = w[i] / wn;
    }
    est.power_iterations = it;
    if (it > 1 && std::abs(next - lambda) <= options.tolerance * std::abs(next)) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }
  if (!converged) {
    throw NumericalError("extreme_eigs: power iteration did not converge");
  }
  est.lambda_max = lambda;

  // Inverse iteration.
  v = random_unit_vector(n, options.seed + 1);
  CgOptions inner;
  inner.tolerance = options.inner_tolerance;
  inner.max_iterations = std::max<std::size_t>(10 * n, 1000);
  lambda = 0.0;
  converged = false;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    CgResult solve = cg_solve(op, v, inner);
    if (!solve.converged) {
      throw NumericalError("extreme_eigs: inner CG did not converge");
    }
    const double ww = dot(solve.x, solve.x);
    const double next = dot(solve.x, v) / ww;
    const double wn = std::sqrt(ww);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = solve.x[i] / wn;
    }
    est.inverse_iterations = it;
    if (it > 1 && std::abs(next - lambda) <= options.tolerance * std::abs(next)) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }
  if (!converged) {
    throw NumericalError("extreme_eigs: inverse iteration did not converge");
  }
  est.lambda_min = lambda;
  if (est.lambda_min <= 0.0) {
    throw NumericalError("extreme_eigs: operator is not positive definite");
  }
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

OdeResult ode_steady_solve(const LinearOperator& op, std::span<const double> b, double T,
                           const OdeOptions& options) {
  const std::size_t n = op.size();
  require(b.size() == n, "ode_steady_solve: rhs length does not match operator size");
  require(T > 0.0, "ode_steady_solve: T must be positive");
  require(options.rate > 0.0, "ode_steady_solve: rate must be positive");

  double dt = options.dt;
  if (dt <= 0.0) {
    require(options.lambda_max_bound > 0.0, "ode_steady_solve: need dt or a lambda_max bound");
    dt = 1.5 / (options.rate * options.lambda_max_bound);
  }
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
  dt = T / static_cast<double>(steps);

  OdeResult result;
  result.u.assign(n, 0.0);
  result.steps = steps;
  result.dt = dt;

  const double rate = options.rate;
  const double bnorm = norm2(b);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), au(n);
  auto rhs = [&](std::span<const double> u, std::vector<double>& k) {
    op.apply(u, au);
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = rate * (b[i] - au[i]);
    }
  };

  auto& u = result.u;
  for (std::size_t step = 1; step <= steps; ++step) {
    rhs(u, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k1[i];
    rhs(stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k2[i];
    rhs(stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + dt * k3[i];
    rhs(stage, k4);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    // ||u(t)|| <= rate t ||b|| for the exact flow.
    const double un = norm2(u);
    const double t = static_cast<double>(step) * dt;
    if (!std::isfinite(un) || un > 2.0 * rate * t * bnorm + 1e-300) {
      std::ostringstream msg;
      msg << "ode_steady_solve: instability at t = " << t << "; dt = " << dt
          << " violates the RK4 stability limit";
      throw NumericalError(msg.str());
    }
  }
  return result;
}

OdeResult ode_steady_solve(const KroneckerSum& op, std::span<const double> b, double T,
                           OdeOptions options) {
  if (options.lambda_max_bound <= 0.0) {
    options.lambda_max_bound = op.norm_bound();
  }
  return ode_steady_solve(LinearOperator(op), b, T, options);
}

} // namespace fracschrod
