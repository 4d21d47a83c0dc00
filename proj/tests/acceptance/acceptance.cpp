// Acceptance criteria A1-A10. One PASS/FAIL line per criterion, with info
// lines for the measured values. Exit status is nonzero if any criterion fails.

#include "fracschrod/complexity.hpp"
#include "fracschrod/eigenbasis.hpp"
#include "fracschrod/errors.hpp"
#include "fracschrod/extension.hpp"
#include "fracschrod/schrodinger.hpp"
#include "fracschrod/solvers.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fracschrod;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> info;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    info.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { info.push_back("note " + what); }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> cg_reference(const ExtensionSystem& sys, double tol = 1e-12) {
  CgOptions options;
  options.tolerance = tol;
  options.max_iterations = 100000;
  options.inverse_diagonal = jacobi_preconditioner(sys.op);
  CgResult r = cg_solve(sys.op, sys.rhs, options);
  if (!r.converged) {
    throw NumericalError("reference CG did not converge");
  }
  return std::move(r.x);
}

ExtensionSystem system(int d, double s, std::size_t N, double gamma, double Y) {
  return assemble_extension_system(ProblemSpec(d, s), N, graded_points(N, gamma, Y));
}

// A1: manufactured-solution convergence.
Outcome a1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    double s;
    double gamma;
  };
  const std::vector<Case> cases{{0.2, auto_grading_exponent(1.0 - 2.0 * 0.2)}, {0.8, 4.0}};
  for (const auto& c : cases) {
    const ProblemSpec spec(1, c.s);
    std::vector<double> logh, loge;
    std::string errors;
    for (std::size_t N : {8u, 16u, 32u, 64u}) {
      const auto sys = system(1, c.s, N, c.gamma, 10.0);
      const double e = l2_error(trace_extract(cg_reference(sys, 1e-10), sys.dims), spec, sys.mesh);
      logh.push_back(std::log(sys.mesh.h()));
      loge.push_back(std::log(e));
      errors += " " + fmt(e);
    }
    // Least-squares slope of log e against log h, and the last pairwise order.
    const double n = static_cast<double>(logh.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logh.size(); ++i) {
      sx += logh[i];
      sy += loge[i];
      sxx += logh[i] * logh[i];
      sxy += logh[i] * loge[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double last = (loge[2] - loge[3]) / (logh[2] - logh[3]);
    out.note("s=" + fmt(c.s) + " gamma=" + fmt(c.gamma) + " errors" + errors);
    out.expect(slope >= 0.9 && last >= 0.9,
               "s=" + fmt(c.s) + " fitted order " + fmt(slope) + ", last order " + fmt(last) + " >= 0.9");
  }
  const double t = seconds_since(t0);
  out.expect(t < 60.0, "runtime " + fmt(t) + " s < 60 s");
  return out;
}

// A2: Schrodingerization against CG and the direct solve.
Outcome a2() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  SchrodingerParams params;
  params.T = 15.0;
  params.Np = 1024;
  params.unit = TimeUnit::relaxation;

  {
    const auto sys = system(1, 0.2, 16, 1.0, 10.0);
    const auto ref = cg_reference(sys);
    const auto r = schrodingerized_solve(sys.op, sys.rhs, params);
    const double err = relative_difference(r.x, ref);
    out.expect(err <= 1e-2, "d=1 N=16 ||x_schr - x_cg|| / ||x_cg|| = " + fmt(err) + " <= 1e-2");
    out.note("d=1 norm drift " + fmt(r.diagnostics.norm_drift) + ", imag residual " +
             fmt(r.diagnostics.imag_residual) + ", multipoint spread " + fmt(r.diagnostics.multipoint_spread) +
             ", window L=" + fmt(r.diagnostics.L) + " R=" + fmt(r.diagnostics.R));
    SchrodingerParams raw = params;
    raw.unit = TimeUnit::raw;
    const auto rr = schrodingerized_solve(sys.op, sys.rhs, raw);
    out.note("same run with T=15 in raw time units: relative error " + fmt(relative_difference(rr.x, ref)) +
             " (lambda_min " + fmt(r.diagnostics.lambda_min) + ")");
  }
  {
    const auto sys = system(2, 0.2, 16, 1.0, 10.0);
    const auto direct = direct_solve(to_explicit_sparse(sys.op), sys.rhs);
    const auto r = schrodingerized_solve(sys.op, sys.rhs, params);
    const double err = relative_difference(trace_extract(r.x, sys.dims), trace_extract(direct, sys.dims));
    out.expect(err <= 5e-2, "d=2 N=16 trace relative L2 error vs direct = " + fmt(err) + " <= 5e-2");
  }
  const double t = seconds_since(t0);
  out.expect(t < 600.0, "runtime " + fmt(t) + " s < 600 s");
  return out;
}

// A3: scalar defect law |u(T) - 1/lambda| = e^{-lambda T} / lambda.
Outcome a3() {
  Outcome out;
  double worst = 0.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double T : {3.0, 5.0}) {
      const KroneckerSum a({{SymmetricTridiagonal({lambda}, {})}});
      OdeOptions options;
      options.dt = 1e-3 / lambda;
      const auto r = ode_steady_solve(a, std::vector{1.0}, T, options);
      const double measured = std::abs(r.u[0] - 1.0 / lambda);
      worst = std::max(worst, std::abs(measured - std::exp(-lambda * T) / lambda));
    }
  }
  out.expect(worst <= 1e-10, "max |defect - e^{-lambda T}/lambda| = " + fmt(worst) + " <= 1e-10");
  return out;
}

// A4: condition-number scaling and the kappa bound.
Outcome a4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  auto kappa = [](int d, std::size_t N, double Y) { return extreme_eigs(system(d, 0.2, N, 1.0, Y).op).kappa; };

  // Uniform mesh with h_y = h_x (Y equal to the box side).
  const double k16 = kappa(1, 16, 2.0);
  const double k32 = kappa(1, 32, 2.0);
  const double ratio = k32 / k16;
  out.expect(ratio >= 3.4 && ratio <= 4.6,
             "d=1 s=0.2 uniform (Y=2) kappa(32)/kappa(16) = " + fmt(ratio) + " in [3.4, 4.6]");
  const double ratio10 = kappa(1, 32, 10.0) / kappa(1, 16, 10.0);
  out.note("with Y=10 (h_y = 5 h_x) the ratio is " + fmt(ratio10));

  for (double Y : {2.0, 10.0}) {
    for (int d : {1, 2}) {
      for (std::size_t N : {8u, 16u}) {
        const auto sys = system(d, 0.2, N, 1.0, Y);
        const auto est = extreme_eigs(sys.op);
        const auto report = theory_vs_measured(sys, est);
        out.expect(!report.kappa_violation, "d=" + std::to_string(d) + " N=" + std::to_string(N) + " Y=" + fmt(Y) +
                                                " kappa " + fmt(est.kappa) + " <= bound " +
                                                fmt(report.kappa_bound));
      }
    }
  }
  const double t = seconds_since(t0);
  out.expect(t < 120.0, "runtime " + fmt(t) + " s < 120 s");
  return out;
}

// A5: sparsity of the explicit matrix.
Outcome a5() {
  Outcome out;
  const std::size_t nnz1 = to_explicit_sparse(system(1, 0.2, 8, 1.0, 10.0).op).max_row_nonzeros();
  const std::size_t nnz2 = to_explicit_sparse(system(2, 0.2, 8, 1.0, 10.0).op).max_row_nonzeros();
  out.expect(nnz1 == 9, "d=1 max nonzeros per row = " + std::to_string(nnz1) + " (9)");
  out.expect(nnz2 == 27, "d=2 max nonzeros per row = " + std::to_string(nnz2) + " (27)");
  return out;
}

// A6: eigenvalues of the unweighted mass matrix in [h/3, h].
Outcome a6() {
  Outcome out;
  for (std::size_t N : {4u, 8u, 16u}) {
    const auto pair = assemble_univariate(N, 2.0);
    const double h = 2.0 / static_cast<double>(N);
    const auto n = static_cast<Eigen::Index>(pair.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        m(i, j) = pair.mass(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    out.expect(ev.minCoeff() >= h / 3.0 - 1e-12 && ev.maxCoeff() <= h + 1e-12,
               "N=" + std::to_string(N) + " eigenvalues in [" + fmt(ev.minCoeff()) + ", " + fmt(ev.maxCoeff()) +
                   "] within [h/3, h] = [" + fmt(h / 3.0) + ", " + fmt(h) + "]");
  }
  return out;
}

// A7: analytic complexity models.
Outcome a7() {
  Outcome out;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  const double s10 = std::pow(10.0, 0.5);
  struct Example {
    std::string name;
    double got;
    double expected;
  };
  const std::vector<Example> examples{
      {"quantum(2,0.1)", quantum_query_model(2, 0.1), 2.0 * 27.0 * 100.0 * s10},
      {"quantum(1,0.1)", quantum_query_model(1, 0.1), 3.0 * std::sqrt(3.0) * 100.0 * s10},
      {"classical(2,0.1)", classical_cg_model(2, 0.1), std::sqrt(2.0) * 27.0 * 1e4},
      {"classical(1,0.1)", classical_cg_model(1, 0.1), 3.0 * std::sqrt(3.0) * 1e3},
      {"novtaa(1,0.1)", no_vtaa_quantum_model(1, 0.1), 9.0 * std::sqrt(3.0) * 1e4 * s10},
      {"novtaa(2,0.1)", no_vtaa_quantum_model(2, 0.1), 4.0 * 243.0 * 1e4 * s10},
      {"g(1,0.25)", amplification_model(1, 0.25), 2.0 * std::sqrt(3.0)},
      {"g(2,0.01)", amplification_model(2, 0.01), 30.0},
  };
  for (const auto& e : examples) {
    out.expect(rel(e.got, e.expected) <= 1e-9, e.name + " = " + fmt(e.got) + " (rel err " +
                                                    fmt(rel(e.got, e.expected)) + ")");
  }
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d) {
    for (double h : {0.5, 0.1, 0.02}) {
      auto slope = [&](const std::function<double(int, double)>& f) {
        return std::log(f(d, h / 2.0) / f(d, h)) / std::log(2.0);
      };
      worst = std::max(worst, std::abs(slope(quantum_query_model) - 2.5));
      worst = std::max(worst, std::abs(slope(classical_cg_model) - (d + 2.0)));
      worst = std::max(worst, std::abs(slope(no_vtaa_quantum_model) - 4.5));
      worst = std::max(worst, std::abs(slope(amplification_model) - 0.5));
    }
  }
  out.expect(worst <= 1e-9, "log-log slopes 2.5 / d+2 / 4.5 / 0.5, worst deviation " + fmt(worst));
  return out;
}

// A8: unitarity of the evolution and the Fourier round trip.
Outcome a8() {
  Outcome out;
  const auto sys = system(1, 0.2, 16, 1.0, 10.0);
  SchrodingerParams params;
  params.T = 15.0;
  params.Np = 1024;
  params.unit = TimeUnit::relaxation;
  const auto r = schrodingerized_solve(sys.op, sys.rhs, params);
  out.expect(r.diagnostics.norm_drift <= 1e-8,
             "per-mode norm drift over T=15 = " + fmt(r.diagnostics.norm_drift) + " <= 1e-8");

  WarpedState st = init_state(auto_pgrid(1024), AugmentedSystem(sys.op, sys.rhs, 15.0).initial());
  std::mt19937_64 rng(20240531);
  std::normal_distribution<double> normal;
  for (auto& z : st.data) z = {normal(rng), normal(rng)};
  const auto before = st.data;
  to_fourier(st);
  from_fourier(st);
  double err = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    err = std::max(err, std::abs(st.data[i] - before[i]));
  }
  out.expect(err <= 1e-12, "Fourier round trip max error = " + fmt(err) + " <= 1e-12");
  return out;
}

// A9: matrix-free versus explicit, ODE versus CG.
Outcome a9() {
  Outcome out;
  {
    const auto sys = system(2, 0.2, 4, 1.0, 10.0);
    const CsrMatrix a = to_explicit_sparse(sys.op);
    std::mt19937_64 rng(20240531);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      std::vector<double> v(sys.op.size());
      for (auto& x : v) x = normal(rng);
      worst = std::max(worst, relative_difference(sys.op * v, a * v));
    }
    out.expect(worst <= 1e-12, "d=2 N=4 Kronecker apply vs explicit matvec, worst relative " + fmt(worst));
  }
  {
    const auto sys = system(1, 0.2, 16, 1.0, 10.0);
    const auto est = extreme_eigs(sys.op);
    const double T = choose_T(est.lambda_min, 1e-5);
    const auto ode = ode_steady_solve(sys.op, sys.rhs, T);
    const double err = relative_difference(ode.u, cg_reference(sys));
    out.expect(err <= 1e-3, "d=1 N=16 ODE steady state (T=" + fmt(T) + ", " + std::to_string(ode.steps) +
                                " RK4 steps) vs CG relative " + fmt(err) + " <= 1e-3");
  }
  return out;
}

// A10: finite-difference variant.
Outcome a10() {
  Outcome out;
  const ProblemSpec spec(1, 0.8);
  const auto fd = fd_solve_extension_1d(spec, 32, 32, 10.0, manufactured_forcing(spec));
  const auto sys = system(1, 0.8, 32, 1.0, 10.0);
  const double err = relative_difference(fd.trace(), trace_extract(cg_reference(sys), sys.dims));
  out.expect(err <= 0.1, "32x32 FD trace vs FEM trace relative L2 = " + fmt(err) + " <= 0.1");
  // Layer magnitudes max_i |u(x_i, y_k)|, and per column with a tolerance
  // relative to the solution scale (x = 0 is a nodal line of the solution).
  double scale = 0.0;
  for (double v : fd.values) scale = std::max(scale, std::abs(v));
  std::vector<double> layer(fd.Ny + 1, 0.0);
  std::size_t violations = 0;
  for (std::size_t i = 1; i < fd.Nx; ++i) {
    for (std::size_t k = 0; k <= fd.Ny; ++k) {
      layer[k] = std::max(layer[k], std::abs(fd.at(i, k)));
    }
    for (std::size_t k = 2; k < fd.Ny; ++k) {
      if (std::abs(fd.at(i, k + 1)) > std::abs(fd.at(i, k)) + 1e-10 * scale) {
        ++violations;
      }
    }
  }
  bool layers_decay = true;
  for (std::size_t k = 2; k < fd.Ny; ++k) {
    layers_decay = layers_decay && layer[k + 1] <= layer[k];
  }
  out.note("layer magnitudes y_0..y_4: " + fmt(layer[0]) + " " + fmt(layer[1]) + " " + fmt(layer[2]) + " " +
           fmt(layer[3]) + " " + fmt(layer[4]));
  out.expect(layers_decay, "max_x |u| non-increasing in y from the second layer on");
  out.expect(violations == 0, "every column |u(x_i, .)| non-increasing from the second layer on (tolerance 1e-10 max|u|), violations " +
                                  std::to_string(violations));
  return out;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.info.push_back(std::string("exception: ") + e.what());
    }
    for (const auto& line : o.info) {
      std::cout << "  " << name << ": " << line << '\n';
    }
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << " (" << fmt(seconds_since(t0)) << " s)" << std::endl;
    failures += o.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
