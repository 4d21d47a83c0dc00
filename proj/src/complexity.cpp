#include "fracschrod/complexity.hpp"

#include "fracschrod/errors.hpp"

#include <cmath>

namespace fracschrod {

namespace {

void check(int d, double h) {
  require(d >= 1, "d must be >= 1");
  require(h > 0.0 && h < 1.0, "h must lie in (0,1)");
}

} // namespace

double quantum_query_model(int d, double h) {
  check(d, h);
  return d * std::pow(3.0, 1.5 * d) * std::pow(h, -2.5);
}

double classical_cg_model(int d, double h) {
  check(d, h);
  return std::sqrt(static_cast<double>(d)) * std::pow(3.0, 1.5 * d) * std::pow(h, -d - 2.0);
}

double no_vtaa_quantum_model(int d, double h) {
  check(d, h);
  return static_cast<double>(d) * d * std::pow(3.0, 2.5 * d) * std::pow(h, -4.5);
}

double amplification_model(int d, double h) {
  check(d, h);
  return std::pow(3.0, 0.5 * d) * std::pow(h, -0.5);
}

double kappa_scaling(int d, double h) {
  require(d >= 1 && h > 0.0, "kappa_scaling needs d >= 1 and h > 0");
  return (d + 1.0) * std::pow(3.0, d + 1.0) / (h * h);
}

ComplexityReport theory_vs_measured(const ExtensionSystem& system, const SpectrumEstimate& spectrum,
                                    const CgResult* cg) {
  ComplexityReport r;
  r.d = system.spec.d();
  r.N = system.mesh.cells;
  r.h = system.mesh.h();
  r.kappa = spectrum.kappa;
  r.nnz_per_row_max = max_row_nonzeros(system.op);
  if (cg != nullptr) {
    r.cg_iterations = cg->iterations;
    r.xi = norm2(cg->x) / norm2(system.rhs);
  }

  r.kappa_bound = kKappaBoundConstant * kappa_scaling(r.d, r.h);
  // The models take h in (0,1); on the default box h = 2/N reaches 1 at N = 2.
  if (r.h < 1.0) {
    r.classical_cg_cost = classical_cg_model(r.d, r.h);
    r.quantum_query_cost = quantum_query_model(r.d, r.h);
    r.quantum_query_cost_no_vtaa = no_vtaa_quantum_model(r.d, r.h);
    r.g_amplification = amplification_model(r.d, r.h);
  }

  r.kappa_violation = r.kappa > r.kappa_bound;
  r.sparsity_violation = static_cast<double>(r.nnz_per_row_max) > std::pow(3.0, r.d + 1);
  return r;
}

} // namespace fracschrod
