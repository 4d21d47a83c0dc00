#pragma once

// Unit-constant cost models (all O/O~ constants 1, log factors dropped) and a
// comparison of the condition-number and sparsity bounds with measurements.

#include "fracschrod/extension.hpp"
#include "fracschrod/solvers.hpp"

#include <cstddef>

namespace fracschrod {

/// d 3^{1.5 d} h^{-2.5}
double quantum_query_model(int d, double h);
/// d^{0.5} 3^{1.5 d} h^{-d-2}
double classical_cg_model(int d, double h);
/// d^2 3^{2.5 d} h^{-4.5}
double no_vtaa_quantum_model(int d, double h);
/// 3^{d/2} h^{-1/2}
double amplification_model(int d, double h);

/// (d + 1) 3^{d + 1} h^{-2}, without the constant C.
double kappa_scaling(int d, double h);

inline constexpr double kKappaBoundConstant = 10.0;

struct ComplexityReport {
  int d = 1;
  double h = 0.0;
  std::size_t N = 0;

  double kappa = 0.0;
  std::size_t nnz_per_row_max = 0;
  std::size_t cg_iterations = 0;
  double xi = 0.0; ///< ||A^{-1} b|| / ||b|| when a CG solution is supplied

  double kappa_bound = 0.0; ///< C (d+1) 3^{d+1} h^{-2}, C = 10
  double classical_cg_cost = 0.0;
  double quantum_query_cost = 0.0;
  double quantum_query_cost_no_vtaa = 0.0;
  double g_amplification = 0.0;

  bool kappa_violation = false;
  bool sparsity_violation = false;
};

/// h = side / N. cg may be null; nnz is counted structurally.
ComplexityReport theory_vs_measured(const ExtensionSystem& system, const SpectrumEstimate& spectrum,
                                    const CgResult* cg = nullptr);

} // namespace fracschrod
