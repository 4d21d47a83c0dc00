#pragma once

// Classical emulation of the Schrodingerized steady-state solver:
//   du/dt = -A u + b, augmented to a homogeneous system u_f' = A_f u_f,
//   warped by v = e^{-p} u_f, Fourier-transformed in p and evolved mode by
//   mode under the Hermitian generators mu_l H1 - H2.

#include "fracschrod/eigenbasis.hpp"
#include "fracschrod/kronecker.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracschrod {

using cplx = std::complex<double>;

/// p in [-L, R] with Np points p_j = -L + j dp, dp = (L + R) / Np.
struct PGrid {
  double L = 0.0;
  double R = 0.0;
  std::size_t Np = 0;

  double dp() const { return (L + R) / static_cast<double>(Np); }
  double point(std::size_t j) const { return -L + static_cast<double>(j) * dp(); }
  /// mu_l = 2 pi (l - Np/2) / (L + R)
  double mode(std::size_t l) const;
};

/// Validates Np (power of two, >= 2) and L + R > 0.
PGrid make_pgrid(double L, double R, std::size_t Np);

/// Grows L and R to integer multiples of dp = (L + R) / (Np - 1), so p = 0 is a
/// grid point and the result covers [-L, R].
PGrid aligned_pgrid(double L, double R, std::size_t Np);

/// Window for experiments: R = log(1/floor), total length max(0.2 Np, 2R),
/// aligned so that p = 0 is a grid point.
PGrid auto_pgrid(std::size_t Np, double floor = 1e-9);

struct Window {
  double L = 0.0;
  double R = 0.0;
};

/// L = kappa log(1/eps) + 1/2, R = log(1/eps) + 1/2.
Window choose_LR(double kappa, double eps);

/// (1 / lambda_min) log(1 / (lambda_min delta)), clamped below by T_min.
double choose_T(double lambda_min, double delta, double T_min = 1.0);

/// kappa / ||A|| sqrt(2 log(4 kappa / (xi ||A|| eps))), clamped below by T_min.
double choose_T_query(double kappa, double normA, double xi, double eps, double T_min = 1.0);

/// A_f = [[-A, I/T], [0, 0]] with u_f(0) = [0; T b], split as A_f = H1 + i H2:
///   H1 = [[-A, cI], [cI, 0]],  H2 = [[0, -icI], [icI, 0]],  c = 1/(2T).
class AugmentedSystem {
public:
  AugmentedSystem(KroneckerSum op, std::vector<double> b, double T);

  std::size_t base_size() const { return op_.size(); }
  std::size_t size() const { return 2 * op_.size(); }
  double T() const { return T_; }
  double coupling() const { return 0.5 / T_; }
  const KroneckerSum& op() const { return op_; }
  const std::vector<double>& b() const { return b_; }

  std::vector<double> initial() const;

  /// out = (mu H1 - H2) v
  void apply_generator(double mu, std::span<const cplx> v, std::span<cplx> out) const;

  /// Dense H1 and H2 for small instances (size() <= 2000).
  Eigen::MatrixXcd h1_dense() const;
  Eigen::MatrixXcd h2_dense() const;

private:
  KroneckerSum op_;
  std::vector<double> b_;
  double T_;
};

enum class Layout { grid, fourier };

/// Np slices of width 2 N_A, p index major: data[j * width + i].
struct WarpedState {
  PGrid grid;
  std::size_t width = 0;
  Layout layout = Layout::grid;
  std::vector<cplx> data;

  std::span<cplx> slice(std::size_t j) { return {data.data() + j * width, width}; }
  std::span<const cplx> slice(std::size_t j) const { return {data.data() + j * width, width}; }
};

/// w(0, p_j) = e^{-|p_j|} uf0.
WarpedState init_state(const PGrid& grid, std::span<const double> uf0);

/// v~_l = (1/Np) sum_j v_j e^{-i mu_l (p_j + L)} and its inverse, per component.
void to_fourier(WarpedState& state);
void from_fourier(WarpedState& state);

enum class EvolutionScheme { spectral, chebyshev, midpoint };

struct EvolveOptions {
  EvolutionScheme scheme = EvolutionScheme::spectral;
  double norm_tolerance = 1e-8;   ///< max relative per-mode norm drift
  double midpoint_local_error = 1e-6; ///< per unit time at the largest |mu|
  std::size_t midpoint_steps = 0; ///< 0 derives the count from the error target
  double chebyshev_tolerance = 1e-15;
};

struct EvolveReport {
  double norm_drift = 0.0; ///< max_l | ||v_l(T)|| - ||v_l(0)|| | / ||v_l(0)||
  std::size_t max_steps = 0; ///< midpoint steps or Chebyshev terms, max over modes
};

/// Propagates every Fourier mode over [0, sys.T()]. The spectral scheme needs
/// the eigenbasis of sys.op(). Throws NumericalError on excessive norm drift.
EvolveReport evolve(WarpedState& state, const AugmentedSystem& sys, const EvolveOptions& options,
                    const KroneckerEigenbasis* basis = nullptr);

struct Recovery {
  std::vector<double> uf;
  double p = 0.0;
  std::size_t index = 0;
  double imag_residual = 0.0; ///< ||Im|| / ||Re|| of e^{p} w(T, p)
};

/// e^{p_k} Re w(T, p_k) at the smallest grid point p_k > p_recover (>= 1/2).
Recovery recover(const WarpedState& state, double p_recover = 0.5);

enum class TimeUnit {
  raw,        ///< evolve du/dt = -A u + b for time T
  relaxation, ///< evolve with A / lambda_min, so T counts slowest e-folds
};

struct SchrodingerParams {
  double T = 15.0;        ///< <= 0 selects choose_T(lambda_min, delta)
  double delta = 1e-4;
  double T_min = 1.0;
  std::size_t Np = 1024;
  bool auto_window = true;
  double L = 0.0;
  double R = 0.0;
  double floor = 1e-9;
  double p_recover = 0.5;
  TimeUnit unit = TimeUnit::raw;
  EvolveOptions evolve;
};

struct SchrodingerDiagnostics {
  double T = 0.0;           ///< horizon in the chosen unit
  double time_scale = 1.0;  ///< operator multiplier (1 or 1/lambda_min)
  double lambda_min = 0.0;
  double L = 0.0;
  double R = 0.0;
  double dp = 0.0;
  std::size_t Np = 0;
  double p_recover = 0.0;
  double norm_drift = 0.0;
  double imag_residual = 0.0;
  double defect = 0.0;          ///< ||A x - b|| / ||b||
  double aux_block_error = 0.0; ///< recovered second block vs T b
  double multipoint_spread = 0.0;
  bool multipoint_flag = false;
  std::size_t max_steps = 0;
};

struct SchrodingerResult {
  std::vector<double> x;
  SchrodingerDiagnostics diagnostics;
};

SchrodingerResult schrodingerized_solve(const KroneckerSum& op, std::span<const double> b,
                                        const SchrodingerParams& params = {});

/// Copy of op scaled by factor.
KroneckerSum scaled(const KroneckerSum& op, double factor);

} // namespace fracschrod
