#pragma once

// Manufactured fractional Poisson problem on a box, fractional-power constants
// and the L2 error used by every experiment.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracschrod {

using ScalarField = std::function<double(std::span<const double>)>;

/// Dimension, fractional order and box (lo, hi)^d. alpha = 1 - 2s is derived.
class ProblemSpec {
public:
  ProblemSpec(int d, double s, double lo = -1.0, double hi = 1.0);

  int d() const { return d_; }
  double s() const { return s_; }
  double alpha() const { return 1.0 - 2.0 * s_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double side() const { return hi_ - lo_; }

  /// The manufactured pair (u, f) is only an eigenpair on (-1, 1)^d.
  bool is_reference_box() const { return lo_ == -1.0 && hi_ == 1.0; }

private:
  int d_;
  double s_;
  double lo_;
  double hi_;
};

/// Uniform tensor mesh of the box with N cells per direction. Only the
/// (N-1)^d interior nodes carry unknowns; flat index has x_1 most significant.
struct BoxMesh {
  int d = 1;
  std::size_t cells = 2;
  double lo = -1.0;
  double hi = 1.0;

  BoxMesh(const ProblemSpec& spec, std::size_t cells_per_direction);

  double h() const { return (hi - lo) / static_cast<double>(cells); }
  std::size_t interior_per_direction() const { return cells - 1; }
  std::size_t interior_count() const;
  /// Coordinate of interior node j (0-based) along any axis.
  double node(std::size_t j) const { return lo + static_cast<double>(j + 1) * h(); }
};

/// u(x) = prod_k sin(pi x_k).
double exact_solution(std::span<const double> x, const ProblemSpec& spec);

/// f(x) = (d pi^2)^s u(x).
double forcing(std::span<const double> x, const ProblemSpec& spec);

/// d_s = 2^{1-2s} Gamma(1-s) / Gamma(s).
double ds_constant(double s);

/// C_{d,s} = 4^s s Gamma(s + d/2) / (pi^{d/2} Gamma(1-s)). Not used by the
/// extension pipeline; kept for reference.
double normalization_constant(int d, double s);

/// Smallest Dirichlet-Laplacian eigenvalue of the box: d (pi / side)^2.
double lambda1_box(const ProblemSpec& spec);

/// ||u - u_h||_{L2} with u_h the Q1 interpolant of `coeffs` (zero on the
/// boundary), using 3-point tensor Gauss quadrature per element.
double l2_error(std::span<const double> coeffs, const ProblemSpec& spec, const BoxMesh& mesh);

/// Same with a caller-supplied reference function.
double l2_error(std::span<const double> coeffs, const ScalarField& reference, const BoxMesh& mesh);

/// Values of `field` at the interior nodes, in the mesh's flat ordering.
std::vector<double> nodal_interpolant(const ScalarField& field, const BoxMesh& mesh);

/// Bound manufactured functions, for APIs that take a ScalarField.
ScalarField manufactured_solution(const ProblemSpec& spec);
ScalarField manufactured_forcing(const ProblemSpec& spec);

} // namespace fracschrod
