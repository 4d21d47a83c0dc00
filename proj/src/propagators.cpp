#include "fracschrod/errors.hpp"
#include "fracschrod/parallel.hpp"
#include "fracschrod/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracschrod {

namespace {

double norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) {
    acc += std::norm(z);
  }
  return std::sqrt(acc);
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::conj(a[i]) * b[i];
  }
  return acc;
}

// Upper bound on |eigenvalues| of mu H1 - H2 given lambda(A) <= lambda_bound.
double generator_bound(double mu, double lambda_bound, double c) {
  return std::abs(mu) * lambda_bound + std::sqrt(mu * mu + 1.0) * c;
}

// Exact exp(-i G t) per eigenvalue of A, where G restricted to one
// eigenvector is [[-mu lam, (mu+i)c], [(mu-i)c, 0]].
void propagate_spectral(std::span<cplx> v, double mu, double t, double c, const KroneckerEigenbasis& basis) {
  const std::size_t n = basis.size();
  std::vector<cplx> e1(n), e2(n);
  basis.to_eigen(v.first(n), e1);
  basis.to_eigen(v.subspan(n, n), e2);
  const auto& lambda = basis.eigenvalues();
  const cplx upper = cplx(mu, 1.0) * c;
  const cplx lower = cplx(mu, -1.0) * c;
  for (std::size_t k = 0; k < n; ++k) {
    // G = a I + B with B traceless, B^2 = r^2 I.
    const double a = -0.5 * mu * lambda[k];
    const double r = std::sqrt(a * a + (mu * mu + 1.0) * c * c);
    const double rt = r * t;
    const double sinc = r > 0.0 ? std::sin(rt) / r : t;
    const cplx phase = std::polar(1.0, -a * t);
    const cplx cs = std::cos(rt);
    const cplx is = cplx(0.0, sinc);
    const cplx x = e1[k];
    const cplx y = e2[k];
    // exp(-iGt) = e^{-iat} (cos(rt) I - i sin(rt)/r B), B = [[a, upper], [lower, -a]].
    e1[k] = phase * (cs * x - is * (a * x + upper * y));
    e2[k] = phase * (cs * y - is * (lower * x - a * y));
  }
  basis.from_eigen(e1, v.first(n));
  basis.from_eigen(e2, v.subspan(n, n));
}

// Chebyshev expansion of exp(-i G t) on the spectral interval of G.
std::size_t propagate_chebyshev(std::span<cplx> v, double mu, double t, const AugmentedSystem& sys,
                                double lambda_bound, double tolerance) {
  const double c = sys.coupling();
  const double rc = std::sqrt(mu * mu + 1.0) * c;
  double lo = -rc;
  double hi = rc;
  if (mu >= 0.0) {
    lo -= mu * lambda_bound;
  } else {
    hi += -mu * lambda_bound;
  }
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double z = half * t;

  const std::size_t n = v.size();
  std::vector<cplx> t_prev(v.begin(), v.end());
  std::vector<cplx> t_curr(n), t_next(n), gv(n), acc(n);
  auto apply_scaled = [&](std::span<const cplx> in, std::span<cplx> out) {
    sys.apply_generator(mu, in, out);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = (out[i] - center * in[i]) / half;
    }
  };

  const double j0 = std::cyl_bessel_j(0.0, z);
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = j0 * t_prev[i];
  }
  apply_scaled(t_prev, t_curr);

  cplx minus_i_pow = cplx(0.0, -1.0);
  std::size_t k = 1;
  std::size_t small = 0;
  for (;; ++k) {
    const double jk = std::cyl_bessel_j(static_cast<double>(k), z);
    const cplx coeff = 2.0 * minus_i_pow * jk;
    for (std::size_t i = 0; i < n; ++i) {
      acc[i] += coeff * t_curr[i];
    }
    small = (static_cast<double>(k) > z && std::abs(jk) < tolerance) ? small + 1 : 0;
    if (small >= 2) {
      break;
    }
    apply_scaled(t_curr, gv);
    for (std::size_t i = 0; i < n; ++i) {
      t_next[i] = 2.0 * gv[i] - t_prev[i];
    }
    t_prev.swap(t_curr);
    t_curr.swap(t_next);
    minus_i_pow *= cplx(0.0, -1.0);
  }

  const cplx phase = std::polar(1.0, -center * t);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = phase * acc[i];
  }
  return k + 1;
}

// Solves (I + s^2 G^2) x = rhs by CG, Hermitian positive definite; x holds
// the initial guess on entry.
void solve_shifted(const AugmentedSystem& sys, double mu, double s, std::span<const cplx> rhs,
                   std::span<cplx> x) {
  const std::size_t n = rhs.size();
  std::vector<cplx> tmp(n), ap(n), r(n), p(n);
  auto apply = [&](std::span<const cplx> in, std::span<cplx> out) {
    sys.apply_generator(mu, in, tmp);
    sys.apply_generator(mu, tmp, out);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = in[i] + s * s * out[i];
    }
  };
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - ap[i];
  }
  p = r;
  const double target = 1e-14 * norm(rhs);
  double rr = dotc(r, r).real();
  for (std::size_t it = 0; it < 10 * n + 100; ++it) {
    if (std::sqrt(rr) <= target) {
      return;
    }
    apply(p, ap);
    const double pap = dotc(p, ap).real();
    if (!(pap > 0.0)) {
      throw NumericalError("midpoint inner CG breakdown");
    }
    const double step = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    const double rr_next = dotc(r, r).real();
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = r[i] + beta * p[i];
    }
  }
  if (std::sqrt(rr) > 1e-10 * norm(rhs)) {
    throw NumericalError("midpoint inner CG did not converge");
  }
}

// Implicit midpoint (Cayley) steps: (I + i tau G/2) v+ = (I - i tau G/2) v.
std::size_t propagate_midpoint(std::span<cplx> v, double mu, double t, const AugmentedSystem& sys,
                               double lambda_bound, const EvolveOptions& options) {
  std::size_t steps = options.midpoint_steps;
  if (steps == 0) {
    // Local error ~ tau^3 ||G||^3 / 12 per step, i.e. tau^2 ||G||^3 / 12 per unit time.
    const double g = generator_bound(mu, lambda_bound, sys.coupling());
    const double tau = std::sqrt(12.0 * options.midpoint_local_error / (g * g * g));
    steps = static_cast<std::size_t>(std::ceil(t / tau));
  }
  const double tau = t / static_cast<double>(steps);
  const double s = 0.5 * tau;
  const std::size_t n = v.size();
  std::vector<cplx> gv(n), u(n), z(n);
  auto cayley_half = [&](std::span<const cplx> in, std::span<cplx> out) {
    sys.apply_generator(mu, in, gv);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = in[i] - cplx(0.0, s) * gv[i];
    }
  };
  for (std::size_t step = 0; step < steps; ++step) {
    // (I + isG)^{-1} = (I - isG)(I + s^2 G^2)^{-1}
    cayley_half(v, u);
    std::copy(u.begin(), u.end(), z.begin());
    solve_shifted(sys, mu, s, u, z);
    cayley_half(z, v);
  }
  return steps;
}

} // namespace

EvolveReport evolve(WarpedState& state, const AugmentedSystem& sys, const EvolveOptions& options,
                    const KroneckerEigenbasis* basis) {
  require(state.layout == Layout::fourier, "evolve expects a Fourier-ordered state");
  require(state.width == sys.size(), "evolve: state width does not match the augmented system");
  if (options.scheme == EvolutionScheme::spectral) {
    require(basis != nullptr && basis->size() == sys.base_size(),
            "spectral evolution needs the eigenbasis of the operator");
  }

  const double t = sys.T();
  const double lambda_bound = sys.op().norm_bound();
  const std::size_t np = state.grid.Np;
  std::vector<double> drift(np, 0.0);
  std::vector<std::size_t> steps(np, 0);

  parallel_for(np, [&](std::size_t l) {
    auto v = state.slice(l);
    const double mu = state.grid.mode(l);
    const double before = norm(v);
    if (before == 0.0) {
      return;
    }
    switch (options.scheme) {
    case EvolutionScheme::spectral:
      propagate_spectral(v, mu, t, sys.coupling(), *basis);
      steps[l] = 1;
      break;
    case EvolutionScheme::chebyshev:
      steps[l] = propagate_chebyshev(v, mu, t, sys, lambda_bound, options.chebyshev_tolerance);
      break;
    case EvolutionScheme::midpoint:
      steps[l] = propagate_midpoint(v, mu, t, sys, lambda_bound, options);
      break;
    }
    drift[l] = std::abs(norm(v) - before) / before;
  });

  EvolveReport report;
  for (std::size_t l = 0; l < np; ++l) {
    if (!std::isfinite(drift[l])) {
      throw NumericalError("evolve: non-finite state in mode " + std::to_string(l));
    }
    report.norm_drift = std::max(report.norm_drift, drift[l]);
    report.max_steps = std::max(report.max_steps, steps[l]);
  }
  if (report.norm_drift > options.norm_tolerance) {
    std::ostringstream msg;
    msg << "evolve: per-mode norm drift " << report.norm_drift << " exceeds tolerance "
        << options.norm_tolerance;
    throw NumericalError(msg.str());
  }
  return report;
}

} // namespace fracschrod
