#include "fracschrod/schrodinger.hpp"

#include "fracschrod/errors.hpp"
#include "fracschrod/solvers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace fracschrod {

KroneckerSum scaled(const KroneckerSum& op, double factor) {
  std::vector<KroneckerSum::Term> terms = op.terms();
  for (auto& term : terms) {
    // Scale a non-identity factor when possible so identity skipping survives.
    std::size_t k = 0;
    while (k + 1 < term.size() && term[k].is_identity()) {
      ++k;
    }
    std::vector<double> diag = term[k].diagonal();
    std::vector<double> off = term[k].off_diagonal();
    for (auto& v : diag) v *= factor;
    for (auto& v : off) v *= factor;
    term[k] = SymmetricTridiagonal(std::move(diag), std::move(off));
  }
  return KroneckerSum(std::move(terms));
}

AugmentedSystem::AugmentedSystem(KroneckerSum op, std::vector<double> b, double T)
    : op_(std::move(op)), b_(std::move(b)), T_(T) {
  require(b_.size() == op_.size(), "augmented system: rhs length does not match operator");
  require(T_ > 0.0, "augmented system: T must be positive");
}

std::vector<double> AugmentedSystem::initial() const {
  std::vector<double> uf(size(), 0.0);
  const std::size_t n = base_size();
  for (std::size_t i = 0; i < n; ++i) {
    uf[n + i] = T_ * b_[i];
  }
  return uf;
}

void AugmentedSystem::apply_generator(double mu, std::span<const cplx> v, std::span<cplx> out) const {
  const std::size_t n = base_size();
  require(v.size() == 2 * n && out.size() == 2 * n, "apply_generator: size mismatch");
  const double c = coupling();
  const cplx upper = cplx(mu, 1.0) * c;
  const cplx lower = cplx(mu, -1.0) * c;
  op_.apply(v.first(n), out.first(n));
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = -mu * out[i] + upper * v[n + i];
    out[n + i] = lower * v[i];
  }
}

Eigen::MatrixXcd AugmentedSystem::h1_dense() const {
  require(size() <= 2000, "dense H1 is limited to small systems");
  const auto n = static_cast<Eigen::Index>(base_size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  std::vector<double> e(base_size()), col(base_size());
  for (Eigen::Index j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    op_.apply(e, col);
    for (Eigen::Index i = 0; i < n; ++i) {
      h(i, j) = -col[static_cast<std::size_t>(i)];
    }
    h(j, n + j) = coupling();
    h(n + j, j) = coupling();
  }
  return h;
}

Eigen::MatrixXcd AugmentedSystem::h2_dense() const {
  require(size() <= 2000, "dense H2 is limited to small systems");
  const auto n = static_cast<Eigen::Index>(base_size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    h(j, n + j) = cplx(0.0, -coupling());
    h(n + j, j) = cplx(0.0, coupling());
  }
  return h;
}

WarpedState init_state(const PGrid& grid, std::span<const double> uf0) {
  make_pgrid(grid.L, grid.R, grid.Np);
  require(!uf0.empty(), "init_state: empty initial vector");
  WarpedState state{grid, uf0.size(), Layout::grid, std::vector<cplx>(grid.Np * uf0.size())};
  for (std::size_t j = 0; j < grid.Np; ++j) {
    const double zeta = std::exp(-std::abs(grid.point(j)));
    auto slice = state.slice(j);
    for (std::size_t i = 0; i < uf0.size(); ++i) {
      slice[i] = zeta * uf0[i];
    }
  }
  return state;
}

namespace {

// The FFTW planner is not thread-safe; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform_p(WarpedState& state, int sign) {
  const std::size_t np = state.grid.Np;
  make_pgrid(state.grid.L, state.grid.R, np);
  const int n = static_cast<int>(np);
  const int howmany = static_cast<int>(state.width);
  auto* data = reinterpret_cast<fftw_complex*>(state.data.data());

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n, howmany, data, nullptr, howmany, 1, data, nullptr, howmany, 1, sign,
                              FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw NumericalError("FFTW planning failed");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Multiplies slice j by (-1)^j, and by scale.
void alternate(WarpedState& state, double scale) {
  for (std::size_t j = 0; j < state.grid.Np; ++j) {
    const double f = (j % 2 == 0 ? 1.0 : -1.0) * scale;
    for (auto& v : state.slice(j)) {
      v *= f;
    }
  }
}

} // namespace

void to_fourier(WarpedState& state) {
  require(state.layout == Layout::grid, "to_fourier expects a grid-ordered state");
  alternate(state, 1.0 / static_cast<double>(state.grid.Np));
  transform_p(state, FFTW_FORWARD);
  state.layout = Layout::fourier;
}

void from_fourier(WarpedState& state) {
  require(state.layout == Layout::fourier, "from_fourier expects a Fourier-ordered state");
  transform_p(state, FFTW_BACKWARD);
  alternate(state, 1.0);
  state.layout = Layout::grid;
}

namespace {

std::size_t first_index_above(const PGrid& grid, double p) {
  for (std::size_t j = 0; j < grid.Np; ++j) {
    if (grid.point(j) > p) {
      return j;
    }
  }
  throw InvalidArgument("no p grid point above " + std::to_string(p));
}

Recovery recover_at(const WarpedState& state, std::size_t j) {
  Recovery rec;
  rec.index = j;
  rec.p = state.grid.point(j);
  const double scale = std::exp(rec.p);
  const auto slice = state.slice(j);
  rec.uf.resize(state.width);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < state.width; ++i) {
    rec.uf[i] = scale * slice[i].real();
    re += rec.uf[i] * rec.uf[i];
    im += scale * scale * slice[i].imag() * slice[i].imag();
  }
  rec.imag_residual = re > 0.0 ? std::sqrt(im / re) : std::sqrt(im);
  return rec;
}

} // namespace

Recovery recover(const WarpedState& state, double p_recover) {
  require(state.layout == Layout::grid, "recover expects a grid-ordered state");
  require(p_recover >= 0.5, "p_recover must be >= 1/2");
  return recover_at(state, first_index_above(state.grid, p_recover));
}

SchrodingerResult schrodingerized_solve(const KroneckerSum& op, std::span<const double> b,
                                        const SchrodingerParams& params) {
  require(b.size() == op.size(), "schrodingerized_solve: rhs length does not match operator");
  require(norm2(b) > 0.0, "schrodingerized_solve: rhs must be nonzero");
  SchrodingerResult result;
  auto& diag = result.diagnostics;

  const bool spectral = params.evolve.scheme == EvolutionScheme::spectral;
  const bool need_lambda = params.unit == TimeUnit::relaxation || params.T <= 0.0;

  std::unique_ptr<KroneckerEigenbasis> basis;
  if (spectral) {
    basis = std::make_unique<KroneckerEigenbasis>(op);
    diag.lambda_min = basis->lambda_min();
  } else if (need_lambda) {
    diag.lambda_min = extreme_eigs(op).lambda_min;
  }

  // Effective operator and right-hand side in the chosen time unit.
  diag.time_scale = params.unit == TimeUnit::relaxation ? 1.0 / diag.lambda_min : 1.0;
  const KroneckerSum op_eff = diag.time_scale == 1.0 ? op : scaled(op, diag.time_scale);
  std::vector<double> b_eff(b.begin(), b.end());
  for (auto& v : b_eff) {
    v *= diag.time_scale;
  }
  if (basis && diag.time_scale != 1.0) {
    basis = std::make_unique<KroneckerEigenbasis>(op_eff);
  }

  if (params.T > 0.0) {
    diag.T = params.T;
  } else {
    diag.T = choose_T(diag.lambda_min * diag.time_scale, params.delta, params.T_min);
  }

  const PGrid grid = params.auto_window ? auto_pgrid(params.Np, params.floor)
                                        : make_pgrid(params.L, params.R, params.Np);
  diag.L = grid.L;
  diag.R = grid.R;
  diag.dp = grid.dp();
  diag.Np = grid.Np;

  const AugmentedSystem sys(op_eff, b_eff, diag.T);
  const std::vector<double> uf0 = sys.initial();
  WarpedState state = init_state(grid, uf0);
  to_fourier(state);
  const EvolveReport report = evolve(state, sys, params.evolve, basis.get());
  from_fourier(state);
  diag.norm_drift = report.norm_drift;
  diag.max_steps = report.max_steps;

  const Recovery rec = recover(state, params.p_recover);
  diag.p_recover = rec.p;
  diag.imag_residual = rec.imag_residual;

  const std::size_t n = op.size();
  result.x.assign(rec.uf.begin(), rec.uf.begin() + static_cast<std::ptrdiff_t>(n));

  std::vector<double> aux(rec.uf.begin() + static_cast<std::ptrdiff_t>(n), rec.uf.end());
  std::vector<double> aux_ref(uf0.begin() + static_cast<std::ptrdiff_t>(n), uf0.end());
  diag.aux_block_error = relative_difference(aux, aux_ref);

  // Second recovery point about one unit further out.
  const double p_far = rec.p + 1.0;
  if (p_far < grid.R) {
    const std::size_t j_far = first_index_above(grid, p_far - 0.5 * grid.dp());
    const Recovery far = recover_at(state, j_far);
    const std::vector<double> x_far(far.uf.begin(), far.uf.begin() + static_cast<std::ptrdiff_t>(n));
    diag.multipoint_spread = relative_difference(x_far, result.x);
    diag.multipoint_flag = diag.multipoint_spread > 1e-2;
  }

  std::vector<double> ax(n);
  op.apply(result.x, ax);
  for (std::size_t i = 0; i < n; ++i) {
    ax[i] -= b[i];
  }
  diag.defect = norm2(ax) / norm2(b);
  return result;
}

} // namespace fracschrod
