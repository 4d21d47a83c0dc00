#include "fracschrod/errors.hpp"
#include "fracschrod/extension.hpp"
#include "fracschrod/schrodinger.hpp"
#include "fracschrod/solvers.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracschrod;
using std::numbers::pi;

namespace {

KroneckerSum small_extension(std::size_t N = 4) {
  return assemble_extension_system(ProblemSpec(1, 0.3), N, graded_points(N, 1.0, 2.0)).op;
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return err;
}

} // namespace

TEST_CASE("p grids") {
  const PGrid g = make_pgrid(3.0, 5.0, 16);
  CHECK(g.dp() == 0.5);
  CHECK(g.point(0) == -3.0);
  CHECK(g.mode(8) == 0.0);
  CHECK(g.mode(0) == doctest::Approx(-2.0 * pi * 8.0 / 8.0));
  CHECK(g.mode(9) == doctest::Approx(2.0 * pi / 8.0));
  CHECK_THROWS_AS(make_pgrid(1.0, 1.0, 12), InvalidArgument);
  CHECK_THROWS_AS(make_pgrid(-1.0, 1.0, 16), InvalidArgument);

  const PGrid a = aligned_pgrid(3.3, 4.1, 64);
  CHECK(a.L >= 3.3);
  CHECK(a.L + a.R - a.dp() >= 3.3 + 4.1 - 1e-12);
  const double j0 = a.L / a.dp();
  CHECK(std::abs(j0 - std::round(j0)) < 1e-9);

  const PGrid w = auto_pgrid(1024, 1e-9);
  CHECK(w.R >= std::log(1e9) - w.dp());
  CHECK(w.L + w.R == doctest::Approx(0.2 * 1024).epsilon(0.01));
  CHECK(std::abs(w.L / w.dp() - std::round(w.L / w.dp())) < 1e-9);
}

TEST_CASE("time and window selection") {
  CHECK(choose_T(1.0, 1e-3) == doctest::Approx(std::log(1000.0)).epsilon(1e-14));
  CHECK(choose_T(2.0, std::exp(-2.0) / 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(choose_T(10.0, 0.5) == 1.0);
  CHECK(choose_T(10.0, 0.5, 0.25) == 0.25);
  CHECK_THROWS_AS(choose_T(0.0, 1e-3), InvalidArgument);
  const Window w1 = choose_LR(1.0, std::exp(-1.0));
  CHECK(w1.L == doctest::Approx(1.5));
  CHECK(w1.R == doctest::Approx(1.5));
  CHECK(choose_LR(10.0, 1e-3).L == doctest::Approx(10.0 * std::log(1000.0) + 0.5));
  CHECK(choose_LR(10.0, 1e-3).L == doctest::Approx(69.58).epsilon(1e-4));
  // kappa / ||A|| sqrt(2 log(4 kappa / (xi ||A|| eps)))
  CHECK(choose_T_query(100.0, 10.0, 0.5, 1e-3) ==
        doctest::Approx(10.0 * std::sqrt(2.0 * std::log(4.0 * 100.0 / (0.5 * 10.0 * 1e-3)))));
}

TEST_CASE("augmented generators") {
  const KroneckerSum op = small_extension();
  const double T = 3.0;
  const AugmentedSystem sys(op, ones(op.size()), T);
  const auto n = static_cast<Eigen::Index>(op.size());
  const Eigen::MatrixXcd h1 = sys.h1_dense();
  const Eigen::MatrixXcd h2 = sys.h2_dense();
  CHECK((h1 - h1.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h2 - h2.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  // H1 + i H2 = [[-A, I/T], [0, 0]]
  const Eigen::MatrixXcd af = h1 + cplx(0.0, 1.0) * h2;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
      cplx expected = 0.0;
      if (i < n && j < n) {
        std::vector<double> e(op.size(), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        expected = -(op * e)[static_cast<std::size_t>(i)];
      } else if (i < n && j == i + n) {
        expected = 1.0 / T;
      }
      CHECK(std::abs(af(i, j) - expected) < 1e-15);
    }
  }

  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<cplx> v(sys.size()), out(sys.size());
  Eigen::VectorXcd ve(2 * n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = {normal(rng), normal(rng)};
    ve(static_cast<Eigen::Index>(i)) = v[i];
  }
  for (double mu : {-3.7, 0.0, 1.25}) {
    sys.apply_generator(mu, v, out);
    const Eigen::VectorXcd ref = (mu * h1 - h2) * ve;
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(out[i] - ref(static_cast<Eigen::Index>(i))) < 1e-13);
    }
  }
  const auto u0 = sys.initial();
  for (std::size_t i = 0; i < op.size(); ++i) {
    CHECK(u0[i] == 0.0);
    CHECK(u0[i + op.size()] == T);
  }
}

TEST_CASE("Fourier transform in p") {
  const PGrid grid = make_pgrid(5.0, 3.0, 16);
  WarpedState st = init_state(grid, std::vector{1.0, -2.0});
  CHECK(st.width == 2);
  for (std::size_t j = 0; j < grid.Np; ++j) {
    const double e = std::exp(-std::abs(grid.point(j)));
    CHECK(st.slice(j)[0] == cplx(e, 0.0));
    CHECK(st.slice(j)[1] == cplx(-2.0 * e, 0.0));
  }

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (auto& z : st.data) z = {normal(rng), normal(rng)};
  const auto original = st.data;
  to_fourier(st);
  CHECK(st.layout == Layout::fourier);
  // Direct summation.
  for (std::size_t l = 0; l < grid.Np; ++l) {
    for (std::size_t i = 0; i < 2; ++i) {
      cplx sum = 0.0;
      for (std::size_t j = 0; j < grid.Np; ++j) {
        sum += original[j * 2 + i] * std::exp(cplx(0.0, -grid.mode(l) * (grid.point(j) + grid.L)));
      }
      CHECK(std::abs(st.slice(l)[i] - sum / static_cast<double>(grid.Np)) < 1e-13);
    }
  }
  from_fourier(st);
  CHECK(st.layout == Layout::grid);
  CHECK(max_abs_diff(st.data, original) < 1e-13);

  SUBCASE("a single Fourier mode") {
    WarpedState m = init_state(grid, std::vector{1.0});
    for (std::size_t j = 0; j < grid.Np; ++j) {
      m.data[j] = std::exp(cplx(0.0, grid.mode(3) * (grid.point(j) + grid.L)));
    }
    to_fourier(m);
    for (std::size_t l = 0; l < grid.Np; ++l) {
      CHECK(std::abs(m.data[l] - (l == 3 ? 1.0 : 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("mode evolution against dense matrix exponentials") {
  const KroneckerSum op = small_extension();
  const AugmentedSystem sys(op, ones(op.size()), 1.5);
  const PGrid grid = make_pgrid(4.0, 4.0, 16);
  WarpedState initial = init_state(grid, sys.initial());
  to_fourier(initial);

  const Eigen::MatrixXcd h1 = sys.h1_dense();
  const Eigen::MatrixXcd h2 = sys.h2_dense();
  const KroneckerEigenbasis basis(op);

  WarpedState spectral = initial;
  const auto report = evolve(spectral, sys, {}, &basis);
  CHECK(report.norm_drift < 1e-12);

  double err = 0.0;
  for (std::size_t l = 0; l < grid.Np; ++l) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(grid.mode(l) * h1 - h2);
    const Eigen::VectorXcd phase =
        (es.eigenvalues().cast<cplx>() * cplx(0.0, -sys.T())).array().exp().matrix();
    const Eigen::MatrixXcd u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    const auto s0 = initial.slice(l);
    Eigen::VectorXcd v0 = Eigen::Map<const Eigen::VectorXcd>(s0.data(), static_cast<Eigen::Index>(s0.size()));
    const Eigen::VectorXcd ref = u * v0;
    const auto s1 = spectral.slice(l);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      err = std::max(err, std::abs(s1[i] - ref(static_cast<Eigen::Index>(i))) / std::max(1.0, v0.norm()));
    }
  }
  CHECK(err < 1e-11);

  SUBCASE("Chebyshev agrees with the spectral propagator") {
    WarpedState cheb = initial;
    EvolveOptions options;
    options.scheme = EvolutionScheme::chebyshev;
    const auto r = evolve(cheb, sys, options);
    CHECK(r.max_steps > 0);
    CHECK(max_abs_diff(cheb.data, spectral.data) < 1e-10);
  }
  SUBCASE("implicit midpoint agrees to its local error target") {
    WarpedState mid = initial;
    EvolveOptions options;
    options.scheme = EvolutionScheme::midpoint;
    options.midpoint_local_error = 1e-5;
    const auto r = evolve(mid, sys, options);
    CHECK(r.norm_drift < 1e-8);
    CHECK(max_abs_diff(mid.data, spectral.data) < 1e-4);
  }
  CHECK_THROWS_AS(evolve(initial, sys, {}, nullptr), InvalidArgument);
}

TEST_CASE("recovery inverts the warped profile") {
  const PGrid grid = make_pgrid(8.0, 8.0, 64);
  const std::vector<double> c{0.5, -1.5, 2.0};
  WarpedState st = init_state(grid, c);
  for (std::size_t j = 0; j < grid.Np; ++j) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      st.slice(j)[i] = std::exp(-grid.point(j)) * c[i];
    }
  }
  for (double p : {0.5, 1.0, 3.0}) {
    const Recovery r = recover(st, p);
    CHECK(r.p > p);
    CHECK(r.p - grid.dp() <= p);
    CHECK(r.imag_residual == 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(r.uf[i] == doctest::Approx(c[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("Schrodingerized solves") {
  SUBCASE("identity system") {
    const KroneckerSum id({{SymmetricTridiagonal::identity(2)}});
    SchrodingerParams params;
    params.T = 15.0;
    const auto r = schrodingerized_solve(id, std::vector{1.0, 2.0}, params);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-2);
    CHECK(std::abs(r.x[1] - 2.0) < 1e-2);
    CHECK(r.diagnostics.norm_drift < 1e-8);
  }
  SUBCASE("scalar defect follows the ODE") {
    const KroneckerSum one({{SymmetricTridiagonal({1.0}, {})}});
    SchrodingerParams params;
    params.T = 2.0;
    const auto r = schrodingerized_solve(one, std::vector{1.0}, params);
    CHECK(r.x[0] == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-2));
  }
  SUBCASE("relaxation units equal a pre-scaled raw solve") {
    const KroneckerSum op = small_extension(6);
    const auto b = ones(op.size());
    const double lmin = KroneckerEigenbasis(op, false).lambda_min();
    SchrodingerParams relax;
    relax.Np = 256;
    relax.unit = TimeUnit::relaxation;
    const auto a = schrodingerized_solve(op, b, relax);
    std::vector<double> bs(b);
    for (auto& x : bs) x /= lmin;
    SchrodingerParams raw = relax;
    raw.unit = TimeUnit::raw;
    const auto c = schrodingerized_solve(scaled(op, 1.0 / lmin), bs, raw);
    CHECK(relative_difference(a.x, c.x) < 1e-10);
    CHECK(a.diagnostics.time_scale == doctest::Approx(1.0 / lmin));
  }
  SUBCASE("extension system close to CG") {
    const auto sys = assemble_extension_system(ProblemSpec(1, 0.2), 8, graded_points(8, 1.0, 10.0));
    SchrodingerParams params;
    params.Np = 2048;
    params.unit = TimeUnit::relaxation;
    const auto r = schrodingerized_solve(sys.op, sys.rhs, params);
    CgOptions options;
    options.tolerance = 1e-12;
    CHECK(relative_difference(r.x, cg_solve(sys.op, sys.rhs, options).x) < 1e-2);
    CHECK(r.diagnostics.defect < 1e-2);
    CHECK(r.diagnostics.imag_residual < 1e-2);
  }
  SUBCASE("automatic horizon") {
    const KroneckerSum one({{SymmetricTridiagonal({2.0}, {})}});
    SchrodingerParams params;
    params.T = 0.0;
    params.delta = 1e-3;
    const auto r = schrodingerized_solve(one, std::vector{1.0}, params);
    CHECK(r.diagnostics.T == doctest::Approx(choose_T(2.0, 1e-3)));
  }
}
