#include "fracschrod/extension.hpp"

#include "detail/multi_index.hpp"
#include "detail/quadrature.hpp"
#include "fracschrod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracschrod {

GradedGrid graded_points(std::size_t N, double gamma, double Y) {
  require(N >= 2, "graded grid needs N >= 2");
  require(gamma >= 1.0, "grading exponent must be >= 1");
  require(Y > 0.0, "truncation height Y must be positive");
  GradedGrid grid{N, gamma, Y, std::vector<double>(N + 1)};
  for (std::size_t k = 0; k <= N; ++k) {
    grid.points[k] = std::pow(static_cast<double>(k) / static_cast<double>(N), gamma) * Y;
  }
  grid.points[N] = Y;
  return grid;
}

double auto_grading_exponent(double alpha) {
  require(alpha > -1.0 && alpha < 1.0, "alpha out of (-1,1)");
  return std::max(1.01, 3.0 / (1.0 - alpha) + 0.5);
}

UnivariatePair assemble_univariate(std::size_t N, double length) {
  require(N >= 2, "univariate assembly needs N >= 2");
  require(length > 0.0, "interval length must be positive");
  const double h = length / static_cast<double>(N);
  const std::size_t m = N - 1;
  return {SymmetricTridiagonal::toeplitz(m, 2.0 / h, -1.0 / h),
          SymmetricTridiagonal::toeplitz(m, 2.0 * h / 3.0, h / 6.0)};
}

UnivariatePair assemble_weighted_univariate(std::span<const double> points, double alpha) {
  require(alpha > -1.0 && alpha < 1.0, "alpha out of (-1,1)");
  require(points.size() >= 2, "weighted assembly needs at least one cell");
  require(points.front() >= 0.0, "weighted grid must start at y >= 0");
  const std::size_t cells = points.size() - 1;
  const std::size_t n = cells; // top node eliminated

  std::vector<double> kd(n, 0.0), ko(n - 1, 0.0), md(n, 0.0), mo(n - 1, 0.0);

  // int_a^b y^(alpha + j) dy
  auto moment = [alpha](double a, double b, int j) {
    const double e = alpha + j + 1.0;
    return (std::pow(b, e) - std::pow(a, e)) / e;
  };

  for (std::size_t c = 0; c < cells; ++c) {
    const double a = points[c];
    const double b = points[c + 1];
    require(b > a, "weighted grid must be strictly increasing");
    const double h = b - a;
    const double h2 = h * h;
    const double m0 = moment(a, b, 0);
    const double m1 = moment(a, b, 1);
    const double m2 = moment(a, b, 2);

    // Local basis (b - y)/h on node c, (y - a)/h on node c + 1.
    const double k_local = m0 / h2;
    const double s00 = (b * b * m0 - 2.0 * b * m1 + m2) / h2;
    const double s11 = (a * a * m0 - 2.0 * a * m1 + m2) / h2;
    const double s01 = (-a * b * m0 + (a + b) * m1 - m2) / h2;

    kd[c] += k_local;
    md[c] += s00;
    if (c + 1 < n) {
      kd[c + 1] += k_local;
      md[c + 1] += s11;
      ko[c] -= k_local;
      mo[c] += s01;
    }
  }
  return {SymmetricTridiagonal(std::move(kd), std::move(ko)),
          SymmetricTridiagonal(std::move(md), std::move(mo))};
}

UnivariatePair assemble_weighted_univariate(const GradedGrid& grid, double alpha) {
  return assemble_weighted_univariate(std::span<const double>(grid.points), alpha);
}

namespace {

// d_s (f, phi_j) for every interior node j, by 3-point tensor Gauss per element.
std::vector<double> load_vector(const BoxMesh& mesh, const ScalarField& f, double scale) {
  using detail::kGaussPoints;
  using detail::kGaussWeights;

  const auto d = static_cast<std::size_t>(mesh.d);
  const std::size_t n = mesh.cells;
  const std::size_t m = mesh.interior_per_direction();
  const double h = mesh.h();
  const double jacobian = std::pow(h, mesh.d);
  const std::size_t corners = std::size_t{1} << d;

  std::vector<double> load(mesh.interior_count(), 0.0);
  std::vector<double> point(d);
  std::vector<double> fq;
  fq.reserve(detail::product(std::vector<std::size_t>(d, 3)));

  detail::MultiIndex element(d, n);
  do {
    // f at this element's quadrature points, weights included.
    fq.clear();
    detail::MultiIndex quad(d, 3);
    do {
      double weight = jacobian * scale;
      for (std::size_t k = 0; k < d; ++k) {
        weight *= kGaussWeights[quad[k]];
        point[k] = mesh.lo + (static_cast<double>(element[k]) + kGaussPoints[quad[k]]) * h;
      }
      fq.push_back(weight * f(point));
    } while (quad.next());

    for (std::size_t c = 0; c < corners; ++c) {
      std::size_t flat = 0;
      bool interior = true;
      for (std::size_t k = 0; k < d && interior; ++k) {
        const std::size_t node = element[k] + ((c >> (d - 1 - k)) & 1u);
        interior = node != 0 && node != n;
        flat = flat * m + (node - 1);
      }
      if (!interior) {
        continue;
      }
      double acc = 0.0;
      std::size_t q = 0;
      detail::MultiIndex qi(d, 3);
      do {
        double shape = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double xi = kGaussPoints[qi[k]];
          shape *= ((c >> (d - 1 - k)) & 1u) ? xi : 1.0 - xi;
        }
        acc += shape * fq[q++];
      } while (qi.next());
      load[flat] += acc;
    }
  } while (element.next());
  return load;
}

} // namespace

ExtensionSystem assemble_extension_system(const ProblemSpec& spec, std::size_t N, const GradedGrid& grid,
                                          const ScalarField& f) {
  BoxMesh mesh(spec, N);
  const auto d = static_cast<std::size_t>(spec.d());
  const UnivariatePair x = assemble_univariate(N, spec.side());
  const UnivariatePair y = assemble_weighted_univariate(grid, spec.alpha());

  std::vector<KroneckerSum::Term> terms;
  for (std::size_t m = 0; m <= d; ++m) {
    KroneckerSum::Term term;
    for (std::size_t k = 0; k < d; ++k) {
      term.push_back(k == m ? x.stiffness : x.mass);
    }
    term.push_back(m == d ? y.stiffness : y.mass);
    terms.push_back(std::move(term));
  }

  std::vector<std::size_t> dims(d, x.size());
  dims.push_back(y.size());

  const std::vector<double> load = load_vector(mesh, f, ds_constant(spec.s()));
  const std::size_t ny = y.size();
  std::vector<double> rhs(load.size() * ny, 0.0);
  for (std::size_t j = 0; j < load.size(); ++j) {
    rhs[j * ny] = load[j];
  }

  return {KroneckerSum(std::move(terms)), std::move(rhs), std::move(dims), spec, mesh, grid};
}

ExtensionSystem assemble_extension_system(const ProblemSpec& spec, std::size_t N, const GradedGrid& grid) {
  return assemble_extension_system(spec, N, grid, manufactured_forcing(spec));
}

std::vector<double> trace_extract(std::span<const double> uY, std::span<const std::size_t> dims) {
  require(!dims.empty(), "trace_extract: empty dims");
  std::size_t total = 1;
  for (auto n : dims) {
    total *= n;
  }
  require(uY.size() == total, "trace_extract: vector length " + std::to_string(uY.size()) +
                                  " does not match product of dims " + std::to_string(total));
  const std::size_t ny = dims.back();
  std::vector<double> trace(total / ny);
  for (std::size_t j = 0; j < trace.size(); ++j) {
    trace[j] = uY[j * ny];
  }
  return trace;
}

} // namespace fracschrod
