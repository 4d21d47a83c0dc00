#include "fracschrod/problem.hpp"

#include "detail/multi_index.hpp"
#include "detail/quadrature.hpp"
#include "fracschrod/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fracschrod {

namespace {

constexpr double kPi = std::numbers::pi;

using detail::kGaussPoints;
using detail::kGaussWeights;

void check_point(std::span<const double> x, const ProblemSpec& spec) {
  require(x.size() == static_cast<std::size_t>(spec.d()),
          "point dimension " + std::to_string(x.size()) + " does not match d = " +
              std::to_string(spec.d()));
  require(spec.is_reference_box(), "manufactured solution is only defined on (-1,1)^d");
}

} // namespace

ProblemSpec::ProblemSpec(int d, double s, double lo, double hi) : d_(d), s_(s), lo_(lo), hi_(hi) {
  require(d >= 1, "d must be >= 1");
  require(s > 0.0 && s < 1.0, "s out of (0,1)");
  require(lo < hi, "box must satisfy lo < hi");
}

BoxMesh::BoxMesh(const ProblemSpec& spec, std::size_t cells_per_direction)
    : d(spec.d()), cells(cells_per_direction), lo(spec.lo()), hi(spec.hi()) {
  require(cells >= 2, "mesh needs at least 2 cells per direction");
}

std::size_t BoxMesh::interior_count() const {
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) {
    n *= interior_per_direction();
  }
  return n;
}

double exact_solution(std::span<const double> x, const ProblemSpec& spec) {
  check_point(x, spec);
  double u = 1.0;
  for (double xk : x) {
    u *= std::sin(kPi * xk);
  }
  return u;
}

double forcing(std::span<const double> x, const ProblemSpec& spec) {
  const double eigenvalue = spec.d() * kPi * kPi;
  return std::pow(eigenvalue, spec.s()) * exact_solution(x, spec);
}

double ds_constant(double s) {
  require(s > 0.0 && s < 1.0, "s out of (0,1)");
  return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

double normalization_constant(int d, double s) {
  require(d >= 1, "d must be >= 1");
  require(s > 0.0 && s < 1.0, "s out of (0,1)");
  const double half_d = 0.5 * d;
  return std::pow(4.0, s) * s * std::tgamma(s + half_d) /
         (std::pow(kPi, half_d) * std::tgamma(1.0 - s));
}

double lambda1_box(const ProblemSpec& spec) {
  const double k = kPi / spec.side();
  return spec.d() * k * k;
}

double l2_error(std::span<const double> coeffs, const ProblemSpec& spec, const BoxMesh& mesh) {
  return l2_error(coeffs, manufactured_solution(spec), mesh);
}

double l2_error(std::span<const double> coeffs, const ScalarField& reference, const BoxMesh& mesh) {
  require(coeffs.size() == mesh.interior_count(),
          "coefficient vector has " + std::to_string(coeffs.size()) + " entries, mesh expects " +
              std::to_string(mesh.interior_count()));

  const auto d = static_cast<std::size_t>(mesh.d);
  const std::size_t n = mesh.cells;
  const std::size_t m = mesh.interior_per_direction();
  const double h = mesh.h();
  const double jacobian = std::pow(h, mesh.d);

  // Coefficient at a vertex given per-axis node numbers 0..n; boundary is zero.
  auto vertex_value = [&](const std::vector<std::size_t>& node) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (node[k] == 0 || node[k] == n) {
        return 0.0;
      }
      flat = flat * m + (node[k] - 1);
    }
    return coeffs[flat];
  };

  std::vector<double> point(d);
  std::vector<std::size_t> node(d);
  double total = 0.0;

  detail::MultiIndex element(d, n);
  do {
    // Cache the 2^d vertex coefficients of this element.
    const std::size_t corners = std::size_t{1} << d;
    std::vector<double> corner_value(corners);
    for (std::size_t c = 0; c < corners; ++c) {
      for (std::size_t k = 0; k < d; ++k) {
        node[k] = element[k] + ((c >> (d - 1 - k)) & 1u);
      }
      corner_value[c] = vertex_value(node);
    }

    detail::MultiIndex quad(d, 3);
    do {
      double weight = jacobian;
      for (std::size_t k = 0; k < d; ++k) {
        weight *= kGaussWeights[quad[k]];
        point[k] = mesh.lo + (static_cast<double>(element[k]) + kGaussPoints[quad[k]]) * h;
      }
      double uh = 0.0;
      for (std::size_t c = 0; c < corners; ++c) {
        double shape = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double xi = kGaussPoints[quad[k]];
          shape *= ((c >> (d - 1 - k)) & 1u) ? xi : 1.0 - xi;
        }
        uh += shape * corner_value[c];
      }
      const double diff = reference(point) - uh;
      total += weight * diff * diff;
    } while (quad.next());
  } while (element.next());

  return std::sqrt(total);
}

std::vector<double> nodal_interpolant(const ScalarField& field, const BoxMesh& mesh) {
  const auto d = static_cast<std::size_t>(mesh.d);
  std::vector<double> values;
  values.reserve(mesh.interior_count());
  std::vector<double> point(d);
  detail::MultiIndex idx(d, mesh.interior_per_direction());
  do {
    for (std::size_t k = 0; k < d; ++k) {
      point[k] = mesh.node(idx[k]);
    }
    values.push_back(field(point));
  } while (idx.next());
  return values;
}

ScalarField manufactured_solution(const ProblemSpec& spec) {
  require(spec.is_reference_box(), "manufactured solution is only defined on (-1,1)^d");
  return [spec](std::span<const double> x) { return exact_solution(x, spec); };
}

ScalarField manufactured_forcing(const ProblemSpec& spec) {
  require(spec.is_reference_box(), "manufactured solution is only defined on (-1,1)^d");
  return [spec](std::span<const double> x) { return forcing(x, spec); };
}

} // namespace fracschrod
