#include "fracschrod/errors.hpp"
#include "fracschrod/schrodinger.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace fracschrod {

double PGrid::mode(std::size_t l) const {
  return 2.0 * std::numbers::pi * (static_cast<double>(l) - 0.5 * static_cast<double>(Np)) / (L + R);
}

PGrid make_pgrid(double L, double R, std::size_t Np) {
  require(Np >= 2 && std::has_single_bit(Np), "Np must be a power of two >= 2");
  require(std::isfinite(L) && std::isfinite(R) && L + R > 0.0, "p-window must have positive length");
  return {L, R, Np};
}

PGrid aligned_pgrid(double L, double R, std::size_t Np) {
  require(L > 0.0 && R > 0.0, "L and R must be positive");
  make_pgrid(L, R, Np);
  const double dp = (L + R) / static_cast<double>(Np - 1);
  const auto left = static_cast<std::size_t>(std::ceil(L / dp - 1e-12));
  return make_pgrid(static_cast<double>(left) * dp, static_cast<double>(Np - left) * dp, Np);
}

PGrid auto_pgrid(std::size_t Np, double floor) {
  require(floor > 0.0 && floor < 1.0, "window floor must lie in (0,1)");
  const double R = std::log(1.0 / floor);
  const double total = std::max(0.2 * static_cast<double>(Np), 2.0 * R);
  return aligned_pgrid(total - R, R, Np);
}

Window choose_LR(double kappa, double eps) {
  require(kappa >= 1.0, "kappa must be >= 1");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  const double log_eps = std::log(1.0 / eps);
  return {kappa * log_eps + 0.5, log_eps + 0.5};
}

double choose_T(double lambda_min, double delta, double T_min) {
  require(lambda_min > 0.0, "lambda_min must be positive");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  return std::max(T_min, std::log(1.0 / (lambda_min * delta)) / lambda_min);
}

double choose_T_query(double kappa, double normA, double xi, double eps, double T_min) {
  require(kappa >= 1.0 && normA > 0.0 && xi > 0.0, "kappa, ||A|| and xi must be positive");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  const double arg = 4.0 * kappa / (xi * normA * eps);
  require(arg > 1.0, "query-optimal T needs 4 kappa / (xi ||A|| eps) > 1");
  return std::max(T_min, kappa / normA * std::sqrt(2.0 * std::log(arg)));
}

} // namespace fracschrod
