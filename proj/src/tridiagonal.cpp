#include "fracschrod/tridiagonal.hpp"

#include "fracschrod/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fracschrod {

SymmetricTridiagonal::SymmetricTridiagonal(std::vector<double> diagonal,
                                           std::vector<double> off_diagonal)
    : diag_(std::move(diagonal)), off_(std::move(off_diagonal)) {
  require(!diag_.empty(), "tridiagonal matrix must be non-empty");
  require(off_.size() + 1 == diag_.size(), "off-diagonal must have size n-1");
}

SymmetricTridiagonal SymmetricTridiagonal::identity(std::size_t n) {
  return toeplitz(n, 1.0, 0.0);
}

SymmetricTridiagonal SymmetricTridiagonal::toeplitz(std::size_t n, double diag, double off) {
  require(n >= 1, "tridiagonal matrix must be non-empty");
  return SymmetricTridiagonal(std::vector<double>(n, diag), std::vector<double>(n - 1, off));
}

double SymmetricTridiagonal::operator()(std::size_t i, std::size_t j) const {
  if (i == j) {
    return diag_[i];
  }
  if (i + 1 == j) {
    return off_[i];
  }
  if (j + 1 == i) {
    return off_[j];
  }
  return 0.0;
}

double SymmetricTridiagonal::inf_norm() const {
  double best = 0.0;
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) {
      row += std::abs(off_[i - 1]);
    }
    if (i + 1 < n) {
      row += std::abs(off_[i]);
    }
    best = std::max(best, row);
  }
  return best;
}

bool SymmetricTridiagonal::is_identity() const {
  return std::all_of(diag_.begin(), diag_.end(), [](double v) { return v == 1.0; }) &&
         std::all_of(off_.begin(), off_.end(), [](double v) { return v == 0.0; });
}

} // namespace fracschrod
