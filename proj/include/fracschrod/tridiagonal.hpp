#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracschrod {

/// Symmetric tridiagonal matrix stored as main diagonal and one off-diagonal.
class SymmetricTridiagonal {
public:
  SymmetricTridiagonal() = default;
  SymmetricTridiagonal(std::vector<double> diagonal, std::vector<double> off_diagonal);

  static SymmetricTridiagonal identity(std::size_t n);
  /// tridiag(off, diag, off) with constant entries.
  static SymmetricTridiagonal toeplitz(std::size_t n, double diag, double off);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diagonal() const { return diag_; }
  const std::vector<double>& off_diagonal() const { return off_; }

  double operator()(std::size_t i, std::size_t j) const;

  /// out = T * in, over a strided view (used by the mode products).
  template <typename Scalar>
  void apply_strided(const Scalar* in, Scalar* out, std::size_t stride) const;

  template <typename Scalar>
  void apply(std::span<const Scalar> in, std::span<Scalar> out) const {
    apply_strided(in.data(), out.data(), 1);
  }

  /// Max absolute row sum; an upper bound on the spectral radius.
  double inf_norm() const;

  bool is_identity() const;

private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

template <typename Scalar>
void SymmetricTridiagonal::apply_strided(const Scalar* in, Scalar* out, std::size_t stride) const {
  const std::size_t n = diag_.size();
  if (n == 1) {
    out[0] = diag_[0] * in[0];
    return;
  }
  out[0] = diag_[0] * in[0] + off_[0] * in[stride];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i * stride] = off_[i - 1] * in[(i - 1) * stride] + diag_[i] * in[i * stride] +
                      off_[i] * in[(i + 1) * stride];
  }
  out[(n - 1) * stride] = off_[n - 2] * in[(n - 2) * stride] + diag_[n - 1] * in[(n - 1) * stride];
}

} // namespace fracschrod
