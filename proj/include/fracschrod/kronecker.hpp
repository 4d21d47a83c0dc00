#pragma once

// Matrix-free sum of Kronecker products of tridiagonal factors, plus an
// explicit CSR export used for small-instance oracles and sparsity counts.

#include "fracschrod/tridiagonal.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracschrod {

/// A = sum_m F^{(m)}_1 (x) F^{(m)}_2 (x) ... (x) F^{(m)}_D.
///
/// Flat indices are row-major over (i_1, ..., i_D): i_1 is the most
/// significant, i_D the least. Every term has the same factor sizes.
class KroneckerSum {
public:
  using Term = std::vector<SymmetricTridiagonal>;

  KroneckerSum() = default;
  explicit KroneckerSum(std::vector<Term> terms);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return size_; }

  /// out = A v via mode-wise tridiagonal products; out is overwritten.
  void apply(std::span<const double> v, std::span<double> out) const;
  void apply(std::span<const std::complex<double>> v, std::span<std::complex<double>> out) const;

  std::vector<double> operator*(std::span<const double> v) const;

  /// Upper bound on ||A||_2 via sum_m prod_k ||F_k^{(m)}||_inf.
  double norm_bound() const;

  /// Main diagonal of A: sum_m of Kronecker products of the factor diagonals.
  std::vector<double> diagonal() const;

private:
  template <typename Scalar>
  void apply_impl(std::span<const Scalar> v, std::span<Scalar> out) const;

  std::vector<Term> terms_;
  std::vector<std::size_t> dims_;
  std::size_t size_ = 0;
};

/// Compressed sparse row matrix with structural nonzeros kept.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col_idx;
  std::vector<double> values;

  std::size_t nonzeros() const { return values.size(); }
  std::size_t row_nonzeros(std::size_t r) const { return row_ptr[r + 1] - row_ptr[r]; }
  std::size_t max_row_nonzeros() const;

  double at(std::size_t r, std::size_t c) const;
  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> operator*(std::span<const double> v) const;

  /// max |A_ij - A_ji| over stored entries.
  double asymmetry() const;
};

inline constexpr std::size_t kExplicitSizeGuard = 100000;

/// Materializes the operator. Throws InvalidArgument above kExplicitSizeGuard rows.
CsrMatrix to_explicit_sparse(const KroneckerSum& op);

/// Largest structural row count without materializing values.
std::size_t max_row_nonzeros(const KroneckerSum& op);

} // namespace fracschrod
