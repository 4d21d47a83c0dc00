#pragma once

// Orthonormal eigenbasis of a Kronecker sum whose leading factors commute
// per position. The leading positions share one dense basis Q_k each; the last
// position gives one tridiagonal eigenproblem per leading multi-index.

#include "fracschrod/kronecker.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracschrod {

class KroneckerEigenbasis {
public:
  /// Throws InvalidArgument if factors at some leading position do not commute.
  /// With eigenvectors = false only the spectrum is kept and the transforms throw.
  explicit KroneckerEigenbasis(const KroneckerSum& op, bool eigenvectors = true);

  std::size_t size() const { return size_; }
  /// Eigenvalue of coordinate n in the eigen ordering (same flat layout as op).
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double lambda_min() const;
  double lambda_max() const;

  /// out = V^T v and out = V v, with V the orthogonal eigenvector matrix.
  void to_eigen(std::span<const double> v, std::span<double> out) const;
  void from_eigen(std::span<const double> v, std::span<double> out) const;
  void to_eigen(std::span<const std::complex<double>> v, std::span<std::complex<double>> out) const;
  void from_eigen(std::span<const std::complex<double>> v, std::span<std::complex<double>> out) const;

private:
  template <typename Scalar>
  void transform(std::span<const Scalar> v, std::span<Scalar> out, bool forward) const;

  std::vector<std::size_t> dims_;
  std::size_t size_ = 0;
  std::vector<Eigen::MatrixXd> leading_;  ///< Q_k per leading position
  std::vector<Eigen::MatrixXd> fibers_;   ///< eigenvectors of each last-position block
  std::vector<double> eigenvalues_;
};

} // namespace fracschrod
