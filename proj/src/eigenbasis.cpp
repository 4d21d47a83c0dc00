#include "fracschrod/eigenbasis.hpp"

#include "detail/multi_index.hpp"
#include "fracschrod/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace fracschrod {

namespace {

Eigen::MatrixXd dense(const SymmetricTridiagonal& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diagonal()[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      m(i, i + 1) = m(i + 1, i) = t.off_diagonal()[static_cast<std::size_t>(i)];
    }
  }
  return m;
}

} // namespace

KroneckerEigenbasis::KroneckerEigenbasis(const KroneckerSum& op, bool eigenvectors)
    : dims_(op.dims()), size_(op.size()) {
  require(size_ > 0, "eigenbasis of an empty operator");
  const std::size_t rank = dims_.size();
  const std::size_t lead = rank - 1;
  const auto& terms = op.terms();

  // factor_eigs[k][m][i]: eigenvalue i of term m's factor at leading position k.
  std::vector<std::vector<Eigen::VectorXd>> factor_eigs(lead);
  for (std::size_t k = 0; k < lead; ++k) {
    // A generic combination separates eigenvalues shared by single factors.
    Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims_[k]),
                                                static_cast<Eigen::Index>(dims_[k]));
    for (std::size_t m = 0; m < terms.size(); ++m) {
      mix += (1.0 + 0.6180339887498949 * static_cast<double>(m)) * dense(terms[m][k]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mix);
    const Eigen::MatrixXd& q = solver.eigenvectors();
    for (const auto& term : terms) {
      const Eigen::MatrixXd f = dense(term[k]);
      Eigen::MatrixXd rotated = q.transpose() * f * q;
      const Eigen::VectorXd diag = rotated.diagonal();
      rotated.diagonal().setZero();
      const double scale = std::max(f.cwiseAbs().maxCoeff(), 1e-300);
      if (rotated.cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw InvalidArgument("eigenbasis: factors at position " + std::to_string(k) +
                              " do not commute");
      }
      factor_eigs[k].push_back(diag);
    }
    leading_.push_back(q);
  }

  const std::size_t ny = dims_.back();
  const std::size_t blocks = size_ / ny;
  if (eigenvectors) {
    fibers_.reserve(blocks);
  }
  eigenvalues_.resize(size_);

  std::vector<std::size_t> lead_dims(dims_.begin(), dims_.end() - 1);
  detail::MultiIndex index(lead_dims);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(ny));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(ny > 1 ? ny - 1 : 0));
  for (std::size_t b = 0; b < blocks; ++b) {
    diag.setZero();
    sub.setZero();
    for (std::size_t m = 0; m < terms.size(); ++m) {
      double coeff = 1.0;
      for (std::size_t k = 0; k < lead; ++k) {
        coeff *= factor_eigs[k][m](static_cast<Eigen::Index>(index[k]));
      }
      const auto& last = terms[m].back();
      for (std::size_t i = 0; i < ny; ++i) {
        diag(static_cast<Eigen::Index>(i)) += coeff * last.diagonal()[i];
        if (i + 1 < ny) {
          sub(static_cast<Eigen::Index>(i)) += coeff * last.off_diagonal()[i];
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, eigenvectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigenbasis: tridiagonal eigensolver failed");
    }
    for (std::size_t i = 0; i < ny; ++i) {
      eigenvalues_[b * ny + i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    }
    if (eigenvectors) {
      fibers_.push_back(solver.eigenvectors());
    }
    if (lead > 0) {
      index.next();
    }
  }
}

double KroneckerEigenbasis::lambda_min() const {
  return *std::min_element(eigenvalues_.begin(), eigenvalues_.end());
}

double KroneckerEigenbasis::lambda_max() const {
  return *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
}

template <typename Scalar>
void KroneckerEigenbasis::transform(std::span<const Scalar> v, std::span<Scalar> out, bool forward) const {
  require(v.size() == size_ && out.size() == size_, "eigenbasis transform: size mismatch");
  require(fibers_.size() * dims_.back() == size_, "eigenbasis was built without eigenvectors");
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  // V = (Q_1 (x) ... (x) Q_{D-1} (x) I) blockdiag(F_J), so V^T runs the leading
  // products first and V runs the fibers first.
  std::vector<Scalar> current(v.begin(), v.end());
  std::vector<Scalar> next(size_);
  const std::size_t ny = dims_.back();

  auto fibers = [&](std::vector<Scalar>& data) {
    for (std::size_t b = 0; b < fibers_.size(); ++b) {
      Eigen::Map<Vec> fiber(data.data() + b * ny, static_cast<Eigen::Index>(ny));
      if (forward) {
        fiber = (fibers_[b].transpose().template cast<Scalar>() * fiber).eval();
      } else {
        fiber = (fibers_[b].template cast<Scalar>() * fiber).eval();
      }
    }
  };

  if (!forward) {
    fibers(current);
  }

  // Dense mode products along the leading positions.
  std::size_t outer = 1;
  for (std::size_t k = 0; k < leading_.size(); ++k) {
    const std::size_t n = dims_[k];
    const std::size_t stride = size_ / (outer * n);
    const Eigen::MatrixXd& q = leading_[k];
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * n * stride;
      for (std::size_t i = 0; i < n; ++i) {
        Scalar* dst = next.data() + base + i * stride;
        std::fill(dst, dst + stride, Scalar{});
        for (std::size_t j = 0; j < n; ++j) {
          const double c = forward ? q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))
                                   : q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          const Scalar* src = current.data() + base + j * stride;
          for (std::size_t r = 0; r < stride; ++r) {
            dst[r] += c * src[r];
          }
        }
      }
    }
    current.swap(next);
    outer *= n;
  }

  if (forward) {
    fibers(current);
  }
  std::copy(current.begin(), current.end(), out.begin());
}

void KroneckerEigenbasis::to_eigen(std::span<const double> v, std::span<double> out) const {
  transform<double>(v, out, true);
}

void KroneckerEigenbasis::from_eigen(std::span<const double> v, std::span<double> out) const {
  transform<double>(v, out, false);
}

void KroneckerEigenbasis::to_eigen(std::span<const std::complex<double>> v,
                                   std::span<std::complex<double>> out) const {
  transform<std::complex<double>>(v, out, true);
}

void KroneckerEigenbasis::from_eigen(std::span<const std::complex<double>> v,
                                     std::span<std::complex<double>> out) const {
  transform<std::complex<double>>(v, out, false);
}

} // namespace fracschrod
