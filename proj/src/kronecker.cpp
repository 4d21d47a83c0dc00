#include "fracschrod/kronecker.hpp"

#include "detail/multi_index.hpp"
#include "fracschrod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace fracschrod {

KroneckerSum::KroneckerSum(std::vector<Term> terms) : terms_(std::move(terms)) {
  require(!terms_.empty(), "Kronecker sum needs at least one term");
  const Term& first = terms_.front();
  require(!first.empty(), "Kronecker term needs at least one factor");
  for (const auto& f : first) {
    dims_.push_back(f.size());
  }
  for (const auto& term : terms_) {
    require(term.size() == dims_.size(), "all Kronecker terms must have the same number of factors");
    for (std::size_t k = 0; k < term.size(); ++k) {
      require(term[k].size() == dims_[k], "all Kronecker terms must share factor sizes");
    }
  }
  size_ = detail::product(dims_);
}

template <typename Scalar>
void KroneckerSum::apply_impl(std::span<const Scalar> v, std::span<Scalar> out) const {
  require(v.size() == size_ && out.size() == size_,
          "kron_apply: vector length " + std::to_string(v.size()) + " does not match operator size " +
              std::to_string(size_));

  std::vector<Scalar> current(size_);
  std::vector<Scalar> next(size_);
  std::fill(out.begin(), out.end(), Scalar{});

  for (const auto& term : terms_) {
    std::copy(v.begin(), v.end(), current.begin());
    std::size_t outer = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const std::size_t n = dims_[k];
      const std::size_t stride = size_ / (outer * n);
      const SymmetricTridiagonal& factor = term[k];
      if (!factor.is_identity()) {
        for (std::size_t o = 0; o < outer; ++o) {
          const std::size_t base = o * n * stride;
          for (std::size_t r = 0; r < stride; ++r) {
            factor.apply_strided(current.data() + base + r, next.data() + base + r, stride);
          }
        }
        current.swap(next);
      }
      outer *= n;
    }
    for (std::size_t i = 0; i < size_; ++i) {
      out[i] += current[i];
    }
  }
}

void KroneckerSum::apply(std::span<const double> v, std::span<double> out) const {
  apply_impl<double>(v, out);
}

void KroneckerSum::apply(std::span<const std::complex<double>> v,
                         std::span<std::complex<double>> out) const {
  apply_impl<std::complex<double>>(v, out);
}

std::vector<double> KroneckerSum::operator*(std::span<const double> v) const {
  std::vector<double> out(size_);
  apply(v, out);
  return out;
}

double KroneckerSum::norm_bound() const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double p = 1.0;
    for (const auto& f : term) {
      p *= f.inf_norm();
    }
    total += p;
  }
  return total;
}

std::vector<double> KroneckerSum::diagonal() const {
  std::vector<double> out(size_, 0.0);
  const std::size_t rank = dims_.size();
  std::vector<std::size_t> index(rank, 0);
  for (std::size_t flat = 0; flat < size_; ++flat) {
    for (const auto& term : terms_) {
      double p = 1.0;
      for (std::size_t k = 0; k < rank; ++k) {
        p *= term[k].diagonal()[index[k]];
      }
      out[flat] += p;
    }
    // Last index runs fastest.
    for (std::size_t k = rank; k-- > 0;) {
      if (++index[k] < dims_[k]) {
        break;
      }
      index[k] = 0;
    }
  }
  return out;
}

std::size_t CsrMatrix::max_row_nonzeros() const {
  std::size_t best = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    best = std::max(best, row_nonzeros(r));
  }
  return best;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto begin = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
  const auto end = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) {
    return 0.0;
  }
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

void CsrMatrix::apply(std::span<const double> v, std::span<double> out) const {
  require(v.size() == cols && out.size() == rows, "CSR matvec size mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      acc += values[p] * v[col_idx[p]];
    }
    out[r] = acc;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> v) const {
  std::vector<double> out(rows);
  apply(v, out);
  return out;
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      worst = std::max(worst, std::abs(values[p] - at(col_idx[p], r)));
    }
  }
  return worst;
}

namespace {

// Visits the structural entries (column, value) of one row of a Kronecker
// product term, i.e. every combination of the <= 3 nonzeros per factor row.
template <typename Visitor>
void visit_term_row(const KroneckerSum::Term& term, const std::vector<std::size_t>& row_index,
                    Visitor&& visit) {
  const std::size_t rank = term.size();
  std::vector<std::size_t> cols(rank);
  std::vector<std::size_t> choice(rank, 0);
  std::vector<std::vector<std::size_t>> options(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t i = row_index[k];
    const std::size_t n = term[k].size();
    if (i > 0 && term[k](i, i - 1) != 0.0) {
      options[k].push_back(i - 1);
    }
    if (term[k](i, i) != 0.0) {
      options[k].push_back(i);
    }
    if (i + 1 < n && term[k](i, i + 1) != 0.0) {
      options[k].push_back(i + 1);
    }
    if (options[k].empty()) {
      return;
    }
  }
  while (true) {
    std::size_t col = 0;
    double value = 1.0;
    for (std::size_t k = 0; k < rank; ++k) {
      const std::size_t j = options[k][choice[k]];
      col = col * term[k].size() + j;
      value *= term[k](row_index[k], j);
    }
    visit(col, value);
    std::size_t k = rank;
    while (k-- > 0) {
      if (++choice[k] < options[k].size()) {
        break;
      }
      choice[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) {
      return;
    }
  }
}

} // namespace

CsrMatrix to_explicit_sparse(const KroneckerSum& op) {
  require(op.size() <= kExplicitSizeGuard,
          "operator dimension " + std::to_string(op.size()) + " exceeds explicit-export guard " +
              std::to_string(kExplicitSizeGuard));
  CsrMatrix a;
  a.rows = a.cols = op.size();
  a.row_ptr.reserve(op.size() + 1);
  a.row_ptr.push_back(0);

  std::map<std::size_t, double> row;
  detail::MultiIndex index(op.dims());
  do {
    row.clear();
    for (const auto& term : op.terms()) {
      visit_term_row(term, *index, [&](std::size_t col, double value) { row[col] += value; });
    }
    for (const auto& [col, value] : row) {
      a.col_idx.push_back(col);
      a.values.push_back(value);
    }
    a.row_ptr.push_back(a.values.size());
  } while (index.next());
  return a;
}

std::size_t max_row_nonzeros(const KroneckerSum& op) {
  std::size_t best = 0;
  std::vector<std::size_t> cols;
  detail::MultiIndex index(op.dims());
  do {
    cols.clear();
    for (const auto& term : op.terms()) {
      visit_term_row(term, *index, [&](std::size_t col, double) { cols.push_back(col); });
    }
    std::sort(cols.begin(), cols.end());
    const auto unique = static_cast<std::size_t>(std::unique(cols.begin(), cols.end()) - cols.begin());
    best = std::max(best, unique);
  } while (index.next());
  return best;
}

} // namespace fracschrod
