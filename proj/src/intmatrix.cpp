#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "frobsplit/linalg.hpp"

namespace frobsplit::linalg {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged integer matrix");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged integer matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("integer matrix shape mismatch in *");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l) {
      if (sgn((*this)(i, l)) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, l) * o(l, j);
    }
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  IntMatrix r(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(idx[i], j);
  return r;
}

IntMatrix IntMatrix::select_cols(const std::vector<std::size_t>& idx) const {
  IntMatrix r(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
  return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& v) { return sgn(v) == 0; });
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_int64() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto& v = (*this)(i, j);
      if (!v.fits_slong_p()) throw std::overflow_error("integer matrix entry exceeds 64 bits");
      out[i][j] = v.get_si();
    }
  return out;
}

FieldMatrix IntMatrix::reduce(const FieldPtr& field) const {
  FieldMatrix m(field, rows_, cols_);
  const mpz_class p = static_cast<long>(field->characteristic());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), (*this)(i, j).get_mpz_t(), p.get_mpz_t());
      m(i, j) = static_cast<Raw>(r.get_ui());
    }
  return m;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row a -= q row b
void row_sub(IntMatrix& m, std::size_t a, std::size_t b, const mpz_class& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

// col a -= q col b
void col_sub(IntMatrix& m, std::size_t a, std::size_t b, const mpz_class& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

mpz_class tdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix D = a, U = IntMatrix::identity(m), V = IntMatrix::identity(n);
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      bool found = false;
      std::size_t pi = t, pj = t;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (sgn(D(i, j)) != 0 && (!found || abs(D(i, j)) < abs(D(pi, pj)))) {
            found = true;
            pi = i;
            pj = j;
          }
      if (!found) break;
      swap_rows(D, t, pi);
      swap_rows(U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(V, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        const mpz_class q = tdiv(D(i, t), D(t, t));
        row_sub(D, i, t, q);
        row_sub(U, i, t, q);
        if (sgn(D(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        const mpz_class q = tdiv(D(t, j), D(t, t));
        col_sub(D, j, t, q);
        col_sub(V, j, t, q);
        if (sgn(D(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            for (std::size_t c = 0; c < n; ++c) D(t, c) += D(i, c);
            for (std::size_t c = 0; c < m; ++c) U(t, c) += U(i, c);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (sgn(D(t, t)) == 0) break;
    if (sgn(D(t, t)) < 0) {
      for (std::size_t c = 0; c < n; ++c) D(t, c) = -D(t, c);
      for (std::size_t c = 0; c < m; ++c) U(t, c) = -U(t, c);
    }
  }
  SmithForm s{std::move(U), std::move(D), std::move(V), 0, {}};
  for (std::size_t i = 0; i < std::min(m, n) && sgn(s.D(i, i)) != 0; ++i) {
    s.divisors.push_back(s.D(i, i));
    ++s.rank;
  }
  return s;
}

mpz_class determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && sgn(m(piv, k)) == 0) ++piv;
      if (piv == n) return 0;
      swap_rows(m, k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rational_rank(const IntMatrix& a) { return smith_normal_form(a).rank; }

IntMatrix hermite_normal_form(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    // Euclid on column c among rows r..m-1.
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (sgn(h(i, c)) != 0 && (best == m || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == m) break;
      swap_rows(h, r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (sgn(h(i, c)) == 0) continue;
        row_sub(h, i, r, tdiv(h(i, c), h(r, c)));
        if (sgn(h(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (sgn(h(r, c)) == 0) continue;
    if (sgn(h(r, c)) < 0)
      for (std::size_t j = 0; j < n; ++j) h(r, j) = -h(r, j);
    for (std::size_t i = 0; i < r; ++i) row_sub(h, i, r, fdiv(h(i, c), h(r, c)));
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::size_t> keep(r);
  for (std::size_t i = 0; i < r; ++i) keep[i] = i;
  return h.select_rows(keep);
}

IntMatrix integer_kernel(const IntMatrix& a) {
  const auto s = smith_normal_form(a);
  const std::size_t n = a.cols();
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < n; ++j) idx.push_back(j);
  IntMatrix basis = s.V.select_cols(idx).transpose();
  if (basis.rows() == 0) return IntMatrix(0, n);
  return hermite_normal_form(basis);
}

BasisExtension extends_to_z_basis(const IntMatrix& rows) {
  if (rows.rows() > rows.cols())
    return {false, std::to_string(rows.rows()) + " vectors cannot be part of a basis of Z^" + std::to_string(rows.cols())};
  if (rows.rows() == 0) return {true, ""};
  const auto s = smith_normal_form(rows);
  if (s.rank < rows.rows())
    return {false, "vectors are linearly dependent (rank " + std::to_string(s.rank) + " < " +
                       std::to_string(rows.rows()) + ")"};
  for (const auto& d : s.divisors)
    if (d != 1) return {false, "elementary divisor " + d.get_str()};
  return {true, ""};
}

}  // namespace frobsplit::linalg
