#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "frobsplit/linalg.hpp"

namespace frobsplit::linalg {

FieldMatrix::FieldMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  if (!field_) throw std::invalid_argument("FieldMatrix requires a field");
}

FieldMatrix FieldMatrix::identity(FieldPtr field, std::size_t n) {
  FieldMatrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::from_ints(FieldPtr field, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  FieldMatrix m(field, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = field->from_int(rows[i][j]);
  }
  return m;
}

FieldMatrix FieldMatrix::from_elements(const std::vector<std::vector<fq::FieldElement>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("from_elements needs a nonempty matrix");
  FieldMatrix m(rows.front().front().field(), rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

std::vector<Raw> FieldMatrix::column(std::size_t j) const {
  std::vector<Raw> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

fq::FieldElement FieldMatrix::element(std::size_t i, std::size_t j) const { return {field_, (*this)(i, j)}; }

void FieldMatrix::set(std::size_t i, std::size_t j, const fq::FieldElement& v) {
  if (!v.field()->same_as(*field_)) throw std::invalid_argument("matrix entry from a different field");
  (*this)(i, j) = v.raw();
}

void FieldMatrix::require_same_field(const FieldMatrix& o) const {
  if (!field_->same_as(*o.field_)) throw std::invalid_argument("matrices over different fields");
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& o) const {
  require_same_field(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in +");
  FieldMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_->add(data_[i], o.data_[i]);
  return r;
}

FieldMatrix FieldMatrix::operator-(const FieldMatrix& o) const {
  require_same_field(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in -");
  FieldMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_->sub(data_[i], o.data_[i]);
  return r;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
  require_same_field(o);
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch in *");
  FieldMatrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l) field_->axpy(r.row(i), (*this)(i, l), o.row(l));
  return r;
}

FieldMatrix FieldMatrix::scaled(Raw c) const {
  FieldMatrix r = *this;
  for (auto& v : r.data_) v = field_->mul(c, v);
  return r;
}

FieldMatrix FieldMatrix::plus_scalar(Raw c) const {
  if (!is_square()) throw std::invalid_argument("plus_scalar needs a square matrix");
  FieldMatrix r = *this;
  for (std::size_t i = 0; i < rows_; ++i) r(i, i) = field_->add(r(i, i), c);
  return r;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix r(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

std::vector<Raw> FieldMatrix::apply(std::span<const Raw> v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<Raw> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    Raw s = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (v[j] != 0) s = field_->add(s, field_->mul((*this)(i, j), v[j]));
    out[i] = s;
  }
  return out;
}

bool FieldMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Raw v) { return v == 0; });
}

bool FieldMatrix::operator==(const FieldMatrix& o) const {
  return field_->same_as(*o.field_) && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::vector<std::vector<std::int64_t>> FieldMatrix::to_int_rows() const {
  if (!field_->is_prime_field()) throw std::invalid_argument("to_int_rows requires a prime field");
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::string FieldMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << field_->format((*this)(i, j));
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

FieldMatrix vstack(const std::vector<FieldMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("vstack of nothing");
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    b.require_same_field(blocks.front());
    if (b.cols() != blocks.front().cols()) throw std::invalid_argument("vstack column mismatch");
    rows += b.rows();
  }
  FieldMatrix r(blocks.front().field(), rows, blocks.front().cols());
  std::size_t at = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++at) std::copy(b.row(i).begin(), b.row(i).end(), r.row(at).begin());
  return r;
}

Echelon rref(FieldMatrix m) {
  const auto& f = *m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r) std::swap_ranges(m.row(piv).begin(), m.row(piv).end(), m.row(r).begin());
    const Raw inv = f.inv(m(r, c));
    if (inv != 1)
      for (auto& v : m.row(r)) v = f.mul(v, inv);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, c) != 0) f.axmy(m.row(i), m(i, c), m.row(r));
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const FieldMatrix& m) { return rref(m).pivots.size(); }

RankKernel rank_kernel(const FieldMatrix& m) {
  const auto ech = rref(m);
  const std::size_t n = m.cols(), r = ech.pivots.size();
  std::vector<bool> is_pivot(n, false);
  for (auto c : ech.pivots) is_pivot[c] = true;
  FieldMatrix basis(m.field(), n - r, n);
  std::size_t at = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    basis(at, c) = 1;
    for (std::size_t i = 0; i < r; ++i) basis(at, ech.pivots[i]) = m.field()->neg(ech.reduced(i, c));
    ++at;
  }
  return {r, rref(std::move(basis)).reduced.transpose()};
}

std::optional<std::vector<Raw>> solve(const FieldMatrix& m, std::span<const Raw> b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  FieldMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::copy(m.row(i).begin(), m.row(i).end(), aug.row(i).begin());
    aug(i, m.cols()) = b[i];
  }
  const auto ech = rref(std::move(aug));
  if (!ech.pivots.empty() && ech.pivots.back() == m.cols()) return std::nullopt;
  std::vector<Raw> x(m.cols(), 0);
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) x[ech.pivots[i]] = ech.reduced(i, m.cols());
  return x;
}

namespace {

// Upper Hessenberg form by elementary similarity transformations.
FieldMatrix hessenberg(FieldMatrix h) {
  const auto& f = *h.field();
  const std::size_t n = h.rows();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1;
    while (piv < n && h(piv, j) == 0) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      std::swap_ranges(h.row(piv).begin(), h.row(piv).end(), h.row(j + 1).begin());
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, j + 1));
    }
    const Raw inv = f.inv(h(j + 1, j));
    for (std::size_t r = j + 2; r < n; ++r) {
      if (h(r, j) == 0) continue;
      const Raw factor = f.mul(h(r, j), inv);
      f.axmy(h.row(r), factor, h.row(j + 1));
      for (std::size_t i = 0; i < n; ++i) h(i, j + 1) = f.add(h(i, j + 1), f.mul(factor, h(i, r)));
    }
  }
  return h;
}

}  // namespace

fq::Poly char_poly(const FieldMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("char_poly of a non-square matrix");
  const FieldPtr& F = m.field();
  const auto& f = *F;
  const std::size_t n = m.rows();
  const FieldMatrix h = hessenberg(m);
  std::vector<fq::Poly> p;
  p.push_back(fq::Poly::constant(F, 1));
  for (std::size_t k = 1; k <= n; ++k) {
    fq::Poly next = (fq::Poly::x(F) - fq::Poly::constant(F, h(k - 1, k - 1))) * p[k - 1];
    Raw t = 1;
    for (std::size_t i = k - 1; i >= 1; --i) {
      t = f.mul(t, h(i, i - 1));
      if (t == 0) break;
      const Raw coef = f.mul(h(i - 1, k - 1), t);
      if (coef != 0) next = next - p[i - 1].scaled(coef);
    }
    p.push_back(std::move(next));
  }
  return n % 2 == 0 ? p[n] : -p[n];
}

fq::Poly min_poly(const FieldMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("min_poly of a non-square matrix");
  const FieldPtr& F = m.field();
  const auto& f = *F;
  const std::size_t n = m.rows();
  fq::Poly result = fq::Poly::constant(F, 1);
  for (std::size_t seed = 0; seed < n && static_cast<std::size_t>(result.degree()) < n; ++seed) {
    std::vector<Raw> v(n, 0);
    v[seed] = 1;
    std::vector<Raw> w(n, 0);
    for (std::size_t i = result.coeffs().size(); i-- > 0;) {
      w = m.apply(w);
      w[seed] = f.add(w[seed], result.coeffs()[i]);
    }
    if (std::all_of(w.begin(), w.end(), [](Raw x) { return x == 0; })) continue;

    // Krylov sequence k_0 = v, k_{i+1} = m k_i with incremental elimination;
    // each reduced vector remembers its expression in the k_i.
    std::vector<std::vector<Raw>> reduced, combo;
    std::vector<std::size_t> pivot;
    std::vector<Raw> k = v;
    for (std::size_t d = 0;; ++d) {
      std::vector<Raw> r = k, c(d + 1, 0);
      c[d] = 1;
      for (std::size_t i = 0; i < reduced.size(); ++i) {
        const Raw a = r[pivot[i]];
        if (a == 0) continue;
        f.axmy(r, a, reduced[i]);
        f.axmy(std::span<Raw>(c.data(), combo[i].size()), a, combo[i]);
      }
      auto it = std::find_if(r.begin(), r.end(), [](Raw x) { return x != 0; });
      if (it == r.end()) {
        // c is the monic relation sum c_i k_i = 0 with c_d = 1.
        result = fq::lcm(result, fq::Poly(F, c));
        break;
      }
      const std::size_t pc = static_cast<std::size_t>(it - r.begin());
      const Raw inv = f.inv(r[pc]);
      for (auto& x : r) x = f.mul(x, inv);
      for (auto& x : c) x = f.mul(x, inv);
      reduced.push_back(std::move(r));
      combo.push_back(std::move(c));
      pivot.push_back(pc);
      k = m.apply(k);
    }
  }
  return result;
}

FieldMatrix evaluate(const fq::Poly& poly, const FieldMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("evaluate needs a square matrix");
  if (!poly.field()->same_as(*m.field())) throw std::invalid_argument("polynomial and matrix over different fields");
  FieldMatrix acc(m.field(), m.rows(), m.cols());
  for (std::size_t i = poly.coeffs().size(); i-- > 0;) acc = (acc * m).plus_scalar(poly.coeffs()[i]);
  return acc;
}

}  // namespace frobsplit::linalg
