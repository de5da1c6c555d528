#pragma once

// Dense exact linear algebra over finite fields and over the integers.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frobsplit/fq.hpp"
#include "frobsplit/poly.hpp"

namespace frobsplit::linalg {

using fq::FieldPtr;
using fq::Raw;

/// Row-major matrix over one finite field.  Entries are raw encodings in that
/// field; FieldElement accessors are provided for checked use.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(FieldPtr field, std::size_t rows, std::size_t cols);
  static FieldMatrix identity(FieldPtr field, std::size_t n);
  static FieldMatrix from_ints(FieldPtr field, const std::vector<std::vector<std::int64_t>>& rows);
  static FieldMatrix from_elements(const std::vector<std::vector<fq::FieldElement>>& rows);

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Raw& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  Raw operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<Raw> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const Raw> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::vector<Raw> column(std::size_t j) const;
  const std::vector<Raw>& data() const noexcept { return data_; }

  fq::FieldElement element(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const fq::FieldElement& v);

  FieldMatrix operator+(const FieldMatrix& o) const;
  FieldMatrix operator-(const FieldMatrix& o) const;
  FieldMatrix operator*(const FieldMatrix& o) const;
  FieldMatrix scaled(Raw c) const;
  /// this + c * I
  FieldMatrix plus_scalar(Raw c) const;
  FieldMatrix transpose() const;
  std::vector<Raw> apply(std::span<const Raw> v) const;
  bool is_zero() const noexcept;
  bool operator==(const FieldMatrix& o) const;

  std::vector<std::vector<std::int64_t>> to_int_rows() const;  // prime fields only
  std::string to_string() const;

  void require_same_field(const FieldMatrix& o) const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Raw> data_;
};

FieldMatrix vstack(const std::vector<FieldMatrix>& blocks);

struct Echelon {
  FieldMatrix reduced;              // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(FieldMatrix m);
std::size_t rank(const FieldMatrix& m);

struct RankKernel {
  std::size_t rank;
  FieldMatrix kernel;  // cols x (cols - rank); columns are the basis
};

/// Kernel basis columns are in reduced column echelon form (their transpose is
/// in reduced row echelon form), so the result depends only on the subspace.
RankKernel rank_kernel(const FieldMatrix& m);

/// Some x with m x = b, or nullopt when the system is inconsistent.
std::optional<std::vector<Raw>> solve(const FieldMatrix& m, std::span<const Raw> b);

/// det(m - lambda I), computed by Hessenberg reduction; valid in any characteristic.
fq::Poly char_poly(const FieldMatrix& m);
/// Least-degree monic polynomial annihilating m, by Krylov saturation over all
/// standard basis seeds.
fq::Poly min_poly(const FieldMatrix& m);
FieldMatrix evaluate(const fq::Poly& f, const FieldMatrix& m);

/// Integer matrix with arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols = 0);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix transpose() const;
  IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
  IntMatrix select_cols(const std::vector<std::size_t>& idx) const;
  bool operator==(const IntMatrix& o) const;
  bool is_zero() const;

  std::vector<std::vector<std::int64_t>> to_int64() const;  // throws on overflow
  FieldMatrix reduce(const FieldPtr& field) const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> data_;
};

struct SmithForm {
  IntMatrix U, D, V;  // U a V = D
  std::size_t rank;
  std::vector<mpz_class> divisors;  // d_1 | d_2 | ... (nonzero diagonal)
};

SmithForm smith_normal_form(const IntMatrix& a);
mpz_class determinant(const IntMatrix& a);  // fraction-free Bareiss
std::size_t rational_rank(const IntMatrix& a);
/// Row-style Hermite normal form of the row lattice: positive pivots, entries
/// above each pivot reduced into [0, pivot), zero rows dropped.
IntMatrix hermite_normal_form(const IntMatrix& a);
/// Rows form a basis of {x in Z^cols : a x = 0}, in Hermite normal form.
IntMatrix integer_kernel(const IntMatrix& a);

struct BasisExtension {
  bool extends;
  std::string diagnostic;
};

/// Whether the rows extend to a Z-basis of Z^cols (all elementary divisors 1
/// and the rows independent).
BasisExtension extends_to_z_basis(const IntMatrix& rows);

}  // namespace frobsplit::linalg
