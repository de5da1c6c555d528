#pragma once

// The Weyl algebra A_n over a finite field, its point modules and the
// point-level splitting checks.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frobsplit/fq.hpp"
#include "frobsplit/linalg.hpp"
#include "frobsplit/poly.hpp"

namespace frobsplit::weyl {

using fq::FieldPtr;
using fq::Raw;
using linalg::FieldMatrix;

/// Exponents (I_1..I_n, J_1..J_n) of x^I d^J.
using Exponents = std::vector<std::uint16_t>;

/// Element of A_n in normal form sum c_{I,J} x^I d^J (all x left of all d).
class WeylElement {
 public:
  WeylElement(FieldPtr field, int n);

  static WeylElement constant(FieldPtr field, int n, Raw c);
  static WeylElement monomial(FieldPtr field, int n, const std::vector<int>& I, const std::vector<int>& J, Raw c = 1);
  /// x_i and d_i, 0-based index.
  static WeylElement x(FieldPtr field, int n, int i);
  static WeylElement d(FieldPtr field, int n, int i);
  /// E_k = x_k d_k
  static WeylElement euler(FieldPtr field, int n, int k);

  const FieldPtr& field() const noexcept { return field_; }
  int n() const noexcept { return n_; }
  const std::map<Exponents, Raw>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Raw coeff(const Exponents& e) const;
  /// Largest exponent of any variable in the support.
  int max_exponent() const noexcept;

  WeylElement operator+(const WeylElement& o) const;
  WeylElement operator-(const WeylElement& o) const;
  WeylElement operator-() const;
  WeylElement operator*(const WeylElement& o) const;
  WeylElement scaled(Raw c) const;
  WeylElement plus_scalar(Raw c) const;
  WeylElement pow(unsigned e) const;
  bool operator==(const WeylElement& o) const;

  /// E.g. "x^2*d^2+x*d+2" (n = 1) or "x1*d2+1".
  std::string to_string() const;

 private:
  void add_term(const Exponents& e, Raw c);
  void require_compatible(const WeylElement& o) const;

  FieldPtr field_;
  int n_;
  std::map<Exponents, Raw> terms_;
};

/// Exponents are capped below 2 p^2 per variable; larger products throw std::length_error.
int exponent_cap(std::int64_t p) noexcept;

/// binom(n, k) mod p by Lucas' theorem.
std::int64_t binomial_mod(std::int64_t n, std::int64_t k, std::int64_t p);

WeylElement commutator(const WeylElement& a, const WeylElement& b);
/// Commutes with every x_i and d_i.
bool is_central(const WeylElement& u);
/// Every exponent of every term divisible by p.
bool has_central_support(const WeylElement& u);

/// The linked points zeta = (b, omega_p), xi = (a, omega_p), eta = (c, omega_p),
/// all coordinates in one field.  omega_p is the value of d_i^p.
struct PointTriple {
  FieldPtr field;
  int n = 0;
  std::vector<Raw> b, omega_p, a, c;

  std::int64_t p() const { return field->characteristic(); }
  /// Validates c_i^p - c_i = b_i omega_p_i and derives a = pth_root(b).
  static PointTriple make(FieldPtr field, std::vector<Raw> b, std::vector<Raw> omega_p, std::vector<Raw> c);
  /// The same point with all coordinates pushed along an embedding.
  PointTriple embedded(const fq::Embedding& e) const;
  std::string to_string() const;
};

/// delta^xi with ordered basis d^I, I in {0..p-1}^n lexicographic; basis index
/// of I is sum_j I_j p^(n-1-j).  Column m of each matrix is the image of basis
/// vector m.
struct PointRep {
  PointTriple point;
  std::size_t dim = 0;
  std::vector<FieldMatrix> x, d;

  std::size_t index(const std::vector<int>& I) const;
  std::vector<int> label(std::size_t idx) const;
};

PointRep delta_rep(const PointTriple& pt);
FieldMatrix represent(const WeylElement& u, const PointRep& rep);
/// Matrix of x^I d^J, computed from precomputed x-power matrices; see MonomialTable.
class MonomialTable {
 public:
  explicit MonomialTable(const PointRep& rep);
  /// x^I d^J for I, J in {0..p-1}^n given by basis indices.
  FieldMatrix monomial(std::size_t i_index, std::size_t j_index) const;
  std::size_t dim() const noexcept { return rep_->dim; }

 private:
  const PointRep* rep_;
  std::vector<FieldMatrix> xpow_;                         // indexed by I
  std::vector<std::vector<std::pair<std::size_t, Raw>>> dpow_;  // [J][col] -> (row, scalar)
};

struct EulerBlockReport {
  int k = 0;
  Raw tau = 0;
  FieldMatrix block;  // T_k(tau), p x p
  fq::Poly char_poly, min_poly, block_char_poly, expected_char_poly, expected_min_poly;
  bool char_poly_ok = false, min_poly_ok = false, block_ok = false;
  bool pass() const { return char_poly_ok && min_poly_ok && block_ok; }
};

/// T_k(tau): diagonal i+1-tau, subdiagonal a_k, top-right entry a_k omega_k.
FieldMatrix euler_block(const PointTriple& pt, int k, Raw tau);
/// Checks for E_k - c_k on delta^xi: char poly -(L^p - L)^(p^(n-1)), min poly
/// L^p - L, and char poly equal to that of the block raised to p^(n-1).
EulerBlockReport euler_block_check(const PointTriple& pt, int k);

/// D_eta = End(delta^xi) / L with L the image of v -> sum_k v_k (E_k - c_k).
/// L = {Y : every row of Y lies in R} with R the row space of the stacked
/// representing matrices of E_k - c_k, so the cokernel has basis E_{i,j} for
/// j outside the pivot columns of R.
struct DEta {
  PointRep rep;
  std::vector<FieldMatrix> euler_shifted;  // represent(E_k - c_k)
  linalg::Echelon row_space;               // RREF of the stack, zero rows dropped
  std::vector<std::size_t> free_columns;   // j indices of the cokernel basis
  std::size_t joint_kernel_dim = 0;
  std::size_t dim = 0;                     // dim * free_columns.size()

  /// Cokernel coordinates of Y in the basis E_{i,j}, ordered (i, j).
  std::vector<Raw> coordinates(const FieldMatrix& Y) const;
  /// Left action of X on D_eta in the cokernel basis.
  FieldMatrix action(const FieldMatrix& X) const;
};

/// Builds D_eta without asserting the expected dimensions.
DEta d_eta_compute(const PointTriple& pt);
/// As d_eta_compute, throwing CounterexampleError unless dim = p^n and the
/// joint kernel is 1-dimensional.
DEta d_eta_build(const PointTriple& pt);

struct AzumayaCertificate {
  PointTriple point;
  std::size_t delta_dim = 0, d_eta_dim = 0, joint_kernel_dim = 0;
  std::size_t expected_rank = 0;  // p^(2n)
  std::size_t action_rank = 0;    // D_zeta -> End(D_eta)
  std::size_t bmr_rank = 0;       // D_zeta -> End(delta^xi)
  bool pass = false;
};

/// Rank of the action map D_zeta -> End(D_eta) over the monomial basis
/// x^I d^J (I, J < p), which spans D_zeta.
AzumayaCertificate azumaya_point_check(const PointTriple& pt);

/// Multiplication in D_zeta = A_n / (x_i^p - b_i, d_i^p - omega_i) on the
/// basis x^I d^J, I, J in {0..p-1}^n.  Label of (I, J) is
/// index(I) * p^n + index(J).
class ReducedWeylAlgebra {
 public:
  ReducedWeylAlgebra(FieldPtr field, std::int64_t p, int n, std::vector<Raw> b, std::vector<Raw> omega_p);

  std::size_t dim() const noexcept { return labels_; }
  std::size_t half_dim() const noexcept { return half_; }
  std::size_t label(std::size_t i_index, std::size_t j_index) const noexcept { return i_index * half_ + j_index; }
  std::vector<int> exps_i(std::size_t label) const;
  std::vector<int> exps_j(std::size_t label) const;

  /// Product of two basis labels as a sparse combination of labels.
  std::vector<std::pair<std::size_t, Raw>> multiply(std::size_t u, std::size_t v) const;
  /// Product of sparse combinations.
  std::vector<std::pair<std::size_t, Raw>> multiply(const std::vector<std::pair<std::size_t, Raw>>& u,
                                                    const std::vector<std::pair<std::size_t, Raw>>& v) const;
  /// Reduces an element of A_n to D_zeta coordinates.
  std::vector<std::pair<std::size_t, Raw>> reduce(const WeylElement& u) const;

  const FieldPtr& field() const noexcept { return field_; }
  std::int64_t p() const noexcept { return p_; }
  int n() const noexcept { return n_; }

 private:
  FieldPtr field_;
  std::int64_t p_;
  int n_;
  std::size_t half_, labels_;
  std::vector<Raw> b_, omega_;
  // per variable: product of (i1, j1) and (i2, j2) one-variable labels -> terms
  std::vector<std::vector<std::vector<std::pair<std::size_t, Raw>>>> table_;
};

}  // namespace frobsplit::weyl
