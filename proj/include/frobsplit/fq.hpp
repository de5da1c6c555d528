#pragma once

// Exact arithmetic in finite fields F_{p^k}.
//
// Elements are encoded as integers in [0, p^k): the coefficient vector
// (c_0, ..., c_{k-1}) of the residue c_0 + c_1 t + ... modulo the field's
// modulus is read as a base-p number with c_0 least significant.  Every field
// is obtained through make_field(p, k), which is deterministic and cached, so
// two fields with the same (p, k) are the same object.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace frobsplit::fq {

using Raw = std::uint32_t;

class Field;
class FieldElement;
using FieldPtr = std::shared_ptr<const Field>;

bool is_prime(std::int64_t n);

/// Returns F_{p^k} with the least irreducible monic modulus of degree k, where
/// candidates t^k + c_{k-1} t^{k-1} + ... + c_0 are ordered by the base-p
/// number c_{k-1} ... c_0.  Throws std::invalid_argument for a non-prime p,
/// k == 0, or p^k >= 2^31.
FieldPtr make_field(std::int64_t p, int k);

class Field : public std::enable_shared_from_this<Field> {
  struct Key {};

 public:
  Field(Key, std::int64_t p, int k, std::vector<std::int64_t> modulus);

  std::int64_t characteristic() const noexcept { return p_; }
  int degree() const noexcept { return k_; }
  std::uint64_t order() const noexcept { return q_; }
  /// Coefficients low to high, length k + 1, monic.
  const std::vector<std::int64_t>& modulus() const noexcept { return modulus_; }
  bool is_prime_field() const noexcept { return k_ == 1; }

  Raw from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % p_;
    return static_cast<Raw>(r < 0 ? r + p_ : r);
  }
  Raw from_coeffs(std::span<const std::int64_t> coeffs) const;
  std::vector<std::int64_t> coeffs(Raw a) const;
  /// The class of t.  For a prime field this is 0 (the modulus is t).
  Raw generator() const noexcept;

  Raw add(Raw a, Raw b) const noexcept {
    if (k_ == 1) {
      Raw s = a + b;
      return s >= p_ ? s - static_cast<Raw>(p_) : s;
    }
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    return add_digits(a, b);
  }
  Raw neg(Raw a) const noexcept {
    if (k_ == 1) return a == 0 ? 0 : static_cast<Raw>(p_) - a;
    if (p_ == 2) return a;
    if (!neg_table_.empty()) return neg_table_[a];
    return neg_digits(a);
  }
  Raw sub(Raw a, Raw b) const noexcept { return add(a, neg(b)); }
  Raw mul(Raw a, Raw b) const noexcept {
    if (k_ == 1) return static_cast<Raw>(static_cast<std::uint64_t>(a) * b % static_cast<std::uint64_t>(p_));
    if (a == 0 || b == 0) return 0;
    if (!log_.empty()) return exp_[static_cast<std::size_t>(log_[a]) + log_[b]];
    return mul_poly(a, b);
  }
  /// Throws std::domain_error on zero.
  Raw inv(Raw a) const;
  Raw div(Raw a, Raw b) const { return mul(a, inv(b)); }
  Raw pow(Raw a, std::uint64_t e) const noexcept;

  /// y[i] += a * x[i]
  void axpy(std::span<Raw> y, Raw a, std::span<const Raw> x) const noexcept;
  /// y[i] -= a * x[i]
  void axmy(std::span<Raw> y, Raw a, std::span<const Raw> x) const noexcept { axpy(y, neg(a), x); }

  Raw frobenius(Raw a) const noexcept { return pow(a, static_cast<std::uint64_t>(p_)); }
  /// The unique y with y^p = a, computed as a^{p^{k-1}}.
  Raw pth_root(Raw a) const noexcept;
  /// Tr_{F/F_p}(a); the result is a raw value in [0, p).
  Raw trace(Raw a) const noexcept;

  FieldElement element(Raw a) const;
  FieldElement from_int_element(std::int64_t v) const;
  std::string format(Raw a) const;

  bool same_as(const Field& other) const noexcept {
    return this == &other || (p_ == other.p_ && modulus_ == other.modulus_);
  }

 private:
  Raw add_digits(Raw a, Raw b) const noexcept;
  Raw neg_digits(Raw a) const noexcept;
  Raw mul_poly(Raw a, Raw b) const noexcept;
  Raw pow_poly(Raw a, std::uint64_t e) const noexcept;
  void build_tables();

  std::int64_t p_;
  int k_;
  std::uint64_t q_;
  std::vector<std::int64_t> modulus_;
  std::vector<std::uint64_t> digit_weight_;  // p^i
  std::vector<Raw> exp_;                     // length 2(q-1) when tabulated
  std::vector<Raw> log_;
  std::vector<std::uint16_t> add_table_;
  std::vector<Raw> neg_table_;

  friend FieldPtr make_field(std::int64_t p, int k);
};

/// An element together with its owning field.  Arithmetic between elements of
/// different fields throws std::invalid_argument; use Embedding to move an
/// element into a larger field first.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Raw raw);

  const FieldPtr& field() const noexcept { return field_; }
  Raw raw() const noexcept { return raw_; }
  bool is_zero() const noexcept { return raw_ == 0; }
  std::vector<std::int64_t> coeffs() const { return field_->coeffs(raw_); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const { return {field_, field_->neg(raw_)}; }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement pow(std::uint64_t e) const { return {field_, field_->pow(raw_, e)}; }
  FieldElement inverse() const { return {field_, field_->inv(raw_)}; }

  bool operator==(const FieldElement& o) const noexcept {
    return raw_ == o.raw_ && field_->same_as(*o.field_);
  }
  std::string to_string() const { return field_->format(raw_); }

 private:
  void require_same_field(const FieldElement& o) const;

  FieldPtr field_;
  Raw raw_;
};

FieldElement pth_root(const FieldElement& x);
FieldElement frobenius(const FieldElement& x);
/// Tr_{F/F_p}(x) as an element of the prime field F_p.
FieldElement trace(const FieldElement& x);

/// Canonical embedding F_{p^k} -> F_{p^{km}}: the generator t of the source is
/// sent to the least-encoded root of the source modulus in the target.
class Embedding {
 public:
  Embedding(FieldPtr source, FieldPtr target);

  const FieldPtr& source() const noexcept { return source_; }
  const FieldPtr& target() const noexcept { return target_; }
  bool is_identity() const noexcept { return source_ == target_; }
  Raw image_of_generator() const noexcept { return image_of_generator_; }

  Raw map_raw(Raw a) const;
  FieldElement operator()(const FieldElement& x) const;

 private:
  FieldPtr source_;
  FieldPtr target_;
  Raw image_of_generator_ = 0;
};

/// Solves T^p - T = c inside c's own field; returns false when Tr(c) != 0.
bool artin_schreier_root_in_field(const Field& field, Raw c, Raw& root);

struct ArtinSchreierRoots {
  FieldPtr field;           // owner(c) or its degree-p extension
  Embedding embedding;      // owner(c) -> field
  std::vector<FieldElement> roots;  // all p roots, sorted by encoding
};

/// All roots of T^p - T - c.  The field grows to make_field(p, k p) exactly
/// when Tr_{F/F_p}(c) != 0.
ArtinSchreierRoots artin_schreier_roots(const FieldElement& c);

/// Smallest field F_{p^{k'}} containing the source, with k' = k * factor.
FieldPtr extension(const FieldPtr& field, int factor);

}  // namespace frobsplit::fq
