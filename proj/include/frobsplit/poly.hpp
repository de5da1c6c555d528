#pragma once

// Univariate polynomials over a finite field.

#include <string>
#include <utility>
#include <vector>

#include "frobsplit/fq.hpp"

namespace frobsplit::fq {

class Poly {
 public:
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  /// Coefficients low to high.
  Poly(FieldPtr field, std::vector<Raw> coeffs);

  static Poly constant(FieldPtr field, Raw c);
  static Poly monomial(FieldPtr field, Raw c, std::size_t degree);
  /// The polynomial x.
  static Poly x(FieldPtr field) { return monomial(std::move(field), 1, 1); }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<Raw>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Raw leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  Raw coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(Raw c) const;
  Poly pow(std::uint64_t e) const;
  /// Quotient and remainder; throws std::domain_error for a zero divisor.
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  Poly operator%(const Poly& d) const { return divmod(d).second; }
  Poly monic() const;
  Raw eval(Raw x) const;

  bool operator==(const Poly& o) const { return field_->same_as(*o.field_) && coeffs_ == o.coeffs_; }

  /// E.g. "x^2+x" or "2x^3+t*x+1"; non-prime-field coefficients are parenthesised.
  std::string to_string(const std::string& var = "x") const;

 private:
  void normalize();
  void require_same_field(const Poly& o) const;

  FieldPtr field_;
  std::vector<Raw> coeffs_;
};

Poly gcd(Poly a, Poly b);
Poly lcm(const Poly& a, const Poly& b);

}  // namespace frobsplit::fq
