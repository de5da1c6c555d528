#include "frobsplit/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace frobsplit::fq {

Poly::Poly(FieldPtr field, std::vector<Raw> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  normalize();
}

Poly Poly::constant(FieldPtr field, Raw c) { return Poly(std::move(field), std::vector<Raw>{c}); }

Poly Poly::monomial(FieldPtr field, Raw c, std::size_t degree) {
  std::vector<Raw> v(degree + 1, 0);
  v[degree] = c;
  return Poly(std::move(field), std::move(v));
}

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

void Poly::require_same_field(const Poly& o) const {
  if (!field_->same_as(*o.field_)) throw std::invalid_argument("polynomials over different fields");
}

Poly Poly::operator+(const Poly& o) const {
  require_same_field(o);
  std::vector<Raw> r(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->add(coeff(i), o.coeff(i));
  return Poly(field_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  std::vector<Raw> r(coeffs_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->neg(coeffs_[i]);
  return Poly(field_, std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
  require_same_field(o);
  if (is_zero() || o.is_zero()) return Poly(field_);
  std::vector<Raw> r(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    field_->axpy(std::span<Raw>(r.data() + i, o.coeffs_.size()), coeffs_[i], o.coeffs_);
  return Poly(field_, std::move(r));
}

Poly Poly::scaled(Raw c) const {
  std::vector<Raw> r(coeffs_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_->mul(c, coeffs_[i]);
  return Poly(field_, std::move(r));
}

Poly Poly::pow(std::uint64_t e) const {
  Poly acc = constant(field_, 1), base = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc = acc * base;
    if (e > 1) base = base * base;
  }
  return acc;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  require_same_field(d);
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Raw> rem = coeffs_;
  if (rem.size() < d.coeffs_.size()) return {Poly(field_), *this};
  std::vector<Raw> quo(rem.size() - d.coeffs_.size() + 1, 0);
  const Raw lead_inv = field_->inv(d.leading());
  const std::size_t dd = d.coeffs_.size() - 1;
  for (std::size_t i = rem.size(); i-- > dd;) {
    const Raw f = field_->mul(rem[i], lead_inv);
    if (f == 0) continue;
    quo[i - dd] = f;
    field_->axmy(std::span<Raw>(rem.data() + (i - dd), dd + 1), f, d.coeffs_);
  }
  rem.resize(dd);
  return {Poly(field_, std::move(quo)), Poly(field_, std::move(rem))};
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(field_->inv(leading()));
}

Raw Poly::eval(Raw x) const {
  Raw v = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = field_->add(field_->mul(v, x), *it);
  return v;
}

std::string Poly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Raw c = coeffs_[i];
    if (c == 0) continue;
    if (!first) os << '+';
    first = false;
    std::string cs = field_->format(c);
    if (!field_->is_prime_field() && cs.find('+') != std::string::npos) cs = "(" + cs + ")";
    if (i == 0) {
      os << cs;
      continue;
    }
    if (c != 1) os << cs << (field_->is_prime_field() ? "" : "*");
    os << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field());
  return (a * b).divmod(gcd(a, b)).first.monic();
}

}  // namespace frobsplit::fq
