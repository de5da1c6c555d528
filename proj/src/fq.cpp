#include "frobsplit/fq.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace frobsplit::fq {

namespace {

constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 31;
constexpr std::uint64_t kLogTableLimit = std::uint64_t{1} << 20;
constexpr std::uint64_t kAddTableLimit = 1024;

using Coeffs = std::vector<std::int64_t>;

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = mod_p(a, p);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_tuple(nt, t - q * nt);
    std::tie(r, nr) = std::make_tuple(nr, r - q * nr);
  }
  return mod_p(t, p);
}

// Dense polynomials over F_p, low to high, trimmed.
void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

Coeffs poly_mod(Coeffs a, const Coeffs& m, std::int64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::int64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::int64_t f = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = mod_p(a[shift + i] - f * m[i], p);
    trim(a);
  }
  return a;
}

Coeffs poly_sub(Coeffs a, const Coeffs& b, std::int64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod_p(a[i] - b[i], p);
  trim(a);
  return a;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// t^(p^e) mod m
Coeffs frobenius_power_of_t(const Coeffs& m, std::int64_t p, int e) {
  Coeffs x = poly_mod({0, 1}, m, p);
  for (int i = 0; i < e; ++i) {
    Coeffs base = x, acc{1};
    for (std::int64_t ex = p; ex > 0; ex >>= 1) {
      if (ex & 1) acc = poly_mod(poly_mul(acc, base, p), m, p);
      base = poly_mod(poly_mul(base, base, p), m, p);
    }
    x = std::move(acc);
  }
  return x;
}

std::vector<int> prime_divisors(std::uint64_t n) {
  std::vector<int> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<int>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<int>(n));
  return out;
}

// Rabin's test.
bool is_irreducible(const Coeffs& m, std::int64_t p) {
  const int k = static_cast<int>(m.size()) - 1;
  if (k == 1) return true;
  if (m[0] == 0) return false;
  if (frobenius_power_of_t(m, p, k) != Coeffs{0, 1}) return false;
  for (int r : prime_divisors(static_cast<std::uint64_t>(k))) {
    Coeffs g = poly_gcd(m, poly_sub(frobenius_power_of_t(m, p, k / r), {0, 1}, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

Coeffs least_irreducible(std::int64_t p, int k, std::uint64_t q) {
  Coeffs m(static_cast<std::size_t>(k) + 1, 0);
  m[static_cast<std::size_t>(k)] = 1;
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    std::uint64_t v = idx;
    for (int i = 0; i < k; ++i) {
      m[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(v % static_cast<std::uint64_t>(p));
      v /= static_cast<std::uint64_t>(p);
    }
    if (is_irreducible(m, p)) return m;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldPtr make_field(std::int64_t p, int k) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: " + std::to_string(p) + " is not prime");
  if (k < 1) throw std::invalid_argument("make_field: extension degree must be at least 1");
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= static_cast<std::uint64_t>(p);
    if (q >= kMaxOrder)
      throw std::invalid_argument("make_field: field of order " + std::to_string(p) + "^" + std::to_string(k) +
                                  " is too large");
  }

  static std::mutex mu;
  static std::map<std::pair<std::int64_t, int>, FieldPtr> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({p, k});
  if (it != cache.end()) return it->second;
  auto field = std::make_shared<Field>(Field::Key{}, p, k, least_irreducible(p, k, q));
  field->build_tables();
  cache.emplace(std::make_pair(p, k), field);
  return field;
}

Field::Field(Key, std::int64_t p, int k, std::vector<std::int64_t> modulus)
    : p_(p), k_(k), q_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < k_; ++i) {
    digit_weight_.push_back(q_);
    q_ *= static_cast<std::uint64_t>(p_);
  }
}

void Field::build_tables() {
  if (k_ == 1) return;
  if (q_ <= kAddTableLimit && p_ != 2) {
    add_table_.resize(q_ * q_);
    neg_table_.resize(q_);
    for (Raw a = 0; a < q_; ++a) {
      neg_table_[a] = neg_digits(a);
      for (Raw b = 0; b < q_; ++b) add_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(add_digits(a, b));
    }
  }
  if (q_ > kLogTableLimit) return;
  const std::uint64_t order = q_ - 1;
  const auto divisors = prime_divisors(order);
  Raw g = 0;
  for (Raw cand = 1; cand < q_; ++cand) {
    bool primitive = true;
    for (int r : divisors) {
      if (pow_poly(cand, order / static_cast<std::uint64_t>(r)) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }
  exp_.resize(2 * order);
  log_.assign(q_, 0);
  Raw x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = x;
    exp_[i + order] = x;
    log_[x] = static_cast<Raw>(i);
    x = mul_poly(x, g);
  }
}

Raw Field::from_coeffs(std::span<const std::int64_t> coeffs) const {
  if (coeffs.size() > static_cast<std::size_t>(k_))
    throw std::invalid_argument("from_coeffs: expected at most " + std::to_string(k_) + " coefficients");
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    r += static_cast<std::uint64_t>(mod_p(coeffs[i], p_)) * digit_weight_[i];
  return static_cast<Raw>(r);
}

std::vector<std::int64_t> Field::coeffs(Raw a) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(a % static_cast<Raw>(p_));
    a /= static_cast<Raw>(p_);
  }
  return out;
}

Raw Field::generator() const noexcept {
  if (k_ == 1) return from_int(-modulus_[0]);
  return static_cast<Raw>(p_);
}

Raw Field::add_digits(Raw a, Raw b) const noexcept {
  Raw r = 0;
  const auto p = static_cast<Raw>(p_);
  for (int i = 0; i < k_; ++i) {
    Raw s = a % p + b % p;
    if (s >= p) s -= p;
    r += s * static_cast<Raw>(digit_weight_[static_cast<std::size_t>(i)]);
    a /= p;
    b /= p;
  }
  return r;
}

Raw Field::neg_digits(Raw a) const noexcept {
  Raw r = 0;
  const auto p = static_cast<Raw>(p_);
  for (int i = 0; i < k_; ++i) {
    Raw d = a % p;
    if (d != 0) r += (p - d) * static_cast<Raw>(digit_weight_[static_cast<std::size_t>(i)]);
    a /= p;
  }
  return r;
}

Raw Field::mul_poly(Raw a, Raw b) const noexcept {
  const auto ca = coeffs(a), cb = coeffs(b);
  std::vector<std::int64_t> prod(static_cast<std::size_t>(2 * k_ - 1), 0);
  for (int i = 0; i < k_; ++i) {
    if (ca[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < k_; ++j)
      prod[static_cast<std::size_t>(i + j)] =
          (prod[static_cast<std::size_t>(i + j)] + ca[static_cast<std::size_t>(i)] * cb[static_cast<std::size_t>(j)]) % p_;
  }
  for (int d = 2 * k_ - 2; d >= k_; --d) {
    const std::int64_t f = prod[static_cast<std::size_t>(d)];
    if (f == 0) continue;
    for (int i = 0; i <= k_; ++i)
      prod[static_cast<std::size_t>(d - k_ + i)] =
          mod_p(prod[static_cast<std::size_t>(d - k_ + i)] - f * modulus_[static_cast<std::size_t>(i)], p_);
  }
  return from_coeffs(std::span<const std::int64_t>(prod.data(), static_cast<std::size_t>(k_)));
}

Raw Field::pow_poly(Raw a, std::uint64_t e) const noexcept {
  Raw acc = 1, base = a;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc = k_ == 1 ? mul(acc, base) : mul_poly(acc, base);
    base = k_ == 1 ? mul(base, base) : mul_poly(base, base);
  }
  return acc;
}

Raw Field::pow(Raw a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!log_.empty()) return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
  if (k_ == 1) {
    std::uint64_t acc = 1, base = a, m = static_cast<std::uint64_t>(p_);
    for (; e > 0; e >>= 1) {
      if (e & 1) acc = acc * base % m;
      base = base * base % m;
    }
    return static_cast<Raw>(acc);
  }
  return pow_poly(a, e);
}

Raw Field::inv(Raw a) const {
  if (a == 0) throw std::domain_error("inverse of zero in " + format(0));
  if (k_ == 1) return static_cast<Raw>(inv_mod(a, p_));
  if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow_poly(a, q_ - 2);
}

void Field::axpy(std::span<Raw> y, Raw a, std::span<const Raw> x) const noexcept {
  if (a == 0) return;
  const std::size_t n = std::min(y.size(), x.size());
  if (k_ == 1) {
    const std::uint64_t m = static_cast<std::uint64_t>(p_);
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] != 0) y[i] = static_cast<Raw>((y[i] + static_cast<std::uint64_t>(a) * x[i]) % m);
    return;
  }
  if (!log_.empty()) {
    const std::size_t la = log_[a];
    if (p_ == 2) {
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0) y[i] ^= exp_[la + log_[x[i]]];
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != 0) y[i] = add(y[i], exp_[la + log_[x[i]]]);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != 0) y[i] = add(y[i], mul(a, x[i]));
}

Raw Field::pth_root(Raw a) const noexcept {
  Raw r = a;
  for (int i = 1; i < k_; ++i) r = frobenius(r);
  return r;
}

Raw Field::trace(Raw a) const noexcept {
  Raw s = 0, x = a;
  for (int i = 0; i < k_; ++i) {
    s = add(s, x);
    x = frobenius(x);
  }
  return s;
}

FieldElement Field::element(Raw a) const {
  if (a >= q_) throw std::invalid_argument("element encoding out of range");
  return FieldElement(shared_from_this(), a);
}

FieldElement Field::from_int_element(std::int64_t v) const { return FieldElement(shared_from_this(), from_int(v)); }

std::string Field::format(Raw a) const {
  if (k_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  const auto c = coeffs(a);
  std::ostringstream os;
  bool first = true;
  for (int i = k_ - 1; i >= 0; --i) {
    const auto ci = c[static_cast<std::size_t>(i)];
    if (ci == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << ci;
      continue;
    }
    if (ci != 1) os << ci;
    os << 't';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

FieldElement::FieldElement(FieldPtr field, Raw raw) : field_(std::move(field)), raw_(raw) {
  if (!field_) throw std::invalid_argument("FieldElement requires a field");
}

void FieldElement::require_same_field(const FieldElement& o) const {
  if (!field_->same_as(*o.field_))
    throw std::invalid_argument("field mismatch: F_" + std::to_string(field_->order()) + " vs F_" +
                                std::to_string(o.field_->order()) + "; embed explicitly");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_field(o);
  return {field_, field_->add(raw_, o.raw_)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_field(o);
  return {field_, field_->sub(raw_, o.raw_)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_field(o);
  return {field_, field_->mul(raw_, o.raw_)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
  require_same_field(o);
  return {field_, field_->div(raw_, o.raw_)};
}

FieldElement pth_root(const FieldElement& x) { return {x.field(), x.field()->pth_root(x.raw())}; }
FieldElement frobenius(const FieldElement& x) { return {x.field(), x.field()->frobenius(x.raw())}; }
FieldElement trace(const FieldElement& x) {
  return {make_field(x.field()->characteristic(), 1), x.field()->trace(x.raw())};
}

namespace {

Raw smallest_root(const Field& target, const std::vector<std::int64_t>& poly) {
  const auto q = static_cast<Raw>(target.order());
  std::vector<Raw> coeffs;
  for (auto c : poly) coeffs.push_back(target.from_int(c));
  for (Raw r = 0; r < q; ++r) {
    Raw v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = target.add(target.mul(v, r), *it);
    if (v == 0) return r;
  }
  throw std::logic_error("modulus has no root in target field");
}

}  // namespace

Embedding::Embedding(FieldPtr source, FieldPtr target) : source_(std::move(source)), target_(std::move(target)) {
  if (source_->characteristic() != target_->characteristic())
    throw std::invalid_argument("embedding between fields of different characteristic");
  if (target_->degree() % source_->degree() != 0)
    throw std::invalid_argument("F_" + std::to_string(source_->order()) + " does not embed in F_" +
                                std::to_string(target_->order()));
  if (source_->degree() == 1 || source_->same_as(*target_)) {
    image_of_generator_ = target_->from_int(source_->generator());
    return;
  }
  static std::mutex mu;
  static std::map<std::tuple<std::int64_t, int, int>, Raw> cache;
  const auto key = std::make_tuple(source_->characteristic(), source_->degree(), target_->degree());
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) {
      image_of_generator_ = it->second;
      return;
    }
  }
  image_of_generator_ = smallest_root(*target_, source_->modulus());
  std::lock_guard lock(mu);
  cache.emplace(key, image_of_generator_);
}

Raw Embedding::map_raw(Raw a) const {
  if (source_->degree() == 1) return target_->from_int(a);
  if (source_->same_as(*target_)) return a;
  const auto c = source_->coeffs(a);
  Raw v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    v = target_->add(target_->mul(v, image_of_generator_), target_->from_int(*it));
  return v;
}

FieldElement Embedding::operator()(const FieldElement& x) const {
  if (!x.field()->same_as(*source_)) throw std::invalid_argument("embedding applied to element of another field");
  return {target_, map_raw(x.raw())};
}

bool artin_schreier_root_in_field(const Field& field, Raw c, Raw& root) {
  const int k = field.degree();
  const std::int64_t p = field.characteristic();
  if (k == 1) {
    root = 0;
    return c == 0;
  }
  // Columns: coefficient vectors of L(t^i) = (t^i)^p - t^i; augmented with c.
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k) + 1));
  Raw basis = 1;
  const Raw t = field.generator();
  for (int i = 0; i < k; ++i) {
    const auto col = field.coeffs(field.sub(field.frobenius(basis), basis));
    for (int r = 0; r < k; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = col[static_cast<std::size_t>(r)];
    basis = field.mul(basis, t);
  }
  const auto cc = field.coeffs(c);
  for (int r = 0; r < k; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = cc[static_cast<std::size_t>(r)];

  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (int col = 0; col < k && row < static_cast<std::size_t>(k); ++col) {
    std::size_t piv = row;
    while (piv < static_cast<std::size_t>(k) && m[piv][static_cast<std::size_t>(col)] == 0) ++piv;
    if (piv == static_cast<std::size_t>(k)) continue;
    std::swap(m[piv], m[row]);
    const std::int64_t inv = inv_mod(m[row][static_cast<std::size_t>(col)], p);
    for (auto& v : m[row]) v = v * inv % p;
    for (std::size_t r = 0; r < static_cast<std::size_t>(k); ++r) {
      if (r == row || m[r][static_cast<std::size_t>(col)] == 0) continue;
      const std::int64_t f = m[r][static_cast<std::size_t>(col)];
      for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j) m[r][j] = mod_p(m[r][j] - f * m[row][j], p);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < static_cast<std::size_t>(k); ++r)
    if (m[r][static_cast<std::size_t>(k)] != 0) return false;
  std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[static_cast<std::size_t>(pivot_col[r])] = m[r][static_cast<std::size_t>(k)];
  root = field.from_coeffs(x);
  return true;
}

FieldPtr extension(const FieldPtr& field, int factor) {
  if (factor == 1) return field;
  return make_field(field->characteristic(), field->degree() * factor);
}

ArtinSchreierRoots artin_schreier_roots(const FieldElement& c) {
  const FieldPtr& base = c.field();
  const std::int64_t p = base->characteristic();
  FieldPtr target = base->trace(c.raw()) == 0 ? base : extension(base, static_cast<int>(p));
  Embedding emb(base, target);
  Raw r0 = 0;
  if (!artin_schreier_root_in_field(*target, emb.map_raw(c.raw()), r0))
    throw std::logic_error("Artin-Schreier equation unsolvable after extension");
  std::vector<FieldElement> roots;
  for (std::int64_t j = 0; j < p; ++j) roots.emplace_back(target, target->add(r0, target->from_int(j)));
  std::sort(roots.begin(), roots.end(), [](const FieldElement& a, const FieldElement& b) { return a.raw() < b.raw(); });
  return {target, emb, std::move(roots)};
}

}  // namespace frobsplit::fq
