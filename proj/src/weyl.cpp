#include "frobsplit/weyl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "frobsplit/errors.hpp"
#include "frobsplit/json_io.hpp"

namespace frobsplit::weyl {

namespace {

std::int64_t factorial_mod(std::int64_t m, std::int64_t p) {
  if (m >= p) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 2; i <= m; ++i) r = r * i % p;
  return r;
}

std::int64_t small_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficients of d^j x^k = sum_m coeff_m x^(k-m) d^(j-m), reduced mod p.
std::vector<std::pair<int, std::int64_t>> reorder_terms(int j, int k, std::int64_t p) {
  std::vector<std::pair<int, std::int64_t>> out;
  for (int m = 0; m <= std::min(j, k); ++m) {
    const std::int64_t c = binomial_mod(j, m, p) * binomial_mod(k, m, p) % p * factorial_mod(m, p) % p;
    if (c != 0) out.emplace_back(m, c);
  }
  return out;
}

std::size_t power(std::int64_t p, int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= static_cast<std::size_t>(p);
  return r;
}

}  // namespace

int exponent_cap(std::int64_t p) noexcept { return static_cast<int>(2 * p * p); }

std::int64_t binomial_mod(std::int64_t n, std::int64_t k, std::int64_t p) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  while (n > 0 || k > 0) {
    const std::int64_t nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    r = r * (small_binomial(nd, kd) % p) % p;
    n /= p;
    k /= p;
  }
  return r;
}

WeylElement::WeylElement(FieldPtr field, int n) : field_(std::move(field)), n_(n) {
  if (!field_) throw std::invalid_argument("WeylElement requires a field");
  if (n_ < 0) throw std::invalid_argument("negative number of variables");
}

WeylElement WeylElement::constant(FieldPtr field, int n, Raw c) {
  WeylElement e(std::move(field), n);
  e.add_term(Exponents(static_cast<std::size_t>(2 * n), 0), c);
  return e;
}

WeylElement WeylElement::monomial(FieldPtr field, int n, const std::vector<int>& I, const std::vector<int>& J, Raw c) {
  if (I.size() != static_cast<std::size_t>(n) || J.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("monomial exponent length mismatch");
  const int cap = exponent_cap(field->characteristic());
  Exponents e(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const int xi = I[static_cast<std::size_t>(i)], di = J[static_cast<std::size_t>(i)];
    if (xi < 0 || di < 0) throw std::invalid_argument("negative exponent");
    if (xi >= cap || di >= cap) throw std::length_error("exponent exceeds the cap 2p^2");
    e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(xi);
    e[static_cast<std::size_t>(n + i)] = static_cast<std::uint16_t>(di);
  }
  WeylElement w(std::move(field), n);
  w.add_term(e, c);
  return w;
}

WeylElement WeylElement::x(FieldPtr field, int n, int i) {
  std::vector<int> I(static_cast<std::size_t>(n), 0), J(static_cast<std::size_t>(n), 0);
  I.at(static_cast<std::size_t>(i)) = 1;
  return monomial(std::move(field), n, I, J);
}

WeylElement WeylElement::d(FieldPtr field, int n, int i) {
  std::vector<int> I(static_cast<std::size_t>(n), 0), J(static_cast<std::size_t>(n), 0);
  J.at(static_cast<std::size_t>(i)) = 1;
  return monomial(std::move(field), n, I, J);
}

WeylElement WeylElement::euler(FieldPtr field, int n, int k) {
  std::vector<int> I(static_cast<std::size_t>(n), 0);
  I.at(static_cast<std::size_t>(k)) = 1;
  return monomial(std::move(field), n, I, I);
}

Raw WeylElement::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

int WeylElement::max_exponent() const noexcept {
  int m = 0;
  for (const auto& [e, c] : terms_)
    for (auto v : e) m = std::max(m, static_cast<int>(v));
  return m;
}

void WeylElement::add_term(const Exponents& e, Raw c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = field_->add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void WeylElement::require_compatible(const WeylElement& o) const {
  if (n_ != o.n_) throw std::invalid_argument("Weyl elements with different numbers of variables");
  if (!field_->same_as(*o.field_)) throw std::invalid_argument("Weyl elements over different fields");
}

WeylElement WeylElement::operator+(const WeylElement& o) const {
  require_compatible(o);
  WeylElement r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

WeylElement WeylElement::operator-(const WeylElement& o) const { return *this + (-o); }

WeylElement WeylElement::operator-() const {
  WeylElement r(field_, n_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, field_->neg(c));
  return r;
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
  require_compatible(o);
  const std::int64_t p = field_->characteristic();
  const int cap = exponent_cap(p);
  const auto n = static_cast<std::size_t>(n_);
  WeylElement r(field_, n_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      // Per-variable expansions of d_i^{J_i} x_i^{K_i}.
      std::vector<std::vector<std::pair<int, std::int64_t>>> per(n);
      bool vanishes = false;
      for (std::size_t i = 0; i < n && !vanishes; ++i) {
        per[i] = reorder_terms(e1[n + i], e2[i], p);
        vanishes = per[i].empty();
      }
      if (vanishes) continue;
      const Raw base = field_->mul(c1, c2);
      std::vector<std::size_t> choice(n, 0);
      while (true) {
        Exponents e(2 * n);
        Raw c = base;
        for (std::size_t i = 0; i < n; ++i) {
          const auto [m, coef] = per[i][choice[i]];
          const int xe = e1[i] + e2[i] - m, de = e1[n + i] + e2[n + i] - m;
          if (xe >= cap || de >= cap) throw std::length_error("product exceeds the exponent cap 2p^2");
          e[i] = static_cast<std::uint16_t>(xe);
          e[n + i] = static_cast<std::uint16_t>(de);
          c = field_->mul(c, field_->from_int(coef));
        }
        r.add_term(e, c);
        std::size_t i = 0;
        while (i < n && ++choice[i] == per[i].size()) choice[i++] = 0;
        if (i == n) break;
      }
    }
  }
  return r;
}

WeylElement WeylElement::scaled(Raw c) const {
  WeylElement r(field_, n_);
  for (const auto& [e, v] : terms_) r.add_term(e, field_->mul(c, v));
  return r;
}

WeylElement WeylElement::plus_scalar(Raw c) const { return *this + constant(field_, n_, c); }

WeylElement WeylElement::pow(unsigned e) const {
  WeylElement acc = constant(field_, n_, 1);
  for (unsigned i = 0; i < e; ++i) acc = acc * *this;
  return acc;
}

bool WeylElement::operator==(const WeylElement& o) const {
  return n_ == o.n_ && field_->same_as(*o.field_) && terms_ == o.terms_;
}

std::string WeylElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  const auto n = static_cast<std::size_t>(n_);
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << '+';
    first = false;
    std::vector<std::string> factors;
    auto var = [&](const char* name, std::size_t i, int power) {
      std::string s = name;
      if (n > 1) s += std::to_string(i + 1);
      if (power > 1) s += "^" + std::to_string(power);
      factors.push_back(s);
    };
    for (std::size_t i = 0; i < n; ++i)
      if (e[i]) var("x", i, e[i]);
    for (std::size_t i = 0; i < n; ++i)
      if (e[n + i]) var("d", i, e[n + i]);
    std::string cs = field_->format(c);
    if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
    if (factors.empty()) {
      os << cs;
      continue;
    }
    if (c != 1) os << cs << '*';
    for (std::size_t f = 0; f < factors.size(); ++f) os << (f ? "*" : "") << factors[f];
  }
  return os.str();
}

WeylElement commutator(const WeylElement& a, const WeylElement& b) { return a * b - b * a; }

bool is_central(const WeylElement& u) {
  for (int i = 0; i < u.n(); ++i) {
    if (!commutator(u, WeylElement::x(u.field(), u.n(), i)).is_zero()) return false;
    if (!commutator(u, WeylElement::d(u.field(), u.n(), i)).is_zero()) return false;
  }
  return true;
}

bool has_central_support(const WeylElement& u) {
  const std::int64_t p = u.field()->characteristic();
  for (const auto& [e, c] : u.terms())
    for (auto v : e)
      if (v % p != 0) return false;
  return true;
}

PointTriple PointTriple::make(FieldPtr field, std::vector<Raw> b, std::vector<Raw> omega_p, std::vector<Raw> c) {
  if (b.size() != omega_p.size() || b.size() != c.size())
    throw std::invalid_argument("point coordinates have different lengths");
  PointTriple pt;
  pt.field = std::move(field);
  pt.n = static_cast<int>(b.size());
  const auto& f = *pt.field;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (Raw v : {b[i], omega_p[i], c[i]})
      if (v >= f.order()) throw std::invalid_argument("point coordinate outside the field");
    const Raw lhs = f.sub(f.frobenius(c[i]), c[i]);
    if (lhs != f.mul(b[i], omega_p[i]))
      throw std::invalid_argument("c_" + std::to_string(i + 1) + "^p - c_" + std::to_string(i + 1) +
                                  " != b omega_p at coordinate " + std::to_string(i + 1));
    pt.a.push_back(f.pth_root(b[i]));
  }
  pt.b = std::move(b);
  pt.omega_p = std::move(omega_p);
  pt.c = std::move(c);
  return pt;
}

PointTriple PointTriple::embedded(const fq::Embedding& e) const {
  if (!e.source()->same_as(*field)) throw std::invalid_argument("embedding source is not the point's field");
  auto push = [&](const std::vector<Raw>& v) {
    std::vector<Raw> out;
    for (Raw r : v) out.push_back(e.map_raw(r));
    return out;
  };
  return make(e.target(), push(b), push(omega_p), push(c));
}

std::string PointTriple::to_string() const {
  auto vec = [&](const std::vector<Raw>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + field->format(v[i]);
    return s + ")";
  };
  return "F_" + std::to_string(field->order()) + " b=" + vec(b) + " omega_p=" + vec(omega_p) + " c=" + vec(c);
}

std::size_t PointRep::index(const std::vector<int>& I) const {
  std::size_t idx = 0;
  const auto p = static_cast<std::size_t>(point.p());
  for (int v : I) idx = idx * p + static_cast<std::size_t>(v);
  return idx;
}

std::vector<int> PointRep::label(std::size_t idx) const {
  const auto p = static_cast<std::size_t>(point.p());
  std::vector<int> I(static_cast<std::size_t>(point.n));
  for (std::size_t j = I.size(); j-- > 0;) {
    I[j] = static_cast<int>(idx % p);
    idx /= p;
  }
  return I;
}

PointRep delta_rep(const PointTriple& pt) {
  const auto& f = *pt.field;
  const std::int64_t p = pt.p();
  PointRep rep;
  rep.point = pt;
  rep.dim = power(p, pt.n);
  const std::size_t N = rep.dim;
  for (int k = 0; k < pt.n; ++k) {
    const std::size_t stride = power(p, pt.n - 1 - k);
    FieldMatrix X(pt.field, N, N), D(pt.field, N, N);
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t m = 0; m < N; ++m) {
      const auto Ik = static_cast<std::int64_t>((m / stride) % static_cast<std::size_t>(p));
      X(m, m) = pt.a[ku];
      if (Ik > 0) X(m - stride, m) = f.from_int(-Ik);
      if (Ik < p - 1)
        D(m + stride, m) = 1;
      else
        D(m - static_cast<std::size_t>(p - 1) * stride, m) = pt.omega_p[ku];
    }
    rep.x.push_back(std::move(X));
    rep.d.push_back(std::move(D));
  }

  // Weyl relations and central characters.
  const auto one = FieldMatrix::identity(pt.field, N);
  auto power_of = [](const FieldMatrix& m, std::int64_t e) {
    FieldMatrix r = FieldMatrix::identity(m.field(), m.rows());
    for (std::int64_t i = 0; i < e; ++i) r = r * m;
    return r;
  };
  for (int i = 0; i < pt.n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (int j = 0; j < pt.n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const FieldMatrix dx = rep.d[iu] * rep.x[ju] - rep.x[ju] * rep.d[iu];
      const bool ok = i == j ? dx == one : dx.is_zero();
      if (!ok || !(rep.x[iu] * rep.x[ju] - rep.x[ju] * rep.x[iu]).is_zero() ||
          !(rep.d[iu] * rep.d[ju] - rep.d[ju] * rep.d[iu]).is_zero())
        throw std::logic_error("delta_rep: Weyl relations fail at " + pt.to_string());
    }
    if (!(power_of(rep.x[iu], p) == one.scaled(pt.b[iu])) || !(power_of(rep.d[iu], p) == one.scaled(pt.omega_p[iu])))
      throw std::logic_error("delta_rep: central character mismatch at " + pt.to_string());
  }
  return rep;
}

namespace {

// v <- x_k v on delta^xi: x_k d^I = a_k d^I - I_k d^(I - e_k).
void apply_x(const PointRep& rep, int k, std::vector<Raw>& v) {
  const auto& f = *rep.point.field;
  const std::int64_t p = rep.point.p();
  const std::size_t stride = power(p, rep.point.n - 1 - k);
  const Raw a = rep.point.a[static_cast<std::size_t>(k)];
  std::vector<Raw> out(v.size(), 0);
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (v[m] == 0) continue;
    out[m] = f.add(out[m], f.mul(a, v[m]));
    const auto Ik = static_cast<std::int64_t>((m / stride) % static_cast<std::size_t>(p));
    if (Ik > 0) out[m - stride] = f.sub(out[m - stride], f.mul(f.from_int(Ik), v[m]));
  }
  v = std::move(out);
}

// d_k e_m = scalar * e_target
std::pair<std::size_t, Raw> apply_d_basis(const PointRep& rep, int k, std::size_t m) {
  const std::int64_t p = rep.point.p();
  const std::size_t stride = power(p, rep.point.n - 1 - k);
  const auto Ik = static_cast<std::int64_t>((m / stride) % static_cast<std::size_t>(p));
  if (Ik < p - 1) return {m + stride, 1};
  return {m - static_cast<std::size_t>(p - 1) * stride, rep.point.omega_p[static_cast<std::size_t>(k)]};
}

}  // namespace

FieldMatrix represent(const WeylElement& u, const PointRep& rep) {
  if (u.n() != rep.point.n) throw std::invalid_argument("represent: number of variables mismatch");
  if (!u.field()->same_as(*rep.point.field)) throw std::invalid_argument("represent: field mismatch; embed first");
  const auto& f = *rep.point.field;
  const std::size_t N = rep.dim;
  const auto n = static_cast<std::size_t>(u.n());
  FieldMatrix out(rep.point.field, N, N);
  for (const auto& [e, c] : u.terms()) {
    for (std::size_t m = 0; m < N; ++m) {
      std::size_t idx = m;
      Raw s = c;
      for (std::size_t k = 0; k < n; ++k)
        for (int t = 0; t < e[n + k]; ++t) {
          auto [nidx, scalar] = apply_d_basis(rep, static_cast<int>(k), idx);
          idx = nidx;
          s = f.mul(s, scalar);
        }
      if (s == 0) continue;
      std::vector<Raw> v(N, 0);
      v[idx] = s;
      for (std::size_t k = 0; k < n; ++k)
        for (int t = 0; t < e[k]; ++t) apply_x(rep, static_cast<int>(k), v);
      for (std::size_t r = 0; r < N; ++r)
        if (v[r] != 0) out(r, m) = f.add(out(r, m), v[r]);
    }
  }
  return out;
}

MonomialTable::MonomialTable(const PointRep& rep) : rep_(&rep) {
  const std::size_t N = rep.dim;
  const auto& F = rep.point.field;
  for (std::size_t i = 0; i < N; ++i) {
    const auto I = rep.label(i);
    xpow_.push_back(represent(WeylElement::monomial(F, rep.point.n, I, std::vector<int>(I.size(), 0)), rep));
  }
  dpow_.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const auto J = rep.label(j);
    for (std::size_t m = 0; m < N; ++m) {
      std::size_t idx = m;
      Raw s = 1;
      for (std::size_t k = 0; k < J.size(); ++k)
        for (int t = 0; t < J[k]; ++t) {
          auto [nidx, scalar] = apply_d_basis(rep, static_cast<int>(k), idx);
          idx = nidx;
          s = F->mul(s, scalar);
        }
      dpow_[j].emplace_back(idx, s);
    }
  }
}

FieldMatrix MonomialTable::monomial(std::size_t i_index, std::size_t j_index) const {
  const std::size_t N = rep_->dim;
  const auto& f = *rep_->point.field;
  const FieldMatrix& X = xpow_[i_index];
  FieldMatrix out(rep_->point.field, N, N);
  for (std::size_t m = 0; m < N; ++m) {
    const auto [t, s] = dpow_[j_index][m];
    if (s == 0) continue;
    for (std::size_t r = 0; r < N; ++r) out(r, m) = f.mul(s, X(r, t));
  }
  return out;
}

FieldMatrix euler_block(const PointTriple& pt, int k, Raw tau) {
  const auto& f = *pt.field;
  const std::int64_t p = pt.p();
  const auto P = static_cast<std::size_t>(p);
  const auto ku = static_cast<std::size_t>(k);
  FieldMatrix T(pt.field, P, P);
  for (std::size_t i = 0; i < P; ++i) {
    T(i, i) = f.sub(f.from_int(static_cast<std::int64_t>(i) + 1), tau);
    if (i + 1 < P) T(i + 1, i) = pt.a[ku];
  }
  T(0, P - 1) = f.add(T(0, P - 1), f.mul(pt.a[ku], pt.omega_p[ku]));
  return T;
}

EulerBlockReport euler_block_check(const PointTriple& pt, int k) {
  if (k < 0 || k >= pt.n) throw std::out_of_range("euler_block_check: index out of range");
  const auto& F = pt.field;
  const std::int64_t p = pt.p();
  const auto rep = delta_rep(pt);
  const Raw tau = pt.c[static_cast<std::size_t>(k)];
  const FieldMatrix M = represent(WeylElement::euler(F, pt.n, k).plus_scalar(F->neg(tau)), rep);

  EulerBlockReport r{k, tau, euler_block(pt, k, tau), fq::Poly(F), fq::Poly(F), fq::Poly(F), fq::Poly(F), fq::Poly(F)};
  const fq::Poly lam = fq::Poly::x(F);
  const fq::Poly as = lam.pow(static_cast<std::uint64_t>(p)) - lam;
  const std::uint64_t mult = power(p, pt.n - 1);
  r.expected_char_poly = -as.pow(mult);
  r.expected_min_poly = as;
  r.char_poly = linalg::char_poly(M);
  r.min_poly = linalg::min_poly(M);
  r.block_char_poly = linalg::char_poly(r.block);
  r.char_poly_ok = r.char_poly == r.expected_char_poly;
  r.min_poly_ok = r.min_poly == r.expected_min_poly;
  r.block_ok = r.char_poly == r.block_char_poly.pow(mult);
  return r;
}

std::vector<Raw> DEta::coordinates(const FieldMatrix& Y) const {
  const auto& f = *rep.point.field;
  const std::size_t N = rep.dim, F = free_columns.size();
  const auto& R = row_space.reduced;
  std::vector<Raw> out(N * F, 0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t jj = 0; jj < F; ++jj) {
      const std::size_t j = free_columns[jj];
      Raw v = Y(i, j);
      for (std::size_t r = 0; r < row_space.pivots.size(); ++r) {
        const Raw y = Y(i, row_space.pivots[r]);
        if (y != 0 && R(r, j) != 0) v = f.sub(v, f.mul(y, R(r, j)));
      }
      out[i * F + jj] = v;
    }
  }
  return out;
}

FieldMatrix DEta::action(const FieldMatrix& X) const {
  const std::size_t N = rep.dim, F = free_columns.size();
  FieldMatrix A(rep.point.field, N * F, N * F);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t i = 0; i < N; ++i) {
      const Raw v = X(a, i);
      if (v == 0) continue;
      for (std::size_t jj = 0; jj < F; ++jj) A(a * F + jj, i * F + jj) = v;
    }
  return A;
}

DEta d_eta_compute(const PointTriple& pt) {
  DEta de;
  de.rep = delta_rep(pt);
  const auto& F = pt.field;
  const std::size_t N = de.rep.dim;
  for (int k = 0; k < pt.n; ++k)
    de.euler_shifted.push_back(
        represent(WeylElement::euler(F, pt.n, k).plus_scalar(F->neg(pt.c[static_cast<std::size_t>(k)])), de.rep));
  auto ech = linalg::rref(linalg::vstack(de.euler_shifted));
  const std::size_t r = ech.pivots.size();
  FieldMatrix R(F, r, N);
  for (std::size_t i = 0; i < r; ++i) std::copy(ech.reduced.row(i).begin(), ech.reduced.row(i).end(), R.row(i).begin());
  de.row_space = {std::move(R), std::move(ech.pivots)};
  std::vector<bool> pivot(N, false);
  for (auto c : de.row_space.pivots) pivot[c] = true;
  for (std::size_t j = 0; j < N; ++j)
    if (!pivot[j]) de.free_columns.push_back(j);
  de.joint_kernel_dim = de.free_columns.size();
  de.dim = N * de.free_columns.size();
  return de;
}

DEta d_eta_build(const PointTriple& pt) {
  DEta de = d_eta_compute(pt);
  if (de.dim != de.rep.dim || de.joint_kernel_dim != 1) {
    nlohmann::json w;
    w["point"] = io::to_json(pt);
    w["dim"] = de.dim;
    w["expected_dim"] = de.rep.dim;
    w["joint_kernel_dim"] = de.joint_kernel_dim;
    throw CounterexampleError("D_eta has dimension " + std::to_string(de.dim) + ", expected " +
                                  std::to_string(de.rep.dim) + " at " + pt.to_string(),
                              std::move(w));
  }
  return de;
}

AzumayaCertificate azumaya_point_check(const PointTriple& pt) {
  AzumayaCertificate cert;
  cert.point = pt;
  const DEta de = d_eta_compute(pt);
  const std::size_t N = de.rep.dim, M = de.dim;
  cert.delta_dim = N;
  cert.d_eta_dim = M;
  cert.joint_kernel_dim = de.joint_kernel_dim;
  cert.expected_rank = N * N;
  const MonomialTable table(de.rep);

  FieldMatrix bmr(pt.field, N * N, N * N);
  FieldMatrix action(pt.field, N * N, M * M);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t row = i * N + j;
      const FieldMatrix U = table.monomial(i, j);
      std::copy(U.data().begin(), U.data().end(), bmr.row(row).begin());
      const FieldMatrix A = de.action(U);
      std::copy(A.data().begin(), A.data().end(), action.row(row).begin());
    }
  cert.bmr_rank = linalg::rank(bmr);
  // With a one-dimensional joint kernel the action matrix coincides with bmr.
  cert.action_rank = M == N && action == bmr ? cert.bmr_rank : linalg::rank(action);
  cert.pass = cert.action_rank == cert.expected_rank && M == N && de.joint_kernel_dim == 1;
  return cert;
}

ReducedWeylAlgebra::ReducedWeylAlgebra(FieldPtr field, std::int64_t p, int n, std::vector<Raw> b,
                                       std::vector<Raw> omega_p)
    : field_(std::move(field)), p_(p), n_(n), half_(power(p, n)), labels_(half_ * half_), b_(std::move(b)),
      omega_(std::move(omega_p)) {
  if (field_->characteristic() != p_) throw std::invalid_argument("ReducedWeylAlgebra: characteristic mismatch");
  if (b_.size() != static_cast<std::size_t>(n) || omega_.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("ReducedWeylAlgebra: coordinate length mismatch");
  const auto P = static_cast<std::size_t>(p_);
  const auto& f = *field_;
  table_.resize(static_cast<std::size_t>(n));
  for (std::size_t var = 0; var < static_cast<std::size_t>(n); ++var) {
    auto& t = table_[var];
    t.resize(P * P * P * P);
    for (std::size_t i1 = 0; i1 < P; ++i1)
      for (std::size_t j1 = 0; j1 < P; ++j1)
        for (std::size_t i2 = 0; i2 < P; ++i2)
          for (std::size_t j2 = 0; j2 < P; ++j2) {
            auto& out = t[(i1 * P + j1) * P * P + i2 * P + j2];
            for (auto [m, coef] : reorder_terms(static_cast<int>(j1), static_cast<int>(i2), p_)) {
              const std::size_t xe = i1 + i2 - static_cast<std::size_t>(m);
              const std::size_t de = j1 + j2 - static_cast<std::size_t>(m);
              Raw c = f.from_int(coef);
              if (xe >= P) c = f.mul(c, b_[var]);
              if (de >= P) c = f.mul(c, omega_[var]);
              if (c != 0) out.emplace_back((xe % P) * P + de % P, c);
            }
          }
  }
}

std::vector<int> ReducedWeylAlgebra::exps_i(std::size_t label) const {
  std::vector<int> I(static_cast<std::size_t>(n_));
  std::size_t idx = label / half_;
  for (std::size_t k = I.size(); k-- > 0;) {
    I[k] = static_cast<int>(idx % static_cast<std::size_t>(p_));
    idx /= static_cast<std::size_t>(p_);
  }
  return I;
}

std::vector<int> ReducedWeylAlgebra::exps_j(std::size_t label) const {
  std::vector<int> J(static_cast<std::size_t>(n_));
  std::size_t idx = label % half_;
  for (std::size_t k = J.size(); k-- > 0;) {
    J[k] = static_cast<int>(idx % static_cast<std::size_t>(p_));
    idx /= static_cast<std::size_t>(p_);
  }
  return J;
}

std::vector<std::pair<std::size_t, Raw>> ReducedWeylAlgebra::multiply(std::size_t u, std::size_t v) const {
  const auto P = static_cast<std::size_t>(p_);
  const auto n = static_cast<std::size_t>(n_);
  const auto Iu = exps_i(u), Ju = exps_j(u), Iv = exps_i(v), Jv = exps_j(v);
  std::vector<const std::vector<std::pair<std::size_t, Raw>>*> per(n);
  for (std::size_t k = 0; k < n; ++k) {
    per[k] = &table_[k][(static_cast<std::size_t>(Iu[k]) * P + static_cast<std::size_t>(Ju[k])) * P * P +
                        static_cast<std::size_t>(Iv[k]) * P + static_cast<std::size_t>(Jv[k])];
    if (per[k]->empty()) return {};
  }
  std::vector<std::pair<std::size_t, Raw>> out;
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    std::size_t I = 0, J = 0;
    Raw c = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& [lab, coef] = (*per[k])[choice[k]];
      I = I * P + lab / P;
      J = J * P + lab % P;
      c = field_->mul(c, coef);
    }
    out.emplace_back(I * half_ + J, c);
    std::size_t k = n;
    while (k > 0 && ++choice[k - 1] == per[k - 1]->size()) choice[--k] = 0;
    if (k == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::size_t, Raw>> ReducedWeylAlgebra::multiply(
    const std::vector<std::pair<std::size_t, Raw>>& u, const std::vector<std::pair<std::size_t, Raw>>& v) const {
  std::map<std::size_t, Raw> acc;
  for (const auto& [lu, cu] : u)
    for (const auto& [lv, cv] : v) {
      const Raw c = field_->mul(cu, cv);
      if (c == 0) continue;
      for (const auto& [l, cl] : multiply(lu, lv)) {
        Raw& slot = acc[l];
        slot = field_->add(slot, field_->mul(c, cl));
      }
    }
  std::vector<std::pair<std::size_t, Raw>> out;
  for (const auto& [l, c] : acc)
    if (c != 0) out.emplace_back(l, c);
  return out;
}

std::vector<std::pair<std::size_t, Raw>> ReducedWeylAlgebra::reduce(const WeylElement& u) const {
  if (u.n() != n_ || !u.field()->same_as(*field_)) throw std::invalid_argument("reduce: incompatible element");
  const auto P = static_cast<std::size_t>(p_);
  const auto n = static_cast<std::size_t>(n_);
  std::map<std::size_t, Raw> acc;
  for (const auto& [e, c] : u.terms()) {
    Raw coef = c;
    std::size_t I = 0, J = 0;
    for (std::size_t k = 0; k < n; ++k) {
      coef = field_->mul(coef, field_->pow(b_[k], e[k] / P));
      coef = field_->mul(coef, field_->pow(omega_[k], e[n + k] / P));
      I = I * P + e[k] % P;
      J = J * P + e[n + k] % P;
    }
    if (coef == 0) continue;
    Raw& slot = acc[I * half_ + J];
    slot = field_->add(slot, coef);
  }
  std::vector<std::pair<std::size_t, Raw>> out;
  for (const auto& [l, c] : acc)
    if (c != 0) out.emplace_back(l, c);
  return out;
}

}  // namespace frobsplit::weyl
