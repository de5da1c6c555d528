#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "frobsplit/fq.hpp"
#include "frobsplit/poly.hpp"
#include "frobsplit/rng.hpp"

using namespace frobsplit;
using namespace frobsplit::fq;

namespace {

using IntPoly = std::vector<std::int64_t>;

// Naive polynomial helpers over F_p used as an independent oracle.
IntPoly naive_mod(IntPoly a, const IntPoly& m, std::int64_t p) {
  auto norm = [p](std::int64_t v) { return ((v % p) + p) % p; };
  for (auto& v : a) v = norm(v);
  while (!a.empty() && a.back() == 0) a.pop_back();
  const std::int64_t lead = m.back();
  std::int64_t lead_inv = 1;
  while (lead * lead_inv % p != 1) ++lead_inv;
  while (a.size() >= m.size()) {
    const std::int64_t f = a.back() * lead_inv % p;
    const std::size_t s = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[s + i] = norm(a[s + i] - f * m[i]);
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

// Irreducible iff no monic divisor of degree 1..k/2 (trial division).
bool brute_irreducible(const IntPoly& m, std::int64_t p) {
  const int k = static_cast<int>(m.size()) - 1;
  for (int d = 1; d <= k / 2; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      IntPoly div(static_cast<std::size_t>(d) + 1, 0);
      div[static_cast<std::size_t>(d)] = 1;
      std::int64_t v = idx;
      for (int i = 0; i < d; ++i, v /= p) div[static_cast<std::size_t>(i)] = v % p;
      if (naive_mod(m, div, p).empty()) return false;
    }
  }
  return true;
}

IntPoly brute_least_irreducible(std::int64_t p, int k) {
  std::int64_t count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    IntPoly m(static_cast<std::size_t>(k) + 1, 0);
    m[static_cast<std::size_t>(k)] = 1;
    std::int64_t v = idx;
    for (int i = 0; i < k; ++i, v /= p) m[static_cast<std::size_t>(i)] = v % p;
    if (brute_irreducible(m, p)) return m;
  }
  return {};
}

IntPoly naive_mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& m, std::int64_t p) {
  IntPoly r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  auto out = naive_mod(r, m, p);
  out.resize(m.size() - 1, 0);
  return out;
}

}  // namespace

TEST_CASE("make_field examples") {
  auto f3 = make_field(3, 1);
  CHECK(f3->order() == 3);
  CHECK(f3->modulus() == IntPoly{0, 1});
  auto f4 = make_field(2, 2);
  CHECK(f4->modulus() == IntPoly{1, 1, 1});
  CHECK_THROWS_WITH_AS(make_field(4, 1), doctest::Contains("not prime"), std::invalid_argument);
  CHECK_THROWS_AS(make_field(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_field(2, 31), std::invalid_argument);
  CHECK(make_field(2, 2) == f4);
}

TEST_CASE("make_field picks the least irreducible modulus") {
  const std::vector<std::pair<std::int64_t, int>> cases = {{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 2},
                                                           {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}, {11, 2}};
  for (auto [p, k] : cases) {
    CAPTURE(p);
    CAPTURE(k);
    CHECK(make_field(p, k)->modulus() == brute_least_irreducible(p, k));
  }
}

TEST_CASE("table arithmetic agrees with naive polynomial arithmetic") {
  for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 2}, {3, 3}, {2, 8}, {7, 2}}) {
    auto F = make_field(p, k);
    SplitMix64 rng(static_cast<std::uint64_t>(p * 100 + k));
    for (int trial = 0; trial < 2000; ++trial) {
      Raw a = static_cast<Raw>(rng.below(F->order())), b = static_cast<Raw>(rng.below(F->order()));
      auto expect = naive_mulmod(F->coeffs(a), F->coeffs(b), F->modulus(), p);
      REQUIRE(F->coeffs(F->mul(a, b)) == expect);
      auto ca = F->coeffs(a), cb = F->coeffs(b);
      IntPoly sum(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) sum[static_cast<std::size_t>(i)] = (ca[static_cast<std::size_t>(i)] + cb[static_cast<std::size_t>(i)]) % p;
      REQUIRE(F->coeffs(F->add(a, b)) == sum);
      REQUIRE(F->add(F->sub(a, b), b) == a);
    }
  }
}

TEST_CASE("large fields without tables agree with the field axioms") {
  auto F = make_field(5, 10);  // beyond the log-table limit
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Raw a = static_cast<Raw>(rng.below(F->order())), b = static_cast<Raw>(rng.below(F->order())),
        c = static_cast<Raw>(rng.below(F->order()));
    CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
    CHECK(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
    if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
    CHECK(F->coeffs(F->mul(a, b)) == naive_mulmod(F->coeffs(a), F->coeffs(b), F->modulus(), 5));
  }
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {2, 2}, {3, 1}, {2, 3}, {3, 2}, {5, 1}}) {
    auto F = make_field(p, k);
    const auto q = static_cast<Raw>(F->order());
    for (Raw a = 0; a < q; ++a) {
      CHECK(F->pow(a, F->order()) == a);
      if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
      for (Raw b = 0; b < q; ++b) {
        CHECK(F->mul(a, b) == F->mul(b, a));
        CHECK(F->add(a, b) == F->add(b, a));
        for (Raw c = 0; c < q; ++c) CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      }
    }
  }
}

TEST_CASE("inverse of zero throws") {
  auto F = make_field(3, 2);
  CHECK_THROWS_AS(F->inv(0), std::domain_error);
  CHECK_THROWS_AS(make_field(5, 1)->inv(0), std::domain_error);
}

TEST_CASE("pth_root examples") {
  auto f3 = make_field(3, 1);
  CHECK(pth_root(f3->element(2)).raw() == 2);
  auto f4 = make_field(2, 2);
  const Raw t = f4->generator();
  const Raw t_plus_1 = f4->add(t, 1);
  CHECK(f4->pth_root(t_plus_1) == t);
  CHECK(f4->pth_root(0) == 0);
}

TEST_CASE("pth_root is inverse to Frobenius on all fields up to 625 elements") {
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
    for (int k = 1;; ++k) {
      std::uint64_t q = 1;
      for (int i = 0; i < k; ++i) q *= static_cast<std::uint64_t>(p);
      if (q > 625) break;
      auto F = make_field(p, k);
      for (Raw x = 0; x < q; ++x) {
        REQUIRE(F->pow(F->pth_root(x), static_cast<std::uint64_t>(p)) == x);
        REQUIRE(F->pth_root(F->frobenius(x)) == x);
      }
    }
  }
}

TEST_CASE("make_field is deterministic across repeated calls") {
  auto a = make_field(3, 5)->modulus();
  auto b = make_field(3, 5)->modulus();
  CHECK(a == b);
}

TEST_CASE("cross-field arithmetic requires an embedding") {
  auto f2 = make_field(2, 1);
  auto f4 = make_field(2, 2);
  CHECK_THROWS_AS(f2->element(1) + f4->element(1), std::invalid_argument);
  Embedding e(f2, f4);
  CHECK_NOTHROW(e(f2->element(1)) + f4->element(1));
}

TEST_CASE("embeddings are ring homomorphisms") {
  for (auto [p, k, m] : std::vector<std::tuple<std::int64_t, int, int>>{{2, 2, 2}, {2, 2, 3}, {3, 2, 3}, {5, 1, 5}, {2, 3, 2}}) {
    auto src = make_field(p, k);
    auto dst = make_field(p, k * m);
    Embedding e(src, dst);
    // generator maps to a root of the source modulus, and it is the least one
    Raw img = e.image_of_generator();
    if (k > 1) {
      auto eval = [&](Raw x) {
        Raw v = 0;
        for (auto it = src->modulus().rbegin(); it != src->modulus().rend(); ++it)
          v = dst->add(dst->mul(v, x), dst->from_int(*it));
        return v;
      };
      CHECK(eval(img) == 0);
      for (Raw x = 0; x < img; ++x) CHECK(eval(x) != 0);
    }
    const auto q = static_cast<Raw>(src->order());
    std::set<Raw> images;
    for (Raw a = 0; a < q; ++a) {
      images.insert(e.map_raw(a));
      for (Raw b = 0; b < q; ++b) {
        CHECK(e.map_raw(src->add(a, b)) == dst->add(e.map_raw(a), e.map_raw(b)));
        CHECK(e.map_raw(src->mul(a, b)) == dst->mul(e.map_raw(a), e.map_raw(b)));
      }
    }
    CHECK(images.size() == q);
  }
  CHECK_THROWS_AS(Embedding(make_field(2, 2), make_field(2, 3)), std::invalid_argument);
}

TEST_CASE("Artin-Schreier examples") {
  auto f3 = make_field(3, 1);
  auto r = artin_schreier_roots(f3->element(0));
  CHECK(r.field == f3);
  REQUIRE(r.roots.size() == 3);
  CHECK(r.roots[0].raw() == 0);
  CHECK(r.roots[1].raw() == 1);
  CHECK(r.roots[2].raw() == 2);

  auto f2 = make_field(2, 1);
  auto f4 = make_field(2, 2);
  auto r2 = artin_schreier_roots(f2->element(1));
  CHECK(r2.field == f4);
  REQUIRE(r2.roots.size() == 2);
  CHECK(r2.roots[0].raw() == f4->generator());
  CHECK(r2.roots[1].raw() == f4->add(f4->generator(), 1));

  auto r3 = artin_schreier_roots(f4->element(1));
  CHECK(r3.field == f4);
  REQUIRE(r3.roots.size() == 2);
  CHECK(r3.roots[0].raw() == f4->generator());
  CHECK(r3.roots[1].raw() == f4->add(f4->generator(), 1));
}

TEST_CASE("Artin-Schreier roots: count, separability, torsor, extension rule") {
  for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
    auto F = make_field(p, k);
    const auto q = static_cast<Raw>(F->order());
    for (Raw c = 0; c < q; ++c) {
      // Oracle: solvable in F iff some x in F has x^p - x = c.
      bool solvable = false;
      for (Raw x = 0; x < q && !solvable; ++x) solvable = F->sub(F->frobenius(x), x) == c;
      auto r = artin_schreier_roots(F->element(c));
      CHECK((r.field == F) == solvable);
      CHECK(solvable == (F->trace(c) == 0));
      if (!solvable) CHECK(r.field->degree() == k * p);
      REQUIRE(r.roots.size() == static_cast<std::size_t>(p));
      const auto cc = r.embedding(F->element(c));
      std::set<Raw> distinct, diffs;
      for (const auto& x : r.roots) {
        CHECK(x.pow(static_cast<std::uint64_t>(p)) - x == cc);
        distinct.insert(x.raw());
        diffs.insert((x - r.roots.front()).raw());
      }
      CHECK(distinct.size() == static_cast<std::size_t>(p));
      std::set<Raw> fp;
      for (std::int64_t j = 0; j < p; ++j) fp.insert(r.field->from_int(j));
      CHECK(diffs == fp);
      CHECK(std::is_sorted(r.roots.begin(), r.roots.end(),
                           [](const FieldElement& a, const FieldElement& b) { return a.raw() < b.raw(); }));
    }
  }
}

TEST_CASE("trace lands in the prime field and is F_p-linear") {
  auto F = make_field(3, 3);
  for (Raw a = 0; a < F->order(); ++a) {
    CHECK(F->trace(a) < 3);
    CHECK(F->trace(F->add(a, 1)) == F->add(F->trace(a), F->trace(1)));
  }
  CHECK(trace(F->element(1)).raw() == 0);  // Tr(1) = k = 3 = 0
}

TEST_CASE("element formatting") {
  auto f4 = make_field(2, 2);
  CHECK(f4->format(f4->add(f4->generator(), 1)) == "t+1");
  auto f9 = make_field(3, 2);
  CHECK(f9->format(f9->from_coeffs(std::vector<std::int64_t>{1, 2})) == "2t+1");
  CHECK(make_field(7, 1)->format(5) == "5");
}

TEST_CASE("polynomials: division, gcd, lcm") {
  auto F = make_field(5, 1);
  Poly x = Poly::x(F);
  Poly one = Poly::constant(F, 1);
  Poly a = (x - one) * (x - Poly::constant(F, 2));
  Poly b = (x - one) * (x - Poly::constant(F, 3));
  CHECK(gcd(a, b) == x - one);
  CHECK(lcm(a, b).degree() == 3);
  auto [qq, rr] = (a * b).divmod(b);
  CHECK(qq == a);
  CHECK(rr.is_zero());
  CHECK((x.pow(5) - x).eval(3) == 0);
  CHECK(a.to_string("λ") == "λ^2+2λ+2");
  CHECK_THROWS_AS(a.divmod(Poly(F)), std::domain_error);
}
