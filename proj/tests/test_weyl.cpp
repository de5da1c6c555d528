#include <map>
#include <string>

#include "doctest.h"
#include "frobsplit/errors.hpp"
#include "frobsplit/json_io.hpp"
#include "frobsplit/weyl.hpp"
#include "test_support.hpp"

using namespace frobsplit;
using namespace frobsplit::weyl;
using fq::make_field;
using fq::Raw;
using linalg::FieldMatrix;

namespace {

WeylElement X(const fq::FieldPtr& F, int n, int i) { return WeylElement::x(F, n, i); }
WeylElement D(const fq::FieldPtr& F, int n, int i) { return WeylElement::d(F, n, i); }
WeylElement C(const fq::FieldPtr& F, int n, Raw c) { return WeylElement::constant(F, n, c); }

// Oracle multiplication: expand both operands into words of generators and
// bring the concatenation to normal order with the single rule d_i x_i = x_i d_i + 1.
// Letters: 2i = x_i, 2i+1 = d_i.
using Word = std::vector<int>;

std::map<Word, Raw> word_expand(const WeylElement& u) {
  std::map<Word, Raw> out;
  const auto n = static_cast<std::size_t>(u.n());
  for (const auto& [e, c] : u.terms()) {
    Word w;
    for (std::size_t i = 0; i < n; ++i)
      for (int t = 0; t < e[i]; ++t) w.push_back(static_cast<int>(2 * i));
    for (std::size_t i = 0; i < n; ++i)
      for (int t = 0; t < e[n + i]; ++t) w.push_back(static_cast<int>(2 * i + 1));
    out[w] = c;
  }
  return out;
}

WeylElement rewrite_product(const WeylElement& u, const WeylElement& v) {
  const auto& F = u.field();
  const int n = u.n();
  std::map<Word, Raw> pending;
  for (const auto& [wu, cu] : word_expand(u))
    for (const auto& [wv, cv] : word_expand(v)) {
      Word w = wu;
      w.insert(w.end(), wv.begin(), wv.end());
      Raw& slot = pending[w];
      slot = F->add(slot, F->mul(cu, cv));
    }
  WeylElement result(F, n);
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    Word w = node.key();
    const Raw c = node.mapped();
    if (c == 0) continue;
    // find the first adjacent pair (d_i, x_j) or an out-of-order same-kind pair
    bool rewritten = false;
    for (std::size_t s = 0; s + 1 < w.size() && !rewritten; ++s) {
      const int a = w[s], b = w[s + 1];
      const bool a_d = a % 2 == 1, b_d = b % 2 == 1;
      if (a_d && !b_d) {
        Word swapped = w;
        std::swap(swapped[s], swapped[s + 1]);
        Raw& s1 = pending[swapped];
        s1 = F->add(s1, c);
        if (a / 2 == b / 2) {
          Word shorter = w;
          shorter.erase(shorter.begin() + static_cast<long>(s), shorter.begin() + static_cast<long>(s) + 2);
          Raw& s2 = pending[shorter];
          s2 = F->add(s2, c);
        }
        rewritten = true;
      } else if (a_d == b_d && a > b) {
        Word swapped = w;
        std::swap(swapped[s], swapped[s + 1]);
        Raw& s1 = pending[swapped];
        s1 = F->add(s1, c);
        rewritten = true;
      }
    }
    if (rewritten) continue;
    std::vector<int> I(static_cast<std::size_t>(n), 0), J(static_cast<std::size_t>(n), 0);
    for (int l : w) (l % 2 ? J : I)[static_cast<std::size_t>(l / 2)]++;
    result = result + WeylElement::monomial(F, n, I, J, c);
  }
  return result;
}

WeylElement random_element(const fq::FieldPtr& F, int n, SplitMix64& rng, int terms, int degree) {
  WeylElement u(F, n);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> I(static_cast<std::size_t>(n)), J(static_cast<std::size_t>(n));
    for (auto& v : I) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(degree) + 1));
    for (auto& v : J) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(degree) + 1));
    u = u + WeylElement::monomial(F, n, I, J, static_cast<Raw>(rng.below(F->order())));
  }
  return u;
}

// Full matrix of phi: (Y_1..Y_n) -> sum_k Y_k M_k, columns indexed by (k, a, b)
// for the unit matrix E_ab in slot k; rows by the flattened N x N entries.
FieldMatrix phi_matrix(const std::vector<FieldMatrix>& M) {
  const std::size_t N = M.front().rows();
  FieldMatrix phi(M.front().field(), N * N, M.size() * N * N);
  for (std::size_t k = 0; k < M.size(); ++k)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        const std::size_t col = k * N * N + a * N + b;
        for (std::size_t j = 0; j < N; ++j) phi(a * N + j, col) = M[k](b, j);  // E_ab M = row a := row b of M
      }
  return phi;
}

}  // namespace

TEST_CASE("mul examples") {
  auto f3 = make_field(3, 1);
  CHECK(D(f3, 1, 0) * X(f3, 1, 0) == X(f3, 1, 0) * D(f3, 1, 0) + C(f3, 1, 1));
  auto x2d2 = WeylElement::monomial(f3, 1, {2}, {2});
  auto d2 = WeylElement::monomial(f3, 1, {0}, {2});
  auto x2 = WeylElement::monomial(f3, 1, {2}, {0});
  CHECK(d2 * x2 == x2d2 + WeylElement::euler(f3, 1, 0) + C(f3, 1, 2));
  CHECK((d2 * x2).to_string() == "x^2*d^2+x*d+2");

  auto f2 = make_field(2, 1);
  auto E = WeylElement::euler(f2, 1, 0);
  CHECK(E * E == WeylElement::monomial(f2, 1, {2}, {2}) + E);
}

TEST_CASE("mul agrees with word rewriting") {
  SplitMix64 rng(17);
  for (std::int64_t p : {2, 3, 5}) {
    for (int n : {1, 2}) {
      auto F = make_field(p, 1);
      for (int trial = 0; trial < 15; ++trial) {
        auto u = random_element(F, n, rng, 2, 3);
        auto v = random_element(F, n, rng, 2, 3);
        CHECK(u * v == rewrite_product(u, v));
      }
    }
  }
}

TEST_CASE("mul is associative") {
  SplitMix64 rng(23);
  for (std::int64_t p : {2, 3, 5}) {
    for (int k : {1, 2}) {
      auto F = make_field(p, k);
      for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(2));
        const int deg = p == 2 ? 2 : 4;
        auto u = random_element(F, n, rng, 5, deg);
        auto v = random_element(F, n, rng, 5, deg);
        auto w = random_element(F, n, rng, 5, deg);
        CHECK((u * v) * w == u * (v * w));
        CHECK(u * (v + w) == u * v + u * w);
      }
    }
  }
}

TEST_CASE("canonical commutation relations") {
  auto F = make_field(5, 1);
  const int n = 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(commutator(D(F, n, i), X(F, n, j)) == (i == j ? C(F, n, 1) : WeylElement(F, n)));
      CHECK(commutator(X(F, n, i), X(F, n, j)).is_zero());
      CHECK(commutator(D(F, n, i), D(F, n, j)).is_zero());
    }
}

TEST_CASE("Euler relation (x d)^p - x d = x^p d^p") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    auto F = make_field(p, 1);
    for (int n : {1, 2}) {
      for (int k = 0; k < n; ++k) {
        auto E = WeylElement::euler(F, n, k);
        std::vector<int> I(static_cast<std::size_t>(n), 0);
        I[static_cast<std::size_t>(k)] = static_cast<int>(p);
        CHECK(E.pow(static_cast<unsigned>(p)) - E == WeylElement::monomial(F, n, I, I));
      }
    }
  }
  // Hand expansion over Z: (x d)^3 = x^3 d^3 + 3 x^2 d^2 + x d.
  auto f3 = make_field(3, 1);
  auto E = WeylElement::euler(f3, 1, 0);
  CHECK(E.pow(3) == WeylElement::monomial(f3, 1, {3}, {3}) + E);
}

TEST_CASE("centrality") {
  auto f2 = make_field(2, 1);
  CHECK(is_central(WeylElement::monomial(f2, 1, {2}, {0})));
  CHECK_FALSE(is_central(X(f2, 1, 0)));
  auto f3 = make_field(3, 1);
  CHECK_FALSE(is_central(WeylElement::euler(f3, 1, 0)));
  CHECK(commutator(WeylElement::euler(f3, 1, 0), X(f3, 1, 0)) == X(f3, 1, 0));
  for (std::int64_t p : {2, 3, 5}) {
    auto F = make_field(p, 1);
    for (int i = 0; i < 2; ++i) {
      std::vector<int> I{0, 0}, Z{0, 0};
      I[static_cast<std::size_t>(i)] = static_cast<int>(p);
      CHECK(is_central(WeylElement::monomial(F, 2, I, Z)));
      CHECK(is_central(WeylElement::monomial(F, 2, Z, I)));
    }
  }
}

TEST_CASE("is_central agrees with the exponent criterion") {
  SplitMix64 rng(41);
  for (std::int64_t p : {2, 3}) {
    auto F = make_field(p, 1);
    for (int trial = 0; trial < 60; ++trial) {
      WeylElement u(F, 2);
      // bias towards multiples of p so both outcomes occur
      for (int t = 0; t < 3; ++t) {
        std::vector<int> I(2), J(2);
        for (auto* v : {&I[0], &I[1], &J[0], &J[1]})
          *v = static_cast<int>(rng.below(3)) * (rng.below(4) == 0 ? 1 : static_cast<int>(p));
        u = u + WeylElement::monomial(F, 2, I, J, static_cast<Raw>(1 + rng.below(static_cast<std::uint64_t>(p - 1))));
      }
      CHECK(is_central(u) == has_central_support(u));
    }
  }
}

TEST_CASE("exponent cap") {
  auto F = make_field(2, 1);
  CHECK_THROWS_AS(WeylElement::monomial(F, 1, {8}, {0}), std::length_error);
  auto big = WeylElement::monomial(F, 1, {7}, {0});
  CHECK_THROWS_AS(big * big, std::length_error);
  CHECK_THROWS_AS(X(F, 1, 0) * X(make_field(3, 1), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(X(F, 1, 0) * X(F, 2, 0), std::invalid_argument);
}

TEST_CASE("binomial_mod follows Lucas") {
  // Pascal's rule mod p as oracle
  std::vector<std::vector<std::int64_t>> pascal(31, std::vector<std::int64_t>(31, 0));
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int n = 0; n <= 30; ++n) {
      pascal[static_cast<std::size_t>(n)][0] = 1;
      for (int k = 1; k <= n; ++k)
        pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
            (pascal[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
             (k <= n - 1 ? pascal[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] : 0)) %
            p;
      for (int k = 0; k <= n; ++k)
        CHECK(binomial_mod(n, k, p) == pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("PointTriple validation and derived a") {
  auto f2 = make_field(2, 1);
  CHECK_THROWS_AS(PointTriple::make(f2, {1}, {1}, {0}), std::invalid_argument);  // 0 is not a root of T^2+T+1
  auto f4 = make_field(2, 2);
  const Raw t = f4->generator();
  auto pt = PointTriple::make(f4, {1}, {1}, {t});
  CHECK(pt.a == std::vector<Raw>{1});
  auto f9 = make_field(3, 2);
  auto pt9 = PointTriple::make(f9, {f9->generator()}, {0}, {2});
  CHECK(f9->frobenius(pt9.a[0]) == f9->generator());
}

TEST_CASE("delta_rep example at p=2, a=1, omega=1") {
  auto f4 = make_field(2, 2);
  auto pt = PointTriple::make(f4, {1}, {1}, {f4->generator()});
  auto rep = delta_rep(pt);
  CHECK(rep.dim == 2);
  CHECK(rep.x[0] == FieldMatrix::from_ints(f4, {{1, 1}, {0, 1}}));
  CHECK(rep.d[0] == FieldMatrix::from_ints(f4, {{0, 1}, {1, 0}}));
  CHECK(represent(WeylElement::euler(f4, 1, 0), rep) == FieldMatrix::from_ints(f4, {{1, 1}, {1, 0}}));
  CHECK(represent(C(f4, 1, 1), rep) == FieldMatrix::identity(f4, 2));
}

TEST_CASE("delta_rep at the zero point is nilpotent shifts") {
  for (std::int64_t p : {2, 3, 5}) {
    auto F = make_field(p, 1);
    for (int n : {1, 2}) {
      std::vector<Raw> zero(static_cast<std::size_t>(n), 0);
      auto rep = delta_rep(PointTriple::make(F, zero, zero, zero));
      std::size_t N = 1;
      for (int i = 0; i < n; ++i) N *= static_cast<std::size_t>(p);
      CHECK(rep.dim == N);
      for (int k = 0; k < n; ++k) {
        const auto& Xk = rep.x[static_cast<std::size_t>(k)];
        const auto& Dk = rep.d[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j <= i; ++j) CHECK(Xk(i, j) == 0);  // x lowers the d-degree
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = i; j < N; ++j) CHECK(Dk(i, j) == 0);   // d raises it
      }
    }
  }
}

TEST_CASE("represent is an algebra homomorphism with the right central character") {
  SplitMix64 rng(3);
  for (std::int64_t p : {2, 3, 5}) {
    auto F = make_field(p, 2);
    for (int n : {1, 2}) {
      auto pt = testing::random_rational_point(F, n, rng);
      auto rep = delta_rep(pt);
      for (int trial = 0; trial < 4; ++trial) {
        auto u = random_element(F, n, rng, 3, 3);
        auto v = random_element(F, n, rng, 3, 3);
        CHECK(represent(u * v, rep) == represent(u, rep) * represent(v, rep));
      }
      for (int k = 0; k < n; ++k) {
        std::vector<int> I(static_cast<std::size_t>(n), 0), Z(static_cast<std::size_t>(n), 0);
        I[static_cast<std::size_t>(k)] = static_cast<int>(p);
        const auto id = FieldMatrix::identity(F, rep.dim);
        CHECK(represent(WeylElement::monomial(F, n, I, Z), rep) == id.scaled(pt.b[static_cast<std::size_t>(k)]));
        CHECK(represent(WeylElement::monomial(F, n, Z, I), rep) == id.scaled(pt.omega_p[static_cast<std::size_t>(k)]));
      }
    }
  }
}

TEST_CASE("MonomialTable matches represent") {
  SplitMix64 rng(4);
  auto F = make_field(3, 2);
  auto pt = testing::random_rational_point(F, 2, rng);
  auto rep = delta_rep(pt);
  MonomialTable table(rep);
  for (std::size_t i = 0; i < rep.dim; ++i)
    for (std::size_t j = 0; j < rep.dim; ++j)
      CHECK(table.monomial(i, j) == represent(WeylElement::monomial(F, 2, rep.label(i), rep.label(j)), rep));
}

TEST_CASE("euler_block_check examples") {
  auto f4 = make_field(2, 2);
  auto pt = PointTriple::make(f4, {1}, {1}, {f4->generator()});
  auto r = euler_block_check(pt, 0);
  auto lam = fq::Poly::x(f4);
  CHECK(r.char_poly == lam.pow(2) + lam);
  CHECK(r.min_poly == lam.pow(2) + lam);
  CHECK(r.pass());
  CHECK(r.block == FieldMatrix::from_elements({{f4->element(f4->add(1, f4->generator())), f4->element(1)},
                                               {f4->element(1), f4->element(f4->generator())}}));

  auto f3 = make_field(3, 1);
  auto r3 = euler_block_check(PointTriple::make(f3, {0}, {0}, {0}), 0);
  auto l3 = fq::Poly::x(f3);
  CHECK(r3.char_poly == -(l3.pow(3) - l3));
  CHECK(r3.pass());
  for (Raw e : {0u, 1u, 2u}) CHECK(r3.char_poly.eval(e) == 0);

  auto f2 = make_field(2, 1);
  auto r22 = euler_block_check(PointTriple::make(f2, {0, 0}, {0, 0}, {1, 0}), 1);
  auto l2 = fq::Poly::x(f2);
  CHECK(r22.char_poly.degree() == 4);
  CHECK(r22.char_poly == (l2.pow(2) + l2).pow(2));
  CHECK(r22.pass());
}

TEST_CASE("euler_block_check holds on random points") {
  SplitMix64 rng(12);
  for (std::int64_t p : {2, 3, 5}) {
    auto F = make_field(p, 2);
    for (int n : {1, 2}) {
      for (int trial = 0; trial < 4; ++trial) {
        auto pt = testing::random_rational_point(F, n, rng, rng.below(100));
        for (int k = 0; k < n; ++k) CHECK(euler_block_check(pt, k).pass());
      }
    }
  }
}

TEST_CASE("euler block fails when tau is not an Artin-Schreier root") {
  auto f5 = make_field(5, 1);
  auto pt = PointTriple::make(f5, {1}, {0}, {0});
  auto lam = fq::Poly::x(f5);
  auto M = represent(WeylElement::euler(f5, 1, 0).plus_scalar(f5->neg(1)), delta_rep(pt));  // shift by 1 is still a root
  CHECK(linalg::min_poly(M) == lam.pow(5) - lam);
  // a point with b omega = 1 but tau = 0 is rejected at construction
  CHECK_THROWS_AS(PointTriple::make(f5, {1}, {1}, {0}), std::invalid_argument);
}

TEST_CASE("d_eta_build examples and oracle agreement") {
  auto f4 = make_field(2, 2);
  auto pt = PointTriple::make(f4, {1}, {1}, {f4->generator()});
  auto de = d_eta_build(pt);
  CHECK(de.dim == 2);
  CHECK(de.joint_kernel_dim == 1);
  // explicit 4 x 4 map phi
  auto phi = phi_matrix(de.euler_shifted);
  CHECK(phi.rows() == 4);
  CHECK(linalg::rank(phi) == 2);

  auto f2 = make_field(2, 1);
  CHECK(d_eta_build(PointTriple::make(f2, {0, 0}, {0, 0}, {0, 1})).dim == 4);
  auto f5 = make_field(5, 1);
  auto zero = d_eta_build(PointTriple::make(f5, {0, 0}, {0, 0}, {0, 0}));
  CHECK(zero.dim == 25);
  // zero point, c = 0: kernel of E_k on d^I is spanned by I_k = p-1
  REQUIRE(zero.free_columns.size() == 1);
}

TEST_CASE("D_eta cokernel agrees with the explicit phi matrix for every root choice") {
  SplitMix64 rng(77);
  for (auto [p, n] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {5, 1}}) {
    auto F = make_field(p, 2);
    for (int trial = 0; trial < 2; ++trial) {
      auto base = testing::random_rational_point(F, n, rng);
      for (const auto& pt : testing::all_root_choices(base)) {
        auto de = d_eta_build(pt);
        const std::size_t N = de.rep.dim;
        auto phi = phi_matrix(de.euler_shifted);
        const std::size_t img = linalg::rank(phi);
        CHECK(N * N - img == de.dim);
        // coordinates vanish on the image and are onto
        FieldMatrix coords(F, phi.cols(), de.dim);
        for (std::size_t col = 0; col < phi.cols(); ++col) {
          FieldMatrix Y(F, N, N);
          for (std::size_t r = 0; r < N * N; ++r) Y(r / N, r % N) = phi(r, col);
          auto c = de.coordinates(Y);
          for (auto v : c) CHECK(v == 0);
        }
        FieldMatrix onto(F, N * N, de.dim);
        for (std::size_t r = 0; r < N * N; ++r) {
          FieldMatrix Y(F, N, N);
          Y(r / N, r % N) = 1;
          auto c = de.coordinates(Y);
          std::copy(c.begin(), c.end(), onto.row(r).begin());
        }
        CHECK(linalg::rank(onto) == de.dim);
        // joint kernel oracle
        CHECK(linalg::rank_kernel(linalg::vstack(de.euler_shifted)).kernel.cols() == 1);
      }
    }
  }
}

TEST_CASE("D_eta action is compatible with the quotient map") {
  SplitMix64 rng(78);
  auto F = make_field(3, 2);
  auto pt = testing::random_rational_point(F, 2, rng, 4);
  auto de = d_eta_build(pt);
  const std::size_t N = de.rep.dim;
  for (int trial = 0; trial < 5; ++trial) {
    FieldMatrix Xm(F, N, N), Y(F, N, N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        Xm(i, j) = static_cast<Raw>(rng.below(F->order()));
        Y(i, j) = static_cast<Raw>(rng.below(F->order()));
      }
    auto lhs = de.coordinates(Xm * Y);
    auto rhs = de.action(Xm).apply(de.coordinates(Y));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("d_eta_build raises a counterexample with a witness") {
  // Not a valid triple for the theorem: bypass make() to plant a wrong c.
  auto f3 = make_field(3, 1);
  PointTriple bad = PointTriple::make(f3, {0}, {0}, {0});
  bad.c = {2};  // still a root; now break it
  bad.b = {1};
  bad.a = {1};
  bad.omega_p = {1};  // c^3 - c = 0 != 1
  try {
    d_eta_build(bad);
    FAIL("expected a counterexample");
  } catch (const CounterexampleError& e) {
    CHECK(e.witness().contains("point"));
    CHECK(e.witness()["dim"].get<std::size_t>() != 3);
  }
}

TEST_CASE("azumaya_point_check examples") {
  auto f4 = make_field(2, 2);
  auto cert = azumaya_point_check(PointTriple::make(f4, {1}, {1}, {f4->generator()}));
  CHECK(cert.action_rank == 4);
  CHECK(cert.pass);

  SplitMix64 rng(9);
  auto f9 = make_field(3, 2);
  auto c9 = azumaya_point_check(testing::random_rational_point(f9, 1, rng));
  CHECK(c9.action_rank == 9);
  CHECK(c9.pass);

  auto c16 = azumaya_point_check(testing::random_rational_point(f4, 2, rng, 3));
  CHECK(c16.action_rank == 16);
  CHECK(c16.bmr_rank == 16);
  CHECK(c16.pass);
  auto j = io::to_json(c16);
  CHECK(j["pass"] == true);
  CHECK(j["ranks"]["action"] == 16);
}

TEST_CASE("action map rank agrees with an independent quotient construction") {
  // Oracle: complement of the image of phi chosen by column pivoting on [phi | I],
  // action computed by solving in the quotient directly.
  SplitMix64 rng(10);
  for (auto [p, n] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto F = make_field(p, 2);
    auto pt = testing::random_rational_point(F, n, rng, 1);
    auto de = d_eta_build(pt);
    const std::size_t N = de.rep.dim, NN = N * N;
    auto phi = phi_matrix(de.euler_shifted);
    const auto img = linalg::rref(phi.transpose());  // rows span the image
    // quotient projection: reduce a flattened matrix against the image rows, read the free coordinates
    std::vector<bool> piv(NN, false);
    for (auto c : img.pivots) piv[c] = true;
    auto project = [&](const FieldMatrix& Y) {
      std::vector<Raw> v(Y.data());
      for (std::size_t r = 0; r < img.pivots.size(); ++r) {
        const Raw a = v[img.pivots[r]];
        if (a != 0) F->axmy(v, a, img.reduced.row(r));
      }
      std::vector<Raw> out;
      for (std::size_t i = 0; i < NN; ++i)
        if (!piv[i]) out.push_back(v[i]);
      return out;
    };
    const std::size_t Q = NN - img.pivots.size();
    REQUIRE(Q == N);
    // quotient basis vectors: unit matrices at free positions
    std::vector<FieldMatrix> qbasis;
    for (std::size_t i = 0; i < NN; ++i)
      if (!piv[i]) {
        FieldMatrix Y(F, N, N);
        Y(i / N, i % N) = 1;
        qbasis.push_back(Y);
      }
    MonomialTable table(de.rep);
    FieldMatrix action(F, NN, Q * Q);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        const auto U = table.monomial(i, j);
        for (std::size_t b = 0; b < Q; ++b) {
          auto col = project(U * qbasis[b]);
          for (std::size_t a = 0; a < Q; ++a) action(i * N + j, a * Q + b) = col[a];
        }
      }
    CHECK(linalg::rank(action) == NN);
    CHECK(azumaya_point_check(pt).action_rank == NN);
  }
}

TEST_CASE("ReducedWeylAlgebra is compatible with represent") {
  SplitMix64 rng(31);
  for (auto [p, n] : std::vector<std::pair<std::int64_t, int>>{{2, 2}, {3, 1}, {3, 2}}) {
    auto F = make_field(p, 2);
    auto pt = testing::random_rational_point(F, n, rng);
    auto rep = delta_rep(pt);
    MonomialTable table(rep);
    ReducedWeylAlgebra alg(F, p, n, pt.b, pt.omega_p);
    auto mat = [&](const std::vector<std::pair<std::size_t, Raw>>& v) {
      FieldMatrix m(F, rep.dim, rep.dim);
      for (const auto& [l, c] : v) m = m + table.monomial(l / alg.half_dim(), l % alg.half_dim()).scaled(c);
      return m;
    };
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t u = rng.below(alg.dim()), v = rng.below(alg.dim());
      CHECK(mat(alg.multiply(u, v)) == table.monomial(u / alg.half_dim(), u % alg.half_dim()) *
                                           table.monomial(v / alg.half_dim(), v % alg.half_dim()));
      // agrees with normal-form multiplication followed by central reduction
      auto wu = WeylElement::monomial(F, n, alg.exps_i(u), alg.exps_j(u));
      auto wv = WeylElement::monomial(F, n, alg.exps_i(v), alg.exps_j(v));
      CHECK(alg.reduce(wu * wv) == alg.multiply(u, v));
    }
  }
}

TEST_CASE("point JSON round trip") {
  SplitMix64 rng(5);
  auto F = make_field(3, 2);
  auto pt = testing::random_rational_point(F, 2, rng, 7);
  auto j = io::to_json(pt);
  auto back = io::point_from_json(j);
  CHECK(back.b == pt.b);
  CHECK(back.c == pt.c);
  CHECK(back.a == pt.a);
  CHECK(j["b"][0].contains("coeffs"));
  nlohmann::json bad = j;
  bad["c"][0] = 1;
  bad["b"][0] = 1;
  bad["omega_p"][0] = 1;
  CHECK_THROWS_AS(io::point_from_json(bad), std::invalid_argument);
}
