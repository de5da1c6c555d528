#include <set>

#include "doctest.h"
#include "frobsplit/cover.hpp"
#include "frobsplit/json_io.hpp"
#include "frobsplit/rng.hpp"

using namespace frobsplit;
using namespace frobsplit::cover;
using fq::make_field;
using fq::Raw;

TEST_CASE("fiber over the zero point is F_p^n") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    auto F = make_field(p, 1);
    auto fib = fiber_over(F, {0, 0}, {0, 0});
    CHECK(fib.field->degree() == 1);
    CHECK(fib.points.size() == static_cast<std::size_t>(p * p));
    for (const auto& c : fib.points)
      for (Raw r : c) CHECK(r < static_cast<Raw>(p));
    CHECK(is_torsor(fib));
  }
}

TEST_CASE("fiber at p=2, b=omega=1 lives over F_4") {
  auto fib = fiber_over(make_field(2, 1), {1}, {1});
  CHECK(fib.field->degree() == 2);
  const Raw t = fib.field->generator();
  REQUIRE(fib.points.size() == 2);
  std::set<Raw> got{fib.points[0][0], fib.points[1][0]};
  CHECK(got == std::set<Raw>{t, fib.field->add(t, 1)});
}

TEST_CASE("fiber sizes and torsor property on random points") {
  SplitMix64 rng(101);
  for (auto [p, k, n] : std::vector<std::tuple<std::int64_t, int, int>>{{3, 2, 2}, {2, 3, 3}, {5, 1, 2}, {7, 1, 1}}) {
    auto F = make_field(p, k);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Raw> b, w;
      for (int i = 0; i < n; ++i) {
        b.push_back(static_cast<Raw>(rng.below(F->order())));
        w.push_back(static_cast<Raw>(rng.below(F->order())));
      }
      auto fib = fiber_over(F, b, w);
      std::size_t expected = 1;
      for (int i = 0; i < n; ++i) expected *= static_cast<std::size_t>(p);
      CHECK(fib.points.size() == expected);
      CHECK(std::set<std::vector<Raw>>(fib.points.begin(), fib.points.end()).size() == expected);
      CHECK(is_torsor(fib));
      CHECK((fib.field->degree() == k || fib.field->degree() == k * static_cast<int>(p)));
      auto mu = frobenius_moment(*fib.field, fib.b_in_field(), fib.omega_in_field());
      for (const auto& c : fib.points) CHECK(as_map(*fib.field, c) == mu);
    }
  }
}

TEST_CASE("extension is used exactly when some b_i omega_i has nonzero trace") {
  SplitMix64 rng(5);
  auto F = make_field(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Raw> b{static_cast<Raw>(rng.below(9)), static_cast<Raw>(rng.below(9))};
    std::vector<Raw> w{static_cast<Raw>(rng.below(9)), static_cast<Raw>(rng.below(9))};
    bool rational = true;
    for (int i = 0; i < 2; ++i) {
      // oracle: some x in F_9 solves x^3 - x = b w
      bool found = false;
      for (Raw x = 0; x < 9; ++x) found = found || F->sub(F->frobenius(x), x) == F->mul(b[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i)]);
      rational = rational && found;
    }
    CHECK((fiber_over(F, b, w).field->degree() == 2) == rational);
  }
}

TEST_CASE("as_map examples") {
  auto f4 = make_field(2, 2);
  const Raw t = f4->generator();
  CHECK(as_map(*f4, {0, 0}) == std::vector<Raw>{0, 0});
  CHECK(as_map(*f4, {t}) == std::vector<Raw>{1});
  auto f5 = make_field(5, 3);
  for (Raw a = 0; a < 5; ++a) CHECK(as_map(*f5, {a}) == std::vector<Raw>{0});
}

TEST_CASE("cartesian_check") {
  CHECK(cartesian_check(make_field(3, 1), {0, 0}, {0, 0}).pass);
  auto r = cartesian_check(make_field(2, 1), {1}, {1});
  CHECK(r.pass);
  CHECK(r.fiber_size == 2);
  SplitMix64 rng(8);
  auto F = make_field(3, 2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Raw> b{static_cast<Raw>(rng.below(9)), static_cast<Raw>(rng.below(9))};
    std::vector<Raw> w{static_cast<Raw>(rng.below(9)), static_cast<Raw>(rng.below(9))};
    auto rep = cartesian_check(F, b, w);
    CHECK(rep.pass);
    CHECK(rep.preimage_size == 9);
  }
}

TEST_CASE("euler_relation_check") {
  for (std::int64_t p : {2, 3, 5, 7}) CHECK(euler_relation_check(p, 1));
  CHECK(euler_relation_check(3, 3));
}

TEST_CASE("every fiber point gives a D_eta of dimension p^n") {
  SplitMix64 rng(55);
  for (auto [p, n] : std::vector<std::pair<std::int64_t, int>>{{2, 2}, {3, 1}, {3, 2}, {5, 1}}) {
    auto F = make_field(p, 1);
    std::vector<Raw> b, w;
    for (int i = 0; i < n; ++i) {
      b.push_back(static_cast<Raw>(rng.below(F->order())));
      w.push_back(static_cast<Raw>(rng.below(F->order())));
    }
    auto fib = fiber_over(F, b, w);
    for (std::size_t i = 0; i < fib.points.size(); ++i) {
      auto de = weyl::d_eta_build(fib.triple(i));
      CHECK(de.dim == de.rep.dim);
    }
  }
}

TEST_CASE("fiber JSON") {
  auto fib = fiber_over(make_field(2, 1), {1}, {1});
  auto j = io::to_json(fib);
  CHECK(j["field"]["k"] == 2);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0][0]["coeffs"].size() == 2);
}
