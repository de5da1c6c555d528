#include "frobsplit/cover.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace frobsplit::cover {

namespace {

std::vector<Raw> push(const fq::Embedding& e, const std::vector<Raw>& v) {
  std::vector<Raw> out;
  out.reserve(v.size());
  for (Raw r : v) out.push_back(e.map_raw(r));
  return out;
}

// Cartesian product of per-coordinate root lists, first coordinate most significant.
std::vector<std::vector<Raw>> product(const std::vector<std::vector<Raw>>& lists) {
  std::vector<std::vector<Raw>> out{{}};
  for (const auto& l : lists) {
    std::vector<std::vector<Raw>> next;
    next.reserve(out.size() * l.size());
    for (const auto& prefix : out)
      for (Raw r : l) {
        auto v = prefix;
        v.push_back(r);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Raw> EtaleFiber::b_in_field() const { return push(fq::Embedding(base, field), b); }
std::vector<Raw> EtaleFiber::omega_in_field() const { return push(fq::Embedding(base, field), omega_p); }

weyl::PointTriple EtaleFiber::triple(std::size_t i) const {
  return weyl::PointTriple::make(field, b_in_field(), omega_in_field(), points.at(i));
}

std::vector<Raw> as_map(const fq::Field& field, const std::vector<Raw>& c) {
  std::vector<Raw> out;
  out.reserve(c.size());
  for (Raw x : c) out.push_back(field.sub(field.frobenius(x), x));
  return out;
}

std::vector<Raw> frobenius_moment(const fq::Field& field, const std::vector<Raw>& b, const std::vector<Raw>& omega_p) {
  if (b.size() != omega_p.size()) throw std::invalid_argument("b and omega_p have different lengths");
  std::vector<Raw> out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(field.mul(b[i], omega_p[i]));
  return out;
}

EtaleFiber fiber_over(const FieldPtr& base, const std::vector<Raw>& b, const std::vector<Raw>& omega_p) {
  const auto mu = frobenius_moment(*base, b, omega_p);
  EtaleFiber fiber;
  fiber.base = base;
  fiber.b = b;
  fiber.omega_p = omega_p;
  bool split = true;
  for (Raw m : mu) split = split && base->trace(m) == 0;
  fiber.field = split ? base : fq::extension(base, static_cast<int>(base->characteristic()));
  const fq::Embedding emb(base, fiber.field);
  const auto& F = *fiber.field;
  const auto p = static_cast<std::size_t>(F.characteristic());

  std::vector<std::vector<Raw>> roots;
  for (Raw m : mu) {
    const Raw target = emb.map_raw(m);
    auto as = fq::artin_schreier_roots(F.element(target));
    if (!as.field->same_as(F)) throw std::logic_error("fiber_over: roots left the common field");
    std::vector<Raw> r;
    for (const auto& e : as.roots) r.push_back(e.raw());
    if (r.size() != p || std::set<Raw>(r.begin(), r.end()).size() != p)
      throw std::logic_error("fiber_over: T^p - T - c is not separable");
    for (Raw x : r)
      if (F.sub(F.frobenius(x), x) != target) throw std::logic_error("fiber_over: wrong Artin-Schreier root");
    roots.push_back(std::move(r));
  }
  fiber.points = product(roots);
  return fiber;
}

bool is_torsor(const EtaleFiber& fiber) {
  const auto& F = *fiber.field;
  const std::set<std::vector<Raw>> pts(fiber.points.begin(), fiber.points.end());
  for (const auto& c : fiber.points)
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::int64_t s = 1; s < F.characteristic(); ++s) {
        auto shifted = c;
        shifted[i] = F.add(shifted[i], F.from_int(s));
        if (!pts.count(shifted)) return false;
      }
  return true;
}

CartesianReport cartesian_check(const FieldPtr& base, const std::vector<Raw>& b, const std::vector<Raw>& omega_p) {
  const EtaleFiber fiber = fiber_over(base, b, omega_p);
  const auto& F = *fiber.field;
  const auto mu = frobenius_moment(F, fiber.b_in_field(), fiber.omega_in_field());
  std::vector<std::vector<Raw>> solutions(mu.size());
  for (Raw x = 0; x < F.order(); ++x) {
    const Raw y = F.sub(F.frobenius(x), x);
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (y == mu[i]) solutions[i].push_back(x);
  }
  const auto pre = product(solutions);
  const std::set<std::vector<Raw>> a(fiber.points.begin(), fiber.points.end()), bset(pre.begin(), pre.end());
  CartesianReport r;
  r.fiber_size = a.size();
  r.preimage_size = bset.size();
  std::set_difference(bset.begin(), bset.end(), a.begin(), a.end(), std::back_inserter(r.missing));
  std::set_difference(a.begin(), a.end(), bset.begin(), bset.end(), std::back_inserter(r.extra));
  r.pass = r.missing.empty() && r.extra.empty() && a.size() == fiber.points.size();
  return r;
}

bool euler_relation_check(std::int64_t p, int n) {
  const auto F = fq::make_field(p, 1);
  for (int k = 0; k < n; ++k) {
    const auto E = weyl::WeylElement::euler(F, n, k);
    std::vector<int> I(static_cast<std::size_t>(n), 0);
    I[static_cast<std::size_t>(k)] = static_cast<int>(p);
    if (!(E.pow(static_cast<unsigned>(p)) - E == weyl::WeylElement::monomial(F, n, I, I))) return false;
  }
  return true;
}

}  // namespace frobsplit::cover
