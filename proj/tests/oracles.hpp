#pragma once

// Brute-force oracles for the torus combinatorics: rational stabilizer points
// and semi-invariant monomials.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "frobsplit/fq.hpp"
#include "frobsplit/hypertoric.hpp"

namespace frobsplit::testing {

/// |{t in K(F_{p^m}) : t.(z, w) = (z, w)}| by enumerating (F_q^*)^k, where t
/// acts by tau_i = prod_j t_j^{B_ji} on z_i and by tau_i^{-1} on w_i.  The point
/// lives over F_p; results are cached by the support pattern, which is all the
/// action sees.
class StabilizerCounter {
 public:
  StabilizerCounter(const hypertoric::TorusData& torus, std::int64_t p) : torus_(torus), p_(p) {}

  std::uint64_t count(const hypertoric::PhasePoint& pt, int m) {
    std::vector<int> pattern;
    for (std::size_t i = 0; i < pt.z.size(); ++i) pattern.push_back((pt.z[i] != 0) + 2 * (pt.w[i] != 0));
    pattern.push_back(m);
    auto it = cache_.find(pattern);
    if (it != cache_.end()) return it->second;

    const auto F = fq::make_field(p_, m);
    const fq::Embedding e(pt.field, F);
    std::vector<fq::Raw> z, w;
    for (auto v : pt.z) z.push_back(e.map_raw(v));
    for (auto v : pt.w) w.push_back(e.map_raw(v));
    const auto k = static_cast<std::size_t>(torus_.k), n = static_cast<std::size_t>(torus_.n);
    const std::uint64_t units = F->order() - 1;
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= units;
    std::uint64_t hits = 0;
    std::vector<fq::Raw> t(k);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (std::size_t j = 0; j < k; ++j, c /= units) t[j] = static_cast<fq::Raw>(c % units + 1);
      bool fixes = true;
      for (std::size_t i = 0; i < n && fixes; ++i) {
        fq::Raw tau = 1;
        for (std::size_t j = 0; j < k; ++j) {
          const auto b = torus_.B(j, i).get_si();
          const fq::Raw base = b < 0 ? F->inv(t[j]) : t[j];
          tau = F->mul(tau, F->pow(base, static_cast<std::uint64_t>(b < 0 ? -b : b)));
        }
        fixes = F->mul(tau, z[i]) == z[i] && F->mul(F->inv(tau), w[i]) == w[i];
      }
      hits += fixes;
    }
    cache_[pattern] = hits;
    return hits;
  }

 private:
  hypertoric::TorusData torus_;
  std::int64_t p_;
  std::map<std::vector<int>, std::uint64_t> cache_;
};

/// Some monomial prod z_i^{a_i} w_i^{b_i} of total degree <= max_degree has weight
/// m alpha for some 1 <= m <= max_m and does not vanish at the point.
inline bool semistable_by_monomials(const hypertoric::TorusData& torus, const std::vector<std::int64_t>& alpha,
                                    const hypertoric::PhasePoint& pt, int max_degree = 8, int max_m = 4) {
  const auto& F = *pt.field;
  const auto n = static_cast<std::size_t>(torus.n), k = static_cast<std::size_t>(torus.k);
  std::vector<int> e(2 * n, 0);
  // enumerate exponent vectors of total degree <= max_degree
  std::function<bool(std::size_t, int)> rec = [&](std::size_t pos, int left) -> bool {
    if (pos == 2 * n) {
      fq::Raw value = 1;
      for (std::size_t i = 0; i < n; ++i) {
        value = F.mul(value, F.pow(pt.z[i], static_cast<std::uint64_t>(e[i])));
        value = F.mul(value, F.pow(pt.w[i], static_cast<std::uint64_t>(e[n + i])));
      }
      if (value == 0) return false;
      std::vector<std::int64_t> wt(k, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) wt[j] += (e[i] - e[n + i]) * torus.B(j, i).get_si();
      for (int m = 1; m <= max_m; ++m) {
        bool eq = true;
        for (std::size_t j = 0; j < k; ++j) eq = eq && wt[j] == m * alpha[j];
        if (eq) return true;
      }
      return false;
    }
    for (int d = 0; d <= left; ++d) {
      e[pos] = d;
      if (rec(pos + 1, left - d)) return true;
    }
    e[pos] = 0;
    return false;
  };
  return rec(0, max_degree);
}

/// All (z, w) in F^{2n}.
inline std::vector<hypertoric::PhasePoint> all_phase_points(const fq::FieldPtr& F, int n) {
  std::vector<hypertoric::PhasePoint> out;
  const std::uint64_t q = F->order();
  std::uint64_t total = 1;
  for (int i = 0; i < 2 * n; ++i) total *= q;
  for (std::uint64_t code = 0; code < total; ++code) {
    hypertoric::PhasePoint pt{F, {}, {}};
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i, c /= q) pt.z.push_back(static_cast<fq::Raw>(c % q));
    for (int i = 0; i < n; ++i, c /= q) pt.w.push_back(static_cast<fq::Raw>(c % q));
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace frobsplit::testing
