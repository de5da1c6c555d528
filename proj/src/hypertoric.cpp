#include "frobsplit/hypertoric.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace frobsplit::hypertoric {

using linalg::FieldMatrix;

namespace {

void require_combinatorial_n(int n) {
  if (n > max_combinatorial_n)
    throw std::length_error("subset enumeration needs n <= " + std::to_string(max_combinatorial_n));
}

Subset complement(const Subset& I, std::size_t n) {
  Subset out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < I.size() && I[j] == i) {
      ++j;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

std::vector<Raw> embed_into(const FieldPtr& from, const FieldPtr& to, const std::vector<Raw>& v) {
  if (from->same_as(*to)) return v;
  const fq::Embedding e(from, to);
  std::vector<Raw> out;
  for (Raw r : v) out.push_back(e.map_raw(r));
  return out;
}

// rank of [m | rhs] equals rank of m, over the field.
bool field_consistent(const FieldMatrix& m, const std::vector<Raw>& rhs) {
  if (m.cols() == 0) return std::all_of(rhs.begin(), rhs.end(), [](Raw r) { return r == 0; });
  FieldMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  return linalg::rank(aug) == linalg::rank(m);
}

// Some t in Q^cols with g t = target, by exact elimination; g given by columns.
std::optional<std::vector<mpq_class>> rational_solve(const std::vector<IntVec>& columns, const IntVec& target) {
  const std::size_t m = target.size(), r = columns.size();
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(r + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < r; ++j) a[i][j] = static_cast<long>(columns[j][i]);
    a[i][r] = static_cast<long>(target[i]);
  }
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < r && row < m; ++c) {
    std::size_t s = row;
    while (s < m && a[s][c] == 0) ++s;
    if (s == m) continue;
    std::swap(a[s], a[row]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[row][c];
      for (std::size_t j = c; j <= r; ++j) a[i][j] -= f * a[row][j];
    }
    piv.push_back(c);
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (a[i][r] != 0) return std::nullopt;
  std::vector<mpq_class> t(r, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) t[piv[i]] = a[i][r] / a[i][piv[i]];
  return t;
}

std::vector<IntVec> columns_of(const TorusData& torus, const Subset& idx) {
  std::vector<IntVec> out;
  for (auto i : idx) out.push_back(torus.weight(i));
  return out;
}

IntMatrix rows_of_A(const TorusData& torus, const Subset& idx) {
  std::vector<std::vector<std::int64_t>> rows;
  for (auto i : idx) rows.push_back(torus.A(i));
  return IntMatrix::from_rows(rows, static_cast<std::size_t>(torus.h));
}

FieldMatrix reduce_columns(const TorusData& torus, const Subset& idx, const FieldPtr& field) {
  FieldMatrix m(field, static_cast<std::size_t>(torus.k), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < static_cast<std::size_t>(torus.k); ++i)
      m(i, j) = field->from_int(torus.B(i, idx[j]).get_si());
  return m;
}

std::int64_t dot(const IntVec& a, const IntVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

IntVec TorusData::weight(std::size_t i) const {
  IntVec v(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = B(j, i).get_si();
  return v;
}

IntVec TorusData::A(std::size_t i) const {
  IntVec v(static_cast<std::size_t>(h));
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = Q(j, i).get_si();
  return v;
}

TorusData build_torus_data(const IntMatrix& B, int n) {
  if (n < 0 || B.cols() != static_cast<std::size_t>(n)) throw std::invalid_argument("B must have n columns");
  if (B.rows() > B.cols()) throw std::invalid_argument("B has more rows than columns");
  if (!linalg::extends_to_z_basis(B).extends) throw std::invalid_argument("K is not a subtorus with torus quotient");
  TorusData t;
  t.n = n;
  t.k = static_cast<int>(B.rows());
  t.h = n - t.k;
  t.B = B;
  t.Q = linalg::integer_kernel(B);
  if (t.Q.rows() != static_cast<std::size_t>(t.h) || !(B * t.Q.transpose()).is_zero() ||
      !linalg::extends_to_z_basis(t.Q).extends)
    throw std::logic_error("build_torus_data: kernel lattice is not a saturated rank-h lattice");
  return t;
}

std::vector<Raw> HypertoricData::d_alpha() const {
  std::vector<Raw> out;
  for (auto a : alpha) out.push_back(field->from_int(a));
  return out;
}

std::vector<Raw> lift_lambda(const TorusData& torus, const FieldPtr& field, const std::vector<Raw>& lambda) {
  if (lambda.size() != static_cast<std::size_t>(torus.k)) throw std::invalid_argument("lambda must have length k");
  const auto Bf = torus.B.reduce(field);
  const auto ech = linalg::rref(Bf);
  if (ech.pivots.size() < static_cast<std::size_t>(torus.k))
    throw std::domain_error("B has rank " + std::to_string(ech.pivots.size()) + " < k modulo p = " +
                            std::to_string(field->characteristic()));
  FieldMatrix sub(field, static_cast<std::size_t>(torus.k), ech.pivots.size());
  for (std::size_t i = 0; i < sub.rows(); ++i)
    for (std::size_t j = 0; j < ech.pivots.size(); ++j) sub(i, j) = Bf(i, ech.pivots[j]);
  const auto x = linalg::solve(sub, lambda);
  if (!x) throw std::logic_error("lift_lambda: full-rank system inconsistent");
  std::vector<Raw> lift(static_cast<std::size_t>(torus.n), 0);
  for (std::size_t j = 0; j < ech.pivots.size(); ++j) lift[ech.pivots[j]] = (*x)[j];
  return lift;
}

HypertoricData make_data(TorusData torus, IntVec alpha, FieldPtr field, std::vector<Raw> lambda,
                         std::optional<std::vector<Raw>> lift) {
  if (alpha.size() != static_cast<std::size_t>(torus.k)) throw std::invalid_argument("alpha must have length k");
  if (lambda.size() != static_cast<std::size_t>(torus.k)) throw std::invalid_argument("lambda must have length k");
  HypertoricData d;
  if (lift) {
    if (lift->size() != static_cast<std::size_t>(torus.n))
      throw std::invalid_argument("lambda_lift must have length n");
    if (torus.B.reduce(field).apply(*lift) != lambda) throw std::invalid_argument("B lambda_lift != lambda");
    d.lambda_lift = std::move(*lift);
  } else {
    d.lambda_lift = lift_lambda(torus, field, lambda);
  }
  d.torus = std::move(torus);
  d.alpha = std::move(alpha);
  d.field = std::move(field);
  d.lambda = std::move(lambda);
  return d;
}

Arrangement arrangement(const HypertoricData& data) {
  const auto& t = data.torus;
  // rank of B mod p is checked when the lift is formed
  if (linalg::rank(t.B.reduce(data.field)) < static_cast<std::size_t>(t.k))
    throw std::domain_error("B loses rank modulo p = " + std::to_string(data.field->characteristic()));
  Arrangement a;
  a.field = data.field;
  a.h = t.h;
  for (std::size_t i = 0; i < static_cast<std::size_t>(t.n); ++i) {
    Hyperplane hp;
    for (auto v : t.A(i)) hp.normal.push_back(data.field->from_int(v));
    hp.offset = data.lambda_lift[i];
    a.hyperplanes.push_back(std::move(hp));
  }
  return a;
}

std::vector<Subset> subsets_of_size(std::size_t n, std::size_t size) {
  std::vector<Subset> out;
  if (size > n) return out;
  Subset s(size);
  for (std::size_t i = 0; i < size; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    std::size_t i = size;
    while (i > 0 && s[i - 1] == n - size + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < size; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

namespace {

bool hyperplanes_meet(const Arrangement& a, const Subset& S) {
  FieldMatrix m(a.field, S.size(), static_cast<std::size_t>(a.h));
  std::vector<Raw> rhs;
  for (std::size_t r = 0; r < S.size(); ++r) {
    const auto& hp = a.hyperplanes[S[r]];
    for (std::size_t j = 0; j < hp.normal.size(); ++j) m(r, j) = hp.normal[j];
    rhs.push_back(hp.offset);
  }
  return field_consistent(m, rhs);
}

}  // namespace

ArrangementClass classify_arrangement(const HypertoricData& data) {
  const auto& t = data.torus;
  require_combinatorial_n(t.n);
  const Arrangement a = arrangement(data);
  const auto n = static_cast<std::size_t>(t.n), h = static_cast<std::size_t>(t.h);
  ArrangementClass c;
  c.simple = true;
  for (const auto& S : subsets_of_size(n, h + 1))
    if (hyperplanes_meet(a, S)) {
      c.simple = false;
      c.meeting = S;
      break;
    }
  c.smooth = c.simple;
  if (c.simple)
    for (const auto& S : subsets_of_size(n, h))
      if (hyperplanes_meet(a, S) && !linalg::extends_to_z_basis(rows_of_A(t, S)).extends) {
        c.smooth = false;
        c.non_basis = S;
        break;
      }
  return c;
}

Subset PhasePoint::vanishing() const {
  if (z.size() != w.size()) throw std::invalid_argument("z and w have different lengths");
  Subset I;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] == 0 && w[i] == 0) I.push_back(i);
  return I;
}

namespace {

void require_point(const TorusData& t, const PhasePoint& pt) {
  if (pt.z.size() != static_cast<std::size_t>(t.n) || pt.w.size() != static_cast<std::size_t>(t.n))
    throw std::invalid_argument("point must have n coordinates in z and w");
}

}  // namespace

std::size_t stabilizer_dim(const HypertoricData& data, const PhasePoint& pt) {
  const auto& t = data.torus;
  require_point(t, pt);
  const auto I = pt.vanishing();
  const auto n = static_cast<std::size_t>(t.n), k = static_cast<std::size_t>(t.k);
  FieldMatrix m(pt.field, n, k + I.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = pt.field->from_int(t.B(j, i).get_si());
  for (std::size_t r = 0; r < I.size(); ++r) m(I[r], k + r) = 1;
  return k + I.size() - (m.cols() == 0 ? 0 : linalg::rank(m));
}

bool stabilizer_trivial(const HypertoricData& data, const PhasePoint& pt) {
  require_point(data.torus, pt);
  return linalg::extends_to_z_basis(rows_of_A(data.torus, pt.vanishing())).extends;
}

std::vector<IntVec> semistability_generators(const TorusData& torus, const PhasePoint& pt) {
  require_point(torus, pt);
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < static_cast<std::size_t>(torus.n); ++i) {
    if (pt.z[i] != 0) gens.push_back(torus.weight(i));
    if (pt.w[i] != 0) {
      auto g = torus.weight(i);
      for (auto& v : g) v = -v;
      gens.push_back(std::move(g));
    }
  }
  return gens;
}

bool in_rational_cone(const std::vector<IntVec>& generators, const IntVec& target) {
  if (std::all_of(target.begin(), target.end(), [](std::int64_t v) { return v == 0; })) return true;
  const std::size_t m = target.size(), r = generators.size();
  if (r == 0) return false;
  // Phase-one simplex on G c = target, c >= 0, with Bland's rule.
  const std::size_t cols = r + m + 1, rhs = r + m;
  std::vector<std::vector<mpq_class>> T(m + 1, std::vector<mpq_class>(cols, 0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long sign = target[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < r; ++j) T[i][j] = sign * static_cast<long>(generators[j][i]);
    T[i][r + i] = 1;
    T[i][rhs] = sign * static_cast<long>(target[i]);
    basis[i] = r + i;
  }
  for (std::size_t j = 0; j < cols; ++j)
    if (j < r || j == rhs)
      for (std::size_t i = 0; i < m; ++i) T[m][j] -= T[i][j];
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < rhs; ++j)
      if (T[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      const mpq_class ratio = T[i][rhs] / T[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase one
    const mpq_class pv = T[leave][enter];
    for (auto& v : T[leave]) v /= pv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const mpq_class f = T[i][enter];
      for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  return T[m][rhs] == 0;
}

bool in_monoid(const std::vector<IntVec>& generators, const IntVec& target) {
  const std::size_t k = target.size();
  if (std::all_of(target.begin(), target.end(), [](std::int64_t v) { return v == 0; })) return true;
  if (!in_rational_cone(generators, target)) return false;
  std::int64_t delta = 0, amax = 0;
  for (const auto& g : generators)
    for (auto v : g) delta = std::max<std::int64_t>(delta, std::abs(v));
  for (auto v : target) amax = std::max<std::int64_t>(amax, std::abs(v));
  const std::int64_t R = static_cast<std::int64_t>(k) * (delta + amax);
  // y lies within R of the segment [0, target] in the sup norm
  auto in_region = [&](const IntVec& y) {
    mpq_class lo = 0, hi = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (target[j] == 0) {
        if (std::abs(y[j]) > R) return false;
        continue;
      }
      mpq_class a(y[j] - R, target[j]), b(y[j] + R, target[j]);
      a.canonicalize();
      b.canonicalize();
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    return lo <= hi;
  };
  std::set<IntVec> seen{IntVec(k, 0)};
  std::deque<IntVec> queue{IntVec(k, 0)};
  while (!queue.empty()) {
    const IntVec y = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      IntVec next(k);
      for (std::size_t j = 0; j < k; ++j) next[j] = y[j] + g[j];
      if (next == target) return true;
      if (!in_region(next) || !seen.insert(next).second) continue;
      if (seen.size() > 4000000) throw std::length_error("in_monoid: search region too large");
      queue.push_back(std::move(next));
    }
  }
  return false;
}

bool is_semistable(const HypertoricData& data, const PhasePoint& pt) {
  return in_rational_cone(semistability_generators(data.torus, pt), data.alpha);
}

bool alpha_in_monoid(const HypertoricData& data, const PhasePoint& pt) {
  return in_monoid(semistability_generators(data.torus, pt), data.alpha);
}

std::vector<Raw> moment_K(const TorusData& torus, const PhasePoint& pt) {
  require_point(torus, pt);
  const auto& F = *pt.field;
  std::vector<Raw> zw;
  for (std::size_t i = 0; i < pt.z.size(); ++i) zw.push_back(F.mul(pt.z[i], pt.w[i]));
  if (torus.k == 0) return {};
  return torus.B.reduce(pt.field).apply(zw);
}

std::vector<Raw> moment_H(const HypertoricData& data, const PhasePoint& pt) {
  const auto& t = data.torus;
  const auto& F = *pt.field;
  if (moment_K(t, pt) != embed_into(data.field, pt.field, data.lambda))
    throw std::invalid_argument("point not on mu^{-1}(lambda)");
  if (t.h == 0) return {};
  const auto lift = embed_into(data.field, pt.field, data.lambda_lift);
  const auto Qt = t.Q.transpose().reduce(pt.field);
  if (linalg::rank(Qt) < static_cast<std::size_t>(t.h))
    throw std::domain_error("Q loses rank modulo p = " + std::to_string(F.characteristic()));
  std::vector<Raw> rhs;
  for (std::size_t i = 0; i < pt.z.size(); ++i) rhs.push_back(F.sub(lift[i], F.mul(pt.z[i], pt.w[i])));
  auto v = linalg::solve(Qt, rhs);
  if (!v) throw std::invalid_argument("point not on mu^{-1}(lambda)");
  return *v;
}

namespace {

// dim_Q(k ∩ t_I) = k - rank(B restricted to the columns outside I)
std::size_t rational_intersection_dim(const TorusData& t, const Subset& I) {
  const auto Ic = complement(I, static_cast<std::size_t>(t.n));
  if (Ic.empty()) return static_cast<std::size_t>(t.k);
  return static_cast<std::size_t>(t.k) - linalg::rational_rank(t.B.select_cols(Ic));
}

}  // namespace

std::vector<Circuit> circuits_and_walls(const HypertoricData& data) {
  const auto& t = data.torus;
  require_combinatorial_n(t.n);
  const auto n = static_cast<std::size_t>(t.n);
  std::vector<Circuit> out;
  for (std::size_t size = 1; size <= n; ++size)
    for (const auto& I : subsets_of_size(n, size)) {
      if (rational_intersection_dim(t, I) != 1) continue;
      bool minimal = true;
      for (std::size_t drop = 0; drop < I.size() && minimal; ++drop) {
        Subset smaller = I;
        smaller.erase(smaller.begin() + static_cast<long>(drop));
        minimal = rational_intersection_dim(t, smaller) == 0;
      }
      if (!minimal) continue;
      Circuit c;
      c.I = I;
      const auto Ic = complement(I, n);
      const IntMatrix ker = Ic.empty() ? IntMatrix::identity(static_cast<std::size_t>(t.k))
                                       : linalg::integer_kernel(t.B.select_cols(Ic).transpose());
      if (ker.rows() != 1) throw std::logic_error("circuit kernel is not rank one");
      c.normal = ker.to_int64()[0];
      const auto s = dot(c.normal, data.alpha);
      if (s == 0) {
        c.sign_from_alpha = false;
        const auto first = std::find_if(c.normal.begin(), c.normal.end(), [](std::int64_t v) { return v != 0; });
        if (*first < 0)
          for (auto& v : c.normal) v = -v;
      } else if (s < 0) {
        for (auto& v : c.normal) v = -v;
      }
      FieldMatrix y(data.field, 1, static_cast<std::size_t>(t.k));
      for (std::size_t j = 0; j < c.normal.size(); ++j) y(0, j) = data.field->from_int(c.normal[j]);
      const auto kern = linalg::rank_kernel(y).kernel;
      for (std::size_t j = 0; j < kern.cols(); ++j) c.wall.push_back(kern.column(j));
      out.push_back(std::move(c));
    }
  std::sort(out.begin(), out.end(), [](const Circuit& a, const Circuit& b) { return a.I < b.I; });
  return out;
}

bool realizable(const HypertoricData& data, const Subset& I) {
  const auto& t = data.torus;
  const auto Ic = complement(I, static_cast<std::size_t>(t.n));
  if (!rational_solve(columns_of(t, Ic), data.alpha)) return false;
  return field_consistent(reduce_columns(t, Ic, data.field), data.lambda);
}

namespace {

bool in_wall(const Circuit& c, const fq::Field& F, const std::vector<Raw>& v) {
  Raw s = 0;
  for (std::size_t j = 0; j < v.size(); ++j) s = F.add(s, F.mul(F.from_int(c.normal[j]), v[j]));
  return s == 0;
}

// Realizing point for a wall violation: z_i w_i solves sum c_i iota^* e_i = lambda
// on the complement; zero products take the sign of a rational expansion of alpha.
std::optional<PhasePoint> wall_witness(const HypertoricData& data, const Subset& I) {
  const auto& t = data.torus;
  const auto Ic = complement(I, static_cast<std::size_t>(t.n));
  const auto m = reduce_columns(t, Ic, data.field);
  std::optional<std::vector<Raw>> c;
  if (Ic.empty()) {
    if (std::any_of(data.lambda.begin(), data.lambda.end(), [](Raw r) { return r != 0; })) return std::nullopt;
    c = std::vector<Raw>{};
  } else {
    c = linalg::solve(m, data.lambda);
  }
  if (!c) return std::nullopt;
  const auto a = rational_solve(columns_of(t, Ic), data.alpha);
  PhasePoint pt{data.field, std::vector<Raw>(static_cast<std::size_t>(t.n), 0),
                std::vector<Raw>(static_cast<std::size_t>(t.n), 0)};
  for (std::size_t r = 0; r < Ic.size(); ++r) {
    const auto i = Ic[r];
    if ((*c)[r] != 0) {
      pt.z[i] = (*c)[r];
      pt.w[i] = 1;
    } else if (a && (*a)[r] < 0) {
      pt.w[i] = 1;
    } else {
      pt.z[i] = 1;
    }
  }
  return pt;
}

}  // namespace

FreenessReport freeness_report(const HypertoricData& data) {
  const auto& t = data.torus;
  require_combinatorial_n(t.n);
  const auto& F = *data.field;
  FreenessReport r;
  r.circuits = circuits_and_walls(data);
  const auto da = data.d_alpha();
  for (const auto& c : r.circuits) {
    const bool alpha_in = in_wall(c, F, da);
    if (alpha_in && in_wall(c, F, data.lambda)) {
      r.violating_walls.push_back(c.I);
      if (auto w = wall_witness(data, c.I)) r.witnesses.push_back(std::move(*w));
    }
    if (alpha_in && dot(c.normal, data.alpha) != 0) r.interference.push_back(c.I);
  }
  r.finite_stabilizers = r.violating_walls.empty();
  const auto n = static_cast<std::size_t>(t.n);
  for (std::size_t size = 0; size <= n; ++size)
    for (const auto& I : subsets_of_size(n, size))
      if (realizable(data, I)) {
        r.q_alpha_lambda.push_back(I);
        if (!linalg::extends_to_z_basis(rows_of_A(t, I)).extends) r.non_basis.push_back(I);
      }
  r.free = r.finite_stabilizers && r.non_basis.empty();
  return r;
}

PolytopeReport polytope_P(const HypertoricData& data) {
  const auto& t = data.torus;
  PolytopeReport r;
  for (const auto& c : circuits_and_walls(data)) {
    std::int64_t N = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(t.n); ++i) N += std::abs(dot(c.normal, t.weight(i)));
    r.circuits.push_back(c.I);
    r.N_I.push_back(N);
    r.N = std::max(r.N, N);
    r.P.push_back({c.normal, N});
  }
  r.exceeds_p = r.N > data.field->characteristic();
  return r;
}

}  // namespace frobsplit::hypertoric
