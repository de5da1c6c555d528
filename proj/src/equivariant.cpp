#include "frobsplit/equivariant.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "frobsplit/errors.hpp"
#include "frobsplit/json_io.hpp"

namespace frobsplit::equivariant {

namespace {

std::size_t power(std::int64_t p, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(p);
  return r;
}

int mod(std::int64_t v, std::int64_t p) { return static_cast<int>(((v % p) + p) % p); }

std::size_t residue_code(const Residue& r, std::int64_t p) {
  std::size_t code = 0;
  for (int v : r) code = code * static_cast<std::size_t>(p) + static_cast<std::size_t>(v);
  return code;
}

void require_compatible(const TorusData& torus, const PointTriple& pt) {
  if (torus.n != pt.n) throw std::invalid_argument("torus and point have different n");
}

std::shared_ptr<const ReducedWeylAlgebra> algebra_at(const PointTriple& pt) {
  return std::make_shared<const ReducedWeylAlgebra>(pt.field, pt.p(), pt.n, pt.b, pt.omega_p);
}

std::size_t euler_label(const ReducedWeylAlgebra& alg, int i) {
  const std::size_t idx = power(alg.p(), alg.n() - 1 - i);
  return alg.label(idx, idx);
}

Sparse unit(std::size_t label) { return {{label, 1}}; }

Sparse add_constant(Sparse v, const fq::Field& F, Raw c) {
  if (c == 0) return v;
  auto it = std::find_if(v.begin(), v.end(), [](const auto& t) { return t.first == 0; });
  if (it == v.end()) {
    v.insert(v.begin(), {0, c});
  } else {
    it->second = F.add(it->second, c);
    if (it->second == 0) v.erase(it);
  }
  return v;
}

BlockQuotient make_block(const ReducedWeylAlgebra& alg, const Residue& r, const std::vector<Sparse>& relations) {
  BlockQuotient blk;
  blk.residue = r;
  blk.labels = labels_of_residue(alg, r);
  const std::size_t N = blk.labels.size();
  FieldMatrix M(alg.field(), relations.size(), N);
  for (std::size_t row = 0; row < relations.size(); ++row)
    for (auto [label, coef] : relations[row]) {
      if (residue(alg, label) != r) throw std::logic_error("relation leaves its weight block");
      M(row, label % alg.half_dim()) = coef;
    }
  auto ech = linalg::rref(std::move(M));
  const std::size_t rank = ech.pivots.size();
  FieldMatrix R(alg.field(), rank, N);
  for (std::size_t i = 0; i < rank; ++i) std::copy(ech.reduced.row(i).begin(), ech.reduced.row(i).end(), R.row(i).begin());
  blk.relations = {std::move(R), std::move(ech.pivots)};
  std::vector<bool> pivot(N, false);
  for (auto c : blk.relations.pivots) pivot[c] = true;
  for (std::size_t j = 0; j < N; ++j)
    if (!pivot[j]) blk.free.push_back(j);
  return blk;
}

// Blocks indexed by residue code, with offsets into the concatenated basis.
struct BlockIndex {
  std::map<std::size_t, std::size_t> block_of;  // residue code -> block
  std::vector<std::size_t> offset;

  void build(const std::vector<BlockQuotient>& blocks, std::int64_t p) {
    std::size_t off = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      block_of[residue_code(blocks[b].residue, p)] = b;
      offset.push_back(off);
      off += blocks[b].dim();
    }
  }
};

std::vector<Raw> global_coordinates(const ReducedWeylAlgebra& alg, const std::vector<BlockQuotient>& blocks,
                                    std::size_t dim, const Sparse& v) {
  BlockIndex idx;
  idx.build(blocks, alg.p());
  std::map<std::size_t, Sparse> parts;
  for (const auto& t : v) parts[residue_code(residue(alg, t.first), alg.p())].push_back(t);
  std::vector<Raw> out(dim, 0);
  for (const auto& [code, part] : parts) {
    auto it = idx.block_of.find(code);
    if (it == idx.block_of.end()) throw std::invalid_argument("element is not K[p]-invariant");
    const auto local = blocks[it->second].coordinates(part);
    std::copy(local.begin(), local.end(), out.begin() + static_cast<std::ptrdiff_t>(idx.offset[it->second]));
  }
  return out;
}

std::size_t global_label(const std::vector<BlockQuotient>& blocks, std::size_t i) {
  for (const auto& b : blocks) {
    if (i < b.dim()) return b.labels[b.free[i]];
    i -= b.dim();
  }
  throw std::out_of_range("basis index out of range");
}

std::vector<BlockQuotient> eta_blocks(const ReducedWeylAlgebra& alg, const std::vector<Raw>& c,
                                      const std::vector<Residue>& residues) {
  const auto& F = *alg.field();
  std::vector<Sparse> shifted;
  for (int k = 0; k < alg.n(); ++k)
    shifted.push_back(add_constant(unit(euler_label(alg, k)), F, F.neg(c[static_cast<std::size_t>(k)])));
  std::vector<BlockQuotient> blocks;
  for (const auto& r : residues) {
    std::vector<Sparse> rel;
    for (auto u : labels_of_residue(alg, r))
      for (const auto& s : shifted) rel.push_back(alg.multiply(unit(u), s));
    blocks.push_back(make_block(alg, r, rel));
  }
  return blocks;
}

std::vector<Residue> all_residues(std::int64_t p, int n) {
  std::vector<Residue> out;
  Residue r(static_cast<std::size_t>(n), 0);
  for (std::size_t code = 0; code < power(p, n); ++code) {
    std::size_t c = code;
    for (std::size_t j = r.size(); j-- > 0; c /= static_cast<std::size_t>(p))
      r[j] = static_cast<int>(c % static_cast<std::size_t>(p));
    out.push_back(r);
  }
  return out;
}

InvariantDims dims_of(const TorusData& torus, const ReducedWeylAlgebra& alg, const NuReduction& nu,
                      const EtaInvariants& eta) {
  InvariantDims d;
  const std::int64_t p = alg.p();
  for (std::size_t u = 0; u < alg.dim(); ++u) d.zeta += kp_invariant(torus, alg, u);
  d.nu = nu.dim;
  d.eta = eta.dim;
  d.expected_zeta = power(p, torus.n + torus.h);
  d.expected_nu = power(p, 2 * torus.h);
  d.expected_eta = power(p, torus.h);
  for (const auto& b : eta_blocks(alg, eta.c, all_residues(p, alg.n()))) d.eta_total += b.dim();
  return d;
}

}  // namespace

IntVec weight(const ReducedWeylAlgebra& alg, std::size_t label) {
  const auto I = alg.exps_i(label), J = alg.exps_j(label);
  IntVec w(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) w[i] = I[i] - J[i];
  return w;
}

Residue residue(const ReducedWeylAlgebra& alg, std::size_t label) {
  const auto w = weight(alg, label);
  Residue r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = mod(w[i], alg.p());
  return r;
}

bool kp_invariant(const TorusData& torus, const ReducedWeylAlgebra& alg, std::size_t label) {
  const auto w = weight(alg, label);
  for (std::size_t j = 0; j < static_cast<std::size_t>(torus.k); ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += torus.B(j, i).get_si() * w[i];
    if (mod(s, alg.p()) != 0) return false;
  }
  return true;
}

std::vector<Residue> invariant_residues(const TorusData& torus, std::int64_t p) {
  std::vector<Residue> out;
  for (auto& r : all_residues(p, torus.n)) {
    bool inv = true;
    for (std::size_t j = 0; j < static_cast<std::size_t>(torus.k) && inv; ++j) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < r.size(); ++i) s += torus.B(j, i).get_si() * r[i];
      inv = mod(s, p) == 0;
    }
    if (inv) out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::size_t> labels_of_residue(const ReducedWeylAlgebra& alg, const Residue& r) {
  const auto P = static_cast<std::size_t>(alg.p());
  const auto n = static_cast<std::size_t>(alg.n());
  std::vector<std::size_t> out;
  out.reserve(alg.half_dim());
  for (std::size_t j_index = 0; j_index < alg.half_dim(); ++j_index) {
    std::size_t i_index = 0, c = j_index, scale = 1;
    for (std::size_t k = n; k-- > 0; c /= P, scale *= P)
      i_index += ((c % P + static_cast<std::size_t>(r[k])) % P) * scale;
    out.push_back(alg.label(i_index, j_index));
  }
  return out;
}

std::vector<Raw> BlockQuotient::coordinates(const Sparse& v) const {
  const auto& R = relations.reduced;
  const auto& F = *R.field();
  const std::size_t N = labels.size();
  std::vector<Raw> dense(N, 0);
  for (auto [label, coef] : v) {
    const std::size_t pos = label % N;
    if (labels[pos] != label) throw std::invalid_argument("element leaves the weight block");
    dense[pos] = F.add(dense[pos], coef);
  }
  std::vector<Raw> out(free.size(), 0);
  for (std::size_t jj = 0; jj < free.size(); ++jj) {
    const std::size_t j = free[jj];
    Raw s = dense[j];
    for (std::size_t r = 0; r < relations.pivots.size(); ++r) {
      const Raw y = dense[relations.pivots[r]];
      if (y != 0 && R(r, j) != 0) s = F.sub(s, F.mul(y, R(r, j)));
    }
    out[jj] = s;
  }
  return out;
}

std::size_t NuReduction::basis_label(std::size_t i) const { return global_label(blocks, i); }

std::vector<Raw> NuReduction::coordinates(const Sparse& v) const { return global_coordinates(*alg, blocks, dim, v); }

std::vector<Raw> NuReduction::multiply(std::size_t i, std::size_t j) const {
  return coordinates(alg->multiply(unit(basis_label(i)), unit(basis_label(j))));
}

std::size_t EtaInvariants::basis_label(std::size_t i) const { return global_label(blocks, i); }

FieldMatrix EtaInvariants::action(const Sparse& u) const {
  FieldMatrix A(alg->field(), dim, dim);
  for (std::size_t e = 0; e < dim; ++e) {
    const auto col = global_coordinates(*alg, blocks, dim, alg->multiply(u, unit(basis_label(e))));
    for (std::size_t r = 0; r < dim; ++r) A(r, e) = col[r];
  }
  return A;
}

std::vector<Raw> natural_lambda(const TorusData& torus, const PointTriple& pt) {
  require_compatible(torus, pt);
  const auto& F = *pt.field;
  std::vector<Raw> lam(static_cast<std::size_t>(torus.k), 0);
  for (std::size_t j = 0; j < lam.size(); ++j)
    for (std::size_t i = 0; i < static_cast<std::size_t>(torus.n); ++i)
      lam[j] = F.add(lam[j], F.mul(F.from_int(torus.B(j, i).get_si()), pt.c[i]));
  return lam;
}

NuReduction build_nu_reduction(const HypertoricData& data, const PointTriple& pt, const std::vector<Raw>& lambda) {
  const auto& torus = data.torus;
  require_compatible(torus, pt);
  if (lambda.size() != static_cast<std::size_t>(torus.k)) throw std::invalid_argument("lambda has the wrong length");
  const auto& F = *pt.field;
  NuReduction nu;
  nu.alg = algebra_at(pt);
  nu.lambda = lambda;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    Raw mu = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(torus.n); ++i)
      mu = F.add(mu, F.mul(F.from_int(torus.B(j, i).get_si()), F.mul(pt.b[i], pt.omega_p[i])));
    nu.as_lambda.push_back(F.sub(F.frobenius(lambda[j]), lambda[j]));
    if (nu.as_lambda.back() != mu) throw std::invalid_argument("lambda inconsistent with the point");

    Sparse g;
    for (int i = 0; i < torus.n; ++i) {
      const Raw coef = F.from_int(torus.B(j, static_cast<std::size_t>(i)).get_si());
      if (coef != 0) g.emplace_back(euler_label(*nu.alg, i), coef);
    }
    std::sort(g.begin(), g.end());
    nu.generators.push_back(add_constant(std::move(g), F, F.neg(lambda[j])));
  }
  for (const auto& r : invariant_residues(torus, pt.p())) {
    std::vector<Sparse> rel;
    for (auto u : labels_of_residue(*nu.alg, r))
      for (const auto& g : nu.generators) rel.push_back(nu.alg->multiply(unit(u), g));
    nu.blocks.push_back(make_block(*nu.alg, r, rel));
    nu.dim += nu.blocks.back().dim();
  }
  return nu;
}

EtaInvariants build_eta_invariants(const HypertoricData& data, const PointTriple& pt) {
  require_compatible(data.torus, pt);
  EtaInvariants eta;
  eta.alg = algebra_at(pt);
  eta.c = pt.c;
  eta.blocks = eta_blocks(*eta.alg, pt.c, invariant_residues(data.torus, pt.p()));
  for (const auto& b : eta.blocks) eta.dim += b.dim();
  return eta;
}

InvariantDims kp_invariant_dims_compute(const HypertoricData& data, const PointTriple& pt) {
  const auto nu = build_nu_reduction(data, pt, natural_lambda(data.torus, pt));
  const auto eta = build_eta_invariants(data, pt);
  return dims_of(data.torus, *nu.alg, nu, eta);
}

InvariantDims kp_invariant_dims(const HypertoricData& data, const PointTriple& pt) {
  auto d = kp_invariant_dims_compute(data, pt);
  if (!d.pass()) {
    nlohmann::json w;
    w["data"] = io::to_json(data);
    w["point"] = io::to_json(pt);
    w["dims"] = {d.zeta, d.nu, d.eta};
    w["expected_dims"] = {d.expected_zeta, d.expected_nu, d.expected_eta};
    throw CounterexampleError("K[p]-invariant dimensions differ from (p^(n+h), p^(2h), p^h) at " + pt.to_string(),
                              std::move(w));
  }
  return d;
}

std::string to_string(ClosedOrbitMode mode) {
  return mode == ClosedOrbitMode::asserted ? "asserted" : "1ps-checked";
}

std::optional<IntVec> destabilizing_one_ps(const HypertoricData& data, const PointTriple& pt, int bound) {
  const auto& torus = data.torus;
  require_compatible(torus, pt);
  const auto k = static_cast<std::size_t>(torus.k), n = static_cast<std::size_t>(torus.n);
  if (k == 0) return std::nullopt;
  IntVec nu(k, -bound);
  while (true) {
    if (std::any_of(nu.begin(), nu.end(), [](std::int64_t v) { return v != 0; })) {
      hypertoric::PhasePoint limit{pt.field, pt.b, pt.omega_p};
      bool exists = true, moves = false;
      for (std::size_t i = 0; i < n && exists; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < k; ++j) s += nu[j] * torus.B(j, i).get_si();
        if (s > 0 && limit.z[i] != 0) limit.z[i] = 0, moves = true;
        if (s < 0 && limit.w[i] != 0) limit.w[i] = 0, moves = true;
        // t^s z_i with s < 0 (or t^-s w_i with s > 0) diverges
        if ((s < 0 && pt.b[i] != 0) || (s > 0 && pt.omega_p[i] != 0)) exists = false;
      }
      if (exists && moves && hypertoric::is_semistable(data, limit)) return nu;
    }
    std::size_t j = 0;
    while (j < k && nu[j] == bound) nu[j++] = -bound;
    if (j == k) return std::nullopt;
    ++nu[j];
  }
}

HypertoricAzumayaCertificate azumaya_hypertoric_check(const HypertoricData& data, const PointTriple& pt,
                                                      std::optional<std::vector<Raw>> lambda, ClosedOrbitMode mode) {
  const auto& torus = data.torus;
  require_compatible(torus, pt);
  const auto natural = natural_lambda(torus, pt);
  if (lambda && *lambda != natural) throw std::invalid_argument("lambda must equal B c for the chosen point");
  if (mode == ClosedOrbitMode::one_ps_checked && destabilizing_one_ps(data, pt))
    throw std::invalid_argument("orbit not closed");

  HypertoricAzumayaCertificate cert{data, pt, natural, {}, 0, 0, false, mode, false};
  const auto nu = build_nu_reduction(data, pt, natural);
  const auto eta = build_eta_invariants(data, pt);
  cert.dims = dims_of(torus, *nu.alg, nu, eta);
  cert.expected_rank = cert.dims.expected_nu;

  cert.generators_act_trivially = true;
  for (const auto& g : nu.generators) cert.generators_act_trivially = cert.generators_act_trivially && eta.action(g).is_zero();

  FieldMatrix action(pt.field, nu.dim, eta.dim * eta.dim);
  for (std::size_t i = 0; i < nu.dim; ++i) {
    const auto A = eta.action(unit(nu.basis_label(i)));
    std::copy(A.data().begin(), A.data().end(), action.row(i).begin());
  }
  cert.rank = linalg::rank(action);
  cert.pass = cert.dims.pass() && cert.generators_act_trivially && cert.rank == cert.expected_rank;
  return cert;
}

}  // namespace frobsplit::equivariant
