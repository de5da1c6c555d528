#pragma once

// Weight grading of D_zeta by T[p], K[p]-invariant subspaces of D_zeta, D_nu
// and D_eta, and the point-level splitting check for the hypertoric reduction.
//
// Everything is computed on the monomial basis x^I d^J of D_zeta, where T[p]
// acts diagonally with weight (I - J) mod p.  Left ideals generated by weight-0
// elements are graded, so each quotient splits into weight blocks of p^n labels.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frobsplit/hypertoric.hpp"
#include "frobsplit/linalg.hpp"
#include "frobsplit/weyl.hpp"

namespace frobsplit::equivariant {

using fq::Raw;
using hypertoric::HypertoricData;
using hypertoric::IntVec;
using hypertoric::TorusData;
using linalg::FieldMatrix;
using weyl::PointTriple;
using weyl::ReducedWeylAlgebra;

/// Sparse element of D_zeta: (label, coefficient) pairs.
using Sparse = std::vector<std::pair<std::size_t, Raw>>;
/// Weight residue in (Z/p)^n.
using Residue = std::vector<int>;

/// I - J for the label x^I d^J.
IntVec weight(const ReducedWeylAlgebra& alg, std::size_t label);
/// (I - J) mod p.
Residue residue(const ReducedWeylAlgebra& alg, std::size_t label);
/// B (I - J) = 0 mod p.
bool kp_invariant(const TorusData& torus, const ReducedWeylAlgebra& alg, std::size_t label);
/// Residues r with B r = 0 mod p, in lexicographic order.
std::vector<Residue> invariant_residues(const TorusData& torus, std::int64_t p);
/// The p^n labels of weight r, ordered by the index of J.
std::vector<std::size_t> labels_of_residue(const ReducedWeylAlgebra& alg, const Residue& r);

/// A weight block of D_zeta modulo the span of some relations.
struct BlockQuotient {
  Residue residue;
  std::vector<std::size_t> labels;   // p^n labels of this weight
  linalg::Echelon relations;         // RREF over positions in `labels`, zero rows dropped
  std::vector<std::size_t> free;     // positions spanning the quotient

  std::size_t dim() const noexcept { return free.size(); }
  /// Quotient coordinates of a sparse element supported on this block.
  std::vector<Raw> coordinates(const Sparse& v) const;
};

/// D_nu^{K[p]}: the K[p]-invariant blocks of D_zeta modulo D_zeta^{K[p]} g_j,
/// with g_j = sum_i B_ji E_i - lambda_j.  The g_j are central in D_zeta^{K[p]},
/// so the quotient is an algebra.
struct NuReduction {
  std::shared_ptr<const ReducedWeylAlgebra> alg;
  std::vector<Raw> lambda, as_lambda;  // lambda and lambda^p - lambda
  std::vector<Sparse> generators;
  std::vector<BlockQuotient> blocks;
  std::size_t dim = 0;

  /// Label representing global basis vector i (blocks concatenated).
  std::size_t basis_label(std::size_t i) const;
  /// Coordinates of an invariant sparse element in the global basis.
  std::vector<Raw> coordinates(const Sparse& v) const;
  /// Product of global basis vectors i and j.
  std::vector<Raw> multiply(std::size_t i, std::size_t j) const;
};

/// D_eta = D_zeta / D_zeta (E_k - c_k) restricted to K[p]-invariant weights;
/// every weight block of D_eta is one-dimensional.
struct EtaInvariants {
  std::shared_ptr<const ReducedWeylAlgebra> alg;
  std::vector<Raw> c;
  std::vector<BlockQuotient> blocks;  // invariant residues
  std::size_t dim = 0;

  std::size_t basis_label(std::size_t i) const;
  /// Left multiplication by a K[p]-invariant element, dim x dim.
  FieldMatrix action(const Sparse& u) const;
};

struct InvariantDims {
  std::size_t zeta = 0, nu = 0, eta = 0;
  std::size_t expected_zeta = 0, expected_nu = 0, expected_eta = 0;
  std::size_t eta_total = 0;  // dim D_eta over all weights, p^n
  bool pass() const { return zeta == expected_zeta && nu == expected_nu && eta == expected_eta; }
};

/// lambda = B c, the value for which D_nu^{K[p]} acts on D_eta^{K[p]}.
std::vector<Raw> natural_lambda(const TorusData& torus, const PointTriple& pt);

/// Throws std::invalid_argument when lambda^p - lambda != B (b_i omega_i).
NuReduction build_nu_reduction(const HypertoricData& data, const PointTriple& pt, const std::vector<Raw>& lambda);
EtaInvariants build_eta_invariants(const HypertoricData& data, const PointTriple& pt);
/// Computes the three dimensions (lambda = B c); throws CounterexampleError
/// unless they are (p^{n+h}, p^{2h}, p^h).
InvariantDims kp_invariant_dims(const HypertoricData& data, const PointTriple& pt);
/// As kp_invariant_dims without the assertion.
InvariantDims kp_invariant_dims_compute(const HypertoricData& data, const PointTriple& pt);

enum class ClosedOrbitMode { asserted, one_ps_checked };
std::string to_string(ClosedOrbitMode mode);

/// A one-parameter subgroup nu of K, |nu_j| <= bound, for which lim_{t->0}
/// nu(t).(b, omega) exists, is alpha-semistable and has more vanishing
/// coordinates.  Such a nu shows the K-orbit is not closed.
std::optional<IntVec> destabilizing_one_ps(const HypertoricData& data, const PointTriple& pt, int bound = 3);

struct HypertoricAzumayaCertificate {
  HypertoricData data;
  PointTriple point;
  std::vector<Raw> lambda;
  InvariantDims dims;
  std::size_t expected_rank = 0;  // p^{2h}
  std::size_t rank = 0;           // D_nu^{K[p]} -> End(D_eta^{K[p]})
  bool generators_act_trivially = false;
  ClosedOrbitMode mode = ClosedOrbitMode::asserted;
  bool pass = false;
};

/// D_nu^{K[p]} -> End(D_eta^{K[p]}) is bijective.  lambda defaults to B c and
/// must equal it.  In one_ps_checked mode a destabilizing one-parameter
/// subgroup makes the call throw std::invalid_argument("orbit not closed").
HypertoricAzumayaCertificate azumaya_hypertoric_check(const HypertoricData& data, const PointTriple& pt,
                                                      std::optional<std::vector<Raw>> lambda = std::nullopt,
                                                      ClosedOrbitMode mode = ClosedOrbitMode::asserted);

}  // namespace frobsplit::equivariant
