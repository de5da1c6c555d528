#pragma once

// Torus data K ⊂ T = G_m^n, the hyperplane arrangement in h^*, moment maps,
// semistability and stabilizer criteria, circuits, walls, freeness and the
// bound N with its polytope P.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frobsplit/fq.hpp"
#include "frobsplit/linalg.hpp"

namespace frobsplit::hypertoric {

using fq::FieldPtr;
using fq::Raw;
using linalg::IntMatrix;
using IntVec = std::vector<std::int64_t>;
using Subset = std::vector<std::size_t>;  // sorted 0-based coordinate indices

/// Largest n accepted by the subset enumerations.
inline constexpr int max_combinatorial_n = 12;

struct TorusData {
  int n = 0, k = 0, h = 0;
  IntMatrix B;  // k x n, rows a basis of X_*(K)
  IntMatrix Q;  // h x n, rows a basis of ker B in Hermite normal form; column i is A_i

  /// iota^* chi_i^vee = column i of B.
  IntVec weight(std::size_t i) const;
  /// A_i = column i of Q.
  IntVec A(std::size_t i) const;
};

/// Throws std::invalid_argument("K is not a subtorus with torus quotient") when
/// the rows of B do not extend to a Z-basis.
TorusData build_torus_data(const IntMatrix& B, int n);

struct HypertoricData {
  TorusData torus;
  IntVec alpha;  // in X^*(K) = Z^k
  FieldPtr field;
  std::vector<Raw> lambda;       // in k^*, length k
  std::vector<Raw> lambda_lift;  // in t^*, length n, B lambda_lift = lambda

  /// alpha reduced into the field.
  std::vector<Raw> d_alpha() const;
};

/// Lift of lambda supported on the pivot columns of B mod p.  Throws
/// std::domain_error when B loses rank mod p.
std::vector<Raw> lift_lambda(const TorusData& torus, const FieldPtr& field, const std::vector<Raw>& lambda);
/// Validates lengths and, when a lift is supplied, B lift = lambda.
HypertoricData make_data(TorusData torus, IntVec alpha, FieldPtr field, std::vector<Raw> lambda,
                         std::optional<std::vector<Raw>> lift = std::nullopt);

struct Hyperplane {
  std::vector<Raw> normal;  // a_i in h over the field
  Raw offset = 0;           // lambda_lift_i
};

struct Arrangement {
  FieldPtr field;
  int h = 0;
  std::vector<Hyperplane> hyperplanes;
};

Arrangement arrangement(const HypertoricData& data);

struct ArrangementClass {
  bool simple = false, smooth = false;
  std::optional<Subset> meeting;     // h+1 hyperplanes with a common point
  std::optional<Subset> non_basis;   // h meeting hyperplanes whose A_i are not a Z-basis
};

/// simple: no h+1 hyperplanes meet; smooth: simple and every h meeting
/// hyperplanes have {A_i} a Z-basis of Z^h.
ArrangementClass classify_arrangement(const HypertoricData& data);

struct PhasePoint {
  FieldPtr field;
  std::vector<Raw> z, w;

  /// {i : z_i = w_i = 0}
  Subset vanishing() const;
};

/// dim(t_I ∩ k) over the field, I the vanishing set.
std::size_t stabilizer_dim(const HypertoricData& data, const PhasePoint& pt);
/// {A_i : i in I} extends to a Z-basis of Z^h.
bool stabilizer_trivial(const HypertoricData& data, const PhasePoint& pt);

/// +iota^* chi_i^vee for z_i != 0 and -iota^* chi_i^vee for w_i != 0.
std::vector<IntVec> semistability_generators(const TorusData& torus, const PhasePoint& pt);
/// target in the rational cone spanned by the generators (exact simplex).
bool in_rational_cone(const std::vector<IntVec>& generators, const IntVec& target);
/// target in the monoid N·generators (exact, breadth-first search in the box
/// given by the Steinitz bound).  Throws std::length_error past 4e6 states.
bool in_monoid(const std::vector<IntVec>& generators, const IntVec& target);

/// Some alpha^m-semi-invariant monomial is nonzero at pt, m > 0.
bool is_semistable(const HypertoricData& data, const PhasePoint& pt);
/// alpha itself (m = 1) is reached by a nonvanishing monomial.
bool alpha_in_monoid(const HypertoricData& data, const PhasePoint& pt);

/// B (z_i w_i)_i
std::vector<Raw> moment_K(const TorusData& torus, const PhasePoint& pt);
/// The v in h^* with <v, a_i> = lambda_lift_i - z_i w_i for all i; v lies on
/// H_i exactly when z_i w_i = 0.  Throws std::invalid_argument("point not on
/// mu^{-1}(lambda)") when moment_K(pt) != lambda.
std::vector<Raw> moment_H(const HypertoricData& data, const PhasePoint& pt);

struct Circuit {
  Subset I;
  IntVec normal;             // n_I in X_*(K) = Z^k, primitive
  bool sign_from_alpha = true;  // false: <n_I, alpha> = 0, lexicographic sign
  std::vector<std::vector<Raw>> wall;  // basis of W_I in k^*, k - 1 vectors
};

/// Minimal I with dim_Q(k ∩ t_I) = 1, in lexicographic order of I.
std::vector<Circuit> circuits_and_walls(const HypertoricData& data);

struct FreenessReport {
  bool finite_stabilizers = false, free = false;
  std::vector<Circuit> circuits;
  std::vector<Subset> violating_walls;      // circuits with (d alpha, lambda) in W_I x W_I
  std::vector<Subset> q_alpha_lambda;       // realizable vanishing sets
  std::vector<Subset> non_basis;            // members of Q_{alpha,lambda} failing the basis test
  std::vector<PhasePoint> witnesses;        // realizing points for violating walls
  std::vector<Subset> interference;         // walls with d alpha in W_I but <n_I, alpha> != 0
};

/// Q_{alpha,lambda}: I is realizable iff alpha lies in the rational span and
/// lambda in the field span of {iota^* chi_i^vee : i not in I}.
bool realizable(const HypertoricData& data, const Subset& I);
FreenessReport freeness_report(const HypertoricData& data);

struct Inequality {
  IntVec normal;  // |<normal, chi>| <= bound
  std::int64_t bound = 0;
};

struct PolytopeReport {
  std::vector<Subset> circuits;
  IntVec N_I;
  std::int64_t N = 0;
  std::vector<Inequality> P;
  bool exceeds_p = false;  // N > p
};

PolytopeReport polytope_P(const HypertoricData& data);

/// All subsets of {0..n-1} of the given size, lexicographic.
std::vector<Subset> subsets_of_size(std::size_t n, std::size_t size);

}  // namespace frobsplit::hypertoric
