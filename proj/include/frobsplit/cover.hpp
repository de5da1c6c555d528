#pragma once

// The Artin-Schreier cover of T^*A^n: fibers over Frobenius-twisted points,
// the coordinate AS map and the Cartesian-square check against b_i omega_i.

#include <vector>

#include "frobsplit/fq.hpp"
#include "frobsplit/weyl.hpp"

namespace frobsplit::cover {

using fq::FieldPtr;
using fq::Raw;

struct EtaleFiber {
  FieldPtr base;                       // field of zeta
  std::vector<Raw> b, omega_p;         // zeta, in base
  FieldPtr field;                      // base or its degree-p extension
  std::vector<std::vector<Raw>> points;  // all p^n c-vectors over field

  int n() const noexcept { return static_cast<int>(b.size()); }
  /// b and omega_p pushed into field.
  std::vector<Raw> b_in_field() const;
  std::vector<Raw> omega_in_field() const;
  /// The linked point (zeta, c) for points[i], over field.
  weyl::PointTriple triple(std::size_t i) const;
};

/// Solves c_i^p - c_i = b_i omega_i for every i in one common field and lists
/// all p^n combinations, ordered lexicographically by root index (roots
/// sorted by encoding).  Throws std::logic_error on repeated or wrong roots.
EtaleFiber fiber_over(const FieldPtr& base, const std::vector<Raw>& b, const std::vector<Raw>& omega_p);

/// c_i -> c_i^p - c_i.
std::vector<Raw> as_map(const fq::Field& field, const std::vector<Raw>& c);
/// mu^(1)(zeta) = (b_i omega_i)_i.
std::vector<Raw> frobenius_moment(const fq::Field& field, const std::vector<Raw>& b, const std::vector<Raw>& omega_p);

/// Every fiber point shifted by every vector of F_p^n stays in the fiber.
bool is_torsor(const EtaleFiber& fiber);

struct CartesianReport {
  bool pass = false;
  std::size_t fiber_size = 0, preimage_size = 0;
  std::vector<std::vector<Raw>> missing, extra;  // preimage minus fiber, fiber minus preimage
};

/// Compares the fiber with {c : as_map(c) = mu^(1)(zeta)} found by exhaustive
/// search of the fiber's field, coordinate by coordinate.
CartesianReport cartesian_check(const FieldPtr& base, const std::vector<Raw>& b, const std::vector<Raw>& omega_p);

/// (x_k d_k)^p - x_k d_k = x_k^p d_k^p in A_n over F_p for every k.
bool euler_relation_check(std::int64_t p, int n);

}  // namespace frobsplit::cover
