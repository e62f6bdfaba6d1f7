#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcm/field.hpp"
#include "gcm/polynomial.hpp"

namespace gcm {

enum class GroupKind { Multiplicative, UnitCircle, Subgroup };

/// A cyclic subgroup of F_q* of order N with a chosen generator gamma.
/// Group logarithms come from the field logarithm: when gamma = xi^(c*j)
/// with c = (q-1)/N, log_gamma(x) = (log_xi(x)/c) * j^{-1} mod N.
class CyclicGroup {
 public:
  /// F_q* generated by the field generator.
  static CyclicGroup multiplicative(FieldPtr field);
  /// U_{Q+1} inside F_{Q^2}; default generator xi^(Q-1). Throws
  /// UnsupportedContext when the field degree is odd.
  static CyclicGroup unit_circle(FieldPtr field, std::optional<FieldElement> zeta = std::nullopt);
  /// Order-N subgroup, generated by `gamma` or by xi^((q-1)/N).
  static CyclicGroup subgroup(FieldPtr field, std::uint64_t order,
                              std::optional<FieldElement> gamma = std::nullopt);

  const FieldPtr& field() const { return field_; }
  GroupKind kind() const { return kind_; }
  std::uint64_t order() const { return order_; }
  FieldElement gamma() const { return gamma_; }
  /// Base field size Q for the unit circle (order Q + 1); 0 otherwise.
  std::uint64_t base_q() const { return base_q_; }
  bool is_full() const { return order_ + 1 == field_->q(); }

  bool contains(FieldElement x) const;
  /// Throws NotInGroup.
  std::uint64_t log(FieldElement x) const;
  FieldElement elem(std::int64_t k) const;
  /// All elements gamma^0, gamma^1, ...
  std::vector<FieldElement> elements() const;
  std::string label() const;

 private:
  FieldPtr field_;
  GroupKind kind_ = GroupKind::Multiplicative;
  std::uint64_t order_ = 0;
  FieldElement gamma_;
  std::uint64_t cofactor_ = 1;  // (q-1)/N
  std::uint64_t j_inv_ = 1;     // inverse of j mod N
  std::uint64_t base_q_ = 0;
};

/// The ell cosets C_i = gamma^i C_0 of the index-ell subgroup.
class CosetDecomposition {
 public:
  /// Throws IndexNotDividingOrder.
  CosetDecomposition(CyclicGroup group, std::uint64_t ell);

  const CyclicGroup& group() const { return group_; }
  std::uint64_t ell() const { return ell_; }
  std::uint64_t s() const { return s_; }
  /// gamma^s, a primitive ell-th root of unity.
  FieldElement omega() const { return omega_; }

  /// Throws NotInGroup.
  std::uint64_t coset_of(FieldElement x) const;
  /// Elements gamma^(k*ell + i), k = 0..s-1.
  std::vector<FieldElement> coset(std::uint64_t i) const;

 private:
  CyclicGroup group_;
  std::uint64_t ell_;
  std::uint64_t s_;
  FieldElement omega_;
};

struct Branch {
  FieldElement a;
  std::int64_t r = 0;          // as given
  std::uint64_t r_reduced = 0;  // r mod N
  std::uint64_t log_a = 0;     // group log of a
  std::uint64_t d = 0;         // gcd(r, s)
};

/// Piecewise monomial map x -> a_i x^{r_i} on C_i.
class BranchMap {
 public:
  /// Throws InvalidArgument (wrong branch count, zero constant) or NotInGroup.
  BranchMap(CosetDecomposition decomp, const std::vector<std::pair<FieldElement, std::int64_t>>& branches);

  const CosetDecomposition& decomp() const { return decomp_; }
  const CyclicGroup& group() const { return decomp_.group(); }
  const FieldPtr& field() const { return decomp_.group().field(); }
  std::uint64_t ell() const { return decomp_.ell(); }
  std::uint64_t s() const { return decomp_.s(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t i) const { return branches_.at(i); }

  FieldElement eval(FieldElement x) const;
  /// Group exponent of f(gamma^k).
  std::uint64_t image_exponent(std::uint64_t k) const;
  /// (i*r_i + log a_i) mod n.
  std::uint64_t phi(std::size_t i, std::uint64_t n) const;
  /// True when every d_i takes the same value.
  bool equal_gcds() const;
  std::string to_string() const;

 private:
  CosetDecomposition decomp_;
  std::vector<Branch> branches_;
};

/// Image of one branch: a progression inside C_target of size s/d.
struct BranchImage {
  std::uint64_t target_coset;
  std::uint64_t d;
  std::uint64_t size;
  std::uint64_t base_exponent;  // (i r_i + log a_i) mod N
  std::uint64_t step;           // ell * d
  std::vector<FieldElement> elements;  // sorted by code
};

BranchImage branch_image(const BranchMap& map, std::size_t i);

enum class RelationKind { Disjoint, ISubsetJ, JSubsetI, Equal, PartialOverlap };
std::string to_string(RelationKind kind);

struct BranchRelation {
  RelationKind kind;
  std::uint64_t d;     // gcd(d_i, d_j)
  std::uint64_t dbar;  // lcm(d_i, d_j)
  std::uint64_t c;     // (i r_i - j r_j + log(a_i/a_j)) mod N
  std::uint64_t abar;  // (d_j/d)^{-1} mod (d_i/d)
  std::uint64_t x0;    // abar * c / (ell d), meaningful when the images meet
  /// f_i(C_i) ∩ f_j(C_j) = { gamma^(base + ell*dbar*t) }.
  std::uint64_t base_exponent;
  std::uint64_t step;
  std::uint64_t count;
  std::vector<FieldElement> intersection;  // sorted by code
};

BranchRelation branch_relation(const BranchMap& map, std::size_t i, std::size_t j);

/// Single polynomial agreeing with the map on F_q* and vanishing at 0. With
/// scaled = false the result is ell times that polynomial. Throws
/// UnsupportedContext unless the group is all of F_q*.
Polynomial expand(const BranchMap& map, bool scaled = true);

/// Parses "a0:r0,a1:r1,..." with constants in element notation.
std::vector<std::pair<FieldElement, std::int64_t>> parse_branches(const std::string& text,
                                                                  const FieldPtr& field,
                                                                  const Symbols& symbols = {});

}  // namespace gcm
