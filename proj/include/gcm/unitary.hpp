#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcm/cyclotomic.hpp"
#include "gcm/field.hpp"
#include "gcm/mto1.hpp"
#include "gcm/polynomial.hpp"

namespace gcm {

/// f(x) = x^r h(x^s) with ell * s = q - 1, and its reduction
/// g(x) = x^(r/d) h(x)^(s/d) on the order-ell subgroup U, d = gcd(r, s).
/// The unit form is the case F_{Q^2}, s = Q - 1, U = U_{Q+1}.
class WrappedMap {
 public:
  /// Unit form over F_{Q^2}. Throws RootOnUnitCircle, InvalidArgument.
  static WrappedMap unit_form(std::int64_t r, Polynomial h);
  /// General form with any ell dividing q - 1.
  static WrappedMap general(std::uint64_t ell, std::int64_t r, Polynomial h);

  const FieldPtr& field() const { return h_.field(); }
  const Polynomial& h() const { return h_; }
  const CyclicGroup& unit() const { return unit_; }
  bool is_unit_form() const { return unit_form_; }
  /// Q for the unit form, q otherwise.
  std::uint64_t base_q() const { return base_q_; }
  std::int64_t r() const { return r_; }
  std::uint64_t ell() const { return unit_.order(); }
  std::uint64_t s() const { return s_; }
  std::uint64_t d() const { return d_; }

  FieldElement eval(FieldElement x) const;
  /// g(x) for x in U.
  FieldElement reduce(FieldElement x) const;
  /// g(zeta^k) for k = 0..ell-1.
  std::vector<FieldElement> reduced_values() const;

 private:
  WrappedMap(Polynomial h, CyclicGroup unit) : h_(std::move(h)), unit_(std::move(unit)) {}
  void check_roots() const;

  Polynomial h_;
  CyclicGroup unit_;
  bool unit_form_ = false;
  std::uint64_t base_q_ = 0;
  std::int64_t r_ = 0;
  std::uint64_t s_ = 0;
  std::uint64_t d_ = 1;
};

/// Unit form from the base field size q; h must live over F_{q^2}.
WrappedMap make_wrapped(std::uint64_t q, std::int64_t r, const Polynomial& h);

/// The field F_{q^2} for a prime power q.
FieldPtr unit_field(std::uint64_t q);

/// Element symbols for unit-circle work: g, z = zeta and, when ell divides
/// Q + 1, e = zeta^((Q+1)/ell).
Symbols unit_symbols(const FieldPtr& ext, std::uint64_t ell = 0);

/// Branches lambda_i x^{e_i} on the cosets of the index-ell subgroup of U,
/// when g has that shape. Throws IndexNotDividingOrder.
std::optional<BranchMap> infer_monomial_branches(const CyclicGroup& unit,
                                                 const std::vector<FieldElement>& values,
                                                 std::uint64_t ell);
std::optional<BranchMap> infer_monomial_branches(const WrappedMap& wm, std::uint64_t ell);

enum class WrappedPath { Auto, Oracle, Psi };

/// m-to-1 on the multiplicative group of the field. The unit form requires
/// gcd(r, Q - 1) = 1 (GcdHypothesis). With ell unset, Auto picks the least
/// index admitting monomial branches with two branches or equal gcds.
CriterionVerdict criterion_wrapped(const WrappedMap& wm, std::uint64_t m,
                                   std::optional<std::uint64_t> ell = std::nullopt,
                                   WrappedPath path = WrappedPath::Auto);

enum class Family { B1, B2, B3, T4, T5, CBU, CB0, CTAB, CTA, CTKUV };
std::string to_string(Family f);
std::optional<Family> parse_family(const std::string& name);

struct FamilySpec {
  Family family = Family::B1;
  std::int64_t r = 1;
  FieldElement a;
  FieldElement b;
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::int64_t k = 1;
  std::uint64_t ell = 2;  // B1, B2, B3
};

struct FamilyInstance {
  WrappedMap map;
  /// false only when the corollary is silent for these parameters
  bool applicable = true;
  std::string note;
  /// the claimed branch structure: on F_{q^2}* for B1, B3, T4, T5 and on
  /// U_{q+1} otherwise
  BranchMap branches;
  /// predictions cover m in [1, m_max]
  std::uint64_t m_max = 0;
  std::vector<std::uint64_t> predicted;
};

/// Builds a family member over ext = F_{q^2}. Throws ConstraintViolated,
/// GcdHypothesis, RootOnUnitCircle.
FamilyInstance family_construct(const FieldPtr& ext, const FamilySpec& spec);

}  // namespace gcm
