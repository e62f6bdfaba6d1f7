#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcm/field.hpp"

namespace gcm {

/// Sparse polynomial over a finite field, kept reduced modulo x^q - x:
/// every exponent e >= q is folded to ((e - 1) mod (q - 1)) + 1.
class Polynomial {
 public:
  explicit Polynomial(FieldPtr field) : field_(std::move(field)) {}

  static Polynomial constant(FieldPtr field, FieldElement c);
  static Polynomial monomial(FieldPtr field, FieldElement c, std::uint64_t e);

  const FieldPtr& field() const { return field_; }
  /// Nonzero terms, exponent -> coefficient.
  const std::map<std::uint64_t, FieldElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Degree, or -1 for the zero polynomial.
  std::int64_t degree() const;
  FieldElement coeff(std::uint64_t e) const;
  /// Dense coefficients c_0..c_deg.
  std::vector<FieldElement> dense() const;

  void add_term(FieldElement c, std::uint64_t e);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial pow(std::uint64_t e) const;
  Polynomial scaled(FieldElement c) const;

  FieldElement eval(FieldElement x) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

 private:
  std::uint64_t reduce_exponent(std::uint64_t e) const;

  FieldPtr field_;
  std::map<std::uint64_t, FieldElement> terms_;
};

/// Named constants usable in element and polynomial text. `g` is always the
/// field generator; callers add `z`, `e` and the like as needed.
using Symbols = std::map<std::string, FieldElement>;

/// Parses an element expression: integers (reduced into the prime field),
/// symbols, [c0,c1,...], parentheses, + - * / and ^ with integer exponents.
/// Throws SyntaxError or CoefficientNotInField.
FieldElement parse_element(const std::string& text, const FieldPtr& field,
                           const Symbols& symbols = {});

/// Same grammar with the variable x; x may only carry non-negative exponents.
Polynomial parse_polynomial(const std::string& text, const FieldPtr& field,
                            const Symbols& symbols = {});

/// Prime fields: decimal in [0, p). Extension fields: "0" or "g^K".
std::string format_element(const FieldElement& x, const Field& field);

/// Human form, highest degree first, e.g. "x^10 + x^8 - x^4 + x^2".
/// Prime-field coefficients above p/2 print as negatives.
std::string format_polynomial(const Polynomial& f);

}  // namespace gcm
