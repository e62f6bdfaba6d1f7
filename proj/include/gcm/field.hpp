#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gcm {

/// An element of GF(p^n) in its canonical integer encoding
/// sum_k c_k * p^k, where c_0..c_{n-1} are the polynomial-basis coefficients.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint64_t code) : code_(code) {}

  constexpr std::uint64_t code() const { return code_; }
  constexpr bool is_zero() const { return code_ == 0; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  std::uint64_t code_ = 0;
};

struct GeneratorChoice {
  /// Explicit generator in coefficient form (constant term first).
  std::optional<std::vector<std::uint64_t>> coeffs;
  /// Generator given as default_generator^k with gcd(k, q-1) = 1.
  std::optional<std::uint64_t> power_of_default;
};

struct FieldOptions {
  /// Fields up to this order get full exp/log tables; larger ones use
  /// polynomial arithmetic and baby-step giant-step logarithms.
  std::uint64_t table_limit = std::uint64_t{1} << 22;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// GF(p^n) with a pinned monic irreducible modulus and primitive element.
/// Immutable after construction.
class Field {
 public:
  /// Builds and validates a field. Throws Error(NotPrime | InvalidModulus |
  /// ReducibleModulus | NotPrimitive).
  static FieldPtr make(std::uint64_t p, unsigned n,
                       std::optional<std::vector<std::uint64_t>> modulus = std::nullopt,
                       std::optional<GeneratorChoice> generator = std::nullopt,
                       FieldOptions options = {});

  std::uint64_t p() const { return p_; }
  unsigned n() const { return n_; }
  std::uint64_t q() const { return q_; }
  /// Field identifier: "P" or "P^N".
  std::string id() const;
  /// Monic modulus, constant term first (length n + 1).
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  FieldElement generator() const { return generator_; }
  /// Distinct primes dividing q - 1.
  const std::vector<std::uint64_t>& order_factors() const { return order_factors_; }
  bool has_log_table() const { return !log_.empty(); }

  FieldElement zero() const { return FieldElement{0}; }
  FieldElement one() const { return FieldElement{1}; }
  bool contains(FieldElement x) const { return x.code() < q_; }

  /// Prime-subfield element v mod p (negative v allowed).
  FieldElement from_int(std::int64_t v) const;
  FieldElement from_coeffs(std::span<const std::uint64_t> coeffs) const;
  std::vector<std::uint64_t> coeffs(FieldElement x) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement div(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  /// Any integer exponent; negative exponents require a nonzero base.
  /// 0^0 is 1.
  FieldElement pow(FieldElement a, std::int64_t e) const;

  /// generator^k for any integer k.
  FieldElement exp(std::int64_t k) const;
  /// Discrete logarithm base the generator, in [0, q-2]. Throws ZeroArgument.
  std::uint64_t log(FieldElement x) const;

  /// Multiplicative order of a nonzero element.
  std::uint64_t order_of(FieldElement x) const;
  /// True when x lies in the subfield of order sub_q (x^sub_q == x).
  bool in_subfield(FieldElement x, std::uint64_t sub_q) const;

 private:
  Field() = default;

  FieldElement slow_mul(FieldElement a, FieldElement b) const;
  FieldElement slow_pow(FieldElement a, std::uint64_t e) const;
  void build_tables();

  std::uint64_t p_ = 0;
  unsigned n_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> modulus_;
  FieldElement generator_;
  std::vector<std::uint64_t> order_factors_;

  std::vector<std::uint32_t> exp_;  // length 2(q-1)
  std::vector<std::uint32_t> log_;  // length q

  // Baby steps for fields without tables.
  std::uint64_t bsgs_m_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> baby_;
  FieldElement giant_;
};

/// Parses "P" or "P^N" into (p, n). Throws SyntaxError.
std::pair<std::uint64_t, unsigned> parse_field_id(const std::string& text);

/// Default field for an identifier string.
FieldPtr make_field(const std::string& id);

}  // namespace gcm
