#include "gcm/numtheory.hpp"

#include <algorithm>
#include <numeric>

#include "gcm/error.hpp"

namespace gcm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::InvalidModulus: return "InvalidModulus";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorKind::IndexNotDividingOrder: return "IndexNotDividingOrder";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::UnsupportedContext: return "UnsupportedContext";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::CoefficientNotInField: return "CoefficientNotInField";
    case ErrorKind::DomainElementOutsideField: return "DomainElementOutsideField";
    case ErrorKind::WrongIndex: return "WrongIndex";
    case ErrorKind::EvenQ: return "EvenQ";
    case ErrorKind::RootOnUnitCircle: return "RootOnUnitCircle";
    case ErrorKind::GcdHypothesis: return "GcdHypothesis";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
  }
  return "Unknown";
}

std::uint64_t gcd(std::int64_t a, std::int64_t b) {
  return static_cast<std::uint64_t>(std::gcd(a, b));
}

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f != 0) continue;
    out.push_back(f);
    while (n % f == 0) n /= f;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t f = 1; f * f <= n; ++f) {
    if (n % f != 0) continue;
    small.push_back(f);
    if (f != n / f) large.push_back(n / f);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exp >>= 1;
  }
  return result;
}

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t quotient = old_r / r;
    std::int64_t tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quotient * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n) {
  if (n == 1) return 0;
  auto [g, x, y] = extended_gcd(mod(a, n), n);
  (void)y;
  if (g != 1) return std::nullopt;
  return mod(x, n);
}

std::optional<DiophantineSolution> solve_diophantine(std::int64_t a, std::int64_t b,
                                                     std::int64_t c) {
  if (a == 0 && b == 0) throw Error(ErrorKind::InvalidArgument, "a and b are both zero");
  auto [d, x, y] = extended_gcd(a, b);
  if (c % d != 0) return std::nullopt;
  std::int64_t k = c / d;
  return DiophantineSolution{x * k, y * k, b / d, d};
}

std::vector<std::uint64_t> ResidueSetRelation::elements() const {
  std::vector<std::uint64_t> out;
  if (kind == ResidueRelationKind::Disjoint) return out;
  const auto sn = static_cast<std::int64_t>(n);
  for (std::uint64_t t = 0; t < n / lcm_ab; ++t)
    out.push_back(static_cast<std::uint64_t>(
        mod(static_cast<std::int64_t>(a) * x0 + static_cast<std::int64_t>(t * lcm_ab), sn)));
  std::sort(out.begin(), out.end());
  return out;
}

ResidueSetRelation residue_progression_relation(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                                std::uint64_t n) {
  if (a == 0 || b == 0 || n == 0 || n % a != 0 || n % b != 0)
    throw Error(ErrorKind::DivisibilityViolation, "require a | n and b | n with a, b >= 1");
  ResidueSetRelation rel{};
  rel.d = gcd(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
  rel.lcm_ab = lcm(a, b);
  rel.n = n;
  rel.a = a;
  if (c % rel.d != 0) {
    rel.kind = ResidueRelationKind::Disjoint;
    return rel;
  }
  const auto ad = static_cast<std::int64_t>(a / rel.d);
  const auto bd = static_cast<std::int64_t>(b / rel.d);
  const std::int64_t abar = *inverse_mod(ad, bd);
  rel.x0 = abar * static_cast<std::int64_t>(c / rel.d);
  rel.kind = (b % a == 0 && c % a == 0) ? ResidueRelationKind::Contained
                                        : ResidueRelationKind::Overlap;
  return rel;
}

}  // namespace gcm
