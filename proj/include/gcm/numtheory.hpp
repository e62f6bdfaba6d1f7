#pragma once

// Integer helpers shared by the field and criteria code: residues, gcd/lcm,
// factorization, linear Diophantine equations and intersections of residue
// progressions modulo n.

#include <cstdint>
#include <optional>
#include <vector>

namespace gcm {

/// Least non-negative residue of a modulo n (n >= 1).
constexpr std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::uint64_t gcd(std::int64_t a, std::int64_t b);
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);

bool is_prime(std::uint64_t n);
/// Distinct prime divisors of n, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
/// All positive divisors of n, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n);

struct ExtendedGcd {
  std::int64_t g;  // non-negative
  std::int64_t x;
  std::int64_t y;  // a*x + b*y == g
};
ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b);

/// Inverse of a modulo n, or nullopt when gcd(a, n) != 1. n == 1 yields 0.
std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n);

/// A particular solution of a*x + b*y = c. The general solution is
/// (x0 + k*stride, y0 - k*(a/d)).
struct DiophantineSolution {
  std::int64_t x0;
  std::int64_t y0;
  std::int64_t stride;  // b/d
  std::int64_t d;       // gcd(a, b)
};

/// Solves a*x + b*y = c over the integers; nullopt iff gcd(a, b) does not
/// divide c. Requires (a, b) != (0, 0).
std::optional<DiophantineSolution> solve_diophantine(std::int64_t a, std::int64_t b,
                                                     std::int64_t c);

enum class ResidueRelationKind { Disjoint, Contained, Overlap };

/// Relation between A = {a*x mod n} and B = {(b*y + c) mod n}, with a | n and
/// b | n. When the sets meet, A ∩ B is the progression
/// {(a*x0 + t*lcm(a, b)) mod n : 0 <= t < n/lcm(a, b)}.
struct ResidueSetRelation {
  ResidueRelationKind kind;
  std::uint64_t d;
  std::int64_t x0;
  std::uint64_t lcm_ab;
  std::uint64_t n;
  std::uint64_t a;

  std::vector<std::uint64_t> elements() const;
};

ResidueSetRelation residue_progression_relation(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                                std::uint64_t n);

}  // namespace gcm
