#include <set>

#include "doctest.h"
#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

using namespace gcm;

TEST_CASE("mod is the least non-negative residue") {
  CHECK(mod(-1, 13) == 12);
  CHECK(mod(26, 13) == 0);
  CHECK(mod(-13, 13) == 0);
}

TEST_CASE("divisors and prime factors") {
  CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(prime_factors(1023) == std::vector<std::uint64_t>{3, 11, 31});
  CHECK(prime_factors(1).empty());
}

TEST_CASE("diophantine examples") {
  auto s = solve_diophantine(4, 6, 2);
  REQUIRE(s);
  CHECK(4 * s->x0 + 6 * s->y0 == 2);
  CHECK(s->d == 2);
  CHECK(s->stride == 3);

  CHECK_FALSE(solve_diophantine(4, 6, 3));

  auto t = solve_diophantine(1, 0, 5);
  REQUIRE(t);
  CHECK(t->x0 == 5);
  CHECK(t->y0 == 0);
  CHECK(t->d == 1);

  CHECK_THROWS_AS(solve_diophantine(0, 0, 1), Error);
}

TEST_CASE("diophantine general solution property") {
  for (std::int64_t a = -12; a <= 12; ++a)
    for (std::int64_t b = -12; b <= 12; ++b) {
      if (a == 0 && b == 0) continue;
      for (std::int64_t c = -20; c <= 20; ++c) {
        auto s = solve_diophantine(a, b, c);
        const auto d = static_cast<std::int64_t>(gcd(a, b));
        CHECK(s.has_value() == (c % d == 0));
        if (!s) continue;
        for (std::int64_t k = -2; k <= 2; ++k)
          CHECK(a * (s->x0 + k * s->stride) + b * (s->y0 - k * (a / s->d)) == c);
      }
    }
}

TEST_CASE("residue relation examples") {
  auto r = residue_progression_relation(4, 6, 2, 12);
  CHECK(r.kind == ResidueRelationKind::Overlap);
  CHECK(r.elements() == std::vector<std::uint64_t>{8});
  CHECK(residue_progression_relation(2, 4, 2, 12).kind == ResidueRelationKind::Contained);
  CHECK(residue_progression_relation(4, 6, 3, 12).kind == ResidueRelationKind::Disjoint);
  CHECK_THROWS_AS(residue_progression_relation(5, 6, 3, 12), Error);
}

TEST_CASE("residue relation matches enumeration for n <= 60") {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t a : divisors(n))
      for (std::uint64_t b : divisors(n))
        for (std::uint64_t c = 0; c < n; ++c) {
          std::set<std::uint64_t> A, B, both;
          for (std::uint64_t x = 0; x < n; ++x) A.insert(a * x % n);
          for (std::uint64_t y = 0; y < n; ++y) B.insert((b * y + c) % n);
          for (auto v : A)
            if (B.count(v)) both.insert(v);
          auto rel = residue_progression_relation(a, b, c, n);
          auto got = rel.elements();
          CHECK(std::vector<std::uint64_t>(both.begin(), both.end()) == got);
          bool contained = std::includes(A.begin(), A.end(), B.begin(), B.end());
          CHECK((rel.kind == ResidueRelationKind::Disjoint) == both.empty());
          CHECK((rel.kind == ResidueRelationKind::Contained) == contained);
        }
}
