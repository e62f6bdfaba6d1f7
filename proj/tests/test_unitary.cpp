#include <random>

#include "doctest.h"
#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"
#include "gcm/unitary.hpp"

using namespace gcm;

namespace {

// valid m of f over F_{q^2}* restricted to [1, m_max]
std::vector<std::uint64_t> oracle_ms(const WrappedMap& wm, std::uint64_t m_max) {
  const FieldPtr& F = wm.field();
  std::vector<FieldElement> dom;
  for (std::uint64_t c = 1; c < F->q(); ++c) dom.emplace_back(c);
  auto rep = classify(F, dom, [&](FieldElement x) { return wm.eval(x); });
  std::vector<std::uint64_t> out;
  for (auto m : rep.valid_ms)
    if (m <= m_max) out.push_back(m);
  return out;
}

Polynomial random_h(const FieldPtr& F, std::uint64_t max_deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> c(0, F->q() - 1), e(0, max_deg);
  Polynomial h(F);
  int terms = 1 + static_cast<int>(rng() % 3);
  for (int k = 0; k < terms; ++k) h.add_term(FieldElement{c(rng)}, e(rng));
  return h;
}

bool root_free(const Polynomial& h) {
  if (h.is_zero()) return false;
  for (auto x : CyclicGroup::unit_circle(h.field()).elements())
    if (h.eval(x).is_zero()) return false;
  return true;
}

std::int64_t random_unit_r(std::uint64_t q, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> r(1, static_cast<std::int64_t>(q * q - 1));
  for (;;) {
    auto v = r(rng);
    if (gcd(v, static_cast<std::int64_t>(q - 1)) == 1) return v;
  }
}

}  // namespace

TEST_CASE("wrapped map construction") {
  auto F = unit_field(32);
  CHECK(F->q() == 1024);
  auto sym = unit_symbols(F, 3);
  auto h = parse_polynomial("1 + x^11 + (z^-1 + z^10)*x^2", F, sym);
  auto wm = make_wrapped(32, 6, h);
  CHECK(wm.unit().order() == 33);
  CHECK(wm.unit().gamma() == F->exp(31));
  CHECK(wm.eval(F->zero()) == F->zero());

  auto F25 = unit_field(5);
  auto one = Polynomial::constant(F25, F25->one());
  auto mono = make_wrapped(5, 7, one);
  for (std::uint64_t c = 1; c < 25; ++c) CHECK(mono.eval(FieldElement{c}) == F25->pow(FieldElement{c}, 7));
  for (auto x : mono.unit().elements()) CHECK(mono.reduce(x) == F25->pow(x, 7));

  auto zeta = CyclicGroup::unit_circle(F25).gamma();
  Polynomial bad = Polynomial::monomial(F25, F25->one(), 1);
  bad.add_term(F25->neg(zeta), 0);
  CHECK_THROWS_AS(make_wrapped(5, 1, bad), Error);
  try {
    make_wrapped(5, 1, bad);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RootOnUnitCircle);
  }
  CHECK_THROWS_AS(make_wrapped(7, 1, one), Error);
}

TEST_CASE("reduction to the unit circle") {
  auto F = unit_field(5);
  auto h = parse_polynomial("1 + 2*x", F);
  REQUIRE(root_free(h));
  auto wm = make_wrapped(5, 1, h);
  for (auto x : wm.unit().elements()) {
    FieldElement want = F->mul(x, F->pow(h.eval(x), 4));
    CHECK(wm.reduce(x) == want);
    CHECK(wm.unit().contains(wm.reduce(x)));
  }
}

TEST_CASE("monomial branch inference") {
  // h = 1 + a x^{u+t}: g = a^-1 x^{r-u} on A_0 and -a^-1 x^{r-u} on A_1
  auto F = unit_field(7);
  auto U = CyclicGroup::unit_circle(F);
  const std::int64_t t = 4, u = 0, r = 5;
  auto a = U.elem(3);
  auto h = Polynomial::constant(F, F->one());
  h.add_term(a, u + t);
  REQUIRE(root_free(h));
  auto wm = make_wrapped(7, r, h);
  auto br = infer_monomial_branches(wm, 2);
  REQUIRE(br);
  // exponents are normalized, so compare branches pointwise
  for (std::int64_t k = 0; k < 8; ++k) {
    auto lam = k % 2 ? F->neg(F->inv(a)) : F->inv(a);
    CHECK(br->eval(U.elem(k)) == F->mul(lam, F->pow(U.elem(k), r - u)));
  }
  CHECK(mod(br->branch(0).r - (r - u), t) == 0);
  CHECK(mod(br->branch(1).r - (r - u), t) == 0);

  auto mono = make_wrapped(7, 5, Polynomial::constant(F, F->one()));
  for (auto ell : divisors(8)) {
    auto b = infer_monomial_branches(mono, ell);
    REQUIRE(b);
    for (const auto& x : b->branches()) CHECK(mod(x.r - 5, static_cast<std::int64_t>(8 / ell)) == 0);
    for (auto x : mono.unit().elements()) CHECK(b->eval(x) == F->pow(x, 5));
  }
  CHECK_THROWS_AS(infer_monomial_branches(mono, 3), Error);

  // g not injective on A_0 of U_6: no monomial there
  auto F25 = unit_field(5);
  auto U6 = CyclicGroup::unit_circle(F25);
  std::vector<FieldElement> vals;
  for (std::int64_t k = 0; k < 6; ++k) vals.push_back(U6.elem(k));
  vals[2] = vals[0];
  CHECK_FALSE(infer_monomial_branches(U6, vals, 2));
  CHECK(infer_monomial_branches(U6, vals, 6));
}

TEST_CASE("branch forms reproduce g pointwise") {
  std::mt19937_64 rng(43);
  for (std::uint64_t q : {5u, 7u, 8u, 9u, 11u}) {
    auto F = unit_field(q);
    auto U = CyclicGroup::unit_circle(F);
    for (int t = 0; t < 60; ++t) {
      // binomials have monomial branches for some index; random h rarely do
      Polynomial h = Polynomial::constant(F, F->one());
      h.add_term(U.elem(static_cast<std::int64_t>(rng() % (q + 1))), rng() % (q + 1));
      if (t % 2) h = random_h(F, q, rng);
      if (!root_free(h)) continue;
      auto wm = make_wrapped(q, random_unit_r(q, rng), h);
      for (auto ell : divisors(q + 1)) {
        auto br = infer_monomial_branches(wm, ell);
        if (!br) continue;
        for (auto x : U.elements()) CHECK(br->eval(x) == wm.reduce(x));
      }
    }
  }
}

TEST_CASE("wrapped criterion examples") {
  auto F = unit_field(32);
  auto h = parse_polynomial("1 + x^11 + (z^-1 + z^10)*x^2", F, unit_symbols(F, 3));
  auto wm = make_wrapped(32, 6, h);
  auto v = criterion_wrapped(wm, 3);
  CHECK(v.holds);
  CHECK(oracle_ms(wm, 33) == std::vector<std::uint64_t>{3});

  auto F25 = unit_field(5);
  auto mono = make_wrapped(5, 7, Polynomial::constant(F25, F25->one()));
  CHECK(criterion_wrapped(mono, 1).holds);
  CHECK_THROWS_AS(criterion_wrapped(make_wrapped(5, 2, Polynomial::constant(F25, F25->one())), 1), Error);

  // h = 1 + a x^{u+t} over F_25 for every a in U_6 and u in [0, 3)
  auto U = CyclicGroup::unit_circle(F25);
  for (std::int64_t ea = 0; ea < 6; ++ea)
    for (std::int64_t u = 0; u < 3; ++u) {
      Polynomial hh = Polynomial::constant(F25, F25->one());
      hh.add_term(U.elem(ea), static_cast<std::uint64_t>(u + 3));
      if (!root_free(hh)) continue;
      auto w = make_wrapped(5, 1, hh);
      auto truth = oracle_ms(w, 6);
      for (std::uint64_t m = 1; m <= 6; ++m) {
        auto got = criterion_wrapped(w, m, 2);
        CHECK(got.witness.rfind("psi-l2", 0) == 0);
        CHECK(got.holds == std::binary_search(truth.begin(), truth.end(), m));
      }
    }
}

TEST_CASE("oracle path agrees with the full-field oracle") {
  std::mt19937_64 rng(47);
  for (std::uint64_t q : {5u, 7u, 9u, 11u}) {
    auto F = unit_field(q);
    int done = 0;
    while (done < 120) {
      auto h = random_h(F, q, rng);
      if (!root_free(h)) continue;
      ++done;
      auto wm = make_wrapped(q, random_unit_r(q, rng), h);
      auto truth = oracle_ms(wm, q + 1);
      for (std::uint64_t m = 1; m <= q + 1; ++m) {
        bool want = std::binary_search(truth.begin(), truth.end(), m);
        CHECK(criterion_wrapped(wm, m, std::nullopt, WrappedPath::Oracle).holds == want);
        CHECK(criterion_wrapped(wm, m).holds == want);
      }
    }
  }
}

TEST_CASE("general form over F_q") {
  std::mt19937_64 rng(53);
  for (const char* id : {"13", "17", "5^2", "2^4"}) {
    auto F = make_field(id);
    for (auto ell : divisors(F->q() - 1)) {
      for (int t = 0; t < 8; ++t) {
        Polynomial h = random_h(F, ell, rng);
        bool ok = !h.is_zero();
        for (auto x : CyclicGroup::subgroup(F, ell).elements()) ok = ok && !h.eval(x).is_zero();
        if (!ok) continue;
        std::int64_t r = 1 + static_cast<std::int64_t>(rng() % (F->q() - 1));
        auto wm = WrappedMap::general(ell, r, h);
        std::vector<FieldElement> dom;
        for (std::uint64_t c = 1; c < F->q(); ++c) dom.emplace_back(c);
        auto rep = classify(F, dom, [&](FieldElement x) { return wm.eval(x); });
        for (std::uint64_t m = 1; m < F->q(); ++m) CHECK(criterion_wrapped(wm, m).holds == rep.is_mto1(m));
      }
    }
  }
}

namespace {

struct Tally {
  int instances = 0;
  int skipped = 0;
};

void check_family(const FieldPtr& F, const FamilySpec& spec, Tally& tally) {
  std::optional<FamilyInstance> inst;
  try {
    inst = family_construct(F, spec);
  } catch (const Error& e) {
    INFO(std::string(e.what()));
    REQUIRE((e.kind() == ErrorKind::ConstraintViolated || e.kind() == ErrorKind::RootOnUnitCircle ||
             e.kind() == ErrorKind::GcdHypothesis));
    ++tally.skipped;
    return;
  }
  if (!inst->applicable) {
    ++tally.skipped;
    return;
  }
  ++tally.instances;
  CHECK(inst->predicted == oracle_ms(inst->map, inst->m_max));
  if (inst->map.unit().order() == inst->branches.group().order())
    for (auto x : inst->map.unit().elements()) CHECK(inst->branches.eval(x) == inst->map.reduce(x));
}

}  // namespace

TEST_CASE("binomial families with unit-circle constants") {
  for (std::uint64_t q : {5u, 7u, 9u}) {
    auto F = unit_field(q);
    auto U = CyclicGroup::unit_circle(F);
    Tally tally;
    for (std::int64_t r = 1; r < static_cast<std::int64_t>(q * q - 1); ++r) {
      if (gcd(r, static_cast<std::int64_t>(q - 1)) != 1) continue;
      for (std::int64_t ea = 0; ea < static_cast<std::int64_t>(q + 1); ++ea)
        for (std::int64_t u = 0; u < static_cast<std::int64_t>(q + 1) / 2; ++u) {
          for (auto fam : {Family::CBU, Family::CB0}) {
            FamilySpec s;
            s.family = fam;
            s.r = r;
            s.a = U.elem(ea);
            s.u = u;
            check_family(F, s, tally);
          }
        }
    }
    CHECK(tally.instances > 0);
  }
}

TEST_CASE("binomial families with general index") {
  std::mt19937_64 rng(59);
  for (std::uint64_t q : {5u, 7u, 8u, 11u}) {
    auto F = unit_field(q);
    auto U = CyclicGroup::unit_circle(F);
    Tally tally;
    for (int t = 0; t < 400; ++t) {
      FamilySpec s;
      auto ells = divisors(q + 1);
      s.ell = ells[rng() % ells.size()];
      const std::int64_t tt = static_cast<std::int64_t>((q + 1) / s.ell);
      s.r = random_unit_r(q, rng);
      s.family = std::vector<Family>{Family::B1, Family::B2, Family::B3, Family::T4, Family::T5}[rng() % 5];
      s.u = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(tt));
      s.v = static_cast<std::int64_t>(rng() % s.ell);
      s.a = s.family == Family::B2 ? U.elem(static_cast<std::int64_t>(rng() % (q + 1)))
                                    : FieldElement{1 + rng() % (F->q() - 1)};
      if (s.family == Family::B1 && t % 7 == 0) {
        s.v = 0;
        s.r = 1 + static_cast<std::int64_t>(rng() % (F->q() - 1));
      }
      check_family(F, s, tally);
    }
    CHECK(tally.instances > 20);
  }
}

TEST_CASE("constant h gives a scaled monomial") {
  auto F = unit_field(7);
  for (std::int64_t r = 1; r < 48; ++r) {
    FamilySpec s;
    s.family = Family::B1;
    s.ell = 2;
    s.v = 0;
    s.r = r;
    s.a = F->from_int(3);
    auto inst = family_construct(F, s);
    CHECK(inst.predicted == std::vector<std::uint64_t>{gcd(r, 48)});
  }
}

TEST_CASE("trinomial families") {
  for (std::uint64_t q : {5u, 7u}) {
    auto F = unit_field(q);
    Tally tally;
    const auto t = static_cast<std::int64_t>((q + 1) / 2);
    std::vector<FieldElement> as_ab, bs, as_a;
    for (std::uint64_t c = 1; c < F->q(); ++c) {
      FieldElement x{c};
      if (F->pow(x, static_cast<std::int64_t>(q - 1)) == F->neg(F->one())) as_ab.push_back(x);
      if (F->pow(x, static_cast<std::int64_t>(q + 1)) == F->from_int(4)) as_a.push_back(x);
    }
    for (std::int64_t r = 1; r < static_cast<std::int64_t>(q * q - 1); ++r) {
      if (gcd(r, static_cast<std::int64_t>(q - 1)) != 1) continue;
      for (std::int64_t u = 1; u < t; ++u)
        for (std::int64_t v = 0; v < 2; ++v) {
          for (auto a : as_a) {
            FamilySpec s{Family::CTA, r, a, {}, u, v, 1, 2};
            check_family(F, s, tally);
          }
          for (auto a : as_ab)
            for (std::uint64_t c = 1; c < F->q(); ++c) {
              FieldElement b{c};
              if (F->pow(b, static_cast<std::int64_t>(q + 1)) != F->sub(F->one(), F->mul(a, a))) continue;
              FamilySpec s{Family::CTAB, r, a, b, u, v, 1, 2};
              check_family(F, s, tally);
            }
        }
    }
    CHECK(tally.instances > 0);
  }
}

TEST_CASE("three-branch trinomial family") {
  // at q = 5 the two branch gcds always differ, so only q = 11 yields instances
  for (std::uint64_t q : {5u, 11u}) {
    auto F = unit_field(q);
    Tally tally;
    const auto t = static_cast<std::int64_t>((q + 1) / 3);
    for (std::int64_t r = 1; r < static_cast<std::int64_t>(q * q - 1); ++r) {
      if (gcd(r, static_cast<std::int64_t>(q - 1)) != 1) continue;
      for (std::int64_t k = 1; k <= 2; ++k)
        for (std::int64_t v = 0; v < 2; ++v)
          for (std::int64_t u = 1; u < t; ++u)
            for (std::uint64_t c = 1; c < F->q(); ++c) {
              FamilySpec s{Family::CTKUV, r, FieldElement{c}, {}, u, v, k, 3};
              check_family(F, s, tally);
            }
    }
    CHECK((tally.instances > 0) == (q == 11));
  }
}

TEST_CASE("three-branch trinomial instance over F_1024") {
  for (std::optional<std::uint64_t> power : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{2},
                                             std::optional<std::uint64_t>{5}}) {
    auto F = Field::make(2, 10, std::nullopt, power ? std::optional<GeneratorChoice>(GeneratorChoice{{}, power}) : std::nullopt);
    auto sym = unit_symbols(F, 3);
    FamilySpec s;
    s.family = Family::CTKUV;
    s.r = 6;
    s.k = 1;
    s.u = 2;
    s.v = 0;
    s.a = parse_element("z^-1*(1+e)", F, sym);
    auto inst = family_construct(F, s);
    REQUIRE(inst.applicable);
    CHECK(inst.predicted == std::vector<std::uint64_t>{3});
    CHECK(oracle_ms(inst.map, 33) == std::vector<std::uint64_t>{3});
  }
}

TEST_CASE("family constraint violations") {
  auto F = unit_field(7);
  FamilySpec s;
  s.family = Family::CTA;
  s.r = 1;
  s.u = 1;
  s.a = F->one();
  CHECK_THROWS_AS(family_construct(F, s), Error);
  s.family = Family::CTKUV;
  CHECK_THROWS_AS(family_construct(F, s), Error);
  CHECK(parse_family("ctkuv") == Family::CTKUV);
  CHECK_FALSE(parse_family("T9"));
}
