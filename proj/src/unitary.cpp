#include "gcm/unitary.hpp"

#include <algorithm>
#include <cctype>

#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

namespace gcm {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t out = 1;
  while (e--) out *= b;
  return out;
}

std::uint64_t base_of(const Field& F) {
  if (F.n() % 2) throw Error(ErrorKind::UnsupportedContext, "field degree must be even");
  return ipow(F.p(), F.n() / 2);
}

}  // namespace

WrappedMap WrappedMap::unit_form(std::int64_t r, Polynomial h) {
  const FieldPtr F = h.field();
  const std::uint64_t Q = base_of(*F);
  WrappedMap wm(std::move(h), CyclicGroup::unit_circle(F));
  wm.unit_form_ = true;
  wm.base_q_ = Q;
  wm.r_ = r;
  wm.s_ = Q - 1;
  wm.d_ = gcd(r, static_cast<std::int64_t>(Q - 1));
  wm.check_roots();
  return wm;
}

WrappedMap WrappedMap::general(std::uint64_t ell, std::int64_t r, Polynomial h) {
  const FieldPtr F = h.field();
  if (ell == 0 || (F->q() - 1) % ell)
    throw Error(ErrorKind::IndexNotDividingOrder, std::to_string(ell) + " does not divide q - 1");
  WrappedMap wm(std::move(h), CyclicGroup::subgroup(F, ell));
  wm.base_q_ = F->q();
  wm.r_ = r;
  wm.s_ = (F->q() - 1) / ell;
  wm.d_ = gcd(r, static_cast<std::int64_t>(wm.s_));
  wm.check_roots();
  return wm;
}

void WrappedMap::check_roots() const {
  if (h_.is_zero()) throw Error(ErrorKind::InvalidArgument, "h must be nonzero");
  for (auto x : unit_.elements())
    if (h_.eval(x).is_zero())
      throw Error(ErrorKind::RootOnUnitCircle, "h vanishes at " + format_element(x, *field()));
}

FieldElement WrappedMap::eval(FieldElement x) const {
  const Field& F = *field();
  if (x.is_zero()) return x;
  return F.mul(F.pow(x, r_), h_.eval(F.pow(x, static_cast<std::int64_t>(s_))));
}

FieldElement WrappedMap::reduce(FieldElement x) const {
  const Field& F = *field();
  const auto dd = static_cast<std::int64_t>(d_);
  return F.mul(F.pow(x, r_ / dd), F.pow(h_.eval(x), static_cast<std::int64_t>(s_) / dd));
}

std::vector<FieldElement> WrappedMap::reduced_values() const {
  std::vector<FieldElement> out;
  for (auto x : unit_.elements()) out.push_back(reduce(x));
  return out;
}

WrappedMap make_wrapped(std::uint64_t q, std::int64_t r, const Polynomial& h) {
  if (h.field()->q() != q * q) throw Error(ErrorKind::InvalidArgument, "h must be over F_{q^2}");
  return WrappedMap::unit_form(r, h);
}

FieldPtr unit_field(std::uint64_t q) {
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    unsigned n = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++n;
    }
    if (t != 1) break;
    return Field::make(p, 2 * n);
  }
  throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
}

Symbols unit_symbols(const FieldPtr& ext, std::uint64_t ell) {
  auto U = CyclicGroup::unit_circle(ext);
  Symbols sym{{"g", ext->generator()}, {"z", U.gamma()}};
  if (ell && U.order() % ell == 0) sym["e"] = U.elem(static_cast<std::int64_t>(U.order() / ell));
  return sym;
}

std::optional<BranchMap> infer_monomial_branches(const CyclicGroup& unit,
                                                 const std::vector<FieldElement>& values,
                                                 std::uint64_t ell) {
  const std::uint64_t N = unit.order();
  if (ell == 0 || N % ell) throw Error(ErrorKind::IndexNotDividingOrder, "index does not divide the group order");
  if (values.size() != N) throw Error(ErrorKind::InvalidArgument, "one value per group element expected");
  const std::uint64_t t = N / ell;
  std::vector<std::uint64_t> lg(N);
  for (std::uint64_t k = 0; k < N; ++k) {
    if (!unit.contains(values[k])) return std::nullopt;
    lg[k] = unit.log(values[k]);
  }
  std::vector<std::pair<FieldElement, std::int64_t>> br;
  for (std::uint64_t i = 0; i < ell; ++i) {
    std::uint64_t e = 0;
    if (t > 1) {
      // log of g(zeta^ell x0)/g(x0) in base zeta^ell
      const std::uint64_t ratio = (lg[i + ell] + N - lg[i]) % N;
      if (ratio % ell) return std::nullopt;
      e = ratio / ell;
    }
    const std::uint64_t lam = (lg[i] + N - mul_mod(i, e, N)) % N;
    for (std::uint64_t j = 0; j < t; ++j) {
      const std::uint64_t k = i + j * ell;
      if (lg[k] != (lam + mul_mod(k, e, N)) % N) return std::nullopt;
    }
    br.emplace_back(unit.elem(static_cast<std::int64_t>(lam)), static_cast<std::int64_t>(e));
  }
  return BranchMap(CosetDecomposition(unit, ell), br);
}

std::optional<BranchMap> infer_monomial_branches(const WrappedMap& wm, std::uint64_t ell) {
  return infer_monomial_branches(wm.unit(), wm.reduced_values(), ell);
}

CriterionVerdict criterion_wrapped(const WrappedMap& wm, std::uint64_t m, std::optional<std::uint64_t> ell,
                                   WrappedPath path) {
  if (wm.is_unit_form() && wm.d() != 1)
    throw Error(ErrorKind::GcdHypothesis, "gcd(r, q - 1) must be 1");
  const std::uint64_t N = wm.ell(), s = wm.s(), d = wm.d();
  const std::uint64_t limit = wm.is_unit_form() ? N : wm.field()->q() - 1;
  if (m < 1 || m > limit)
    throw Error(ErrorKind::InvalidArgument, "m outside [1, " + std::to_string(limit) + "]");
  if (m % d) return CriterionVerdict::result(false, "d-not-dividing-m");
  const std::uint64_t k = m / d;
  if (k > N) return CriterionVerdict::result(false, "m/d-exceeds-subgroup");
  const bool wrap = s * (N % k) < m;
  auto finish = [&](bool g_ok, const std::string& how) {
    if (!g_ok) return CriterionVerdict::result(false, how);
    return CriterionVerdict::result(wrap, wrap ? how : how + ":wrap-bound");
  };

  const auto values = wm.reduced_values();
  if (ell && N % *ell) throw Error(ErrorKind::IndexNotDividingOrder, "index does not divide the subgroup order");
  if (path != WrappedPath::Oracle) {
    std::vector<std::uint64_t> candidates = ell ? std::vector<std::uint64_t>{*ell} : divisors(N);
    for (auto L : candidates) {
      auto br = infer_monomial_branches(wm.unit(), values, L);
      if (!br) continue;
      if (L == 2) {
        auto v = criterion_l2(*br, k);
        return finish(v.holds, "psi-l2:" + v.witness);
      }
      if (br->equal_gcds()) {
        auto v = criterion_equal_d(*br, k);
        return finish(v.holds, "psi-equal-d(ell=" + std::to_string(L) + "):" + v.witness);
      }
    }
    if (path == WrappedPath::Psi) return CriterionVerdict::not_applicable("NoMonomialBranches");
  }
  auto rep = classify(wm.field(), wm.unit().elements(), [&](FieldElement x) { return wm.reduce(x); },
                      wm.unit().label());
  return finish(rep.is_mto1(k), "oracle");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::B1: return "B1";
    case Family::B2: return "B2";
    case Family::B3: return "B3";
    case Family::T4: return "T4";
    case Family::T5: return "T5";
    case Family::CBU: return "CBU";
    case Family::CB0: return "CB0";
    case Family::CTAB: return "CTAB";
    case Family::CTA: return "CTA";
    case Family::CTKUV: return "CTKUV";
  }
  return "?";
}

std::optional<Family> parse_family(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto f : {Family::B1, Family::B2, Family::B3, Family::T4, Family::T5, Family::CBU, Family::CB0,
                 Family::CTAB, Family::CTA, Family::CTKUV})
    if (to_string(f) == up) return f;
  return std::nullopt;
}

namespace {

[[noreturn]] void violated(const std::string& what) { throw Error(ErrorKind::ConstraintViolated, what); }

Polynomial binomial_h(const FieldPtr& F, std::vector<std::pair<FieldElement, std::uint64_t>> terms) {
  Polynomial h = Polynomial::constant(F, F->one());
  for (auto [c, e] : terms) h.add_term(c, e);
  return h;
}

bool wrap_ok(std::uint64_t q, std::uint64_t m) { return (q - 1) * ((q + 1) % m) < m; }

WrappedMap family_map(std::int64_t r, Polynomial h) {
  if (h.is_zero()) violated("h is identically zero");
  return WrappedMap::unit_form(r, std::move(h));
}

std::int64_t smod(std::int64_t a, std::int64_t n) { return mod(a, n); }

}  // namespace

FamilyInstance family_construct(const FieldPtr& ext, const FamilySpec& spec) {
  const Field& F = *ext;
  const std::uint64_t q = base_of(F);
  const auto Q1 = static_cast<std::int64_t>(q + 1);
  auto U = CyclicGroup::unit_circle(ext);
  const FieldElement one = F.one();
  const std::int64_t r = spec.r, u = spec.u, v = spec.v;
  const FieldElement a = spec.a, b = spec.b;
  auto zlog = [&](FieldElement x) { return static_cast<std::int64_t>(U.log(x)); };
  auto range_check = [&](bool ok, const std::string& what) {
    if (!ok) violated(what);
  };
  auto unit_gcd = [&] {
    if (gcd(r, static_cast<std::int64_t>(q - 1)) != 1) throw Error(ErrorKind::GcdHypothesis, "gcd(r, q - 1) must be 1");
  };

  switch (spec.family) {
    case Family::B1:
    case Family::B3:
    case Family::T4:
    case Family::T5: {
      // Constant branches on F_{q^2}*, index L.
      std::uint64_t L = 0;
      std::uint64_t hexp = 0;  // exponent of h in y = x^{q-1}
      if (a.is_zero()) violated("a must be nonzero");
      if (spec.family == Family::B1) {
        L = spec.ell;
        range_check(L >= 1 && (q + 1) % L == 0, "ell must divide q + 1");
        range_check(v >= 0 && v < static_cast<std::int64_t>(L), "0 <= v < ell");
        hexp = static_cast<std::uint64_t>(v) * ((q + 1) / L);
      } else if (spec.family == Family::B3) {
        L = 2 * spec.ell;
        range_check(spec.ell >= 1 && (q + 1) % L == 0, "2 ell must divide q + 1");
        range_check(v >= 0 && v < static_cast<std::int64_t>(spec.ell), "0 <= v < ell");
        hexp = static_cast<std::uint64_t>(1 + 2 * v) * ((q + 1) / L);
      } else {
        L = 6;
        range_check((q + 1) % 6 == 0, "6 must divide q + 1");
        hexp = (q + 1) / 6;
      }
      Polynomial h(ext);
      if (spec.family == Family::T4 || spec.family == Family::T5) {
        std::uint64_t e1 = spec.family == Family::T4 ? hexp : 5 * hexp;
        std::uint64_t e5 = spec.family == Family::T4 ? 5 * hexp : hexp;
        h = binomial_h(ext, {{a, e1}, {F.neg(F.inv(a)), e5}});
      } else {
        h = binomial_h(ext, {{a, hexp}});
      }
      auto wm = family_map(r, h);
      CosetDecomposition D(CyclicGroup::multiplicative(ext), L);
      std::vector<std::pair<FieldElement, std::int64_t>> br;
      for (std::uint64_t i = 0; i < L; ++i) {
        FieldElement y = F.pow(D.omega(), static_cast<std::int64_t>(i));  // x^s on C_i
        FieldElement c = one;
        if (spec.family == Family::B1) c = F.add(one, F.mul(a, F.pow(y, v)));
        else if (spec.family == Family::B3) c = F.add(one, F.mul(a, F.pow(y, 1 + 2 * v)));
        else if (spec.family == Family::T4)
          c = F.sub(F.add(one, F.mul(a, y)), F.mul(F.inv(a), F.pow(y, 5)));
        else
          c = F.sub(F.add(one, F.mul(a, F.pow(y, 5))), F.mul(F.inv(a), y));
        if (c.is_zero()) throw Error(ErrorKind::RootOnUnitCircle, "branch constant vanishes");
        br.emplace_back(c, r);
      }
      BranchMap map(D, br);
      FamilyInstance inst{wm, true, "", map, F.q() - 1, {}};
      if (map.equal_gcds()) {
        for (std::uint64_t m = 1; m <= F.q() - 1; ++m)
          if (criterion_equal_d(map, m).holds) inst.predicted.push_back(m);
      }
      return inst;
    }
    case Family::B2:
    case Family::CBU:
    case Family::CB0: {
      std::uint64_t L = spec.family == Family::B2 ? spec.ell : 2;
      if (q % 2 == 0 && spec.family != Family::B2) violated("q must be odd");
      range_check(L >= 1 && (q + 1) % L == 0, "ell must divide q + 1");
      const auto t = static_cast<std::int64_t>((q + 1) / L);
      std::int64_t vv = spec.family == Family::B2 ? v : (spec.family == Family::CBU ? 1 : 0);
      range_check(u >= 0 && u < t, "0 <= u < t");
      range_check(vv >= 0 && vv < static_cast<std::int64_t>(L), "0 <= v < ell");
      if (!U.contains(a)) violated("a must lie in U_{q+1}");
      const std::int64_t hexp = u + vv * t;
      if (spec.family != Family::B2) {
        // no-root condition (-a)^((q+1)/(q+1, u+vt)) != 1
        auto e = Q1 / static_cast<std::int64_t>(gcd(Q1, hexp));
        if (F.pow(F.neg(a), e) == one) violated("(-a)^((q+1)/(q+1, u+vt)) = 1");
      }
      unit_gcd();
      auto wm = family_map(r, binomial_h(ext, {{a, static_cast<std::uint64_t>(hexp)}}));
      const std::uint64_t LL = spec.family == Family::CB0 ? 1 : L;
      const FieldElement eps = U.elem(t);
      std::vector<std::pair<FieldElement, std::int64_t>> br;
      for (std::uint64_t i = 0; i < LL; ++i)
        br.emplace_back(F.mul(F.inv(a), F.pow(eps, -static_cast<std::int64_t>(i) * vv)), r - u);
      BranchMap map(CosetDecomposition(U, LL), br);
      FamilyInstance inst{wm, true, "", map, q + 1, {}};
      const std::int64_t g = static_cast<std::int64_t>(gcd(r - u, t));
      for (std::uint64_t m = 1; m <= q + 1; ++m) {
        const auto M = static_cast<std::int64_t>(m);
        bool ok = false;
        if (spec.family == Family::CBU) {
          ok = (M == g && smod(r - u - t, 2 * M) != 0) || (M == 2 * g && smod(r - u - t, M) == 0);
        } else if (spec.family == Family::CB0) {
          ok = static_cast<std::int64_t>(gcd(r - u, Q1)) == M;
        } else {
          ok = criterion_equal_d(map, m).holds && wrap_ok(q, m);
        }
        if (ok) inst.predicted.push_back(m);
      }
      return inst;
    }
    case Family::CTAB:
    case Family::CTA: {
      if (q % 2 == 0) violated("q must be odd");
      const auto t = static_cast<std::int64_t>((q + 1) / 2);
      range_check(u > 0 && u < t, "0 < u < t");
      range_check(v == 0 || v == 1, "v in {0, 1}");
      const FieldElement sign = v ? F.neg(one) : one;
      const auto hexp = static_cast<std::uint64_t>(u + v * t);
      Polynomial h(ext);
      std::vector<std::pair<FieldElement, std::int64_t>> br;
      std::vector<std::uint64_t> predicted;
      if (spec.family == Family::CTAB) {
        if (a.is_zero() || F.pow(a, static_cast<std::int64_t>(q - 1)) != F.neg(one)) violated("a^(q-1) = -1");
        if (b.is_zero() || F.pow(b, Q1) != F.sub(one, F.mul(a, a))) violated("b^(q+1) = 1 - a^2");
        unit_gcd();
        h = binomial_h(ext, {{a, static_cast<std::uint64_t>(t)}, {b, hexp}});
        auto wm = family_map(r, h);
        br = {{F.div(F.sub(one, a), b), r - u}, {F.mul(sign, F.div(F.add(one, a), b)), r - u}};
        const std::int64_t w = zlog(F.mul(sign, F.div(F.sub(one, a), F.add(one, a))));
        const auto g = static_cast<std::int64_t>(gcd(r - u, t));
        for (std::int64_t M = 1; M <= Q1; ++M)
          if ((M == g && smod(r - u - w, 2 * M) != 0) || (M == 2 * g && smod(r - u - w, M) == 0))
            predicted.push_back(static_cast<std::uint64_t>(M));
        return FamilyInstance{wm, true, "", BranchMap(CosetDecomposition(U, 2), br), q + 1, predicted};
      }
      if (a.is_zero() || F.pow(a, Q1) != F.from_int(4)) violated("a^(q+1) = 4");
      unit_gcd();
      h = binomial_h(ext, {{F.neg(one), static_cast<std::uint64_t>(t)}, {a, hexp}});
      auto wm = family_map(r, h);
      const FieldElement lam1 = F.mul(sign, F.div(F.from_int(2), a));
      br = {{F.pow(a, static_cast<std::int64_t>(q - 1)), r - 2 * u}, {lam1, r - u}};
      const std::int64_t L = zlog(lam1);
      const auto d1 = static_cast<std::int64_t>(gcd(r - u, t)), d0 = static_cast<std::int64_t>(gcd(r - 2 * u, t));
      const std::int64_t dm = std::min(d0, d1);
      for (std::int64_t M = 1; M <= Q1; ++M) {
        if (!wrap_ok(q, static_cast<std::uint64_t>(M))) continue;
        bool one_ok = M == d1 && M == d0 && smod(L - (r - u), 2 * M) != 0;
        bool two_ok = M == d0 + d1 && M % dm == 0 && smod(L - (r - u), 2 * dm) == 0 &&
                      t * (M - 2 * dm) < M * (M - dm);
        if (one_ok || two_ok) predicted.push_back(static_cast<std::uint64_t>(M));
      }
      return FamilyInstance{wm, true, "", BranchMap(CosetDecomposition(U, 2), br), q + 1, predicted};
    }
    case Family::CTKUV: {
      if (q % 3 != 2 || q < 5) violated("q = 2 mod 3 and q >= 5");
      const auto t = static_cast<std::int64_t>((q + 1) / 3);
      range_check(u > 0 && u < t, "0 < u < t");
      range_check(v == 0 || v == 1, "v in {0, 1}");
      range_check(spec.k == 1 || spec.k == 2, "k in {1, 2}");
      const FieldElement eps = U.elem(t);
      if (a.is_zero() || !U.contains(F.div(F.sub(one, F.pow(eps, spec.k)), a))) violated("(1 - e^k)/a in U_{q+1}");
      unit_gcd();
      auto h = binomial_h(ext, {{F.neg(one), static_cast<std::uint64_t>(spec.k * t)},
                                {a, static_cast<std::uint64_t>(u + v * t)}});
      auto wm = family_map(r, h);
      const FieldElement ainv = F.inv(a);
      const FieldElement lam2 = F.mul(F.mul(ainv, F.sub(one, F.pow(eps, spec.k))), F.pow(eps, v));
      const FieldElement lam1 = F.mul(F.mul(ainv, F.sub(one, F.pow(eps, -spec.k))), F.pow(eps, -v));
      BranchMap map(CosetDecomposition(U, 3),
                    {{F.pow(a, static_cast<std::int64_t>(q - 1)), r - 2 * u}, {lam1, r - u}, {lam2, r - u}});
      const auto d = static_cast<std::int64_t>(gcd(r - u, t));
      if (d != static_cast<std::int64_t>(gcd(r - 2 * u, t)))
        return FamilyInstance{wm, false, "NotApplicable: (r-u, t) != (r-2u, t)", map, q + 1, {}};
      const std::int64_t z1 = zlog(lam2), z2 = zlog(lam1);
      const std::int64_t ru = r - u, n = 3 * d;
      std::vector<std::uint64_t> predicted;
      bool c1 = smod(ru - z1, n) != 0 && smod(2 * ru - z2, n) != 0 && smod(ru - (z2 - z1), n) != 0;
      bool c2 = smod(ru - z1, n) == 0 && smod(2 * ru - z2, n) == 0;
      if (c1) predicted.push_back(static_cast<std::uint64_t>(d));
      if (c2) predicted.push_back(static_cast<std::uint64_t>(3 * d));
      return FamilyInstance{wm, true, "", map, q + 1, predicted};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

}  // namespace gcm
