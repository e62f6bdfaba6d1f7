#include "gcm/mto1.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_map>

#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

namespace gcm {

bool Mto1Report::is_mto1(std::uint64_t m) const {
  return std::binary_search(valid_ms.begin(), valid_ms.end(), m);
}

bool histogram_is_mto1(const std::map<std::uint64_t, std::uint64_t>& histogram, std::uint64_t n,
                       std::uint64_t m) {
  if (m == 0 || m > n) return false;
  auto it = histogram.find(m);
  std::uint64_t count = it == histogram.end() ? 0 : it->second;
  return count == n / m;
}

std::vector<std::uint64_t> valid_ms_of(const std::map<std::uint64_t, std::uint64_t>& histogram,
                                       std::uint64_t n) {
  // A valid m must occur in the histogram unless floor(n/m) = 0, which
  // cannot happen for m <= n.
  std::vector<std::uint64_t> out;
  for (const auto& [m, count] : histogram)
    if (m <= n && count == n / m) out.push_back(m);
  return out;
}

std::map<std::uint64_t, std::uint64_t> histogram_of(const std::vector<std::uint64_t>& images) {
  std::unordered_map<std::uint64_t, std::uint64_t> pre;
  for (auto y : images) ++pre[y];
  std::map<std::uint64_t, std::uint64_t> hist;
  for (const auto& [y, k] : pre) ++hist[k];
  return hist;
}

bool values_are_mto1(const std::vector<std::uint64_t>& images, std::uint64_t m) {
  return histogram_is_mto1(histogram_of(images), images.size(), m);
}

namespace {

// Preimage counts keyed by image code.
class Counter {
 public:
  explicit Counter(std::uint64_t q) {
    if (q <= (std::uint64_t{1} << 24)) dense_.assign(q, 0);
  }
  void add(std::uint64_t y) {
    if (!dense_.empty()) ++dense_[y];
    else ++sparse_[y];
  }
  std::uint64_t get(std::uint64_t y) const {
    if (!dense_.empty()) return dense_[y];
    auto it = sparse_.find(y);
    return it == sparse_.end() ? 0 : it->second;
  }

 private:
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

}  // namespace

Mto1Report classify(const FieldPtr& field, const std::vector<FieldElement>& domain, const ElementMap& f,
                    const std::string& label) {
  const Field& F = *field;
  std::vector<FieldElement> images;
  images.reserve(domain.size());
  Counter counter(F.q());
  for (auto x : domain) {
    if (!F.contains(x))
      throw Error(ErrorKind::DomainElementOutsideField,
                  "code " + std::to_string(x.code()) + " not in F_" + F.id());
    FieldElement y = f(x);
    if (!F.contains(y))
      throw Error(ErrorKind::DomainElementOutsideField, "image outside F_" + F.id());
    images.push_back(y);
    counter.add(y.code());
  }

  Mto1Report rep;
  rep.domain = label;
  rep.domain_size = domain.size();
  {
    std::unordered_map<std::uint64_t, std::uint64_t> seen;
    for (auto y : images) seen.emplace(y.code(), counter.get(y.code()));
    for (const auto& [y, k] : seen) ++rep.histogram[k];
  }
  rep.valid_ms = valid_ms_of(rep.histogram, rep.domain_size);

  // Exceptional sets: 0 first, then ascending discrete log.
  std::vector<std::size_t> order(domain.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t idx) -> std::uint64_t {
    return domain[idx].is_zero() ? 0 : F.log(domain[idx]) + 1;
  };
  std::vector<std::uint64_t> keys(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) keys[i] = key(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  for (auto m : rep.valid_ms) {
    auto& ex = rep.exceptional[m];
    if (rep.domain_size % m == 0) continue;
    for (auto idx : order)
      if (counter.get(images[idx].code()) != m) ex.push_back(domain[idx]);
  }
  return rep;
}

Mto1Report classify(const Polynomial& f, DomainKind domain) {
  const FieldPtr& F = f.field();
  std::vector<FieldElement> pts;
  std::string label;
  switch (domain) {
    case DomainKind::Fq:
      for (std::uint64_t c = 0; c < F->q(); ++c) pts.emplace_back(c);
      label = "F_" + F->id();
      break;
    case DomainKind::FqStar:
      for (std::uint64_t c = 1; c < F->q(); ++c) pts.emplace_back(c);
      label = "F_" + F->id() + "*";
      break;
    case DomainKind::UnitCircle: {
      auto U = CyclicGroup::unit_circle(F);
      pts = U.elements();
      label = U.label();
      break;
    }
  }
  return classify(F, pts, [&](FieldElement x) { return f.eval(x); }, label);
}

Mto1Report classify(const BranchMap& map) {
  return classify(map.field(), map.group().elements(), [&](FieldElement x) { return map.eval(x); },
                  map.group().label());
}

std::map<std::uint64_t, std::uint64_t> exponent_histogram(const BranchMap& map) {
  const std::uint64_t N = map.group().order();
  std::vector<std::uint32_t> cnt(N, 0);
  for (std::uint64_t k = 0; k < N; ++k) ++cnt[map.image_exponent(k)];
  std::map<std::uint64_t, std::uint64_t> hist;
  for (auto c : cnt)
    if (c) ++hist[c];
  return hist;
}

CriterionVerdict lift_to_full_field(const FieldPtr& field, const ElementMap& f, std::uint64_t m,
                                    const Mto1Report& star_report) {
  const Field& F = *field;
  if (!f(F.zero()).is_zero()) throw Error(ErrorKind::HypothesisViolated, "f(0) != 0");
  for (std::uint64_t c = 1; c < F.q(); ++c)
    if (f(FieldElement{c}).is_zero())
      throw Error(ErrorKind::HypothesisViolated,
                  "nonzero root " + format_element(FieldElement{c}, F));
  if (star_report.domain_size + 1 != F.q())
    throw Error(ErrorKind::InvalidArgument, "report is not over F_q*");
  bool on_star = star_report.is_mto1(m);
  if (m == 1) return CriterionVerdict::result(on_star, "injective-on-star");
  if (F.q() % m == 0) return CriterionVerdict::result(false, "m-divides-q");
  return CriterionVerdict::result(on_star, on_star ? "lifted" : "not-mto1-on-star");
}

namespace {

std::vector<std::uint64_t> phis(const BranchMap& map, std::uint64_t n) {
  std::vector<std::uint64_t> out(map.ell());
  for (std::size_t i = 0; i < map.ell(); ++i) out[i] = map.phi(i, n);
  return out;
}

std::vector<std::uint64_t> gcds(const BranchMap& map) {
  std::vector<std::uint64_t> out;
  for (const auto& b : map.branches()) out.push_back(b.d);
  return out;
}

void check_m_range(const BranchMap& map, std::uint64_t m) {
  if (m < 1 || m > map.group().order())
    throw Error(ErrorKind::InvalidArgument,
                "m = " + std::to_string(m) + " outside [1, " + std::to_string(map.group().order()) + "]");
}

using I64 = std::int64_t;

}  // namespace

CriterionVerdict criterion_l2(const BranchMap& map, std::uint64_t m) {
  if (map.ell() != 2) throw Error(ErrorKind::WrongIndex, "two branches required");
  if (map.group().order() % 2) throw Error(ErrorKind::EvenQ, "group order must be even");
  check_m_range(map, m);
  const std::uint64_t d0 = map.branch(0).d, d1 = map.branch(1).d, s = map.s();
  if (m == d0 && m == d1) {
    bool distinct = map.phi(0, 2 * m) != map.phi(1, 2 * m);
    return CriterionVerdict::result(distinct, distinct ? "clause-1" : "phi-collision");
  }
  if (m == d0 + d1) {
    const std::uint64_t d = std::min(d0, d1);
    if (m % d) return CriterionVerdict::result(false, "d-not-dividing-m");
    if (map.phi(0, 2 * d) != map.phi(1, 2 * d)) return CriterionVerdict::result(false, "phi-disjoint");
    // s(m - 2d)/(m - d) < m, cross-multiplied
    bool bound = static_cast<I64>(s) * (static_cast<I64>(m) - 2 * static_cast<I64>(d)) <
                 static_cast<I64>(m) * static_cast<I64>(m - d);
    return CriterionVerdict::result(bound, bound ? "clause-2" : "size-bound");
  }
  return CriterionVerdict::result(false, "no-clause");
}

CriterionVerdict criterion_l3(const BranchMap& map, std::uint64_t m) {
  if (map.ell() != 3) throw Error(ErrorKind::WrongIndex, "three branches required");
  check_m_range(map, m);
  const auto d = gcds(map);
  const I64 s = static_cast<I64>(map.s());
  const I64 M = static_cast<I64>(m);
  auto phi = [&](std::size_t i, std::uint64_t n) { return map.phi(i, n); };

  std::array<std::size_t, 3> perm{0, 1, 2};
  do {
    const std::size_t i = perm[0], j = perm[1], k = perm[2];
    if (!(d[i] <= d[j] && d[j] <= d[k])) continue;
    const I64 di = static_cast<I64>(d[i]), dj = static_cast<I64>(d[j]), dk = static_cast<I64>(d[k]);

    if (M == di && M == dj && M == dk) {
      auto a = phi(0, 3 * m), b = phi(1, 3 * m), c = phi(2, 3 * m);
      if (a != b && b != c && a != c) return CriterionVerdict::result(true, "clause-1");
    }
    if (M == dk && M == di + dj && dj % di == 0) {
      const auto n = 3 * d[i];
      if (phi(i, n) == phi(j, n) && phi(j, n) != phi(k, n) && s * (dj - di) < M * dj)
        return CriterionVerdict::result(true, "clause-2");
    }
    if (M == di + dj && dj == dk && dj % di == 0) {
      const auto n = 3 * d[i], n2 = 3 * d[j];
      if (phi(i, n) == phi(j, n) && phi(j, n) == phi(k, n) && phi(j, n2) != phi(k, n2) &&
          s * (dj - 2 * di) < M * dj)
        return CriterionVerdict::result(true, "clause-3");
    }
    if (M == 2 * s && di == s && dj == s && dk == s) {
      const auto n = 3 * map.s();
      for (auto [u, v] : {std::pair{j, k}, std::pair{k, j}})
        if (phi(i, n) == phi(u, n) && phi(i, n) != phi(v, n))
          return CriterionVerdict::result(true, "clause-4");
    }
    if (M == 2 * s && dj == s && dk == s) {
      const auto n = 3 * map.s(), ni = 3 * d[i];
      if (phi(j, n) == phi(k, n) && phi(i, ni) != phi(j, ni))
        return CriterionVerdict::result(true, "clause-5");
    }
    if (M == di + dj + dk && dk % di == 0 && dk % dj == 0) {
      const auto ni = 3 * d[i], nj = 3 * d[j];
      if (phi(i, ni) == phi(k, ni) && phi(j, nj) == phi(k, nj) && s * (2 * dk - di - dj) < M * dk)
        return CriterionVerdict::result(true, "clause-6");
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return CriterionVerdict::result(false, "no-clause");
}

namespace {

// m-to-1 test applied to x -> values[x] on an index subset.
bool subset_is_mto1(const std::vector<std::uint64_t>& values, const std::vector<std::size_t>& idx,
                    std::uint64_t m) {
  std::vector<std::uint64_t> sub;
  for (auto i : idx) sub.push_back(values[i]);
  return values_are_mto1(sub, m);
}

}  // namespace

CriterionVerdict criterion_2to1_any_l(const BranchMap& map) {
  const std::uint64_t ell = map.ell(), N = map.group().order();
  if (ell == 1) {
    bool ok = gcd(map.branch(0).r_reduced, N) == 2;
    return CriterionVerdict::result(ok, ok ? "single-branch" : "gcd-not-2");
  }
  if (ell == N) {
    bool ok = values_are_mto1(phis(map, ell), 2);
    return CriterionVerdict::result(ok, ok ? "pointwise" : "phi-not-2to1");
  }
  std::vector<std::size_t> I, T;
  for (std::size_t i = 0; i < ell; ++i) {
    if (map.branch(i).d == 1) I.push_back(i);
    else if (map.branch(i).d == 2) T.push_back(i);
  }
  if (I.size() + T.size() != ell) return CriterionVerdict::result(false, "gcd-above-2");
  const auto phi_l = phis(map, ell), phi_2l = phis(map, 2 * ell);
  const bool i_ok = I.size() % 2 == 0 && subset_is_mto1(phi_l, I, 2);
  const bool t_ok = subset_is_mto1(phi_2l, T, 1);
  if (T.empty()) return CriterionVerdict::result(i_ok, i_ok ? "clause-1" : "phi-not-2to1-on-I");
  if (I.empty()) return CriterionVerdict::result(t_ok, t_ok ? "clause-2" : "phi-not-1to1-on-T");
  for (auto i : I)
    for (auto t : T)
      if (phi_l[i] == phi_l[t]) return CriterionVerdict::result(false, "I-T-overlap");
  if (!i_ok) return CriterionVerdict::result(false, "phi-not-2to1-on-I");
  if (!t_ok) return CriterionVerdict::result(false, "phi-not-1to1-on-T");
  return CriterionVerdict::result(true, "clause-3");
}

CriterionVerdict criterion_equal_d(const BranchMap& map, std::uint64_t m) {
  if (!map.equal_gcds()) return CriterionVerdict::not_applicable("UnequalGcds");
  check_m_range(map, m);
  const std::uint64_t d = map.branch(0).d, ell = map.ell(), s = map.s();
  if (m % d) return CriterionVerdict::result(false, "d-not-dividing-m");
  const std::uint64_t k = m / d;
  if (!values_are_mto1(phis(map, ell * d), k)) return CriterionVerdict::result(false, "phi-not-mto1");
  bool bound = s * (ell % k) < m;
  return CriterionVerdict::result(bound, bound ? "holds" : "size-bound");
}

std::string to_string(Corollary c) {
  switch (c) {
    case Corollary::COR32: return "COR32";
    case Corollary::COR33: return "COR33";
    case Corollary::COR42: return "COR42";
    case Corollary::COR43: return "COR43";
    case Corollary::COR53: return "COR53";
    case Corollary::COR54: return "COR54";
    case Corollary::COR55: return "COR55";
    case Corollary::COR56: return "COR56";
    case Corollary::COR61: return "COR61";
    case Corollary::COR62: return "COR62";
  }
  return "?";
}

std::optional<Corollary> parse_corollary(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto c : {Corollary::COR32, Corollary::COR33, Corollary::COR42, Corollary::COR43, Corollary::COR53,
                 Corollary::COR54, Corollary::COR55, Corollary::COR56, Corollary::COR61, Corollary::COR62})
    if (to_string(c) == up) return c;
  return std::nullopt;
}

namespace {

CorollaryResult with_map(CriterionVerdict v, std::uint64_t m, const BranchMap& map) {
  return CorollaryResult{std::move(v), m, map};
}

void require_multiplicative(const BranchMap& map, std::uint64_t ell) {
  if (!map.group().is_full()) throw Error(ErrorKind::UnsupportedContext, "corollary is stated on F_q*");
  if (map.ell() != ell) throw Error(ErrorKind::WrongIndex, std::to_string(ell) + " branches required");
}

}  // namespace

CorollaryResult corollary_two_branches(Corollary c, const BranchMap& map) {
  require_multiplicative(map, 2);
  const std::uint64_t q = map.field()->q();
  if (q % 2 == 0) throw Error(ErrorKind::EvenQ, "q must be odd");
  const std::uint64_t d0 = map.branch(0).d, d1 = map.branch(1).d;
  if (c == Corollary::COR32) {
    bool one = d0 == 2 && d1 == 2 && map.phi(0, 4) != map.phi(1, 4);
    bool two = d0 == 1 && d1 == 1 && map.phi(0, 2) == map.phi(1, 2);
    return with_map(CriterionVerdict::result(one || two, one ? "d=2" : two ? "d=1" : "no-clause"), 2, map);
  }
  if (c == Corollary::COR33) {
    if (q < 13) return with_map(CriterionVerdict::not_applicable("HypothesisViolated: q < 13"), 3, map);
    bool ok = d0 == 3 && d1 == 3 && map.phi(0, 6) != map.phi(1, 6);
    return with_map(CriterionVerdict::result(ok, ok ? "d=3" : "no-clause"), 3, map);
  }
  throw Error(ErrorKind::InvalidArgument, "not a two-branch corollary");
}

CorollaryResult corollary_three_branches(Corollary c, const BranchMap& map) {
  require_multiplicative(map, 3);
  const std::uint64_t q = map.field()->q();
  const auto d = gcds(map);
  auto all_d = [&](std::uint64_t v) { return d[0] == v && d[1] == v && d[2] == v; };
  auto distinct = [&](std::uint64_t n) {
    auto a = map.phi(0, n), b = map.phi(1, n), e = map.phi(2, n);
    return a != b && b != e && a != e;
  };
  auto all_equal = [&](std::uint64_t n) {
    return map.phi(0, n) == map.phi(1, n) && map.phi(1, n) == map.phi(2, n);
  };
  if (c == Corollary::COR42) {
    if (q < 7) return with_map(CriterionVerdict::not_applicable("HypothesisViolated: q < 7"), 2, map);
    if (all_d(2) && distinct(6)) return with_map(CriterionVerdict::result(true, "d=2"), 2, map);
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t i = (k + 1) % 3, j = (k + 2) % 3;
      if (d[i] == 1 && d[j] == 1 && d[k] == 2 && map.phi(i, 3) == map.phi(j, 3) &&
          map.phi(j, 3) != map.phi(k, 3))
        return with_map(CriterionVerdict::result(true, "d=1,1,2"), 2, map);
    }
    return with_map(CriterionVerdict::result(false, "no-clause"), 2, map);
  }
  if (c == Corollary::COR43) {
    if (q < 19) return with_map(CriterionVerdict::not_applicable("HypothesisViolated: q < 19"), 3, map);
    if (all_d(3) && distinct(9)) return with_map(CriterionVerdict::result(true, "d=3"), 3, map);
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
      if (d[i] == 1 && d[j] == 2 && d[k] == 2 && all_equal(3) && map.phi(j, 6) != map.phi(k, 6))
        return with_map(CriterionVerdict::result(true, "d=1,2,2"), 3, map);
    }
    if (all_d(1) && all_equal(3)) return with_map(CriterionVerdict::result(true, "d=1"), 3, map);
    return with_map(CriterionVerdict::result(false, "no-clause"), 3, map);
  }
  throw Error(ErrorKind::InvalidArgument, "not a three-branch corollary");
}

CorollaryResult corollary_54(const BranchMap& map) {
  const std::uint64_t d = map.branch(0).d;
  if (!map.equal_gcds()) return with_map(CriterionVerdict::not_applicable("UnequalGcds"), d, map);
  bool ok = values_are_mto1(phis(map, map.ell() * d), 1);
  return with_map(CriterionVerdict::result(ok, ok ? "phi-injective" : "phi-not-injective"), d, map);
}

CorollaryResult corollary_55(const BranchMap& map, std::uint64_t m) {
  if (!map.equal_gcds() || map.branch(0).d != 1)
    return with_map(CriterionVerdict::not_applicable("HypothesisViolated: d != 1"), m, map);
  check_m_range(map, m);
  const std::uint64_t ell = map.ell(), s = map.s();
  if (!values_are_mto1(phis(map, ell), m)) return with_map(CriterionVerdict::result(false, "phi-not-mto1"), m, map);
  bool bound = s * (ell % m) < m;
  return with_map(CriterionVerdict::result(bound, bound ? "holds" : "size-bound"), m, map);
}

CorollaryResult corollary_53(const FieldPtr& field, std::uint64_t ell, FieldElement a0, std::int64_t r0,
                             FieldElement a1, std::int64_t r1, std::uint64_t m) {
  if (ell < 3) throw Error(ErrorKind::WrongIndex, "at least three branches required");
  std::vector<std::pair<FieldElement, std::int64_t>> br{{a0, r0}};
  for (std::uint64_t i = 1; i < ell; ++i) br.emplace_back(a1, r1);
  BranchMap map(CosetDecomposition(CyclicGroup::multiplicative(field), ell), br);
  check_m_range(map, m);
  const std::uint64_t s = map.s(), d = map.branch(0).d;
  if (map.branch(1).d != d) return with_map(CriterionVerdict::not_applicable("UnequalGcds"), m, map);
  const auto e = static_cast<std::int64_t>(s / d);
  if (field->pow(a0, e) != field->pow(a1, e))
    return with_map(CriterionVerdict::not_applicable("HypothesisViolated: a0^(s/d) != a1^(s/d)"), m, map);
  bool ok = gcd(static_cast<std::int64_t>(map.branch(1).r_reduced), static_cast<std::int64_t>(ell * d)) == m;
  return with_map(CriterionVerdict::result(ok, ok ? "gcd-matches" : "gcd-differs"), m, map);
}

namespace {

void check_cor56(const FieldPtr& field, std::uint64_t base_q, std::uint64_t ell) {
  const std::uint64_t Q = field->q();
  std::uint64_t t = base_q;
  while (t < Q) t *= base_q;
  if (base_q < 2 || t != Q) throw Error(ErrorKind::InvalidArgument, "field order is not a power of q");
  if (ell == 0 || (Q - 1) % (ell * ell))
    throw Error(ErrorKind::HypothesisViolated, "ell^2 must divide q^n - 1");
}

std::uint64_t folded_power(std::uint64_t base, std::uint64_t i, std::uint64_t N) {
  std::uint64_t e = pow_mod(base, i, N);
  return e == 0 ? N : e;
}

}  // namespace

CorollaryResult corollary_56(const FieldPtr& field, std::uint64_t base_q, std::uint64_t ell,
                             std::uint64_t m) {
  check_cor56(field, base_q, ell);
  CosetDecomposition D(CyclicGroup::multiplicative(field), ell);
  const std::uint64_t N = field->q() - 1, s = D.s();
  const FieldElement ell_el = field->from_int(static_cast<std::int64_t>(ell % field->p()));
  std::vector<std::pair<FieldElement, std::int64_t>> br;
  for (std::uint64_t i = 0; i < ell; ++i)
    br.emplace_back(field->mul(ell_el, field->pow(D.omega(), static_cast<std::int64_t>(i * (ell - 1)))),
                    static_cast<std::int64_t>(folded_power(base_q, i, N)));
  BranchMap map(D, br);
  check_m_range(map, m);
  std::vector<std::uint64_t> vals(ell);
  for (std::uint64_t x = 0; x < ell; ++x) vals[x] = x * pow_mod(base_q, x, ell) % ell;
  if (!values_are_mto1(vals, m)) return with_map(CriterionVerdict::result(false, "xq^x-not-mto1"), m, map);
  bool bound = s * (ell % m) < m;
  return with_map(CriterionVerdict::result(bound, bound ? "holds" : "size-bound"), m, map);
}

Polynomial corollary_56_polynomial(const FieldPtr& field, std::uint64_t base_q, std::uint64_t ell) {
  check_cor56(field, base_q, ell);
  CosetDecomposition D(CyclicGroup::multiplicative(field), ell);
  const std::uint64_t N = field->q() - 1, s = D.s();
  Polynomial f(field);
  for (std::uint64_t i = 0; i < ell; ++i) {
    Polynomial term = Polynomial::monomial(field, field->one(), folded_power(base_q, i, N));
    for (std::uint64_t j = 0; j < ell; ++j) {
      if (j == i) continue;
      Polynomial factor = Polynomial::monomial(field, field->one(), s);
      factor.add_term(field->neg(field->pow(D.omega(), static_cast<std::int64_t>(j))), 0);
      term = term * factor;
    }
    f = f + term;
  }
  return f;
}

Polynomial two_branch_realization(const Polynomial& g0, const Polynomial& g1, std::int64_t r0,
                                  std::int64_t r1, bool square_power) {
  const FieldPtr& F = g0.field();
  const std::uint64_t q = F->q();
  if (q % 2 == 0) throw Error(ErrorKind::EvenQ, "q must be odd");
  const std::uint64_t s = (q - 1) / 2;
  // substitute x^s into g
  auto compose = [&](const Polynomial& g) {
    Polynomial out(F);
    for (const auto& [e, c] : g.terms()) out.add_term(c, e * s);
    return out;
  };
  auto power = [&](std::int64_t r) {
    return Polynomial::monomial(F, F->one(), static_cast<std::uint64_t>(mod(r - 1, static_cast<std::int64_t>(q - 1)) + 1));
  };
  Polynomial xs = Polynomial::monomial(F, F->one(), s);
  Polynomial one = Polynomial::constant(F, F->one());
  Polynomial p0 = compose(g0), p1 = compose(g1);
  if (square_power) {
    p0 = p0.pow(2 * gcd(r0, static_cast<std::int64_t>(s)));
    p1 = p1.pow(2 * gcd(r1, static_cast<std::int64_t>(s)));
  }
  return power(r0) * p0 * (one + xs) + power(r1) * p1 * (one - xs);
}

namespace {

// The shared decision for the two-branch realizations: the two constants
// differ by a 2d-th power up to the factor x^r1 evaluated on C_1.
CriterionVerdict realization_verdict(const BranchMap& map, std::int64_t r1, std::uint64_t m) {
  const std::uint64_t d0 = map.branch(0).d, d1 = map.branch(1).d, s = map.s();
  const std::int64_t r1n = mod(r1, static_cast<std::int64_t>(map.group().order()));
  if (m == d0 && m == d1) {
    bool ok = r1n % static_cast<std::int64_t>(2 * m) != 0;
    return CriterionVerdict::result(ok, ok ? "clause-1" : "2m-divides-r1");
  }
  if (m == d0 + d1) {
    const std::uint64_t d = std::min(d0, d1);
    if (m % d) return CriterionVerdict::result(false, "d-not-dividing-m");
    if (r1n % static_cast<std::int64_t>(2 * d)) return CriterionVerdict::result(false, "2d-not-dividing-r1");
    bool bound = static_cast<I64>(s) * (static_cast<I64>(m) - 2 * static_cast<I64>(d)) <
                 static_cast<I64>(m) * static_cast<I64>(m - d);
    return CriterionVerdict::result(bound, bound ? "clause-2" : "size-bound");
  }
  return CriterionVerdict::result(false, "no-clause");
}

}  // namespace

CorollaryResult corollary_61(const Polynomial& g0, const Polynomial& g1, std::int64_t r0,
                             std::int64_t r1, std::uint64_t m) {
  const FieldPtr& F = g0.field();
  if (F->q() % 2 == 0) throw Error(ErrorKind::EvenQ, "q must be odd");
  const FieldElement v0 = g0.eval(F->one()), v1 = g1.eval(F->from_int(-1));
  if (v0.is_zero() || v1.is_zero())
    throw Error(ErrorKind::HypothesisViolated, "g0(1) g1(-1) must be nonzero");
  const auto s = static_cast<std::int64_t>((F->q() - 1) / 2);
  const auto d0 = static_cast<std::int64_t>(gcd(r0, s)), d1 = static_cast<std::int64_t>(gcd(r1, s));
  const FieldElement two = F->from_int(2);
  BranchMap map(CosetDecomposition(CyclicGroup::multiplicative(F), 2),
                {{F->mul(two, F->pow(v0, 2 * d0)), r0}, {F->mul(two, F->pow(v1, 2 * d1)), r1}});
  check_m_range(map, m);
  return with_map(realization_verdict(map, r1, m), m, map);
}

CorollaryResult corollary_62(const Polynomial& h0, const Polynomial& h1, std::uint64_t base_q,
                             std::int64_t r0, std::int64_t r1, std::uint64_t m) {
  const FieldPtr& F = h0.field();
  if (F->q() % 2 == 0) throw Error(ErrorKind::EvenQ, "q must be odd");
  std::uint64_t t = base_q;
  while (t < F->q()) t *= base_q;
  if (base_q < 3 || t != F->q()) throw Error(ErrorKind::InvalidArgument, "field order is not a power of q");
  const FieldElement v0 = h0.eval(F->one()), v1 = h1.eval(F->from_int(-1));
  if (v0.is_zero() || v1.is_zero() || !F->in_subfield(v0, base_q) || !F->in_subfield(v1, base_q))
    throw Error(ErrorKind::HypothesisViolated, "h0(1), h1(-1) must lie in F_q*");
  const FieldElement two = F->from_int(2);
  BranchMap map(CosetDecomposition(CyclicGroup::multiplicative(F), 2),
                {{F->mul(two, v0), r0}, {F->mul(two, v1), r1}});
  check_m_range(map, m);
  const std::uint64_t d = std::min(map.branch(0).d, map.branch(1).d);
  const std::uint64_t norm_index = (F->q() - 1) / (base_q - 1);
  if (norm_index % (2 * d))
    return with_map(CriterionVerdict::not_applicable("HypothesisViolated: 2d does not divide (q^n-1)/(q-1)"),
                    m, map);
  return with_map(realization_verdict(map, r1, m), m, map);
}

CorollaryResult specialized_criterion(Corollary c, const BranchMap& map, std::uint64_t m) {
  switch (c) {
    case Corollary::COR32:
    case Corollary::COR33: return corollary_two_branches(c, map);
    case Corollary::COR42:
    case Corollary::COR43: return corollary_three_branches(c, map);
    case Corollary::COR54: return corollary_54(map);
    case Corollary::COR55: return corollary_55(map, m);
    default:
      throw Error(ErrorKind::InvalidArgument, to_string(c) + " is built from its own parameters");
  }
}

}  // namespace gcm
