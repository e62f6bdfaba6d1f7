#include "gcm/cyclotomic.hpp"

#include <algorithm>

#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

namespace gcm {

CyclicGroup CyclicGroup::multiplicative(FieldPtr field) {
  CyclicGroup g;
  g.order_ = field->q() - 1;
  g.gamma_ = field->generator();
  g.field_ = std::move(field);
  return g;
}

CyclicGroup CyclicGroup::subgroup(FieldPtr field, std::uint64_t order,
                                  std::optional<FieldElement> gamma) {
  const std::uint64_t qm1 = field->q() - 1;
  if (order == 0 || qm1 % order != 0)
    throw Error(ErrorKind::IndexNotDividingOrder,
                "subgroup order " + std::to_string(order) + " does not divide q-1");
  CyclicGroup g;
  g.kind_ = order == qm1 ? GroupKind::Multiplicative : GroupKind::Subgroup;
  g.order_ = order;
  g.cofactor_ = qm1 / order;
  if (gamma) {
    if (gamma->is_zero()) throw Error(ErrorKind::NotPrimitive, "group generator is zero");
    std::uint64_t l = field->log(*gamma);
    if (l % g.cofactor_ != 0)
      throw Error(ErrorKind::NotInGroup, "generator does not lie in the subgroup");
    auto inv = inverse_mod(static_cast<std::int64_t>(l / g.cofactor_), static_cast<std::int64_t>(order));
    if (!inv) throw Error(ErrorKind::NotPrimitive, "element does not generate the subgroup");
    g.j_inv_ = static_cast<std::uint64_t>(*inv);
    g.gamma_ = *gamma;
  } else {
    g.gamma_ = field->exp(static_cast<std::int64_t>(g.cofactor_));
  }
  g.field_ = std::move(field);
  return g;
}

CyclicGroup CyclicGroup::unit_circle(FieldPtr field, std::optional<FieldElement> zeta) {
  if (field->n() % 2 != 0)
    throw Error(ErrorKind::UnsupportedContext, "unit circle needs a field of even degree");
  std::uint64_t base = 1;
  for (unsigned k = 0; k < field->n() / 2; ++k) base *= field->p();
  CyclicGroup g = subgroup(std::move(field), base + 1, zeta);
  g.kind_ = GroupKind::UnitCircle;
  g.base_q_ = base;
  return g;
}

bool CyclicGroup::contains(FieldElement x) const {
  if (x.is_zero() || !field_->contains(x)) return false;
  return field_->log(x) % cofactor_ == 0;
}

std::uint64_t CyclicGroup::log(FieldElement x) const {
  if (x.is_zero() || !field_->contains(x)) throw Error(ErrorKind::NotInGroup, "zero is not in the group");
  std::uint64_t l = field_->log(x);
  if (l % cofactor_ != 0) throw Error(ErrorKind::NotInGroup, "element outside the subgroup");
  return mul_mod(l / cofactor_, j_inv_, order_);
}

FieldElement CyclicGroup::elem(std::int64_t k) const {
  return field_->pow(gamma_, mod(k, static_cast<std::int64_t>(order_)));
}

std::vector<FieldElement> CyclicGroup::elements() const {
  std::vector<FieldElement> out;
  out.reserve(order_);
  FieldElement cur = field_->one();
  for (std::uint64_t k = 0; k < order_; ++k) {
    out.push_back(cur);
    cur = field_->mul(cur, gamma_);
  }
  return out;
}

std::string CyclicGroup::label() const {
  switch (kind_) {
    case GroupKind::Multiplicative: return "F_" + std::to_string(field_->q()) + "*";
    case GroupKind::UnitCircle: return "U_" + std::to_string(order_);
    case GroupKind::Subgroup: return "mu_" + std::to_string(order_);
  }
  return "?";
}

CosetDecomposition::CosetDecomposition(CyclicGroup group, std::uint64_t ell)
    : group_(std::move(group)), ell_(ell) {
  if (ell == 0 || group_.order() % ell != 0)
    throw Error(ErrorKind::IndexNotDividingOrder,
                "index " + std::to_string(ell) + " does not divide " + std::to_string(group_.order()));
  s_ = group_.order() / ell;
  omega_ = group_.elem(static_cast<std::int64_t>(s_));
}

std::uint64_t CosetDecomposition::coset_of(FieldElement x) const { return group_.log(x) % ell_; }

std::vector<FieldElement> CosetDecomposition::coset(std::uint64_t i) const {
  std::vector<FieldElement> out;
  out.reserve(s_);
  const Field& F = *group_.field();
  FieldElement step = group_.elem(static_cast<std::int64_t>(ell_));
  FieldElement cur = group_.elem(static_cast<std::int64_t>(i));
  for (std::uint64_t k = 0; k < s_; ++k) {
    out.push_back(cur);
    cur = F.mul(cur, step);
  }
  return out;
}

BranchMap::BranchMap(CosetDecomposition decomp,
                     const std::vector<std::pair<FieldElement, std::int64_t>>& branches)
    : decomp_(std::move(decomp)) {
  if (branches.size() != decomp_.ell())
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(decomp_.ell()) +
                                                " branches, got " + std::to_string(branches.size()));
  const auto N = static_cast<std::int64_t>(group().order());
  const auto s = static_cast<std::int64_t>(decomp_.s());
  for (const auto& [a, r] : branches) {
    if (a.is_zero()) throw Error(ErrorKind::InvalidArgument, "branch constant is zero");
    Branch b;
    b.a = a;
    b.r = r;
    b.r_reduced = static_cast<std::uint64_t>(mod(r, N));
    b.log_a = group().log(a);
    b.d = gcd(r, s);
    if (b.d != gcd(static_cast<std::int64_t>(b.r_reduced), s))
      throw Error(ErrorKind::InvalidArgument, "gcd changed under reduction of the exponent");
    branches_.push_back(b);
  }
}

FieldElement BranchMap::eval(FieldElement x) const {
  const Branch& b = branches_[decomp_.coset_of(x)];
  const Field& F = *field();
  return F.mul(b.a, F.pow(x, static_cast<std::int64_t>(b.r_reduced)));
}

std::uint64_t BranchMap::image_exponent(std::uint64_t k) const {
  const std::uint64_t N = group().order();
  const Branch& b = branches_[k % ell()];
  return (b.log_a + mul_mod(k % N, b.r_reduced, N)) % N;
}

std::uint64_t BranchMap::phi(std::size_t i, std::uint64_t n) const {
  const Branch& b = branches_.at(i);
  const auto sn = static_cast<std::int64_t>(n);
  const std::int64_t ir = mod(static_cast<std::int64_t>(i) * mod(b.r, sn), sn);
  return static_cast<std::uint64_t>(mod(ir + static_cast<std::int64_t>(b.log_a % n), sn));
}

bool BranchMap::equal_gcds() const {
  return std::all_of(branches_.begin(), branches_.end(),
                     [&](const Branch& b) { return b.d == branches_.front().d; });
}

std::string BranchMap::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (i) out += ",";
    out += format_element(branches_[i].a, *field()) + ":" + std::to_string(branches_[i].r);
  }
  return out;
}

namespace {

std::vector<FieldElement> progression(const CyclicGroup& g, std::uint64_t base, std::uint64_t step,
                                      std::uint64_t count) {
  std::vector<FieldElement> out;
  out.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t)
    out.push_back(g.elem(static_cast<std::int64_t>((base + t * step) % g.order())));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BranchImage branch_image(const BranchMap& map, std::size_t i) {
  const Branch& b = map.branch(i);
  BranchImage img;
  img.d = b.d;
  img.size = map.s() / b.d;
  img.base_exponent = map.phi(i, map.group().order());
  img.target_coset = img.base_exponent % map.ell();
  img.step = map.ell() * b.d;
  img.elements = progression(map.group(), img.base_exponent, img.step, img.size);
  return img;
}

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Disjoint: return "Disjoint";
    case RelationKind::ISubsetJ: return "ISubsetJ";
    case RelationKind::JSubsetI: return "JSubsetI";
    case RelationKind::Equal: return "Equal";
    case RelationKind::PartialOverlap: return "PartialOverlap";
  }
  return "?";
}

BranchRelation branch_relation(const BranchMap& map, std::size_t i, std::size_t j) {
  const std::uint64_t N = map.group().order();
  const std::uint64_t ell = map.ell();
  const Branch& bi = map.branch(i);
  const Branch& bj = map.branch(j);
  BranchRelation rel{};
  rel.d = gcd(static_cast<std::int64_t>(bi.d), static_cast<std::int64_t>(bj.d));
  rel.dbar = lcm(bi.d, bj.d);
  const std::uint64_t ci = map.phi(i, N);
  const std::uint64_t cj = map.phi(j, N);
  rel.c = (ci + N - cj) % N;
  rel.abar = static_cast<std::uint64_t>(*inverse_mod(static_cast<std::int64_t>(bj.d / rel.d),
                                                     static_cast<std::int64_t>(bi.d / rel.d)));
  rel.step = ell * rel.dbar;
  if (map.phi(i, ell * rel.d) != map.phi(j, ell * rel.d)) {
    rel.kind = RelationKind::Disjoint;
    return rel;
  }
  const bool i_in_j = bi.d % bj.d == 0 && map.phi(i, ell * bj.d) == map.phi(j, ell * bj.d);
  const bool j_in_i = bj.d % bi.d == 0 && map.phi(i, ell * bi.d) == map.phi(j, ell * bi.d);
  if (i_in_j && j_in_i) rel.kind = RelationKind::Equal;
  else if (i_in_j) rel.kind = RelationKind::ISubsetJ;
  else if (j_in_i) rel.kind = RelationKind::JSubsetI;
  else rel.kind = RelationKind::PartialOverlap;

  rel.x0 = mul_mod(rel.abar, rel.c / (ell * rel.d), N);
  rel.base_exponent = (cj + mul_mod(ell * bj.d, rel.x0, N)) % N;
  rel.count = N / rel.step;
  rel.intersection = progression(map.group(), rel.base_exponent, rel.step, rel.count);
  return rel;
}

Polynomial expand(const BranchMap& map, bool scaled) {
  if (!map.group().is_full())
    throw Error(ErrorKind::UnsupportedContext, "expansion is defined on the full multiplicative group");
  const FieldPtr& field = map.field();
  const Field& F = *field;
  const std::uint64_t ell = map.ell();
  const std::uint64_t s = map.s();
  const auto qm1 = static_cast<std::int64_t>(F.q() - 1);
  const FieldElement omega_inv = F.inv(map.decomp().omega());
  Polynomial out(field);
  for (std::uint64_t i = 0; i < ell; ++i) {
    const Branch& b = map.branch(i);
    FieldElement w = F.one();
    FieldElement w_step = F.pow(omega_inv, static_cast<std::int64_t>(i));
    for (std::uint64_t j = 0; j < ell; ++j) {
      std::int64_t e = mod(b.r + static_cast<std::int64_t>(j * s), qm1);
      if (e == 0) e = qm1;  // x^0 would not vanish at 0
      out.add_term(F.mul(b.a, w), static_cast<std::uint64_t>(e));
      w = F.mul(w, w_step);
    }
  }
  if (scaled) out = out.scaled(F.inv(F.from_int(static_cast<std::int64_t>(ell % F.p()))));
  return out;
}

std::vector<std::pair<FieldElement, std::int64_t>> parse_branches(const std::string& text,
                                                                  const FieldPtr& field,
                                                                  const Symbols& symbols) {
  std::vector<std::pair<FieldElement, std::int64_t>> out;
  // Split on commas outside brackets so "[1,2]:3" stays intact.
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (const auto& part : parts) {
    auto colon = part.rfind(':');
    if (colon == std::string::npos)
      throw Error(ErrorKind::SyntaxError, "branch '" + part + "' lacks ':'");
    FieldElement a = parse_element(part.substr(0, colon), field, symbols);
    std::string rtext = part.substr(colon + 1);
    rtext.erase(std::remove_if(rtext.begin(), rtext.end(), ::isspace), rtext.end());
    std::int64_t r = 0;
    try {
      std::size_t used = 0;
      r = std::stoll(rtext, &used);
      if (used != rtext.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "bad exponent '" + rtext + "'");
    }
    out.emplace_back(a, r);
  }
  return out;
}

}  // namespace gcm
