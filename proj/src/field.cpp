#include "gcm/field.hpp"

#include <cmath>
#include <string>

#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

namespace gcm {

namespace {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
  }
  // m is monic
  const std::size_t deg = m.size() - 1;
  for (std::size_t k = prod.size(); k-- > deg;) {
    std::uint64_t c = prod[k];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j)
      prod[k - deg + j] = (prod[k - deg + j] + p - mul_mod(c, m[j], p)) % p;
  }
  if (prod.size() > deg) prod.resize(deg);
  trim(prod);
  return prod;
}

Poly poly_pow_mod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  while (e > 0) {
    if (e & 1) result = poly_mul_mod(result, base, m, p);
    base = poly_mul_mod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

Poly poly_rem(Poly a, const Poly& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = static_cast<std::uint64_t>(
      *inverse_mod(static_cast<std::int64_t>(b.back()), static_cast<std::int64_t>(p)));
  while (a.size() >= b.size()) {
    std::uint64_t c = mul_mod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j)
      a[shift + j] = (a[shift + j] + p - mul_mod(c, b[j], p)) % p;
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return true;
  const Poly x{0, 1};
  Poly xp = x;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    xp = poly_pow_mod(xp, p, f, p);
    Poly diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

bool x_is_primitive(const Poly& f, std::uint64_t p, std::uint64_t q,
                    const std::vector<std::uint64_t>& factors) {
  const Poly x{0, 1};
  if (f[0] == 0) return false;
  for (std::uint64_t r : factors) {
    Poly v = poly_pow_mod(x, (q - 1) / r, f, p);
    if (v.size() == 1 && v[0] == 1) return false;
  }
  return true;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

std::string Field::id() const {
  if (n_ == 1) return std::to_string(p_);
  return std::to_string(p_) + "^" + std::to_string(n_);
}

FieldPtr Field::make(std::uint64_t p, unsigned n, std::optional<std::vector<std::uint64_t>> modulus,
                     std::optional<GeneratorChoice> generator, FieldOptions options) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  {
    long double approx = std::pow(static_cast<long double>(p), static_cast<long double>(n));
    if (approx > 4294967296.0L)
      throw Error(ErrorKind::InvalidArgument, "field order exceeds 2^32");
  }

  std::shared_ptr<Field> f(new Field());
  f->p_ = p;
  f->n_ = n;
  f->q_ = ipow(p, n);
  f->order_factors_ = prime_factors(f->q_ - 1);

  if (modulus) {
    Poly m = *modulus;
    if (m.size() != n + 1)
      throw Error(ErrorKind::InvalidModulus, "modulus must have degree " + std::to_string(n));
    for (auto& c : m) c %= p;
    if (m.back() != 1) throw Error(ErrorKind::InvalidModulus, "modulus must be monic");
    if (!is_irreducible(m, p)) throw Error(ErrorKind::ReducibleModulus, "modulus is reducible");
    f->modulus_ = std::move(m);
  } else if (n == 1) {
    f->modulus_ = {0, 1};
  } else {
    // Tuple order with the constant term as the leading digit.
    const std::uint64_t count = ipow(p, n);
    bool found = false;
    for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
      Poly m(n + 1, 0);
      m[n] = 1;
      std::uint64_t rest = idx;
      for (unsigned k = n; k-- > 0;) {
        m[k] = rest % p;
        rest /= p;
      }
      if (m[0] == 0) continue;
      if (!is_irreducible(m, p)) continue;
      if (!x_is_primitive(m, p, f->q_, f->order_factors_)) continue;
      f->modulus_ = std::move(m);
      found = true;
    }
    if (!found) throw Error(ErrorKind::InvalidModulus, "no primitive modulus found");
  }

  auto is_primitive = [&](FieldElement g) {
    if (g.is_zero()) return false;
    for (std::uint64_t r : f->order_factors_)
      if (f->slow_pow(g, (f->q_ - 1) / r) == f->one()) return false;
    return true;
  };

  FieldElement default_gen;
  if (n == 1) {
    for (std::uint64_t c = 1; c < p; ++c) {
      if (is_primitive(FieldElement{c})) {
        default_gen = FieldElement{c};
        break;
      }
    }
    if (p == 2) default_gen = FieldElement{1};
  } else if (is_primitive(FieldElement{p})) {
    default_gen = FieldElement{p};
  } else {
    for (std::uint64_t c = 1; c < f->q_; ++c) {
      if (is_primitive(FieldElement{c})) {
        default_gen = FieldElement{c};
        break;
      }
    }
  }

  f->generator_ = default_gen;
  if (generator) {
    if (generator->coeffs) {
      FieldElement g = f->from_coeffs(*generator->coeffs);
      if (g.is_zero()) throw Error(ErrorKind::NotPrimitive, "generator is zero");
      if (!is_primitive(g) && f->q_ > 2)
        throw Error(ErrorKind::NotPrimitive, "generator does not have order q-1");
      f->generator_ = g;
    } else if (generator->power_of_default) {
      std::uint64_t k = *generator->power_of_default;
      if (gcd(static_cast<std::int64_t>(k), static_cast<std::int64_t>(f->q_ - 1)) != 1)
        throw Error(ErrorKind::NotPrimitive, "exponent not coprime to q-1");
      f->generator_ = f->slow_pow(default_gen, k);
    }
  }

  if (f->q_ <= options.table_limit) {
    f->build_tables();
  } else {
    f->bsgs_m_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(f->q_ - 1))));
    FieldElement cur = f->one();
    f->baby_.reserve(f->bsgs_m_ * 2);
    for (std::uint64_t j = 0; j < f->bsgs_m_; ++j) {
      f->baby_.emplace(cur.code(), j);
      cur = f->slow_mul(cur, f->generator_);
    }
    // cur = g^m, giant step multiplies by g^{-m}
    f->giant_ = f->slow_pow(cur, f->q_ - 2);
  }
  return f;
}

void Field::build_tables() {
  const std::uint64_t order = q_ - 1;
  exp_.assign(2 * order, 0);
  log_.assign(q_, 0);
  std::vector<bool> seen(q_, false);
  FieldElement cur = one();
  for (std::uint64_t k = 0; k < order; ++k) {
    if (seen[cur.code()]) throw Error(ErrorKind::NotPrimitive, "generator does not have order q-1");
    seen[cur.code()] = true;
    exp_[k] = exp_[k + order] = static_cast<std::uint32_t>(cur.code());
    log_[cur.code()] = static_cast<std::uint32_t>(k);
    cur = slow_mul(cur, generator_);
  }
}

FieldElement Field::from_int(std::int64_t v) const {
  return FieldElement{static_cast<std::uint64_t>(mod(v, static_cast<std::int64_t>(p_)))};
}

FieldElement Field::from_coeffs(std::span<const std::uint64_t> c) const {
  if (c.size() > n_)
    throw Error(ErrorKind::CoefficientNotInField, "too many coefficients for the field degree");
  std::uint64_t code = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] >= p_) throw Error(ErrorKind::CoefficientNotInField, "coefficient out of range");
    code = code * p_ + c[k];
  }
  return FieldElement{code};
}

std::vector<std::uint64_t> Field::coeffs(FieldElement x) const {
  std::vector<std::uint64_t> out(n_, 0);
  std::uint64_t v = x.code();
  for (unsigned k = 0; k < n_; ++k) {
    out[k] = v % p_;
    v /= p_;
  }
  return out;
}

FieldElement Field::add(FieldElement a, FieldElement b) const {
  if (n_ == 1) return FieldElement{(a.code() + b.code()) % p_};
  if (p_ == 2) return FieldElement{a.code() ^ b.code()};
  std::uint64_t x = a.code(), y = b.code(), out = 0, place = 1;
  while (x || y) {
    out += ((x % p_ + y % p_) % p_) * place;
    x /= p_;
    y /= p_;
    place *= p_;
  }
  return FieldElement{out};
}

FieldElement Field::neg(FieldElement a) const {
  if (n_ == 1) return FieldElement{(p_ - a.code()) % p_};
  if (p_ == 2) return a;
  std::uint64_t x = a.code(), out = 0, place = 1;
  while (x) {
    out += ((p_ - x % p_) % p_) * place;
    x /= p_;
    place *= p_;
  }
  return FieldElement{out};
}

FieldElement Field::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement Field::slow_mul(FieldElement a, FieldElement b) const {
  if (n_ == 1) return FieldElement{mul_mod(a.code(), b.code(), p_)};
  Poly pa = coeffs(a), pb = coeffs(b);
  trim(pa);
  trim(pb);
  Poly r = poly_mul_mod(pa, pb, modulus_, p_);
  return from_coeffs(r);
}

FieldElement Field::slow_pow(FieldElement a, std::uint64_t e) const {
  FieldElement result = one();
  while (e > 0) {
    if (e & 1) result = slow_mul(result, a);
    a = slow_mul(a, a);
    e >>= 1;
  }
  return result;
}

FieldElement Field::mul(FieldElement a, FieldElement b) const {
  if (a.is_zero() || b.is_zero()) return zero();
  if (!log_.empty()) return FieldElement{exp_[log_[a.code()] + log_[b.code()]]};
  return slow_mul(a, b);
}

FieldElement Field::inv(FieldElement a) const {
  if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (!log_.empty()) {
    std::uint64_t l = log_[a.code()];
    return FieldElement{exp_[l == 0 ? 0 : q_ - 1 - l]};
  }
  return slow_pow(a, q_ - 2);
}

FieldElement Field::div(FieldElement a, FieldElement b) const {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
  return mul(a, inv(b));
}

FieldElement Field::pow(FieldElement a, std::int64_t e) const {
  if (a.is_zero()) {
    if (e < 0) throw Error(ErrorKind::DivisionByZero, "negative power of zero");
    return e == 0 ? one() : zero();
  }
  const auto order = static_cast<std::int64_t>(q_ - 1);
  const auto k = static_cast<std::uint64_t>(mod(e, order));
  if (!log_.empty())
    return FieldElement{exp_[mul_mod(log_[a.code()], k, q_ - 1)]};
  return slow_pow(a, k);
}

FieldElement Field::exp(std::int64_t k) const {
  const auto r = static_cast<std::uint64_t>(mod(k, static_cast<std::int64_t>(q_ - 1)));
  if (!exp_.empty()) return FieldElement{exp_[r]};
  return slow_pow(generator_, r);
}

std::uint64_t Field::log(FieldElement x) const {
  if (x.is_zero()) throw Error(ErrorKind::ZeroArgument, "logarithm of zero");
  if (!log_.empty()) return log_[x.code()];
  FieldElement gamma = x;
  for (std::uint64_t i = 0; i <= bsgs_m_; ++i) {
    auto it = baby_.find(gamma.code());
    if (it != baby_.end()) return (i * bsgs_m_ + it->second) % (q_ - 1);
    gamma = slow_mul(gamma, giant_);
  }
  throw Error(ErrorKind::NotPrimitive, "logarithm not found");
}

std::uint64_t Field::order_of(FieldElement x) const {
  if (x.is_zero()) throw Error(ErrorKind::ZeroArgument, "order of zero");
  std::uint64_t order = q_ - 1;
  for (std::uint64_t r : order_factors_) {
    while (order % r == 0 && pow(x, static_cast<std::int64_t>(order / r)) == one()) order /= r;
  }
  return order;
}

bool Field::in_subfield(FieldElement x, std::uint64_t sub_q) const {
  if (x.is_zero()) return true;
  // x^sub_q == x  <=>  x^(sub_q-1) == 1 for x != 0
  return pow(x, static_cast<std::int64_t>(sub_q - 1)) == one();
}

std::pair<std::uint64_t, unsigned> parse_field_id(const std::string& text) {
  auto parse_num = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::SyntaxError, "bad field identifier '" + text + "'");
    return std::stoull(s);
  };
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  auto caret = t.find('^');
  if (caret == std::string::npos) {
    // A bare prime power such as "16" is accepted as 2^4.
    std::uint64_t q = parse_num(t);
    auto primes = prime_factors(q);
    if (primes.size() != 1) return {q, 1};
    unsigned n = 0;
    for (std::uint64_t v = q; v > 1; v /= primes[0]) ++n;
    return {primes[0], n};
  }
  std::uint64_t p = parse_num(t.substr(0, caret));
  std::uint64_t n = parse_num(t.substr(caret + 1));
  if (n == 0 || n > 64) throw Error(ErrorKind::SyntaxError, "bad extension degree in '" + text + "'");
  return {p, static_cast<unsigned>(n)};
}

FieldPtr make_field(const std::string& id) {
  auto [p, n] = parse_field_id(id);
  return Field::make(p, n);
}

}  // namespace gcm
