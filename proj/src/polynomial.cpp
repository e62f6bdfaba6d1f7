#include "gcm/polynomial.hpp"

#include <cctype>
#include <optional>

#include "gcm/error.hpp"
#include "gcm/numtheory.hpp"

namespace gcm {

Polynomial Polynomial::constant(FieldPtr field, FieldElement c) {
  Polynomial f(std::move(field));
  f.add_term(c, 0);
  return f;
}

Polynomial Polynomial::monomial(FieldPtr field, FieldElement c, std::uint64_t e) {
  Polynomial f(std::move(field));
  f.add_term(c, e);
  return f;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

std::int64_t Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<std::int64_t>(terms_.rbegin()->first);
}

FieldElement Polynomial::coeff(std::uint64_t e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? field_->zero() : it->second;
}

std::vector<FieldElement> Polynomial::dense() const {
  std::vector<FieldElement> out(static_cast<std::size_t>(degree() + 1), field_->zero());
  for (const auto& [e, c] : terms_) out[e] = c;
  return out;
}

std::uint64_t Polynomial::reduce_exponent(std::uint64_t e) const {
  const std::uint64_t q = field_->q();
  if (e < q) return e;
  return (e - 1) % (q - 1) + 1;
}

void Polynomial::add_term(FieldElement c, std::uint64_t e) {
  if (c.is_zero()) return;
  e = reduce_exponent(e);
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second = field_->add(it->second, c);
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(c, e);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(field_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, field_->neg(c));
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out(field_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) out.add_term(field_->mul(c1, c2), e1 + e2);
  return out;
}

Polynomial Polynomial::pow(std::uint64_t e) const {
  Polynomial result = constant(field_, field_->one());
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::scaled(FieldElement c) const {
  Polynomial out(field_);
  for (const auto& [e, k] : terms_) out.add_term(field_->mul(k, c), e);
  return out;
}

FieldElement Polynomial::eval(FieldElement x) const {
  FieldElement acc = field_->zero();
  for (const auto& [e, c] : terms_)
    acc = field_->add(acc, field_->mul(c, field_->pow(x, static_cast<std::int64_t>(e))));
  return acc;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const FieldPtr& field, const Symbols& symbols, bool allow_x)
      : text_(text), field_(field), symbols_(symbols), allow_x_(allow_x) {}

  Polynomial parse() {
    Polynomial v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::SyntaxError,
                why + " at position " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<std::uint64_t> number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) return std::nullopt;
    std::string digits = text_.substr(start, pos_ - start);
    if (digits.size() > 18) fail("integer too large");
    return std::stoull(digits);
  }

  Polynomial constant(FieldElement c) const { return Polynomial::constant(field_, c); }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        Polynomial d = unary();
        if (!d.is_constant()) fail("division by a non-constant");
        FieldElement c = d.coeff(0);
        if (c.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero in '" + text_ + "'");
        acc = acc.scaled(field_->inv(c));
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  std::int64_t exponent() {
    bool negative = false;
    bool paren = accept('(');
    if (accept('-')) negative = true;
    auto n = number();
    if (!n) fail("expected an integer exponent");
    if (paren && !accept(')')) fail("expected ')'");
    auto v = static_cast<std::int64_t>(*n);
    return negative ? -v : v;
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!accept('^')) return base;
    std::int64_t e = exponent();
    if (base.is_constant()) {
      FieldElement c = base.coeff(0);
      if (c.is_zero() && e < 0)
        throw Error(ErrorKind::DivisionByZero, "negative power of zero in '" + text_ + "'");
      return constant(field_->pow(c, e));
    }
    if (e < 0) fail("negative exponent on a polynomial");
    return base.pow(static_cast<std::uint64_t>(e));
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (c == '[') {
      ++pos_;
      std::vector<std::uint64_t> coeffs;
      if (!accept(']')) {
        do {
          auto n = number();
          if (!n) fail("expected a coefficient");
          if (*n >= field_->p())
            throw Error(ErrorKind::CoefficientNotInField,
                        "coefficient " + std::to_string(*n) + " not in [0, p)");
          coeffs.push_back(*n);
        } while (accept(','));
        if (!accept(']')) fail("expected ']'");
      }
      return constant(field_->from_coeffs(coeffs));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto n = number();
      return constant(field_->from_int(static_cast<std::int64_t>(*n % field_->p())));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "x") {
        if (!allow_x_) fail("variable x not allowed in an element");
        return Polynomial::monomial(field_, field_->one(), 1);
      }
      auto it = symbols_.find(name);
      if (it != symbols_.end()) return constant(it->second);
      if (name == "g") return constant(field_->generator());
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const FieldPtr& field_;
  const Symbols& symbols_;
  bool allow_x_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldElement parse_element(const std::string& text, const FieldPtr& field, const Symbols& symbols) {
  Polynomial v = Parser(text, field, symbols, false).parse();
  return v.coeff(0);
}

Polynomial parse_polynomial(const std::string& text, const FieldPtr& field,
                            const Symbols& symbols) {
  return Parser(text, field, symbols, true).parse();
}

std::string format_element(const FieldElement& x, const Field& field) {
  if (field.n() == 1) return std::to_string(x.code());
  if (x.is_zero()) return "0";
  return "g^" + std::to_string(field.log(x));
}

std::string format_polynomial(const Polynomial& f) {
  if (f.is_zero()) return "0";
  const Field& F = *f.field();
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    auto [e, c] = *it;
    bool negative = false;
    std::string coeff;
    if (F.n() == 1) {
      std::uint64_t v = c.code();
      if (v > F.p() / 2) {
        negative = true;
        v = F.p() - v;
      }
      if (v != 1 || e == 0) coeff = std::to_string(v);
    } else if (c != F.one() || e == 0) {
      coeff = format_element(c, F);
    }
    if (first) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    first = false;
    std::string mono = e == 0 ? "" : (e == 1 ? "x" : "x^" + std::to_string(e));
    if (!coeff.empty() && !mono.empty()) out += coeff + "*" + mono;
    else out += coeff + mono;
  }
  return out;
}

}  // namespace gcm
