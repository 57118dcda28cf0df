#include "cylq/expression.hpp"

#include <cctype>
#include <cstdlib>

namespace cylq {

ParseError::ParseError(const std::string& message, std::size_t offset_)
    : std::runtime_error(message + " at offset " + std::to_string(offset_)), offset(offset_) {}

TrigPolynomial TrigPolynomial::constant(cplx c) {
  TrigPolynomial t;
  t.terms_[0] = {c};
  t.prune();
  return t;
}

TrigPolynomial TrigPolynomial::momentum() {
  TrigPolynomial t;
  t.terms_[0] = {cplx{}, cplx{1.0, 0.0}};
  return t;
}

TrigPolynomial TrigPolynomial::mode(int m) {
  TrigPolynomial t;
  t.terms_[m] = {cplx{1.0, 0.0}};
  return t;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& rhs) const {
  TrigPolynomial out = *this;
  for (const auto& [m, poly] : rhs.terms_) {
    auto& dst = out.terms_[m];
    if (dst.size() < poly.size()) dst.resize(poly.size());
    for (std::size_t d = 0; d < poly.size(); ++d) dst[d] += poly[d];
  }
  out.prune();
  return out;
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& rhs) const {
  TrigPolynomial out;
  for (const auto& [m1, p1] : terms_) {
    for (const auto& [m2, p2] : rhs.terms_) {
      auto& dst = out.terms_[m1 + m2];
      if (dst.size() < p1.size() + p2.size() - 1) dst.resize(p1.size() + p2.size() - 1);
      for (std::size_t i = 0; i < p1.size(); ++i) {
        for (std::size_t j = 0; j < p2.size(); ++j) dst[i + j] += p1[i] * p2[j];
      }
    }
  }
  out.prune();
  return out;
}

TrigPolynomial TrigPolynomial::operator*(cplx c) const { return *this * constant(c); }

void TrigPolynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    auto& poly = it->second;
    while (!poly.empty() && poly.back() == cplx{}) poly.pop_back();
    it = poly.empty() ? terms_.erase(it) : std::next(it);
  }
}

int TrigPolynomial::band() const {
  int b = 0;
  for (const auto& [m, poly] : terms_) b = std::max(b, std::abs(m));
  return b;
}

int TrigPolynomial::degree() const {
  int d = 0;
  for (const auto& [m, poly] : terms_) d = std::max(d, static_cast<int>(poly.size()) - 1);
  return d;
}

cplx TrigPolynomial::coeff(int m, double p) const {
  const auto it = terms_.find(m);
  if (it == terms_.end()) return {};
  cplx v{};
  for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) v = v * p + *c;
  return v;
}

cplx TrigPolynomial::dcoeff_dp(int m, double p) const {
  const auto it = terms_.find(m);
  if (it == terms_.end()) return {};
  const auto& poly = it->second;
  cplx v{};
  for (std::size_t d = poly.size(); d-- > 1;) v = v * p + static_cast<double>(d) * poly[d];
  return v;
}

ModeFunction TrigPolynomial::to_mode_function() const {
  const TrigPolynomial self = *this;
  return {band(), [self](int m, double p) { return self.coeff(m, p); },
          [self](int m, double p) { return self.dcoeff_dp(m, p); }};
}

namespace {

constexpr int kMaxPower = 64;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  TrigPolynomial parse() {
    TrigPolynomial t = expr();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip_space();
    if (s_.compare(pos_, tok.size(), tok) != 0) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  // Identifier made of ASCII letters, without consuming it.
  std::string peek_word() {
    skip_space();
    std::size_t end = pos_;
    while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
    return s_.substr(pos_, end - pos_);
  }

  bool accept_word(const std::string& w) {
    if (peek_word() != w) return false;
    pos_ += w.size();
    return true;
  }

  bool accept_times() { return accept("*") || accept("·"); }

  TrigPolynomial expr() {
    TrigPolynomial t = term();
    for (;;) {
      if (accept("+")) t = t + term();
      else if (accept("-")) t = t + term() * cplx{-1.0, 0.0};
      else return t;
    }
  }

  TrigPolynomial term() {
    TrigPolynomial t = unary();
    while (accept_times()) t = t * unary();
    return t;
  }

  TrigPolynomial unary() {
    if (accept("-")) return unary() * cplx{-1.0, 0.0};
    return power();
  }

  TrigPolynomial power() {
    TrigPolynomial base = atom();
    if (!accept("^")) return base;
    skip_space();
    const std::size_t at = pos_;
    const long e = integer();
    if (e < 0 || e > kMaxPower) {
      pos_ = at;
      fail("exponent must be an integer in [0, " + std::to_string(kMaxPower) + "]");
    }
    TrigPolynomial out = TrigPolynomial::constant(1.0);
    for (long i = 0; i < e; ++i) out = out * base;
    return out;
  }

  long integer() {
    skip_space();
    std::size_t end = pos_;
    if (end < s_.size() && (s_[end] == '-' || s_[end] == '+')) ++end;
    const std::size_t digits = end;
    while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
    if (end == digits || end - digits > 6) fail("expected an integer");
    const long v = std::strtol(s_.c_str() + pos_, nullptr, 10);
    pos_ = end;
    return v;
  }

  double number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  bool accept_angle_variable() {
    if (accept("θ")) return true;
    const std::string w = peek_word();
    if (w == "q" || w == "theta") {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  // ['-'] [integer ['*']] variable; returns the signed integer multiple.
  int angle() {
    const int sign = accept("-") ? -1 : 1;
    skip_space();
    int mult = 1;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t at = pos_;
      const long v = integer();
      if (v == 0 || v > 100000) {
        pos_ = at;
        fail("angle multiple must be a nonzero integer");
      }
      mult = static_cast<int>(v);
      accept_times();
    }
    if (!accept_angle_variable()) fail("expected q or theta in the angle");
    return sign * mult;
  }

  TrigPolynomial atom() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return TrigPolynomial::constant(number());
    if (accept("(")) {
      TrigPolynomial t = expr();
      expect(")");
      return t;
    }
    if (s_.compare(pos_, 2, "θ") == 0) fail("theta must appear inside cos, sin or exp");
    const std::string w = peek_word();
    if (w == "p") {
      pos_ += 1;
      return TrigPolynomial::momentum();
    }
    if (w == "i") {
      pos_ += 1;
      return TrigPolynomial::constant(cplx{0.0, 1.0});
    }
    if (w == "cos" || w == "sin") {
      pos_ += w.size();
      expect("(");
      const int m = angle();
      expect(")");
      const TrigPolynomial up = TrigPolynomial::mode(m), down = TrigPolynomial::mode(-m);
      if (w == "cos") return (up + down) * cplx{0.5, 0.0};
      return (up + down * cplx{-1.0, 0.0}) * cplx{0.0, -0.5};
    }
    if (w == "exp") {
      pos_ += 3;
      expect("(");
      const bool negative = accept("-");
      if (!accept_word("i")) fail("exp takes i times an angle");
      accept_times();
      const int m = angle();
      expect(")");
      return TrigPolynomial::mode(negative ? -m : m);
    }
    if (w == "q" || w == "theta") fail(w + " must appear inside cos, sin or exp");
    if (w.empty()) fail("unexpected '" + std::string(1, c) + "'");
    fail("unknown identifier '" + w + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

TrigPolynomial parse_expression(const std::string& text) {
  if (text.find_first_not_of(" \t\n") == std::string::npos) throw ParseError("empty expression", 0);
  return Parser(text).parse();
}

}  // namespace cylq
