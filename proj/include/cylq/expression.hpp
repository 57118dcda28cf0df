#pragma once

// Observable specs for the command line.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '·') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' integer)?
//   atom   := number | 'i' | 'p' | '(' expr ')' | trig '(' angle ')' | 'exp' '(' ['-'] 'i' ['*'] angle ')'
//   trig   := 'cos' | 'sin'
//   angle  := ['-'] [integer ['*']] ('q' | 'theta' | 'θ')
//
// Angles count turns of the circle: cos(q) stands for cos(2 pi q / a), and theta is
// the same variable. Anything that is not a trigonometric polynomial in q times a
// polynomial in p is rejected, bare q included.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylq/cylinder.hpp"

namespace cylq {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset;
};

/// sum_m e^{i 2 pi m q / a} P_m(p); P_m stored by ascending power.
class TrigPolynomial {
 public:
  static TrigPolynomial constant(cplx c);
  static TrigPolynomial momentum();
  static TrigPolynomial mode(int m);

  TrigPolynomial operator+(const TrigPolynomial& rhs) const;
  TrigPolynomial operator*(const TrigPolynomial& rhs) const;
  TrigPolynomial operator*(cplx c) const;

  /// Largest |m| with a nonzero coefficient.
  int band() const;
  int degree() const;
  cplx coeff(int m, double p) const;
  cplx dcoeff_dp(int m, double p) const;
  const std::map<int, std::vector<cplx>>& terms() const { return terms_; }

  ModeFunction to_mode_function() const;

 private:
  void prune();
  std::map<int, std::vector<cplx>> terms_;
};

/// Throws ParseError with the byte offset of the offending token.
TrigPolynomial parse_expression(const std::string& text);

}  // namespace cylq
