#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "fewnomial/sparse2.hpp"

namespace fewnomial {

struct SystemSpec {
  SparsePolyQ2 f, g;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  SparsePolyQ2 parse_poly_until(char stop) {
    std::vector<std::tuple<Rat, Rat, Rat>> terms;
    skip_ws();
    bool first = true;
    while (true) {
      skip_ws();
      if (done() || peek() == stop) break;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (first && peek() == '+') {
          // leading plus is allowed
        }
        sign = (peek() == '-') ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      terms.push_back(parse_term(sign));
      first = false;
    }
    if (terms.empty()) fail("empty polynomial");
    return SparsePolyQ2::from_rational_terms(terms);
  }

  void expect(char c) {
    skip_ws();
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool done() const { return pos_ >= s_.size(); }
  size_t position() const { return pos_; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

 private:
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  std::tuple<Rat, Rat, Rat> parse_term(int sign) {
    skip_ws();
    Rat coeff(1);
    bool have_any = false;
    if (!done() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '(' ||
                    peek() == '.')) {
      coeff = parse_coefficient();
      have_any = true;
    }
    Rat kx(0), ky(0);
    while (true) {
      skip_ws();
      if (!done() && peek() == '*') {
        ++pos_;
        skip_ws();
      }
      if (done()) break;
      char c = peek();
      if (c == 'x' || c == 'y') {
        ++pos_;
        Rat e(1);
        skip_ws();
        if (!done() && peek() == '^') {
          ++pos_;
          e = parse_signed_integer();
        }
        if (c == 'x') kx += e;
        else ky += e;
        have_any = true;
        continue;
      }
      break;
    }
    if (!have_any) fail("expected a coefficient or a variable");
    return {sign < 0 ? Rat(-coeff) : coeff, kx, ky};
  }

  Rat parse_coefficient() {
    skip_ws();
    if (!done() && peek() == '(') {
      ++pos_;
      Rat v = parse_number();
      expect(')');
      return v;
    }
    return parse_number();
  }

  Rat parse_number() {
    skip_ws();
    Int ip = parse_digits();
    if (!done() && peek() == '.') {
      ++pos_;
      size_t start = pos_;
      Int frac = parse_digits();
      size_t places = pos_ - start;
      Rat v(ip);
      v += Rat(frac, pow_int(Int(10), places));
      v.canonicalize();
      return v;
    }
    if (!done() && peek() == '/') {
      ++pos_;
      skip_ws();
      Int den = parse_digits();
      if (sgn(den) == 0) fail("zero denominator");
      Rat v(ip, den);
      v.canonicalize();
      return v;
    }
    return Rat(ip);
  }

  Rat parse_signed_integer() {
    skip_ws();
    int sign = 1;
    if (!done() && (peek() == '-' || peek() == '+')) {
      sign = (peek() == '-') ? -1 : 1;
      ++pos_;
    }
    Int v = parse_digits();
    return Rat(sign < 0 ? Int(-v) : v);
  }

  Int parse_digits() {
    skip_ws();
    if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits");
    std::string ds;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ds += s_[pos_++];
    return Int(ds);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace detail

// Grammar: two polynomials separated by ';'. A term is an optional rational
// coefficient (fraction, finite decimal, optionally parenthesized) times
// optional x/y powers with integer (possibly negative) exponents; '*' is
// optional, whitespace ignored.
inline SystemSpec parse_system(const std::string& text) {
  detail::ExprParser p(text);
  SystemSpec spec;
  spec.f = p.parse_poly_until(';');
  p.expect(';');
  spec.g = p.parse_poly_until('\0');
  p.skip_ws();
  if (!p.done()) throw SyntaxError("trailing input", p.position());
  if (spec.g.size() != 3) throw GNotTrinomial("second polynomial must have exactly 3 terms");
  return spec;
}

inline std::string render_poly(const SparsePolyQ2& p) {
  std::string out;
  for (const auto& t : p.terms()) {
    Rat c = t.coeff->exact() ? *t.coeff->exact() : Rat(0);
    bool neg = sgn(c) < 0;
    Rat a = abs(c);
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    bool has_var = sgn(t.kx) != 0 || sgn(t.ky) != 0;
    if (a != 1 || !has_var) {
      out += is_integer(a) ? a.get_num().get_str() : "(" + a.get_str() + ")";
      if (has_var) out += "*";
    }
    if (sgn(t.kx) != 0) {
      out += "x";
      if (t.kx != 1) out += "^" + t.kx.get_num().get_str();
    }
    if (sgn(t.ky) != 0) {
      out += "y";
      if (t.ky != 1) out += "^" + t.ky.get_num().get_str();
    }
  }
  return out;
}

inline std::string render_system(const SystemSpec& spec) {
  return render_poly(spec.f) + " ; " + render_poly(spec.g);
}

}  // namespace fewnomial
