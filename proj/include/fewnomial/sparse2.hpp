#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "fewnomial/errors.hpp"
#include "fewnomial/polygon.hpp"
#include "fewnomial/real_expr.hpp"

namespace fewnomial {

struct Term2 {
  RealExpr coeff;
  Sign sign = Sign::undecided;
  Rat kx, ky;  // exponents of the two variables
};

// Sparse bivariate signomial: sum of coeff * u^kx * v^ky with rational
// exponents and certified-sign coefficients, canonically ordered.
class SparsePolyQ2 {
 public:
  SparsePolyQ2() = default;

  static SparsePolyQ2 make(std::vector<Term2> raw, unsigned max_precision = 4096) {
    std::map<std::pair<Rat, Rat>, Term2> acc;
    for (auto& t : raw) {
      auto key = std::make_pair(t.kx, t.ky);
      auto it = acc.find(key);
      if (it == acc.end()) {
        acc.emplace(key, std::move(t));
      } else {
        it->second.coeff = re_add(it->second.coeff, t.coeff);
        it->second.sign = Sign::undecided;
      }
    }
    SparsePolyQ2 p;
    for (auto& [key, t] : acc) {
      if (t.coeff->exact() && sgn(*t.coeff->exact()) == 0) continue;
      if (t.sign == Sign::undecided) t.sign = sign_of(t.coeff, max_precision);
      if (t.sign == Sign::undecided)
        throw UndecidedCoefficient("coefficient sign cannot be certified");
      p.terms_.push_back(std::move(t));
    }
    return p;
  }

  static SparsePolyQ2 from_rational_terms(const std::vector<std::tuple<Rat, Rat, Rat>>& ts) {
    std::vector<Term2> raw;
    for (const auto& [c, kx, ky] : ts) raw.push_back(Term2{re_const(c), Sign::undecided, kx, ky});
    return make(std::move(raw));
  }

  const std::vector<Term2>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  bool integer_exponents() const {
    for (const auto& t : terms_)
      if (!is_integer(t.kx) || !is_integer(t.ky)) return false;
    return true;
  }

  SparsePolyQ2 negated() const {
    SparsePolyQ2 p = *this;
    for (auto& t : p.terms_) {
      t.coeff = re_neg(t.coeff);
      t.sign = (t.sign == Sign::positive)   ? Sign::negative
               : (t.sign == Sign::negative) ? Sign::positive
                                            : Sign::undecided;
    }
    return p;
  }

  RealExpr eval_expr(const RealExpr& u, const RealExpr& v) const {
    RealExpr acc;
    for (const auto& t : terms_) {
      RealExpr m = t.coeff;
      if (sgn(t.kx) != 0) m = re_mul(m, re_pow(u, t.kx));
      if (sgn(t.ky) != 0) m = re_mul(m, re_pow(v, t.ky));
      acc = acc ? re_add(acc, m) : m;
    }
    return acc ? acc : re_const(0);
  }

  std::vector<Point2Q> support() const {
    std::vector<Point2Q> pts;
    for (const auto& t : terms_) pts.push_back(Point2Q{t.kx, t.ky});
    return pts;
  }

 private:
  std::vector<Term2> terms_;
};

// Monomial change of coordinates, written new-in-terms-of-old:
//   x = scale_x * u^{m00} v^{m01},  y = scale_y * u^{m10} v^{m11}
// with certified-positive scalings. Positive-orthant bijection, so positive
// solution counts are preserved.
struct MonomialMap {
  Rat m00{1}, m01{0}, m10{0}, m11{1};
  RealExpr scale_x = re_const(1);
  RealExpr scale_y = re_const(1);

  Rat det() const { return m00 * m11 - m01 * m10; }

  MonomialMap inverse() const {
    Rat d = det();
    if (sgn(d) == 0) throw NonInvertibleMap("monomial map is singular");
    MonomialMap inv;
    inv.m00 = m11 / d;
    inv.m01 = -m01 / d;
    inv.m10 = -m10 / d;
    inv.m11 = m00 / d;
    // u = (x/sx)^{inv00} (y/sy)^{inv01}, folded into a scaling on x, y
    inv.scale_x = re_mul(pow_or_one(scale_x, -inv.m00), pow_or_one(scale_y, -inv.m01));
    inv.scale_y = re_mul(pow_or_one(scale_x, -inv.m10), pow_or_one(scale_y, -inv.m11));
    return inv;
  }

  static RealExpr pow_or_one(const RealExpr& b, const Rat& e) {
    if (sgn(e) == 0) return re_const(1);
    return re_pow(b, e);
  }
};

// Rewrites f in the new coordinates. Exponent rows transform by the inverse
// matrix; each coefficient picks up the scalings raised to minus the new
// exponents, so that the function is unchanged pointwise on the positive
// orthant.
inline SparsePolyQ2 apply_map(const SparsePolyQ2& f, const MonomialMap& m,
                              unsigned max_precision = 4096) {
  Rat d = m.det();
  if (sgn(d) == 0) throw NonInvertibleMap("monomial map is singular");
  Rat i00 = m.m11 / d, i01 = -m.m01 / d, i10 = -m.m10 / d, i11 = m.m00 / d;
  std::vector<Term2> out;
  for (const auto& t : f.terms()) {
    Rat nk = t.kx * i00 + t.ky * i10;
    Rat nl = t.kx * i01 + t.ky * i11;
    RealExpr c = t.coeff;
    c = re_mul(c, MonomialMap::pow_or_one(m.scale_x, -nk));
    c = re_mul(c, MonomialMap::pow_or_one(m.scale_y, -nl));
    // positive scalings cannot change the sign
    out.push_back(Term2{c, t.sign, nk, nl});
  }
  return SparsePolyQ2::make(std::move(out), max_precision);
}

inline LatticePolygon newton_polygon(const SparsePolyQ2& f) {
  if (f.size() == 0) throw Error("newton_polygon: empty polynomial");
  return LatticePolygon::hull_of(f.support());
}

namespace detail {

struct SignSplit {
  Term2 neg;                 // the unique negative term after normalization
  std::vector<Term2> pos;    // the others, descending-lex exponent order
  bool negated = false;      // whether the polynomial was multiplied by -1
};

// Positive solutions require both signs among the coefficients. Normalize a
// trinomial so that exactly one term is negative; reject all-same-sign.
inline SignSplit sign_split_trinomial(const SparsePolyQ2& g) {
  if (g.size() != 3) throw GNotTrinomial("expected exactly 3 terms");
  int negs = 0;
  for (const auto& t : g.terms()) negs += (t.sign == Sign::negative) ? 1 : 0;
  if (negs == 0 || negs == 3)
    throw AllSameSign("all coefficients have the same sign: no positive solutions");
  SparsePolyQ2 h = (negs == 2) ? g.negated() : g;
  SignSplit out;
  out.negated = (negs == 2);
  for (const auto& t : h.terms()) {
    if (t.sign == Sign::negative)
      out.neg = t;
    else
      out.pos.push_back(t);
  }
  std::sort(out.pos.begin(), out.pos.end(), [](const Term2& a, const Term2& b) {
    return a.kx > b.kx || (a.kx == b.kx && a.ky > b.ky);
  });
  return out;
}

}  // namespace detail

// Map under which g becomes exactly -1 + x + y: divide out the unique
// negative term, then send each remaining (coefficient * monomial) to a
// fresh coordinate.
inline MonomialMap normalize_trinomial_unit(const SparsePolyQ2& g, unsigned max_precision = 4096) {
  auto split = detail::sign_split_trinomial(g);
  RealExpr abs_neg = re_neg(split.neg.coeff);  // positive
  MonomialMap map;
  map.m00 = split.pos[0].kx - split.neg.kx;
  map.m01 = split.pos[0].ky - split.neg.ky;
  map.m10 = split.pos[1].kx - split.neg.kx;
  map.m11 = split.pos[1].ky - split.neg.ky;
  if (sgn(map.det()) == 0) throw DegenerateSupport("collinear trinomial support");
  map.scale_x = re_div(split.pos[0].coeff, abs_neg);
  map.scale_y = re_div(split.pos[1].coeff, abs_neg);
  (void)max_precision;
  return map;
}

struct LatticeNormalization {
  MonomialMap map;
  long k3 = 0, k4 = 0, l4 = 0;
};

// Map under which g becomes exactly -1 + z^k3 + z^k4 w^l4 with k3 > 0 and
// l4 > 0. The first basis vector is the primitive direction of the first
// positive term's exponent; the second comes from the extended-gcd
// cofactors, shifted so that 0 <= k4 < l4.
inline LatticeNormalization normalize_trinomial_lattice(const SparsePolyQ2& g,
                                                        unsigned max_precision = 4096) {
  if (!g.integer_exponents()) throw NonIntegerExponent("lattice normalization needs Z^2 support");
  auto split = detail::sign_split_trinomial(g);
  RealExpr abs_neg = re_neg(split.neg.coeff);
  Int w3x = (split.pos[0].kx - split.neg.kx).get_num();
  Int w3y = (split.pos[0].ky - split.neg.ky).get_num();
  Int w4x = (split.pos[1].kx - split.neg.kx).get_num();
  Int w4y = (split.pos[1].ky - split.neg.ky).get_num();
  if (w3x * w4y - w3y * w4x == 0) throw DegenerateSupport("collinear trinomial support");
  RealExpr c3 = re_div(split.pos[0].coeff, abs_neg);
  RealExpr c4 = re_div(split.pos[1].coeff, abs_neg);

  Int k3z = gcd(w3x, w3y);
  Int px = w3x / k3z, py = w3y / k3z;
  // extended gcd: a*px + b*py == 1; second basis row (-b, a) has det 1 with (px, py)
  Int gg, a, b;
  mpz_gcdext(gg.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), px.get_mpz_t(), py.get_mpz_t());
  Int bx = -b, by = a;
  // coordinates of w4 in the basis {p3, b2}
  Int k4z = w4x * a + w4y * b;
  Int l4z = -w4x * py + w4y * px;
  if (sgn(l4z) == 0) throw DegenerateSupport("second direction parallel to the first");
  if (sgn(l4z) < 0) {
    bx = -bx;
    by = -by;
    l4z = -l4z;
  }
  // shift the second basis vector so that k4 is the least non-negative rep
  Int mu = floor_div(k4z, l4z);
  k4z -= mu * l4z;
  bx += mu * px;
  by += mu * py;

  if (!k3z.fits_slong_p() || !k4z.fits_slong_p() || !l4z.fits_slong_p())
    throw Error("lattice normalization exponents out of range");
  LatticeNormalization out;
  out.k3 = k3z.get_si();
  out.k4 = k4z.get_si();
  out.l4 = l4z.get_si();
  out.map.m00 = Rat(px);
  out.map.m01 = Rat(py);
  out.map.m10 = Rat(bx);
  out.map.m11 = Rat(by);
  out.map.scale_x = re_pow(c3, rat(Int(1), k3z));
  // s_w^l4 = c4 / c3^(k4/k3)
  RealExpr ratio = re_div(c4, MonomialMap::pow_or_one(c3, rat(k4z, k3z)));
  out.map.scale_y = re_pow(ratio, rat(Int(1), l4z));
  (void)max_precision;
  return out;
}

// g as seen through its own normalization; used by tests and reports.
inline SparsePolyQ2 trinomial_image(const SparsePolyQ2& g, const MonomialMap& map,
                                    unsigned max_precision = 4096) {
  auto split = detail::sign_split_trinomial(g);
  RealExpr abs_neg = re_neg(split.neg.coeff);
  std::vector<Term2> divided;
  divided.push_back(Term2{re_const(-1), Sign::negative, Rat(0), Rat(0)});
  for (const auto& p : split.pos)
    divided.push_back(
        Term2{re_div(p.coeff, abs_neg), Sign::positive, p.kx - split.neg.kx, p.ky - split.neg.ky});
  return apply_map(SparsePolyQ2::make(std::move(divided), max_precision), map, max_precision);
}

}  // namespace fewnomial
