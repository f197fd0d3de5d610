#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fewnomial/errors.hpp"
#include "fewnomial/real_expr.hpp"
#include "fewnomial/unipoly.hpp"

namespace fewnomial {

// One term c * x^k * (1-x)^l with rational exponents.
struct GenTerm {
  RealExpr coeff;
  Sign coeff_sign = Sign::undecided;
  Rat k, l;
};

// Finite sum of terms c_i * x^{k_i} (1-x)^{l_i}, canonically ordered by
// (k, l) with distinct exponent pairs. Defined (and analyzed) on (0,1);
// exponents may be negative.
class GenPoly {
 public:
  GenPoly() = default;

  // Merges equal exponent pairs by coefficient addition. With
  // require_certified_signs, a merged coefficient whose sign cannot be
  // certified (and is not exactly zero) stops the pipeline; internal uses
  // (derivatives feeding interval certificates) tolerate undecided signs.
  static GenPoly make(std::vector<GenTerm> raw, unsigned max_precision = 4096,
                      bool require_certified_signs = true) {
    std::map<std::pair<Rat, Rat>, RealExpr> acc;
    for (auto& t : raw) {
      auto key = std::make_pair(t.k, t.l);
      auto it = acc.find(key);
      if (it == acc.end())
        acc.emplace(key, t.coeff);
      else
        it->second = re_add(it->second, t.coeff);
    }
    GenPoly g;
    for (auto& [key, c] : acc) {
      if (c->exact() && sgn(*c->exact()) == 0) continue;  // exact cancellation
      Sign s = sign_of(c, max_precision);
      if (s == Sign::undecided && !c->exact() && require_certified_signs)
        throw UndecidedCoefficient("merged coefficient sign undecided");
      g.terms_.push_back(GenTerm{c, s, key.first, key.second});
    }
    return g;
  }

  const std::vector<GenTerm>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Rat min_k() const {
    Rat m = terms_.at(0).k;
    for (const auto& t : terms_)
      if (t.k < m) m = t.k;
    return m;
  }
  Rat min_l() const {
    Rat m = terms_.at(0).l;
    for (const auto& t : terms_)
      if (t.l < m) m = t.l;
    return m;
  }

  // Same roots on (0,1); exponents shifted so min k = min l = 0.
  GenPoly normalized() const {
    if (terms_.empty()) return *this;
    return shifted(-min_k(), -min_l());
  }
  GenPoly shifted(const Rat& dk, const Rat& dl) const {
    GenPoly g = *this;
    for (auto& t : g.terms_) {
      t.k += dk;
      t.l += dl;
    }
    return g;
  }

  // d/dx of each term: c k x^{k-1}(1-x)^l - c l x^k (1-x)^{l-1}.
  GenPoly derivative(unsigned max_precision = 4096) const {
    std::vector<GenTerm> out;
    for (const auto& t : terms_) {
      if (sgn(t.k) != 0)
        out.push_back(GenTerm{re_mul_rat(t.coeff, t.k), Sign::undecided, t.k - 1, t.l});
      if (sgn(t.l) != 0)
        out.push_back(GenTerm{re_mul_rat(re_neg(t.coeff), t.l), Sign::undecided, t.k, t.l - 1});
    }
    return GenPoly::make(std::move(out), max_precision, /*require_certified_signs=*/false);
  }

  // Enclosure over an x-interval; x must stay inside [0,1], with endpoints
  // 0/1 allowed only when no exponent on that side is negative.
  Interval eval_on(const Interval& x, unsigned w) const {
    Interval one_minus_x = Interval::sub(Interval::point(1), x, w);
    Interval acc = Interval::point(0);
    for (const auto& t : terms_) {
      Interval v = t.coeff->eval_working(w);
      if (sgn(t.k) != 0) v = Interval::mul(v, Interval::pow(x, t.k, w), w);
      if (sgn(t.l) != 0) v = Interval::mul(v, Interval::pow(one_minus_x, t.l, w), w);
      acc = Interval::add(acc, v, w);
    }
    return acc;
  }

  Interval eval_at(const Rat& x, unsigned w) const { return eval_on(Interval::from_rat(x, w), w); }

  // Certified sign of the value at a rational point, walking the precision
  // ladder; undecided when the value cannot be separated from zero.
  Sign sign_at(const Rat& x, const PrecisionLadder& ladder) const {
    for (unsigned w = ladder.first(); !ladder.done(w); w = ladder.next(w)) {
      try {
        Sign s = eval_at(x, w).sign();
        if (s != Sign::undecided) return s;
      } catch (const Error&) {
      }
    }
    return Sign::undecided;
  }

  // Exact functional-zero test, up to sign certification. Terms are grouped
  // by the fractional parts of (k, l); the function vanishes identically on
  // (0,1) iff every group's integer-exponent part expands to the zero
  // polynomial. Returns nullopt when some group coefficient has an
  // uncertifiable sign (no conclusion possible).
  std::optional<bool> functionally_zero(unsigned max_precision = 4096) const {
    if (terms_.empty()) return true;
    std::map<std::pair<Rat, Rat>, std::vector<const GenTerm*>> groups;
    for (const auto& t : terms_)
      groups[{frac_part(t.k), frac_part(t.l)}].push_back(&t);
    bool any_undecided = false;
    for (auto& [key, ts] : groups) {
      Rat kmin = ts[0]->k, lmin = ts[0]->l;
      for (auto* t : ts) {
        if (t->k < kmin) kmin = t->k;
        if (t->l < lmin) lmin = t->l;
      }
      // expand sum of c x^a (1-x)^b with integer a,b >= 0 into coefficients
      long maxdeg = 0;
      struct Piece {
        const GenTerm* t;
        long a, b;
      };
      std::vector<Piece> pieces;
      for (auto* t : ts) {
        Rat ka = t->k - kmin, lb = t->l - lmin;
        if (!is_integer(ka) || !is_integer(lb)) throw Error("group shift not integral");
        long a = ka.get_num().get_si(), b = lb.get_num().get_si();
        pieces.push_back({t, a, b});
        maxdeg = std::max(maxdeg, a + b);
      }
      std::vector<RealExpr> coeff(static_cast<size_t>(maxdeg) + 1);
      for (const auto& pc : pieces) {
        for (long i = 0; i <= pc.b; ++i) {
          Rat binom(fewnomial::binomial(static_cast<unsigned long>(pc.b),
                                        static_cast<unsigned long>(i)));
          if (i % 2 == 1) binom = -binom;
          RealExpr add = re_mul_rat(pc.t->coeff, binom);
          auto& slot = coeff[static_cast<size_t>(pc.a + i)];
          slot = slot ? re_add(slot, add) : add;
        }
      }
      for (const auto& c : coeff) {
        if (!c) continue;
        if (c->exact()) {
          if (sgn(*c->exact()) != 0) return false;
          continue;
        }
        Sign s = sign_of(c, max_precision);
        if (s != Sign::undecided) return false;
        any_undecided = true;
      }
    }
    if (any_undecided) return std::nullopt;
    return true;
  }

  std::string str() const {
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + t.coeff->str() + ")*x^(" + t.k.get_str() + ")*(1-x)^(" + t.l.get_str() + ")";
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<GenTerm> terms_;
};

}  // namespace fewnomial
