#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "fewnomial/errors.hpp"
#include "fewnomial/rational.hpp"

namespace fewnomial {

enum class Sign { negative = -1, undecided = 0, positive = 1 };

inline int to_int(Sign s) { return static_cast<int>(s); }

// Arbitrary-precision binary float (value = mantissa * 2^exponent), RAII over
// mpfr_t. All arithmetic is done through directed-rounding static helpers so
// enclosures stay sound.
class Dyadic {
 public:
  explicit Dyadic(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Dyadic(const Dyadic& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Dyadic(Dyadic&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Dyadic& operator=(const Dyadic& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Dyadic& operator=(Dyadic&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Dyadic() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static Dyadic from_rat(const Rat& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    Dyadic d(prec);
    mpfr_set_q(d.v_, q.get_mpq_t(), rnd);
    return d;
  }
  static Dyadic from_long(long x, mpfr_prec_t prec = 64) {
    Dyadic d(prec);
    mpfr_set_si(d.v_, x, MPFR_RNDN);
    return d;
  }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  bool is_finite() const { return mpfr_number_p(v_); }
  int cmp(const Dyadic& o) const { return mpfr_cmp(v_, o.v_); }
  int cmp(const Rat& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }
  bool operator<(const Dyadic& o) const { return cmp(o) < 0; }
  bool operator<=(const Dyadic& o) const { return cmp(o) <= 0; }

  // Exact conversion; dyadic values are always representable as rationals.
  Rat to_rat() const {
    if (!is_finite()) throw Error("Dyadic::to_rat on non-finite value");
    if (is_zero()) return Rat(0);
    Int mant;
    mp_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
    Rat r(mant);
    if (e >= 0) {
      mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
      mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  std::string str(size_t digits = 17) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t v_;
};

namespace detail {

inline Dyadic dy_op2(int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t),
                     const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic r(prec);
  op(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

// y^(p/q) with directed rounding, y >= 0. Composition of two correctly
// rounded monotone steps keeps the bound valid (not necessarily tight).
inline Dyadic dy_pow_rat(const Dyadic& y, const Rat& e, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  if (y.sign() < 0) throw PowOfNonpositive("pow of negative value");
  long p;
  unsigned long q;
  if (!e.get_num().fits_slong_p() || !e.get_den().fits_ulong_p())
    throw Error("pow exponent too large");
  p = e.get_num().get_si();
  q = e.get_den().get_ui();
  Dyadic r(prec);
  if (q == 1) {
    mpfr_pow_si(r.raw(), y.raw(), p, rnd);
    return r;
  }
  // For p>0 both steps keep the rounding direction; for p<0 the outer power
  // is decreasing, so the inner root must be rounded the opposite way.
  mpfr_rnd_t inner = rnd;
  if (p < 0) inner = (rnd == MPFR_RNDD) ? MPFR_RNDU : MPFR_RNDD;
  Dyadic t(prec + 8);
  mpfr_rootn_ui(t.raw(), y.raw(), q, inner);
  mpfr_pow_si(r.raw(), t.raw(), p, rnd);
  return r;
}

}  // namespace detail

// Closed interval [lo, hi] with dyadic endpoints; lo <= hi. Directed rounding
// at a caller-chosen working precision.
class Interval {
 public:
  Interval() : lo_(2), hi_(2) {}
  Interval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_.cmp(hi_) <= 0)) throw Error("Interval: lo > hi");
  }

  static Interval from_rat(const Rat& q, mpfr_prec_t prec) {
    return Interval(Dyadic::from_rat(q, prec, MPFR_RNDD), Dyadic::from_rat(q, prec, MPFR_RNDU));
  }
  static Interval from_rats(const Rat& lo, const Rat& hi, mpfr_prec_t prec) {
    return Interval(Dyadic::from_rat(lo, prec, MPFR_RNDD), Dyadic::from_rat(hi, prec, MPFR_RNDU));
  }
  static Interval point(long x) { return Interval(Dyadic::from_long(x), Dyadic::from_long(x)); }

  const Dyadic& lo() const { return lo_; }
  const Dyadic& hi() const { return hi_; }

  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool contains(const Rat& q) const { return lo_.cmp(q) <= 0 && hi_.cmp(q) >= 0; }

  Sign sign() const {
    if (lo_.sign() > 0) return Sign::positive;
    if (hi_.sign() < 0) return Sign::negative;
    return Sign::undecided;
  }

  Dyadic width(mpfr_prec_t prec = 64) const {
    Dyadic w(prec);
    mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
    return w;
  }
  Dyadic mid(mpfr_prec_t prec = 64) const {
    Dyadic m(prec);
    mpfr_add(m.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
    mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
    return m;
  }

  // true iff width <= 2^(4-precision_bits) * max(1, |mid|), evaluated
  // conservatively (width rounded up, magnitude rounded down).
  bool meets_width_target(unsigned precision_bits) const {
    Dyadic w = width(64);
    if (!w.is_finite()) return false;
    Dyadic m = mid(64);
    Dyadic mag(64);
    mpfr_abs(mag.raw(), m.raw(), MPFR_RNDD);
    if (mpfr_cmp_ui(mag.raw(), 1) < 0) mpfr_set_ui(mag.raw(), 1, MPFR_RNDN);
    Dyadic bound(64);
    mpfr_mul_2si(bound.raw(), mag.raw(), 4 - static_cast<long>(precision_bits), MPFR_RNDD);
    return w.cmp(bound) <= 0;
  }

  Interval intersect(const Interval& o) const {
    Dyadic l = (lo_.cmp(o.lo_) >= 0) ? lo_ : o.lo_;
    Dyadic h = (hi_.cmp(o.hi_) <= 0) ? hi_ : o.hi_;
    if (h.cmp(l) < 0) throw Error("Interval::intersect: empty");
    return Interval(l, h);
  }

  static Interval add(const Interval& a, const Interval& b, mpfr_prec_t prec) {
    return Interval(detail::dy_op2(mpfr_add, a.lo_, b.lo_, prec, MPFR_RNDD),
                    detail::dy_op2(mpfr_add, a.hi_, b.hi_, prec, MPFR_RNDU));
  }
  static Interval sub(const Interval& a, const Interval& b, mpfr_prec_t prec) {
    return Interval(detail::dy_op2(mpfr_sub, a.lo_, b.hi_, prec, MPFR_RNDD),
                    detail::dy_op2(mpfr_sub, a.hi_, b.lo_, prec, MPFR_RNDU));
  }
  static Interval neg(const Interval& a) {
    Dyadic l(mpfr_get_prec(a.hi_.raw())), h(mpfr_get_prec(a.lo_.raw()));
    mpfr_neg(l.raw(), a.hi_.raw(), MPFR_RNDD);
    mpfr_neg(h.raw(), a.lo_.raw(), MPFR_RNDU);
    return Interval(std::move(l), std::move(h));
  }

  static Interval mul(const Interval& a, const Interval& b, mpfr_prec_t prec) {
    const Dyadic* as[2] = {&a.lo_, &a.hi_};
    const Dyadic* bs[2] = {&b.lo_, &b.hi_};
    Dyadic lo(prec), hi(prec), t(prec);
    bool first = true;
    for (auto* x : as)
      for (auto* y : bs) {
        mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDD);
        if (first || t.cmp(lo) < 0) lo = t;
        mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDU);
        if (first || hi.cmp(t) < 0) hi = t;
        first = false;
      }
    return Interval(std::move(lo), std::move(hi));
  }

  // Throws if the divisor interval straddles zero; callers refine precision.
  static Interval div(const Interval& a, const Interval& b, mpfr_prec_t prec) {
    if (b.contains_zero()) throw UndecidedSign("interval division by interval containing zero");
    const Dyadic* as[2] = {&a.lo_, &a.hi_};
    const Dyadic* bs[2] = {&b.lo_, &b.hi_};
    Dyadic lo(prec), hi(prec), t(prec);
    bool first = true;
    for (auto* x : as)
      for (auto* y : bs) {
        mpfr_div(t.raw(), x->raw(), y->raw(), MPFR_RNDD);
        if (first || t.cmp(lo) < 0) lo = t;
        mpfr_div(t.raw(), x->raw(), y->raw(), MPFR_RNDU);
        if (first || hi.cmp(t) < 0) hi = t;
        first = false;
      }
    return Interval(std::move(lo), std::move(hi));
  }

  // x^e for rational e. Requires lo > 0, except that lo == 0 is allowed for
  // e > 0 (0^e = 0) and e == 0 gives [1,1].
  static Interval pow(const Interval& x, const Rat& e, mpfr_prec_t prec) {
    int se = sgn(e);
    if (se == 0) return point(1);
    if (x.lo_.sign() < 0 || (x.lo_.sign() == 0 && se < 0))
      throw PowOfNonpositive("interval pow needs a positive base");
    // x -> x^e is monotone (increasing for e>0, decreasing for e<0).
    if (se > 0)
      return Interval(detail::dy_pow_rat(x.lo_, e, prec, MPFR_RNDD),
                      detail::dy_pow_rat(x.hi_, e, prec, MPFR_RNDU));
    return Interval(detail::dy_pow_rat(x.hi_, e, prec, MPFR_RNDD),
                    detail::dy_pow_rat(x.lo_, e, prec, MPFR_RNDU));
  }

  static Interval scale_rat(const Interval& a, const Rat& c, mpfr_prec_t prec) {
    return mul(a, from_rat(c, prec), prec);
  }

  // x^e for integer e and a base of any sign (monotone or even-power cases).
  static Interval pow_si(const Interval& x, long e, mpfr_prec_t prec) {
    if (e == 0) return point(1);
    if (x.lo_.sign() > 0 || (x.lo_.sign() == 0 && e > 0)) return pow(x, Rat(e), prec);
    Interval nx = neg(x);
    if (nx.lo_.sign() >= 0) {  // x entirely <= 0
      Interval p = pow(nx, Rat(e), prec);
      return (e % 2 == 0) ? p : neg(p);
    }
    // straddles zero; e > 0 required (negative powers would be unbounded)
    if (e < 0) throw UndecidedSign("interval pow_si: negative power of interval containing zero");
    Dyadic m = (neg(x).hi().cmp(x.hi()) > 0) ? neg(x).hi() : x.hi();
    Dyadic top(prec);
    mpfr_pow_si(top.raw(), m.raw(), e, MPFR_RNDU);
    if (e % 2 == 0) {
      Dyadic z(prec);
      mpfr_set_zero(z.raw(), 1);
      return Interval(std::move(z), std::move(top));
    }
    Dyadic bot(prec);
    mpfr_pow_si(bot.raw(), x.lo_.raw(), e, MPFR_RNDD);
    return Interval(std::move(bot), std::move(top));
  }

  std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

 private:
  Dyadic lo_, hi_;
};

// Precision ladder shared by every certified computation: 32, 64, 128, ...
// capped at max_precision. Using one absolute ladder (rather than one
// relative to the caller's target) makes refinement monotone: a higher
// target can only stop at an equal-or-later rung, and enclosures computed
// at later rungs are subsets of earlier ones.
struct PrecisionLadder {
  unsigned max_precision = 4096;
  unsigned first() const { return 32; }
  unsigned next(unsigned w) const { return w * 2; }
  bool done(unsigned w) const { return w > max_precision; }
};

}  // namespace fewnomial
