#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fewnomial/reduction.hpp"
#include "fewnomial/rootcount.hpp"

namespace fewnomial {

enum class LandmarkKind { letter_p, letter_q, letter_r_plus, letter_r_minus, nonspecial_critical };

inline const char* to_string(LandmarkKind k) {
  switch (k) {
    case LandmarkKind::letter_p: return "p";
    case LandmarkKind::letter_q: return "q";
    case LandmarkKind::letter_r_plus: return "r+";
    case LandmarkKind::letter_r_minus: return "r-";
    case LandmarkKind::nonspecial_critical: return "critical";
  }
  return "?";
}

// A distinguished point of phi^m on the real projective line: a root (p),
// pole (q), solution of phi^m = 1 (r), or non-special critical point.
// Finite landmarks carry an exact isolating interval (a point interval for
// rational locations); the point at infinity is tagged.
struct Landmark {
  Rat lo, hi;
  bool at_infinity = false;
  LandmarkKind kind = LandmarkKind::letter_p;
  int phi_sign = 0;  // sign of phi there, when defined and certified
  int multiplicity = 1;
  std::string note;

  bool exact_point() const { return !at_infinity && lo == hi; }
  bool inside_unit_interval() const { return !at_infinity && Rat(0) < lo && hi < Rat(1); }
};

struct PhiAnalysis {
  std::vector<Landmark> landmarks;  // circular order along RP^1, infinity last
  unsigned S0 = 0;                  // roots + poles of phi strictly inside (0,1)
  unsigned flat = 0;                // components of the graph of phi on (0,1)
  unsigned flat_plus = 0;           // components above the x-axis
  std::vector<size_t> useful;       // indices of useful critical landmarks
  std::vector<size_t> useful_positive_interior;  // the set U of the bound N <= flat_plus + |U|
  CertifiedCount N;                 // solutions of phi = 1 in (0,1)
  unsigned r_interior = 0;          // letters r found inside (0,1) by gap analysis
  unsigned bound = 0;               // deg P + deg Q + 2
  bool simple = true;               // squarefree P, Q and clean special points
  bool fully_certified = true;      // every classification decision certified
  std::vector<std::string> notes;

  bool window_ok() const {  // floor(S0/2) <= flat_plus <= floor(S0/2) + 1
    unsigned half = S0 / 2;
    return half <= flat_plus && flat_plus <= half + 1;
  }
  bool positive_bound_ok() const {
    return N.count <= flat_plus + useful_positive_interior.size();
  }
  bool theorem2_ok() const { return N.count <= bound; }
};

// H(x) = alpha P Q + (P'Q - PQ' - (alpha+beta) P Q) x + (P Q' - P'Q) x^2,
// the numerator of phi' against x^(alpha-1) (1-x)^(beta-1) / Q^2.
inline ScaledPoly phi_prime_numerator(const PhiMap& phi, unsigned max_precision = 4096) {
  const UniPoly& p = phi.P.body();
  const UniPoly& q = phi.Q.body();
  UniPoly pq = p * q;
  UniPoly wr = p.derivative() * q - p * q.derivative();  // P'Q - PQ'
  UniPoly h = pq * phi.alpha + (wr - pq * (phi.alpha + phi.beta)).shifted(1) - wr.shifted(2);
  return ScaledPoly(re_mul(phi.P.scale(), phi.Q.scale()), std::move(h), max_precision);
}

namespace detail {

class PhiAnalyzer {
 public:
  PhiAnalyzer(const PhiMap& phi, unsigned max_precision)
      : phi_(phi), prec_(max_precision), p_(phi.P.body()), q_(phi.Q.body()) {
    if (phi_.P.is_zero() || phi_.Q.is_zero()) throw Error("phi with zero numerator/denominator");
    sp_ = to_int(phi_.P.scale_sign());
    sq_ = to_int(phi_.Q.scale_sign());
    if (sp_ == 0 || sq_ == 0) throw DegreeAmbiguous("phi scale sign undecided");
    m_ = static_cast<long>(phi_.m);
    malpha_ = rat_to_long(phi_.alpha * Rat(m_));
    mbeta_ = rat_to_long(phi_.beta * Rat(m_));
  }

  PhiAnalysis run() {
    PhiAnalysis out;
    out.bound = static_cast<unsigned>(p_.degree() + q_.degree() + 2);

    UniPoly gcd_pq = UniPoly::gcd(p_, q_);
    if (gcd_pq.degree() >= 1 && count_real_roots(gcd_pq) > 0)
      throw UndecidedSeparation("P and Q share a real root");
    if (p_.squarefree_part().degree() != p_.degree() ||
        q_.squarefree_part().degree() != q_.degree()) {
      out.simple = false;
      out.notes.push_back("repeated roots in P or Q");
    }

    build_skeleton(out);
    insert_letters_r(out);
    classify_useful(out);
    interior_counts(out);

    out.N = certified_count(phi_.phi_minus_one_genpoly(prec_), prec_);
    if (out.fully_certified && out.N.exact() && out.N.count != out.r_interior) {
      out.fully_certified = false;
      out.notes.push_back("INTERNAL: gap analysis and certified count disagree on letters r");
    }

    for (const auto& mk : marks_) out.landmarks.push_back(mk);
    return out;
  }

 private:
  // ---- exact value helpers -------------------------------------------------

  static long rat_to_long(const Rat& r) {
    if (!is_integer(r) || !r.get_num().fits_slong_p()) throw Error("exponent out of range");
    return r.get_num().get_si();
  }

  // varphi(x) = sgn * rational_part * |sP/sQ|^m at a rational x (finite,
  // not 0/1 when the powers are negative, q(x) != 0).
  RealExpr varphi_expr(const Rat& x) const {
    Rat rp = pow_rat(x, malpha_) * pow_rat(1 - x, mbeta_) * pow_rat(p_.eval(x), m_) /
             pow_rat(q_.eval(x), m_);
    int flip = (sp_ * sq_ < 0 && m_ % 2 != 0) ? -1 : 1;
    return re_mul_rat(scale_ratio_pow_m(), flip < 0 ? Rat(-rp) : rp);
  }

  // |sP/sQ|^m as a positive expression.
  RealExpr scale_ratio_pow_m() const {
    RealExpr ratio = re_div(phi_.P.scale(), phi_.Q.scale());
    if (sp_ * sq_ < 0) ratio = re_neg(ratio);
    return re_pow(ratio, Rat(m_));
  }

  Sign varphi_minus_one_sign(const Rat& x) const {
    return sign_of(re_sub(varphi_expr(x), re_const(1)), prec_);
  }

  // sign of varphi at x; exact (the scale ratio power is positive).
  int varphi_sign(const Rat& x) const {
    int flip = (sp_ * sq_ < 0 && m_ % 2 != 0) ? -1 : 1;
    int s = sgn(x) == 0 ? 0 : 1;
    if (sgn(x) < 0 && malpha_ % 2 != 0) s = -s;
    Rat omx = 1 - x;
    if (sgn(omx) < 0 && mbeta_ % 2 != 0) s = -s;
    int sep = sgn(p_.eval(x));
    if (m_ % 2 != 0 && sep < 0) s = -s;
    if (sep == 0) s = 0;
    int seq = sgn(q_.eval(x));
    if (m_ % 2 != 0 && seq < 0) s = -s;
    return s * flip * (seq == 0 ? 0 : 1);
  }

  // sign of phi itself at a rational point of (0,1)
  int phi_sign_interior(const Rat& x) const {
    return sp_ * sq_ * sgn(p_.eval(x)) * sgn(q_.eval(x));
  }

  // ---- skeleton ------------------------------------------------------------

  struct Mark : Landmark {
    UniPoly iso;  // squarefree polynomial isolating the point; empty if exact
  };

  void add_root_marks(const UniPoly& poly, LandmarkKind kind, PhiAnalysis& out) {
    if (poly.degree() < 1) return;
    UniPoly sq = poly.squarefree_part();
    Rat B = sq.cauchy_root_bound();
    for (auto& iv : isolate_roots(sq, -B, B, Rat(1, 64))) {
      Mark mk;
      mk.kind = kind;
      mk.iso = sq;
      std::tie(mk.lo, mk.hi) = iv;
      // keep isolating intervals away from the distinguished points 0 and 1
      for (Rat special : {Rat(0), Rat(1)}) {
        while (mk.lo < special && special < mk.hi) {
          auto r = refine_root(sq, {mk.lo, mk.hi}, (mk.hi - mk.lo) / 4);
          if (r.first == mk.lo && r.second == mk.hi) break;
          mk.lo = r.first;
          mk.hi = r.second;
        }
      }
      if (poly.degree() != sq.degree()) {
        mk.multiplicity = root_multiplicity(poly, mk);
        if (mk.multiplicity > 1) {
          mk.note = "multiplicity " + std::to_string(mk.multiplicity);
          out.simple = false;
        }
      }
      marks_.push_back(std::move(mk));
    }
  }

  // multiplicity via repeated gcd with the derivative, which strips one
  // power of every repeated factor per round
  int root_multiplicity(const UniPoly& poly, const Mark& mk) const {
    UniPoly d = poly;
    int mult = 0;
    while (d.degree() >= 1 && sturm_count_open(d, mk.lo, mk.hi) > 0) {
      d = UniPoly::gcd(d, d.derivative());
      ++mult;
      if (mult > poly.degree()) break;
    }
    return std::max(mult, 1);
  }

  static int order_at(UniPoly& poly, const Rat& at) {
    int ord = 0;
    UniPoly lin({-at, Rat(1)});
    while (!poly.is_zero() && sgn(poly.eval(at)) == 0) {
      poly = poly.div_exact(lin);
      ++ord;
    }
    return ord;
  }

  void build_skeleton(PhiAnalysis& out) {
    UniPoly p_red = p_, q_red = q_;
    ord0p_ = order_at(p_red, Rat(0));
    ord1p_ = order_at(p_red, Rat(1));
    ord0q_ = order_at(q_red, Rat(0));
    ord1q_ = order_at(q_red, Rat(1));
    if (ord0p_ + ord1p_ + ord0q_ + ord1q_ > 0) {
      out.simple = false;
      out.notes.push_back("P or Q vanishes at 0 or 1");
    }

    add_root_marks(p_red, LandmarkKind::letter_p, out);
    add_root_marks(q_red, LandmarkKind::letter_q, out);

    // numerator of phi', with the formula's artifact factors stripped
    UniPoly h = phi_prime_numerator(phi_, prec_).body();
    if (sgn(phi_.alpha) == 0 && !h.is_zero()) h = h.div_exact(UniPoly::x());
    if (sgn(phi_.beta) == 0 && !h.is_zero()) h = h.div_exact(UniPoly({Rat(1), Rat(-1)}));
    h_crit_ = h;
    if (!h.is_zero() && h.degree() >= 1) {
      UniPoly g = UniPoly::gcd(h, p_ * q_);
      if (g.degree() >= 1) {
        h = h.div_exact(g);
        note_critical_specials(g);
      }
      int c0 = order_at(h, Rat(0));
      int c1 = order_at(h, Rat(1));
      crit_at_0_ = c0 > 0;
      crit_at_1_ = c1 > 0;
      add_root_marks(h, LandmarkKind::nonspecial_critical, out);
    }
    h_ns_ = h;

    classify_boundary_point(Rat(0), phi_.alpha, ord0p_, ord0q_, crit_at_0_, out);
    classify_boundary_point(Rat(1), phi_.beta, ord1p_, ord1q_, crit_at_1_, out);
    classify_infinity(out);

    separate_marks();
    std::sort(marks_.begin(), marks_.end(),
              [](const Mark& a, const Mark& b) {
                if (a.at_infinity != b.at_infinity) return !a.at_infinity;
                return a.lo < b.lo;
              });
  }

  void note_critical_specials(const UniPoly& g) {
    for (auto& mk : marks_) {
      if (mk.kind != LandmarkKind::letter_p && mk.kind != LandmarkKind::letter_q) continue;
      if (!mk.exact_point() && sturm_count_open(g, mk.lo, mk.hi) > 0)
        mk.note += (mk.note.empty() ? "" : "; ") + std::string("also critical");
    }
  }

  void classify_boundary_point(const Rat& at, const Rat& expo, int ordp, int ordq, bool crit,
                               PhiAnalysis& out) {
    Rat e = expo + Rat(ordp) - Rat(ordq);
    Mark mk;
    mk.lo = mk.hi = at;
    if (sgn(e) > 0) {
      mk.kind = LandmarkKind::letter_p;
      mk.multiplicity = boundary_multiplicity(e);
      if (mk.multiplicity > 1) mk.note = "multiplicity " + std::to_string(mk.multiplicity);
      marks_.push_back(std::move(mk));
      return;
    }
    if (sgn(e) < 0) {
      mk.kind = LandmarkKind::letter_q;
      mk.multiplicity = boundary_multiplicity(-e);
      if (mk.multiplicity > 1) mk.note = "multiplicity " + std::to_string(mk.multiplicity);
      marks_.push_back(std::move(mk));
      return;
    }
    // finite nonzero limit; r when the limit of varphi is 1
    if (ordp != ordq || ordp > 0) {
      out.fully_certified = false;
      out.notes.push_back("removable special point at " + at.get_str() + " not classified");
      return;
    }
    Sign s = varphi_minus_one_sign(at);
    if (s == Sign::undecided) {
      int ps = sp_ * sq_ * sgn(p_.eval(at)) * sgn(q_.eval(at));
      mk.kind = (ps >= 0) ? LandmarkKind::letter_r_plus : LandmarkKind::letter_r_minus;
      mk.phi_sign = ps;
      mk.note = "limit value 1 (uncertified separation)";
      if (!varphi_expr(at)->exact()) out.fully_certified = false;
      marks_.push_back(std::move(mk));
      return;
    }
    if (crit) {
      mk.kind = LandmarkKind::nonspecial_critical;
      mk.phi_sign = sp_ * sq_ * sgn(p_.eval(at)) * sgn(q_.eval(at));
      marks_.push_back(std::move(mk));
    }
    // otherwise 0/1 is not in B at all
  }

  int boundary_multiplicity(const Rat& e) const {
    Rat me = e * Rat(m_);
    return is_integer(me) && me.get_num().fits_sint_p() ? static_cast<int>(me.get_num().get_si())
                                                        : 1;
  }

  void classify_infinity(PhiAnalysis& out) {
    Rat e = phi_.alpha + phi_.beta + Rat(p_.degree()) - Rat(q_.degree());
    Mark mk;
    mk.at_infinity = true;
    mk.lo = mk.hi = Rat(0);
    if (sgn(e) > 0) {
      mk.kind = LandmarkKind::letter_q;
      mk.multiplicity = boundary_multiplicity(e);
      marks_.push_back(std::move(mk));
      return;
    }
    if (sgn(e) < 0) {
      mk.kind = LandmarkKind::letter_p;
      mk.multiplicity = boundary_multiplicity(-e);
      marks_.push_back(std::move(mk));
      return;
    }
    // v_inf = (-1)^(m beta) * (sP lead(P) / (sQ lead(Q)))^m, the common limit
    // at both ends of the affine line
    v_inf_sign_ = sp_ * sq_ * sgn(p_.lead()) * sgn(q_.lead());
    if (m_ % 2 == 0) v_inf_sign_ = 1;
    else if (mbeta_ % 2 != 0) v_inf_sign_ = -v_inf_sign_;
    Sign s = sign_of(re_sub(v_inf_expr(), re_const(1)), prec_);
    v_inf_vs_one_ = to_int(s);
    if (s == Sign::undecided) {
      if (v_inf_expr()->exact()) {
        mk.kind = LandmarkKind::letter_r_plus;
        mk.note = "value 1 at infinity";
        marks_.push_back(std::move(mk));
      } else {
        out.fully_certified = false;
        out.notes.push_back("value at infinity not separated from 1");
      }
      return;
    }
    if (infinity_is_critical()) {
      mk.kind = LandmarkKind::nonspecial_critical;
      mk.note = "critical at infinity";
      marks_.push_back(std::move(mk));
    }
  }

  RealExpr v_inf_expr() const {
    Rat lead = pow_rat(p_.lead(), m_) / pow_rat(q_.lead(), m_);
    int flip = (sp_ * sq_ < 0 && m_ % 2 != 0) ? -1 : 1;
    if (mbeta_ % 2 != 0) flip = -flip;
    return re_mul_rat(scale_ratio_pow_m(), flip < 0 ? Rat(-lead) : lead);
  }

  // Ramification of phi^m at infinity, reached only when the value there is
  // finite and nonzero (numerator and denominator degrees match). Constant
  // scalings do not move degrees, so this is exact degree arithmetic: with
  // W the Wronskian-style numerator of the derivative and D the map degree,
  // infinity is critical iff deg W <= 2D - 3.
  bool infinity_is_critical() const {
    long a = malpha_, b = mbeta_;
    UniPoly num = p_, den = q_;
    for (long i = 1; i < m_; ++i) {
      num = num * p_;
      den = den * q_;
    }
    UniPoly omx({Rat(1), Rat(-1)});
    auto mulpow = [](UniPoly f, const UniPoly& g, long e) {
      for (long i = 0; i < e; ++i) f = f * g;
      return f;
    };
    if (a >= 0) num = num.shifted(static_cast<size_t>(a));
    else den = den.shifted(static_cast<size_t>(-a));
    if (b >= 0) num = mulpow(num, omx, b);
    else den = mulpow(den, omx, -b);
    UniPoly g = UniPoly::gcd(num, den);
    if (g.degree() >= 1) {
      num = num.div_exact(g);
      den = den.div_exact(g);
    }
    UniPoly w = num.derivative() * den - num * den.derivative();
    long D = std::max(num.degree(), den.degree());
    return !w.is_zero() && w.degree() <= 2 * D - 3;
  }

  // refine isolating intervals until pairwise disjoint
  void separate_marks() {
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 512) {
      changed = false;
      for (size_t i = 0; i < marks_.size(); ++i)
        for (size_t j = i + 1; j < marks_.size(); ++j) {
          Mark &a = marks_[i], &b = marks_[j];
          if (a.at_infinity || b.at_infinity) continue;
          if (a.hi <= b.lo || b.hi <= a.lo) continue;
          if (a.exact_point() && b.exact_point())
            throw UndecidedSeparation("two landmarks at the same point");
          shrink(a);
          shrink(b);
          changed = true;
        }
    }
    if (guard >= 512) throw UndecidedSeparation("landmark isolating intervals not separable");
  }

  void shrink(Mark& mk) {
    if (mk.exact_point() || mk.iso.is_zero()) return;
    auto r = refine_root(mk.iso, {mk.lo, mk.hi}, (mk.hi - mk.lo) / 4);
    mk.lo = r.first;
    mk.hi = r.second;
  }

  // ---- letters r -----------------------------------------------------------

  // Limit sign of (varphi - 1) when approaching the landmark from inside an
  // adjacent gap; sample is any rational point of that gap.
  std::optional<int> limit_sign(const Mark& mk, const Rat& sample, PhiAnalysis& out) {
    switch (mk.kind) {
      case LandmarkKind::letter_p:
        return -1;
      case LandmarkKind::letter_q: {
        if (m_ % 2 == 0) return 1;
        int s = mk.at_infinity ? varphi_sign(sample) : pole_side_sign(sample);
        return s;
      }
      case LandmarkKind::letter_r_plus:
      case LandmarkKind::letter_r_minus:
        return 0;
      case LandmarkKind::nonspecial_critical: {
        if (mk.at_infinity) return v_inf_vs_one_;
        Sign s = critical_value_vs_one(mk);
        if (s == Sign::undecided) {
          out.fully_certified = false;
          out.notes.push_back("critical value not separated from 1");
          return std::nullopt;
        }
        return to_int(s);
      }
    }
    return std::nullopt;
  }

  int pole_side_sign(const Rat& sample) const { return varphi_sign(sample); }

  Sign critical_value_vs_one(const Mark& mk) {
    if (mk.exact_point()) return varphi_minus_one_sign(mk.lo);
    // interval evaluation of varphi - 1 over a shrinking enclosure of the
    // critical point
    Mark local = mk;
    for (int round = 0; round < 64; ++round) {
      for (unsigned w = 64; w <= prec_; w *= 2) {
        try {
          Interval val = varphi_interval(local.lo, local.hi, w);
          Interval d = Interval::sub(val, Interval::point(1), w);
          Sign s = d.sign();
          if (s != Sign::undecided) return s;
        } catch (const Error&) {
        }
        if (w >= 1024) break;
      }
      shrink(local);
    }
    return Sign::undecided;
  }

  Interval varphi_interval(const Rat& lo, const Rat& hi, unsigned w) const {
    Interval X = Interval::from_rats(lo, hi, w);
    Interval acc = Interval::pow_si(X, malpha_, w);
    Interval omx = Interval::sub(Interval::point(1), X, w);
    acc = Interval::mul(acc, Interval::pow_si(omx, mbeta_, w), w);
    acc = Interval::mul(acc, Interval::pow_si(p_.eval_interval(X, w), m_, w), w);
    acc = Interval::div(acc, Interval::pow_si(q_.eval_interval(X, w), m_, w), w);
    Interval ratio = scale_ratio_pow_m()->eval_working(w);
    if (sp_ * sq_ < 0 && m_ % 2 != 0) ratio = Interval::neg(ratio);
    return Interval::mul(acc, ratio, w);
  }

  // rational witness strictly inside the gap on the given side of the mark,
  // whose sign of (varphi-1) matches the limit sign at the mark
  std::optional<Rat> gap_witness(size_t idx, bool right_side, int want, const Rat& toward) {
    Mark& mk = marks_[idx];
    for (int round = 0; round < 200; ++round) {
      Rat probe;
      if (mk.at_infinity) {
        // approach infinity: grow past every finite landmark
        Rat far = far_bound() * pow_rat(Rat(2), round + 1);
        probe = right_side ? -far : far;  // right of infinity = very negative
      } else if (mk.exact_point()) {
        Rat base = mk.lo;
        probe = base + (toward - base) / pow_rat(Rat(2), round + 1);
      } else {
        probe = right_side ? mk.hi : mk.lo;
        Sign s = varphi_minus_one_certain(probe);
        if (s != Sign::undecided && to_int(s) == want) return probe;
        shrink(mk);
        continue;
      }
      Sign s = varphi_minus_one_certain(probe);
      if (s != Sign::undecided && to_int(s) == want) return probe;
    }
    return std::nullopt;
  }

  Sign varphi_minus_one_certain(const Rat& x) const {
    if (sgn(q_.eval(x)) == 0) return Sign::undecided;
    return varphi_minus_one_sign(x);
  }

  Rat far_bound() const {
    Rat B = p_.cauchy_root_bound();
    Rat Bq = q_.cauchy_root_bound();
    if (Bq > B) B = Bq;
    if (!h_ns_.is_zero()) {
      Rat Bh = h_ns_.cauchy_root_bound();
      if (Bh > B) B = Bh;
    }
    for (const auto& mk : marks_)
      if (!mk.at_infinity) {
        Rat a = mk.lo < 0 ? Rat(-mk.lo) : mk.lo;
        Rat b = mk.hi < 0 ? Rat(-mk.hi) : mk.hi;
        if (a > B) B = a;
        if (b > B) B = b;
      }
    return B + 1;
  }

  void insert_letters_r(PhiAnalysis& out) {
    if (marks_.size() <= 1) {
      // no usable skeleton; fall back on the certified counter only
      out.fully_certified = false;
      return;
    }
    size_t n = marks_.size();
    std::vector<Mark> rs;
    bool has_inf_mark = marks_.back().at_infinity;
    size_t arcs = n;
    for (size_t i = 0; i < arcs; ++i) {
      size_t jnext = (i + 1) % n;
      Mark& a = marks_[i];
      Mark& b = marks_[jnext];
      bool wraps = (jnext == 0);
      if (a.at_infinity && b.at_infinity) continue;
      // representative sample inside the gap (for pole-side signs)
      Rat sample;
      if (!a.at_infinity && !b.at_infinity && !wraps)
        sample = (a.hi + b.lo) / 2;
      else if (a.at_infinity)  // arc from infinity to the first finite mark
        sample = -(far_bound() + 1);
      else  // arc from the last finite mark through infinity or wrap
        sample = far_bound() + 1;

      auto sa = limit_sign(a, sample, out);
      auto sb_sample = wraps && !has_inf_mark ? Rat(-(far_bound() + 1)) : sample;
      auto sb = limit_sign(b, sb_sample, out);
      if (!sa || !sb) continue;
      if (*sa == 0 || *sb == 0 || *sa == *sb) {
        if (wraps && !has_inf_mark && *sa != 0 && *sb != 0) {
          // the wrap arc passes through a regular infinity; the two halves
          // can each hold a crossing against the limit value there
          wrap_arc_letters(i, jnext, *sa, *sb, rs, out);
        }
        continue;
      }
      locate_r(i, jnext, *sa, *sb, wraps, rs, out);
    }
    for (auto& r : rs) marks_.push_back(std::move(r));
    std::sort(marks_.begin(), marks_.end(), [](const Mark& x, const Mark& y) {
      if (x.at_infinity != y.at_infinity) return !x.at_infinity;
      return x.lo < y.lo;
    });
  }

  void wrap_arc_letters(size_t ia, size_t ib, int sa, int sb, std::vector<Mark>& rs,
                        PhiAnalysis& out) {
    if (v_inf_vs_one_ == 0) {
      out.fully_certified = false;
      return;
    }
    if (sa != v_inf_vs_one_) {  // crossing on (last, +inf)
      auto wl = gap_witness(ia, true, sa, Rat(0));
      Rat wr = far_bound() + 1;
      for (int k = 0; k < 200 && to_int(varphi_minus_one_certain(wr)) != v_inf_vs_one_; ++k)
        wr = wr * 2;
      if (wl && to_int(varphi_minus_one_certain(wr)) == v_inf_vs_one_)
        bracket_r(*wl, wr, rs, out);
      else
        out.fully_certified = false;
    }
    if (sb != v_inf_vs_one_) {  // crossing on (-inf, first)
      Rat wl = -(far_bound() + 1);
      for (int k = 0; k < 200 && to_int(varphi_minus_one_certain(wl)) != v_inf_vs_one_; ++k)
        wl = wl * 2;
      auto wr = gap_witness(ib, false, sb, Rat(0));
      if (wr && to_int(varphi_minus_one_certain(wl)) == v_inf_vs_one_)
        bracket_r(wl, *wr, rs, out);
      else
        out.fully_certified = false;
    }
  }

  void locate_r(size_t ia, size_t ib, int sa, int sb, bool through_inf, std::vector<Mark>& rs,
                PhiAnalysis& out) {
    std::optional<Rat> wl, wr;
    if (through_inf) {
      // single crossing somewhere on the arc through infinity
      if (v_inf_vs_one_ != 0 && sa != v_inf_vs_one_) {
        wl = gap_witness(ia, true, sa, Rat(0));
        wr = far_bound() + 1;
        for (int k = 0; k < 200 && to_int(varphi_minus_one_certain(*wr)) != v_inf_vs_one_; ++k)
          *wr = *wr * 2;
      } else if (v_inf_vs_one_ != 0) {
        wl = -(far_bound() + 1);
        for (int k = 0; k < 200 && to_int(varphi_minus_one_certain(*wl)) != v_inf_vs_one_; ++k)
          *wl = *wl * 2;
        wr = gap_witness(ib, false, sb, Rat(0));
      } else if (marks_[ia].at_infinity) {
        wl = gap_witness(ia, true, sa, Rat(0));
        wr = gap_witness(ib, false, sb, wl ? *wl : Rat(0));
      } else {
        wl = gap_witness(ia, true, sa, Rat(0));
        wr = gap_witness(ib, false, sb, wl ? *wl : Rat(0));
      }
    } else {
      Rat mid = (marks_[ia].hi + marks_[ib].lo) / 2;
      wl = gap_witness(ia, true, sa, mid);
      wr = gap_witness(ib, false, sb, wl ? *wl : mid);
    }
    if (!wl || !wr || !(*wl < *wr)) {
      out.fully_certified = false;
      out.notes.push_back("could not bracket a letter r");
      return;
    }
    bracket_r(*wl, *wr, rs, out);
  }

  void bracket_r(Rat lo, Rat hi, std::vector<Mark>& rs, PhiAnalysis& out) {
    Sign sl = varphi_minus_one_certain(lo);
    Sign sr = varphi_minus_one_certain(hi);
    if (sl == Sign::undecided || sr == Sign::undecided || sl == sr) {
      out.fully_certified = false;
      return;
    }
    for (int i = 0; i < 24 && hi - lo > Rat(1, 1024); ++i) {
      Rat mid = (lo + hi) / 2;
      Sign sm = varphi_minus_one_certain(mid);
      if (sm == Sign::undecided) break;
      if (sm == sl)
        lo = mid;
      else
        hi = mid;
    }
    Mark mk;
    mk.lo = lo;
    mk.hi = hi;
    int ps = phi_sign_on(lo, hi);
    mk.phi_sign = ps;
    if (m_ % 2 == 0 && ps < 0)
      mk.kind = LandmarkKind::letter_r_minus;
    else if (ps == 0) {
      mk.kind = LandmarkKind::letter_r_plus;
      mk.note = "sign of phi not determined here";
    } else
      mk.kind = LandmarkKind::letter_r_plus;
    rs.push_back(std::move(mk));
  }

  // sign of phi on an interval free of roots and poles; outside (0,1) the
  // fractional powers may be undefined over the reals, recorded as 0
  int phi_sign_on(const Rat& lo, const Rat& hi) const {
    Rat mid = (lo + hi) / 2;
    if (!(Rat(0) < lo && hi < Rat(1))) {
      if (m_ % 2 != 0) return varphi_sign(mid);
      return 0;
    }
    return phi_sign_interior(mid);
  }

  // ---- classification ------------------------------------------------------

  void classify_useful(PhiAnalysis& out) {
    size_t n = marks_.size();
    for (size_t i = 0; i < n; ++i) {
      Mark& mk = marks_[i];
      if (mk.kind != LandmarkKind::nonspecial_critical) continue;
      if (n == 1) break;
      const Mark& left = marks_[(i + n - 1) % n];
      const Mark& right = marks_[(i + 1) % n];
      auto is_r = [](const Mark& m) {
        return m.kind == LandmarkKind::letter_r_plus || m.kind == LandmarkKind::letter_r_minus;
      };
      if (!is_r(left) && !is_r(right)) continue;
      out.useful.push_back(i);
      if (!mk.at_infinity && mk.inside_unit_interval()) {
        int ps = mk.exact_point() ? phi_sign_interior(mk.lo) : interior_crit_phi_sign(mk);
        mk.phi_sign = ps;
        if (ps > 0) out.useful_positive_interior.push_back(i);
        if (ps == 0) {
          out.fully_certified = false;
          out.notes.push_back("sign of phi undecided at a useful critical point");
        }
      }
    }
  }

  int interior_crit_phi_sign(Mark& mk) {
    for (int round = 0; round < 64; ++round) {
      auto pe = p_.eval_rat_interval(mk.lo, mk.hi);
      auto qe = q_.eval_rat_interval(mk.lo, mk.hi);
      int ps = (sgn(pe.first) > 0) ? 1 : (sgn(pe.second) < 0 ? -1 : 0);
      int qs = (sgn(qe.first) > 0) ? 1 : (sgn(qe.second) < 0 ? -1 : 0);
      if (ps != 0 && qs != 0) return sp_ * sq_ * ps * qs;
      shrink(mk);
    }
    return 0;
  }

  void interior_counts(PhiAnalysis& out) {
    // S0 and the subdivision of (0,1) by roots and poles of phi
    std::vector<std::pair<Rat, Rat>> cuts;  // isolating intervals inside (0,1)
    for (const auto& mk : marks_) {
      if (mk.at_infinity || !mk.inside_unit_interval()) continue;
      if (mk.kind == LandmarkKind::letter_r_plus || mk.kind == LandmarkKind::letter_r_minus) {
        ++out.r_interior;
        continue;
      }
      if (mk.kind == LandmarkKind::letter_p || mk.kind == LandmarkKind::letter_q) {
        cuts.push_back({mk.lo, mk.hi});
        if (mk.kind == LandmarkKind::letter_q) ++poles_interior_;
        ++out.S0;
      }
    }
    std::sort(cuts.begin(), cuts.end());
    out.flat = poles_interior_ + 1;
    // one certified sample per open subinterval decides the sign of phi there
    std::vector<Rat> samples;
    Rat prev(0);
    for (const auto& c : cuts) {
      samples.push_back(prev == 0 ? c.first / 2 : (prev + c.first) / 2);
      prev = c.second;
    }
    samples.push_back(prev == 0 ? Rat(1, 2) : (prev + 1) / 2);
    unsigned plus = 0;
    for (const auto& s : samples) {
      int sg = phi_sign_interior(s);
      if (sg > 0) ++plus;
      if (sg == 0) {
        out.fully_certified = false;
        out.notes.push_back("sign sample hit a root or pole");
      }
    }
    out.flat_plus = plus;
  }

  const PhiMap& phi_;
  unsigned prec_;
  UniPoly p_, q_;
  UniPoly h_crit_, h_ns_;
  int sp_ = 0, sq_ = 0;
  long m_ = 1, malpha_ = 0, mbeta_ = 0;
  int ord0p_ = 0, ord1p_ = 0, ord0q_ = 0, ord1q_ = 0;
  bool crit_at_0_ = false, crit_at_1_ = false;
  int v_inf_sign_ = 0;
  int v_inf_vs_one_ = 0;
  unsigned poles_interior_ = 0;
  std::vector<Mark> marks_;
};

}  // namespace detail

inline PhiAnalysis analyze_phi(const PhiMap& phi, unsigned max_precision = 4096) {
  return detail::PhiAnalyzer(phi, max_precision).run();
}

inline std::vector<Landmark> classify_landmarks(const PhiMap& phi, unsigned max_precision = 4096) {
  return analyze_phi(phi, max_precision).landmarks;
}

// The ordering cases for a two-trinomial system: where the root and pole of
// rho1/rho2 sit relative to 0 and 1 when phi = 1 has the maximal number of
// solutions.
struct CaseReport {
  Rat ptilde, qtilde;
  bool beta1_gt_beta2 = false;
  // cases: 1: ptilde < qtilde < 0,   2: 1 < qtilde < ptilde   (beta1 > beta2)
  //        3: 0 < qtilde < 1 < ptilde, 4: qtilde < 0 < ptilde < 1 (beta1 < beta2)
  int which_case = 0;
  bool consistent_with_five = false;  // exactly one matching case when count == 5
  std::optional<unsigned> count;
};

inline CaseReport t3_landmark_case(const T3Result& t3, std::optional<unsigned> certified_count) {
  if (!t3.violations.empty())
    throw NondegeneracyViolated("nondegeneracy conditions fail: " + t3.violations.front());
  CaseReport rep;
  rep.count = certified_count;
  rep.ptilde = t3.alpha1 / (t3.alpha1 + t3.beta1);
  rep.qtilde = t3.alpha2 / (t3.alpha2 + t3.beta2);
  rep.beta1_gt_beta2 = t3.beta1 > t3.beta2;
  const Rat& pt = rep.ptilde;
  const Rat& qt = rep.qtilde;
  if (pt < qt && qt < 0) rep.which_case = 1;
  else if (Rat(1) < qt && qt < pt) rep.which_case = 2;
  else if (Rat(0) < qt && qt < 1 && Rat(1) < pt) rep.which_case = 3;
  else if (qt < 0 && Rat(0) < pt && pt < 1) rep.which_case = 4;
  bool beta_matches = rep.which_case == 0
                          ? false
                          : (rep.which_case <= 2 ? rep.beta1_gt_beta2 : !rep.beta1_gt_beta2);
  rep.consistent_with_five = (rep.which_case != 0) && beta_matches;
  return rep;
}

}  // namespace fewnomial
