#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fewnomial/errors.hpp"
#include "fewnomial/interval.hpp"
#include "fewnomial/rational.hpp"

namespace fewnomial {

// Dense univariate polynomial over the rationals; coefficient index = degree.
// The zero polynomial is the empty coefficient list.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly constant(const Rat& q) { return UniPoly(std::vector<Rat>{q}); }
  static UniPoly x() { return UniPoly({Rat(0), Rat(1)}); }
  // c0 + c1*x
  static UniPoly linear(const Rat& c0, const Rat& c1) { return UniPoly({c0, c1}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rat& lead() const {
    if (is_zero()) throw Error("lead of zero polynomial");
    return c_.back();
  }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  UniPoly operator+(const UniPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return UniPoly(std::move(r));
  }
  UniPoly operator-(const UniPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return UniPoly(std::move(r));
  }
  UniPoly operator-() const {
    std::vector<Rat> r(c_);
    for (auto& q : r) q = -q;
    return UniPoly(std::move(r));
  }
  UniPoly operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return UniPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return UniPoly(std::move(r));
  }
  UniPoly operator*(const Rat& q) const {
    if (sgn(q) == 0) return UniPoly();
    std::vector<Rat> r(c_);
    for (auto& v : r) v *= q;
    return UniPoly(std::move(r));
  }
  UniPoly shifted(size_t k) const {  // multiply by x^k
    if (is_zero()) return UniPoly();
    std::vector<Rat> r(c_.size() + k, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return UniPoly(std::move(r));
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return UniPoly(std::move(r));
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  // Horner over exact rational intervals [xlo, xhi].
  std::pair<Rat, Rat> eval_rat_interval(const Rat& xlo, const Rat& xhi) const {
    Rat lo(0), hi(0);
    for (size_t i = c_.size(); i-- > 0;) {
      // [lo,hi] * [xlo,xhi]
      Rat cands[4] = {lo * xlo, lo * xhi, hi * xlo, hi * xhi};
      Rat nl = cands[0], nh = cands[0];
      for (int k = 1; k < 4; ++k) {
        if (cands[k] < nl) nl = cands[k];
        if (cands[k] > nh) nh = cands[k];
      }
      lo = nl + c_[i];
      hi = nh + c_[i];
    }
    return {lo, hi};
  }

  Interval eval_interval(const Interval& x, mpfr_prec_t prec) const {
    Interval acc = Interval::point(0);
    for (size_t i = c_.size(); i-- > 0;) {
      acc = Interval::mul(acc, x, prec);
      acc = Interval::add(acc, Interval::from_rat(c_[i], prec), prec);
    }
    return acc;
  }

  // Quotient and remainder; exact over the rationals.
  std::pair<UniPoly, UniPoly> divrem(const UniPoly& d) const {
    if (d.is_zero()) throw Error("division by zero polynomial");
    UniPoly q;
    std::vector<Rat> r(c_);
    std::vector<Rat> qc(c_.size() > d.c_.size() ? c_.size() - d.c_.size() + 1 : 1, Rat(0));
    int dd = d.degree();
    const Rat& dl = d.lead();
    for (int i = static_cast<int>(r.size()) - 1; i >= dd; --i) {
      if (sgn(r[i]) == 0) continue;
      Rat f = r[i] / dl;
      qc[i - dd] = f;
      for (int j = 0; j <= dd; ++j) r[i - dd + j] -= f * d.c_[j];
      r[i] = 0;
    }
    return {UniPoly(std::move(qc)), UniPoly(std::move(r))};
  }
  UniPoly div_exact(const UniPoly& d) const {
    auto [q, r] = divrem(d);
    if (!r.is_zero()) throw Error("div_exact: nonzero remainder");
    return q;
  }

  // Primitive integer-multiple of this polynomial. Only a positive factor
  // is divided out, so signs (and hence Sturm variation counts) survive.
  UniPoly primitive() const {
    if (is_zero()) return UniPoly();
    Int den_lcm(1);
    for (const auto& q : c_) den_lcm = fewnomial::lcm(den_lcm, q.get_den());
    Int content(0);
    std::vector<Rat> r(c_);
    for (auto& q : r) {
      q *= Rat(den_lcm);
      content = fewnomial::gcd(content, q.get_num());
    }
    if (sgn(content) == 0) return UniPoly();
    for (auto& q : r) q /= Rat(content);
    return UniPoly(std::move(r));
  }

  static UniPoly gcd(UniPoly a, UniPoly b) {
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
      UniPoly r = a.divrem(b).second.primitive();
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero() && sgn(a.lead()) < 0) a = -a;  // canonical representative
    return a;
  }

  UniPoly squarefree_part() const {
    if (is_zero()) return UniPoly();
    if (degree() == 0) return UniPoly::constant(Rat(1));
    UniPoly g = gcd(*this, derivative());
    if (g.degree() == 0) return primitive();
    return div_exact(g).primitive();
  }

  // All real roots lie in (-bound, bound).
  Rat cauchy_root_bound() const {
    if (is_zero() || degree() == 0) return Rat(1);
    Rat m(0);
    for (size_t i = 0; i + 1 < c_.size(); ++i) {
      Rat a = abs(c_[i] / c_.back());
      if (a > m) m = a;
    }
    return m + 1;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
      if (sgn(c_[i]) == 0) continue;
      if (!s.empty()) s += (sgn(c_[i]) > 0 ? " + " : " - ");
      else if (sgn(c_[i]) < 0) s += "-";
      Rat a = abs(c_[i]);
      if (i == 0 || a != 1) s += a.get_str();
      if (i > 0) {
        if (a != 1) s += "*";
        s += "x";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// ---- Sturm theory ----------------------------------------------------------

class SturmChain {
 public:
  explicit SturmChain(const UniPoly& p) {
    UniPoly a = p.primitive();
    if (a.is_zero()) throw Error("Sturm chain of zero polynomial");
    chain_.push_back(a);
    UniPoly b = a.derivative().primitive();
    while (!b.is_zero()) {
      chain_.push_back(b);
      UniPoly r = (-chain_[chain_.size() - 2].divrem(b).second).primitive();
      b = std::move(r);
    }
  }

  int variations_at(const Rat& x) const {
    int v = 0, prev = 0;
    for (const auto& p : chain_) {
      int s = sgn(p.eval(x));
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  }

 private:
  std::vector<UniPoly> chain_;
};

namespace detail {
inline UniPoly deflate_root(UniPoly p, const Rat& r) {
  // divide out (x - r) as often as it is a root
  UniPoly lin({-r, Rat(1)});
  while (!p.is_zero() && sgn(p.eval(r)) == 0) p = p.div_exact(lin);
  return p;
}
}  // namespace detail

// Number of distinct real roots of p in the open interval (a, b).
inline unsigned sturm_count_open(const UniPoly& p, const Rat& a, const Rat& b) {
  if (!(a < b)) throw Error("sturm_count_open: need a < b");
  if (p.is_zero()) throw Error("sturm_count_open: zero polynomial");
  UniPoly q = p.squarefree_part();
  if (q.degree() <= 0) return 0;
  q = detail::deflate_root(q, a);
  q = detail::deflate_root(q, b);
  if (q.degree() <= 0) return 0;
  SturmChain chain(q);
  int d = chain.variations_at(a) - chain.variations_at(b);
  return d > 0 ? static_cast<unsigned>(d) : 0u;
}

// Number of distinct real roots of p in the half-open interval (a, b].
inline unsigned sturm_count(const UniPoly& p, const Rat& a, const Rat& b) {
  unsigned n = sturm_count_open(p, a, b);
  if (!p.is_zero() && sgn(p.eval(b)) == 0) ++n;
  return n;
}

inline unsigned count_real_roots(const UniPoly& p) {
  if (p.is_zero() || p.degree() == 0) return 0;
  Rat B = p.cauchy_root_bound();
  return sturm_count(p, -B, B);
}

// Pairwise-disjoint open isolating intervals for the distinct roots of p in
// (a, b), each of width <= max_width, endpoints non-roots. Requires
// gcd(p, p') rootless on (a, b).
inline std::vector<std::pair<Rat, Rat>> isolate_roots(const UniPoly& p, const Rat& a, const Rat& b,
                                                      const Rat& max_width) {
  if (!(a < b)) throw Error("isolate_roots: need a < b");
  if (p.is_zero()) throw Error("isolate_roots: zero polynomial");
  if (p.degree() >= 1) {
    UniPoly g = UniPoly::gcd(p, p.derivative());
    if (g.degree() >= 1 && sturm_count_open(g, a, b) > 0)
      throw NotSquarefree("isolate_roots: repeated root in the interval");
  }
  UniPoly q = p.squarefree_part();
  std::vector<std::pair<Rat, Rat>> out;
  if (q.degree() <= 0) return out;

  struct Item {
    Rat lo, hi;
  };
  std::vector<Item> work{{a, b}};
  while (!work.empty()) {
    Item it = work.back();
    work.pop_back();
    unsigned n = sturm_count_open(q, it.lo, it.hi);
    if (n == 0) continue;
    if (n == 1 && it.hi - it.lo <= max_width) {
      out.push_back({it.lo, it.hi});
      continue;
    }
    Rat mid = (it.lo + it.hi) / 2;
    if (sgn(q.eval(mid)) == 0) {
      // exact root at the split point: peel it off with a tight interval
      Rat eps = (it.hi - it.lo) / 8;
      while (true) {
        bool ok = sgn(q.eval(mid - eps)) != 0 && sgn(q.eval(mid + eps)) != 0 &&
                  sturm_count_open(q, mid - eps, mid + eps) == 1 && 2 * eps <= max_width;
        if (ok) break;
        eps /= 2;
      }
      out.push_back({mid - eps, mid + eps});
      work.push_back({it.lo, mid - eps});
      work.push_back({mid + eps, it.hi});
    } else {
      work.push_back({it.lo, mid});
      work.push_back({mid, it.hi});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

// Shrink an isolating interval of a squarefree p below max_width by
// bisection. Interval endpoints stay non-roots.
inline std::pair<Rat, Rat> refine_root(const UniPoly& p, std::pair<Rat, Rat> iv,
                                       const Rat& max_width) {
  int slo = sgn(p.eval(iv.first));
  if (slo == 0) throw Error("refine_root: endpoint is a root");
  while (iv.second - iv.first > max_width) {
    Rat mid = (iv.first + iv.second) / 2;
    int sm = sgn(p.eval(mid));
    if (sm == 0) {
      Rat w = (iv.second - iv.first) / 8;
      // exact root: return a tight symmetric interval
      while (2 * w > max_width || sgn(p.eval(mid - w)) == 0 || sgn(p.eval(mid + w)) == 0) w /= 2;
      return {mid - w, mid + w};
    }
    if (sm == slo)
      iv.first = mid;
    else
      iv.second = mid;
  }
  return iv;
}

}  // namespace fewnomial
