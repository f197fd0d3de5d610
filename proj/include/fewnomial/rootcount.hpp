#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "fewnomial/genpoly.hpp"

namespace fewnomial {

struct CertifiedCount {
  enum class Status { certified_exact, lower_bound_only };
  unsigned count = 0;
  Status status = Status::certified_exact;
  std::vector<std::pair<Rat, Rat>> undecided_intervals;
  unsigned precision_used = 0;

  bool exact() const { return status == Status::certified_exact; }
};

namespace detail {

// First ladder rung >= bits.
inline unsigned rung_at_least(unsigned bits, unsigned cap) {
  unsigned w = 32;
  while (w < bits && w < cap) w *= 2;
  return std::min(w, cap);
}

class Counter {
 public:
  Counter(const GenPoly& F, unsigned precision, unsigned max_depth)
      : F_(F.normalized()), dF_(F_.derivative(precision)), precision_(std::max(precision, 32u)),
        max_depth_(max_depth) {}

  CertifiedCount run() {
    CertifiedCount out;
    // Root-free neighborhoods of the endpoints. The function may vanish or
    // blow up there; plain bisection cannot terminate against an endpoint.
    Rat left = trim_endpoint(/*at_zero=*/true, out);
    Rat right = trim_endpoint(/*at_zero=*/false, out);
    if (!(left < right)) {
      finish(out);
      return out;
    }
    std::vector<Item> stack;
    stack.push_back(Item{left, right, sign_at(left, precision_), sign_at(right, precision_), 0});
    size_t budget = 400000;
    while (!stack.empty()) {
      if (out.undecided_intervals.size() > 4096 || --budget == 0) {
        for (const auto& it : stack) out.undecided_intervals.push_back({it.a, it.b});
        break;
      }
      Item it = stack.back();
      stack.pop_back();
      process(it, out, stack);
    }
    finish(out);
    return out;
  }

 private:
  struct Item {
    Rat a, b;
    Sign sa, sb;
    unsigned depth;
  };

  void finish(CertifiedCount& out) {
    out.precision_used = used_;
    out.status = out.undecided_intervals.empty() ? CertifiedCount::Status::certified_exact
                                                 : CertifiedCount::Status::lower_bound_only;
  }

  // Precision allowed at a given depth: deep intervals hug roots, where
  // endpoint values shrink like the interval width, so the budget grows
  // with depth and only the deepest level sees the full cap.
  unsigned cap_for_depth(unsigned depth) const {
    if (depth >= max_depth_) return precision_;
    return rung_at_least(depth + 64, precision_);
  }

  Sign interval_sign(const GenPoly& g, const Rat& a, const Rat& b, unsigned cap) {
    for (unsigned w = 32; w <= cap; w *= 2) {
      used_ = std::max(used_, w);
      try {
        Sign s = g.eval_on(Interval::from_rats(a, b, w), w).sign();
        if (s != Sign::undecided) return s;
      } catch (const Error&) {
      }
    }
    return Sign::undecided;
  }

  Sign sign_at(const Rat& x, unsigned cap) {
    for (unsigned w = 32; w <= cap; w *= 2) {
      used_ = std::max(used_, w);
      try {
        Sign s = F_.eval_at(x, w).sign();
        if (s != Sign::undecided) return s;
      } catch (const Error&) {
      }
    }
    return Sign::undecided;
  }

  // Certify a root-free (0, delta] (resp. [1-delta, 1)) by direct interval
  // evaluation over the closed endpoint interval; the normalized form has
  // no negative exponents, so the evaluation is finite. The minimal-exponent
  // term dominates once delta is small enough.
  Rat trim_endpoint(bool at_zero, CertifiedCount& out) {
    Rat delta;
    for (unsigned d = 2; d <= max_depth_; d = d * 2) {
      delta = pow_rat(Rat(1, 2), static_cast<long>(d));
      Rat lo = at_zero ? Rat(0) : Rat(1) - delta;
      Rat hi = at_zero ? delta : Rat(1);
      if (interval_sign(F_, lo, hi, precision_) != Sign::undecided) return at_zero ? hi : lo;
    }
    // could not certify; report the residual sliver as undecided
    if (at_zero) {
      out.undecided_intervals.push_back({Rat(0), delta});
      return delta;
    }
    out.undecided_intervals.push_back({Rat(1) - delta, Rat(1)});
    return Rat(1) - delta;
  }

  void process(const Item& it, CertifiedCount& out, std::vector<Item>& stack) {
    unsigned cap = cap_for_depth(it.depth);
    Sign box = interval_sign(F_, it.a, it.b, cap);
    if (box != Sign::undecided) return;  // no zero inside

    Sign sa = it.sa, sb = it.sb;
    if (sa == Sign::undecided) sa = sign_at(it.a, cap);
    if (sb == Sign::undecided) sb = sign_at(it.b, cap);

    if (sa != Sign::undecided && sb != Sign::undecided && sa != sb) {
      // one certified sign change; a nonvanishing derivative enclosure makes
      // the root unique in the interval
      if (interval_sign(dF_, it.a, it.b, cap) != Sign::undecided) {
        ++out.count;
        return;
      }
    }
    if (it.depth >= max_depth_) {
      out.undecided_intervals.push_back({it.a, it.b});
      return;
    }
    Rat w = it.b - it.a;
    Rat mid = it.a + w / 2;
    Rat candidates[5] = {mid, mid - w / 8, mid + w / 8, mid - w / 16, mid + w / 16};
    Rat c = mid;
    Sign sc = Sign::undecided;
    for (const auto& cand : candidates) {
      Sign s = sign_at(cand, cap);
      if (s != Sign::undecided) {
        c = cand;
        sc = s;
        break;
      }
    }
    stack.push_back(Item{c, it.b, sc, sb, it.depth + 1});
    stack.push_back(Item{it.a, c, sa, sc, it.depth + 1});
  }

  GenPoly F_;
  GenPoly dF_;
  unsigned precision_;
  unsigned max_depth_;
  unsigned used_ = 0;
};

}  // namespace detail

// Certified count of distinct zeros of F on (0,1). Counts only zeros proved
// by a sign change with a nonvanishing derivative enclosure; whatever cannot
// be decided at the precision/depth limits is surfaced in
// undecided_intervals and the status degrades to a lower bound.
inline CertifiedCount certified_count(const GenPoly& F, unsigned precision = 4096,
                                      unsigned max_depth = 64) {
  if (F.empty()) throw Error("certified_count: the zero function has no certified count");
  return detail::Counter(F, precision, max_depth).run();
}

// 3 * 2^(t-2) - 1: the sharp-form bound on positive solutions when the
// second equation is a trinomial and the first has t terms.
inline unsigned long bound_t(unsigned t) {
  if (t < 3) throw Error("bound_t: t must be >= 3");
  if (t > 60) throw Error("bound_t: t out of range");
  return 3UL * (1UL << (t - 2)) - 1UL;
}

}  // namespace fewnomial
