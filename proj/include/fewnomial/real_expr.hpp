#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "fewnomial/interval.hpp"
#include "fewnomial/rational.hpp"

namespace fewnomial {

class RealExprNode;
using RealExpr = std::shared_ptr<const RealExprNode>;

// Immutable expression DAG over the positive reals: rational leaves closed
// under +, -, *, / and rational powers of certified-positive subexpressions.
// Values are never decided exactly unless the whole DAG collapses to a
// rational; everything else goes through certified interval evaluation.
class RealExprNode {
 public:
  enum class Op { leaf, add, sub, mul, div, pow };

  Op op() const { return op_; }
  const RealExpr& left() const { return a_; }
  const RealExpr& right() const { return b_; }
  const Rat& exponent() const { return expo_; }

  // Exact rational value when the DAG admits one (no surviving irrational
  // pow). pow of an exact base stays exact when the exponent is an integer
  // or the base happens to be a perfect power.
  const std::optional<Rat>& exact() const { return exact_; }

  std::string str() const {
    switch (op_) {
      case Op::leaf:
        return leaf_.get_str();
      case Op::add:
        return "(" + a_->str() + " + " + b_->str() + ")";
      case Op::sub:
        return "(" + a_->str() + " - " + b_->str() + ")";
      case Op::mul:
        return "(" + a_->str() + " * " + b_->str() + ")";
      case Op::div:
        return "(" + a_->str() + " / " + b_->str() + ")";
      case Op::pow:
        return "(" + a_->str() + ")^(" + expo_.get_str() + ")";
    }
    return "?";
  }

  // Enclosure of the exact value at one working precision; pure interval
  // recursion with a write-once-per-precision cache.
  Interval eval_working(unsigned w) const {
    if (exact_) return Interval::from_rat(*exact_, w);
    {
      std::lock_guard<std::mutex> g(cache_mu_);
      auto it = cache_.find(w);
      if (it != cache_.end()) return it->second;
    }
    Interval r = compute(w);
    {
      std::lock_guard<std::mutex> g(cache_mu_);
      cache_.emplace(w, r);
    }
    return r;
  }

  static RealExpr constant(const Rat& q) {
    auto n = std::make_shared<RealExprNode>(Tag{});
    n->op_ = Op::leaf;
    n->leaf_ = q;
    n->exact_ = q;
    return n;
  }

  static RealExpr binary(Op op, RealExpr a, RealExpr b);
  static RealExpr power(RealExpr a, const Rat& e);

  struct Tag {};
  explicit RealExprNode(Tag) {}

 private:
  Interval compute(unsigned w) const {
    switch (op_) {
      case Op::leaf:
        return Interval::from_rat(leaf_, w);
      case Op::add:
        return Interval::add(a_->eval_working(w), b_->eval_working(w), w);
      case Op::sub:
        return Interval::sub(a_->eval_working(w), b_->eval_working(w), w);
      case Op::mul:
        return Interval::mul(a_->eval_working(w), b_->eval_working(w), w);
      case Op::div:
        return Interval::div(a_->eval_working(w), b_->eval_working(w), w);
      case Op::pow:
        return Interval::pow(a_->eval_working(w), expo_, w);
    }
    throw Error("unreachable");
  }

  Op op_ = Op::leaf;
  Rat leaf_;
  RealExpr a_, b_;
  Rat expo_;
  std::optional<Rat> exact_;
  mutable std::mutex cache_mu_;
  mutable std::map<unsigned, Interval> cache_;
};

inline RealExpr re_const(const Rat& q) { return RealExprNode::constant(q); }
inline RealExpr re_const(long v) { return RealExprNode::constant(Rat(v)); }

// Enclosure contract: contains the exact value; width at most
// 2^(4-p)*max(1,|mid|); refinement is monotone along the precision ladder.
inline Interval eval_interval(const RealExpr& e, unsigned precision_bits,
                              const PrecisionLadder& ladder = PrecisionLadder{}) {
  if (precision_bits < 4) throw Error("eval_interval: precision_bits must be >= 4");
  if (e->exact()) return Interval::from_rat(*e->exact(), std::max(precision_bits + 16, 32u));
  PrecisionLadder lad = ladder;
  lad.max_precision = std::max(lad.max_precision, 2 * (precision_bits + 16));
  const char* last_fail = nullptr;
  for (unsigned w = lad.first(); !lad.done(w); w = lad.next(w)) {
    if (w < precision_bits + 16) continue;
    try {
      Interval r = e->eval_working(w);
      if (r.meets_width_target(precision_bits)) return r;
    } catch (const PowOfNonpositive&) {
      last_fail = "pow";
    } catch (const UndecidedSign&) {
      last_fail = "div";
    }
  }
  if (last_fail && std::string(last_fail) == "pow")
    throw PowOfNonpositive("eval_interval: pow base not certifiably positive at max precision");
  throw PrecisionExhausted("eval_interval: width target unreachable at max precision");
}

// Certified sign with geometric refinement; undecided is an ordinary outcome
// (for instance on expressions that are exactly zero but not syntactically
// rational), never an exception.
inline Sign sign_of(const RealExpr& e, unsigned max_precision_bits = 4096) {
  if (e->exact()) {
    int s = sgn(*e->exact());
    return s > 0 ? Sign::positive : (s < 0 ? Sign::negative : Sign::undecided);
  }
  PrecisionLadder ladder;
  ladder.max_precision = std::max(max_precision_bits, 32u);
  for (unsigned w = ladder.first(); !ladder.done(w); w = ladder.next(w)) {
    try {
      Sign s = e->eval_working(w).sign();
      if (s != Sign::undecided) return s;
    } catch (const Error&) {
      // not evaluable at this precision; refining may help
    }
  }
  return Sign::undecided;
}

inline RealExpr RealExprNode::binary(Op op, RealExpr a, RealExpr b) {
  auto n = std::make_shared<RealExprNode>(Tag{});
  n->op_ = op;
  n->a_ = std::move(a);
  n->b_ = std::move(b);
  const auto& ea = n->a_->exact();
  const auto& eb = n->b_->exact();
  if (ea && eb) {
    switch (op) {
      case Op::add:
        n->exact_ = *ea + *eb;
        break;
      case Op::sub:
        n->exact_ = *ea - *eb;
        break;
      case Op::mul:
        n->exact_ = *ea * *eb;
        break;
      case Op::div:
        if (sgn(*eb) == 0) throw Error("RealExpr: division by exact zero");
        n->exact_ = *ea / *eb;
        break;
      default:
        break;
    }
  } else if (op == Op::div && eb && sgn(*eb) == 0) {
    throw Error("RealExpr: division by exact zero");
  }
  return n;
}

inline RealExpr RealExprNode::power(RealExpr a, const Rat& e) {
  auto n = std::make_shared<RealExprNode>(Tag{});
  n->op_ = Op::pow;
  n->a_ = std::move(a);
  n->expo_ = e;
  if (const auto& ea = n->a_->exact()) {
    if (sgn(*ea) <= 0) throw PowOfNonpositive("pow base is not positive");
    if (is_integer(e)) {
      if (!e.get_num().fits_slong_p()) throw Error("pow exponent too large");
      n->exact_ = pow_rat(*ea, e.get_num().get_si());
    } else if (e.get_den().fits_ulong_p()) {
      // keep exactness when the base is a perfect q-th power
      unsigned long q = e.get_den().get_ui();
      Int rn, rd;
      if (exact_root(ea->get_num(), q, rn) && exact_root(ea->get_den(), q, rd)) {
        Rat root(rn, rd);
        root.canonicalize();
        if (!e.get_num().fits_slong_p()) throw Error("pow exponent too large");
        n->exact_ = pow_rat(root, e.get_num().get_si());
      }
    }
  } else {
    // reject bases already certified negative; undecided stays lazy
    if (sign_of(n->a_, 256) == Sign::negative)
      throw PowOfNonpositive("pow base certified negative");
  }
  return n;
}

inline RealExpr re_add(RealExpr a, RealExpr b) {
  return RealExprNode::binary(RealExprNode::Op::add, std::move(a), std::move(b));
}
inline RealExpr re_sub(RealExpr a, RealExpr b) {
  return RealExprNode::binary(RealExprNode::Op::sub, std::move(a), std::move(b));
}
inline RealExpr re_mul(RealExpr a, RealExpr b) {
  return RealExprNode::binary(RealExprNode::Op::mul, std::move(a), std::move(b));
}
inline RealExpr re_div(RealExpr a, RealExpr b) {
  return RealExprNode::binary(RealExprNode::Op::div, std::move(a), std::move(b));
}
inline RealExpr re_pow(RealExpr a, const Rat& e) { return RealExprNode::power(std::move(a), e); }
inline RealExpr re_neg(RealExpr a) { return re_sub(re_const(0), std::move(a)); }
inline RealExpr re_mul_rat(RealExpr a, const Rat& c) { return re_mul(re_const(c), std::move(a)); }

}  // namespace fewnomial
