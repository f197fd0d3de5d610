#pragma once

#include <utility>

#include "fewnomial/real_expr.hpp"
#include "fewnomial/unipoly.hpp"

namespace fewnomial {

// Polynomial with real coefficients of the shape scale * body(x), where the
// scale is a certified-sign RealExpr and the body is exactly rational. Every
// non-rational-coefficient polynomial produced by the reduction pipeline has
// this shape (the derivative recursion acts on each layer by rational
// operations, so only the layer's original constant stays symbolic), which
// keeps root isolation exact.
class ScaledPoly {
 public:
  ScaledPoly() : scale_(re_const(1)), scale_sign_(Sign::positive) {}
  ScaledPoly(RealExpr scale, UniPoly body, unsigned max_precision = 4096)
      : scale_(std::move(scale)), body_(std::move(body)) {
    scale_sign_ = sign_of(scale_, max_precision);
  }
  static ScaledPoly from_rational(UniPoly body) { return ScaledPoly(re_const(1), std::move(body)); }

  const RealExpr& scale() const { return scale_; }
  const UniPoly& body() const { return body_; }
  Sign scale_sign() const { return scale_sign_; }

  bool is_zero() const { return body_.is_zero(); }
  bool degree_ambiguous() const { return !body_.is_zero() && scale_sign_ == Sign::undecided; }

  // Certified degree; the body is exact so only the scale can be in doubt.
  int degree() const {
    if (body_.is_zero()) return -1;
    if (scale_sign_ == Sign::undecided)
      throw DegreeAmbiguous("leading coefficient sign undecided");
    return body_.degree();
  }

  RealExpr coeff_expr(size_t i) const { return re_mul_rat(scale_, body_.coeff(i)); }
  RealExpr eval_expr(const Rat& x) const { return re_mul_rat(scale_, body_.eval(x)); }

  ScaledPoly negated() const {
    ScaledPoly r = *this;
    r.scale_ = re_neg(r.scale_);
    r.scale_sign_ = (scale_sign_ == Sign::undecided)
                        ? Sign::undecided
                        : (scale_sign_ == Sign::positive ? Sign::negative : Sign::positive);
    return r;
  }

  ScaledPoly with_body(UniPoly b) const {
    ScaledPoly r = *this;
    r.body_ = std::move(b);
    return r;
  }

 private:
  RealExpr scale_;
  UniPoly body_;
  Sign scale_sign_;
};

}  // namespace fewnomial
