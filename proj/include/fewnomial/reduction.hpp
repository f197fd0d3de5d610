#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fewnomial/genpoly.hpp"
#include "fewnomial/scaled_poly.hpp"
#include "fewnomial/sparse2.hpp"

namespace fewnomial {

// Substitute the unit-normalized trinomial into f: after the coordinate
// change g reads -1 + x + y, every positive solution has x in (0,1), and
// setting y = 1-x turns f into a generalized polynomial whose roots in (0,1)
// are in bijection with the positive solutions of the system.
inline GenPoly to_F(const SparsePolyQ2& f, const SparsePolyQ2& g, unsigned max_precision = 4096) {
  MonomialMap map = normalize_trinomial_unit(g, max_precision);
  SparsePolyQ2 fx = apply_map(f, map, max_precision);
  std::vector<GenTerm> terms;
  for (const auto& t : fx.terms()) terms.push_back(GenTerm{t.coeff, t.sign, t.kx, t.ky});
  GenPoly F = GenPoly::make(std::move(terms), max_precision);
  auto zero = F.functionally_zero(max_precision);
  if (!zero.has_value() || *zero)
    throw NonFiniteSolutionSet("f vanishes identically on the curve g = 0");
  return F;
}

// One layer scale * x^m * (1-x)^n * h(x) of a stage function.
struct Layer {
  Rat m, n;
  ScaledPoly h;
};

struct LayeredRep {
  unsigned stage = 1;               // j: this is f_j
  std::vector<Layer> layers;        // ordered by the originating term
  unsigned long rolle_budget = 0;   // 2^(j-1) derivatives were spent to get here
};

// d/dx [x^m (1-x)^n h] = x^(m-1) (1-x)^(n-1) [ (m - (m+n)x) h + x(1-x) h' ].
inline Layer layer_derivative_once(const Layer& in) {
  const UniPoly& h = in.h.body();
  UniPoly bracket = UniPoly::linear(in.m, -(in.m + in.n)) * h +
                    UniPoly({Rat(0), Rat(1), Rat(-1)}) * h.derivative();
  return Layer{in.m - 1, in.n - 1, in.h.with_body(std::move(bracket))};
}

// Apply the product-rule identity r times to every layer.
inline LayeredRep derivative_layer(const LayeredRep& rep, unsigned long r) {
  LayeredRep out = rep;
  for (auto& layer : out.layers)
    for (unsigned long i = 0; i < r; ++i) layer = layer_derivative_once(layer);
  return out;
}

inline GenPoly to_genpoly(const LayeredRep& rep, unsigned max_precision = 4096) {
  std::vector<GenTerm> terms;
  for (const auto& layer : rep.layers) {
    const auto& body = layer.h.body();
    for (size_t i = 0; i < body.coeffs().size(); ++i) {
      if (sgn(body.coeffs()[i]) == 0) continue;
      terms.push_back(GenTerm{re_mul_rat(layer.h.scale(), body.coeffs()[i]), Sign::undecided,
                              layer.m + Rat(static_cast<long>(i)), layer.n});
    }
  }
  return GenPoly::make(std::move(terms), max_precision, /*require_certified_signs=*/false);
}

// The derivative recursion f_1, ..., f_{t-1}. Terms are peeled in ascending
// (k, l) order; at stage j the peeled layer is a polynomial of degree at
// most 2^(j-1)-1, so the 2^(j-1) derivatives of the next step kill it
// exactly. Layer polynomial degrees stay <= 2^(j-1)-1 throughout.
inline std::vector<LayeredRep> recursion_chain(const GenPoly& F, unsigned max_precision = 4096) {
  std::vector<GenTerm> terms(F.terms().begin(), F.terms().end());
  size_t t = terms.size();
  if (t < 3) throw TooFewTerms("recursion needs at least 3 terms");
  // GenPoly is already (k, l)-sorted

  LayeredRep f1;
  f1.stage = 1;
  f1.rolle_budget = 0;
  for (const auto& term : terms)
    f1.layers.push_back(Layer{term.k - terms[0].k, term.l - terms[0].l,
                              ScaledPoly(term.coeff, UniPoly::constant(Rat(1)), max_precision)});

  std::vector<LayeredRep> chain{f1};
  for (size_t j = 1; j + 1 < t; ++j) {
    unsigned long r = 1UL << (j - 1);
    LayeredRep next = derivative_layer(chain.back(), r);
    next.stage = static_cast<unsigned>(j + 1);
    next.rolle_budget = r;
    // the peeled layer had degree <= r-1, so r derivatives annihilate it
    if (!next.layers.front().h.body().is_zero())
      throw Error("recursion: peeled layer failed to vanish");
    next.layers.erase(next.layers.begin());
    // re-anchor so the new leading layer is exponent-free
    Rat dm = next.layers.front().m, dn = next.layers.front().n;
    for (auto& layer : next.layers) {
      layer.m -= dm;
      layer.n -= dn;
    }
    for (size_t i = 0; i < next.layers.size(); ++i) {
      long cap = static_cast<long>(2 * r) - 1;  // 2^j - 1
      if (next.layers[i].h.body().degree() > cap)
        throw Error("recursion: layer degree exceeds its stage bound");
    }
    chain.push_back(std::move(next));
  }
  return chain;
}

// phi(x) = x^alpha (1-x)^beta P(x) / Q(x); solutions of phi = 1 in (0,1)
// are the roots of the final stage there. m is the least integer making
// m*alpha and m*beta integral, so phi^m is a rational function on all of
// RP^1.
struct PhiMap {
  Rat alpha, beta;
  ScaledPoly P, Q;
  unsigned long m = 1;
  int prefactor_sign = 1;

  // phi = 1 on (0,1) as a generalized polynomial: x^alpha (1-x)^beta P - Q.
  GenPoly phi_minus_one_genpoly(unsigned max_precision = 4096) const {
    std::vector<GenTerm> terms;
    const auto& pb = P.body();
    for (size_t i = 0; i < pb.coeffs().size(); ++i) {
      if (sgn(pb.coeffs()[i]) == 0) continue;
      terms.push_back(GenTerm{re_mul_rat(P.scale(), pb.coeffs()[i]), Sign::undecided,
                              alpha + Rat(static_cast<long>(i)), beta});
    }
    const auto& qb = Q.body();
    for (size_t i = 0; i < qb.coeffs().size(); ++i) {
      if (sgn(qb.coeffs()[i]) == 0) continue;
      terms.push_back(GenTerm{re_mul_rat(re_neg(Q.scale()), qb.coeffs()[i]), Sign::undecided,
                              Rat(static_cast<long>(i)), Rat(0)});
    }
    return GenPoly::make(std::move(terms), max_precision, /*require_certified_signs=*/false);
  }
};

inline unsigned long lcm_denominators(const Rat& a, const Rat& b) {
  Int l = lcm(a.get_den(), b.get_den());
  if (!l.fits_ulong_p()) throw Error("phi exponent denominators out of range");
  return l.get_ui();
}

// Extract phi from the two-layer final stage: with the leading prefactor
// divided out, f_{t-1} = h1(x) + x^a (1-x)^b h2(x), so f_{t-1} = 0 is
// x^a (1-x)^b h2 / (-h1) = 1.
inline PhiMap build_phi(const LayeredRep& last, unsigned max_precision = 4096) {
  if (last.layers.size() != 2) throw LayerCountMismatch("phi extraction needs exactly two layers");
  Layer lead = last.layers[0], tail = last.layers[1];
  Rat a = tail.m - lead.m, b = tail.n - lead.n;
  if (sgn(a) == 0 && sgn(b) == 0)
    throw LayerCountMismatch("layer exponent pairs coincide");
  PhiMap phi;
  phi.alpha = a;
  phi.beta = b;
  phi.P = tail.h;
  phi.Q = lead.h.negated();
  phi.m = lcm_denominators(a, b);
  if (phi.Q.scale_sign() == Sign::negative) {
    phi.P = phi.P.negated();
    phi.Q = phi.Q.negated();
  }
  if (phi.P.degree_ambiguous() || phi.Q.degree_ambiguous())
    throw DegreeAmbiguous("phi numerator/denominator scale sign undecided");
  phi.prefactor_sign = to_int(phi.P.scale_sign());
  return phi;
}

struct T3Result {
  PhiMap phi;
  Rat alpha1, beta1, alpha2, beta2;          // exponent data with alpha1 > alpha2
  long k3 = 0, k4 = 0, l4 = 0;
  bool swapped = false;                      // whether phi^{-1} replaced phi
  std::vector<std::string> violations;       // failed nondegeneracy conditions
};

// Closed-form phi for a pair of trinomials, through the lattice
// normalization of g: f becomes -1 + a1 z^{k1} w^{l1} + a2 z^{k2} w^{l2},
// the second equation solves as w = x^{-k4/(k3 l4)} (1-x)^{1/l4} with
// x = z^{k3}, and vanishing of the derivative of the resulting two-term
// function is exactly phi(x) = 1 with
//   phi = -(a1/a2) x^{alpha1-alpha2} (1-x)^{beta1-beta2} rho1 / rho2,
//   rho_i = alpha_i - (alpha_i + beta_i) x.
inline T3Result t3_phi(const SparsePolyQ2& f, const SparsePolyQ2& g,
                       unsigned max_precision = 4096) {
  if (f.size() != 3) throw TooFewTerms("t3_phi expects a trinomial f");
  LatticeNormalization norm = normalize_trinomial_lattice(g, max_precision);

  // normalize f to constant term -1 with the two remaining coefficients of
  // opposite signs: divide by the negation of the first positive term
  auto split = detail::sign_split_trinomial(f);
  RealExpr divisor = split.pos[0].coeff;  // positive
  Rat e0x = split.pos[0].kx, e0y = split.pos[0].ky;
  std::vector<Term2> raw;
  raw.push_back(
      Term2{re_div(split.neg.coeff, re_neg(divisor)), Sign::positive, split.neg.kx - e0x,
            split.neg.ky - e0y});
  raw.push_back(Term2{re_const(-1), Sign::negative, Rat(0), Rat(0)});
  raw.push_back(Term2{re_div(split.pos[1].coeff, re_neg(divisor)), Sign::negative,
                      split.pos[1].kx - e0x, split.pos[1].ky - e0y});
  SparsePolyQ2 fdiv = SparsePolyQ2::make(std::move(raw), max_precision);
  SparsePolyQ2 fz = apply_map(fdiv, norm.map, max_precision);

  // the two non-constant terms in the (z, w) coordinates
  std::vector<const Term2*> nonconst;
  for (const auto& t : fz.terms())
    if (!(sgn(t.kx) == 0 && sgn(t.ky) == 0)) nonconst.push_back(&t);
  if (nonconst.size() != 2)
    throw DegenerateSupport("t3_phi: transformed f does not have two non-constant terms");

  Rat k3(norm.k3), k4(norm.k4), l4(norm.l4);
  auto alpha_of = [&](const Term2& t) { return (t.kx * l4 - k4 * t.ky) / (k3 * l4); };
  auto beta_of = [&](const Term2& t) { return t.ky / l4; };

  T3Result out;
  out.k3 = norm.k3;
  out.k4 = norm.k4;
  out.l4 = norm.l4;
  const Term2* t1 = nonconst[0];
  const Term2* t2 = nonconst[1];
  Rat a1 = alpha_of(*t1), a2 = alpha_of(*t2);
  if (a1 < a2) {
    std::swap(t1, t2);
    std::swap(a1, a2);
    out.swapped = true;
  }
  out.alpha1 = a1;
  out.alpha2 = a2;
  out.beta1 = beta_of(*t1);
  out.beta2 = beta_of(*t2);

  auto check = [&](bool ok, const std::string& what) {
    if (!ok) out.violations.push_back(what);
  };
  check(out.alpha1 - out.alpha2 != out.beta2 - out.beta1, "alpha1 - alpha2 == beta2 - beta1");
  check(out.alpha1 != out.alpha2, "alpha1 == alpha2");
  check(out.beta1 != out.beta2, "beta1 == beta2");
  check(out.alpha1 + out.beta1 != 0, "alpha1 + beta1 == 0");
  check(out.alpha2 + out.beta2 != 0, "alpha2 + beta2 == 0");
  check(sgn(out.alpha1) != 0, "alpha1 == 0");
  check(sgn(out.alpha2) != 0, "alpha2 == 0");
  check(sgn(out.beta1) != 0, "beta1 == 0");
  check(sgn(out.beta2) != 0, "beta2 == 0");

  PhiMap phi;
  phi.alpha = out.alpha1 - out.alpha2;
  phi.beta = out.beta1 - out.beta2;
  // prefactor -a1/a2 folded into P
  RealExpr pref = re_neg(re_div(t1->coeff, t2->coeff));
  phi.P = ScaledPoly(pref, UniPoly::linear(out.alpha1, -(out.alpha1 + out.beta1)), max_precision);
  phi.Q = ScaledPoly::from_rational(UniPoly::linear(out.alpha2, -(out.alpha2 + out.beta2)));
  phi.m = lcm_denominators(phi.alpha, phi.beta);
  phi.prefactor_sign = to_int(phi.P.scale_sign());
  out.phi = phi;
  return out;
}

}  // namespace fewnomial
