#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fewnomial/fans.hpp"
#include "fewnomial/phi_analysis.hpp"
#include "fewnomial/reduction.hpp"
#include "fewnomial/rootcount.hpp"

namespace fewnomial {

struct Settings {
  unsigned max_precision = 4096;
  unsigned max_depth = 64;
};

// deg P + deg Q + 2 with certified degrees.
inline unsigned bound_phi(const PhiMap& phi) {
  int dp = phi.P.degree();  // throws DegreeAmbiguous if uncertifiable
  int dq = phi.Q.degree();
  if (dp < 0 || dq < 0) throw Error("bound_phi: zero numerator or denominator");
  return static_cast<unsigned>(dp + dq + 2);
}

// Full reduction pipeline with all intermediates kept for reports.
struct PipelineRun {
  bool short_circuit_zero = false;    // all-same-sign trinomial: count 0
  GenPoly F;
  std::vector<LayeredRep> chain;
  std::optional<PhiMap> phi;
  CertifiedCount count;               // roots of F in (0,1)
  std::vector<CertifiedCount> stage_counts;  // N_1 ... N_{t-1}
  unsigned t = 0;
};

inline PipelineRun run_pipeline(const SparsePolyQ2& f, const SparsePolyQ2& g,
                                const Settings& s = Settings{}, bool with_stages = true) {
  PipelineRun out;
  try {
    out.F = to_F(f, g, s.max_precision);
  } catch (const AllSameSign&) {
    out.short_circuit_zero = true;
    out.count = CertifiedCount{};
    return out;
  }
  out.t = static_cast<unsigned>(out.F.size());
  out.count = certified_count(out.F, s.max_precision, s.max_depth);
  if (out.t >= 3) {
    out.chain = recursion_chain(out.F, s.max_precision);
    out.phi = build_phi(out.chain.back(), s.max_precision);
    if (with_stages) {
      out.stage_counts.push_back(out.count);  // N_1: f_1 has the same roots as F
      for (size_t j = 1; j < out.chain.size(); ++j)
        out.stage_counts.push_back(
            certified_count(to_genpoly(out.chain[j], s.max_precision), s.max_precision,
                            s.max_depth));
    }
  }
  return out;
}

// Certified number of positive solutions of f = g = 0.
inline CertifiedCount count_positive_solutions(const SparsePolyQ2& f, const SparsePolyQ2& g,
                                               unsigned precision = 4096,
                                               unsigned max_depth = 64) {
  Settings s{precision, max_depth};
  return run_pipeline(f, g, s, /*with_stages=*/false).count;
}

struct BoundReport {
  unsigned t = 0;
  bool short_circuit_zero = false;
  std::vector<CertifiedCount> N;          // stage counts
  std::vector<bool> rolle_ok;             // N_j <= N_{j+1} + 2^(j-1)
  std::vector<unsigned long> rolle_budget;
  unsigned long bound = 0;                // 3*2^(t-2)-1
  std::optional<unsigned> phi_bound;      // deg P + deg Q + 2
  std::optional<unsigned> degP, degQ;
  bool degrees_ok = true;                 // deg P, deg Q <= 2^(t-2)-1
  bool bound_ok = true;                   // certified counts within the bound
  bool all_certified = true;

  bool pass() const {
    if (!bound_ok || !degrees_ok) return false;
    for (bool b : rolle_ok)
      if (!b) return false;
    return true;
  }
};

// Check every chain inequality and the closed-form bounds on an already
// computed pipeline run. A certified count above a bound falsifies the
// mathematics and is reported as a hard failure.
inline BoundReport bounds_from_run(const PipelineRun& run) {
  BoundReport rep;
  if (run.short_circuit_zero) {
    rep.short_circuit_zero = true;
    rep.t = 0;
    return rep;
  }
  rep.t = run.t;
  rep.N = run.stage_counts;
  if (run.t >= 3) {
    rep.bound = bound_t(run.t);
    if (run.count.exact() && run.count.count > rep.bound) rep.bound_ok = false;
    for (size_t j = 0; j + 1 < rep.N.size(); ++j) {
      unsigned long budget = 1UL << j;  // 2^(j-1) for stage j = j+1 here
      rep.rolle_budget.push_back(budget);
      bool both = rep.N[j].exact() && rep.N[j + 1].exact();
      if (!both) {
        rep.all_certified = false;
        rep.rolle_ok.push_back(true);  // nothing certified to violate
      } else {
        rep.rolle_ok.push_back(rep.N[j].count <= rep.N[j + 1].count + budget);
      }
    }
    if (run.phi) {
      rep.degP = static_cast<unsigned>(run.phi->P.degree());
      rep.degQ = static_cast<unsigned>(run.phi->Q.degree());
      rep.phi_bound = bound_phi(*run.phi);
      long cap = (1L << (run.t - 2)) - 1;
      rep.degrees_ok = *rep.degP <= static_cast<unsigned long>(cap) &&
                       *rep.degQ <= static_cast<unsigned long>(cap);
    }
    for (const auto& c : rep.N)
      if (!c.exact()) rep.all_certified = false;
  }
  return rep;
}

inline BoundReport check_bounds(const SparsePolyQ2& f, const SparsePolyQ2& g,
                                const Settings& s = Settings{}) {
  return bounds_from_run(run_pipeline(f, g, s, /*with_stages=*/true));
}

struct Theorem3Report {
  CertifiedCount count;
  bool short_circuit_zero = false;
  bool hexagon = false;
  bool alternate = false;
  bool parallel_rays = false;
  bool translate_pair = false;
  size_t minkowski_edges = 0;
  // certified 5-solution systems must have a hexagonal sum and must not
  // alternate; a violation indicates an implementation bug
  bool violation = false;
};

inline Theorem3Report theorem3_check(const SparsePolyQ2& f, const SparsePolyQ2& g,
                                     const Settings& s = Settings{}) {
  if (f.size() != 3 || g.size() != 3)
    throw TooFewTerms("the alternation criterion applies to two trinomials");
  Theorem3Report rep;
  LatticePolygon d1 = newton_polygon(f);
  LatticePolygon d2 = newton_polygon(g);
  if (d1.degenerate() || d2.degenerate()) throw DegenerateSupport("degenerate Newton polygon");
  MinkowskiSum ms = minkowski_sum(d1, d2);
  rep.hexagon = ms.hexagon;
  rep.minkowski_edges = ms.edge_count;
  try {
    rep.alternate = alternates(NormalFan::of(d1), NormalFan::of(d2));
  } catch (const ParallelRays&) {
    rep.parallel_rays = true;
    rep.alternate = false;
  }
  if (ms.hexagon) rep.translate_pair = consecutive_translate_check(d1, d2);
  try {
    rep.count = count_positive_solutions(f, g, s.max_precision, s.max_depth);
  } catch (const AllSameSign&) {
    rep.short_circuit_zero = true;
  }
  if (rep.count.exact() && rep.count.count == 5) {
    if (rep.alternate || !rep.hexagon) rep.violation = true;
  }
  return rep;
}

}  // namespace fewnomial
