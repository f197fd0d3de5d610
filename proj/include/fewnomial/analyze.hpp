#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "fewnomial/oracle.hpp"
#include "fewnomial/parse.hpp"
#include "fewnomial/pipeline.hpp"
#include "fewnomial/version.hpp"

namespace fewnomial {

using Json = nlohmann::ordered_json;

// exit codes: 0 ok, 1 usage, 2 undecided certification, 3 a certified count
// contradicts a proven bound (an implementation bug, reported loudly)
enum ExitCode { kOk = 0, kUsage = 1, kUndecided = 2, kTheoremViolation = 3 };

namespace detail {

inline std::string dyadic_str(const Dyadic& d) { return d.str(17); }

inline Json interval_json(const Interval& iv) {
  return Json::array({dyadic_str(iv.lo()), dyadic_str(iv.hi())});
}

inline Json count_json(const CertifiedCount& c) {
  Json j;
  j["count"] = c.count;
  j["status"] = c.exact() ? "certified_exact" : "lower_bound_only";
  j["precision_used"] = c.precision_used;
  if (!c.undecided_intervals.empty()) {
    Json u = Json::array();
    for (const auto& iv : c.undecided_intervals)
      u.push_back(Json::array({iv.first.get_str(), iv.second.get_str()}));
    j["undecided_intervals"] = u;
  }
  return j;
}

inline Json poly_json(const SparsePolyQ2& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    Json jt;
    jt["coeff"] = t.coeff->exact() ? t.coeff->exact()->get_str() : t.coeff->str();
    jt["kx"] = t.kx.get_str();
    jt["ky"] = t.ky.get_str();
    terms.push_back(jt);
  }
  return terms;
}

inline Json genpoly_json(const GenPoly& F) {
  Json terms = Json::array();
  for (const auto& t : F.terms()) {
    Json jt;
    jt["coeff"] = t.coeff->exact() ? t.coeff->exact()->get_str() : t.coeff->str();
    jt["sign"] = to_int(t.coeff_sign);
    jt["k"] = t.k.get_str();
    jt["l"] = t.l.get_str();
    terms.push_back(jt);
  }
  return terms;
}

inline Json map_json(const MonomialMap& m) {
  Json j;
  j["matrix"] = Json::array({Json::array({m.m00.get_str(), m.m01.get_str()}),
                             Json::array({m.m10.get_str(), m.m11.get_str()})});
  j["scale_x"] = m.scale_x->exact() ? m.scale_x->exact()->get_str() : m.scale_x->str();
  j["scale_y"] = m.scale_y->exact() ? m.scale_y->exact()->get_str() : m.scale_y->str();
  return j;
}

inline Json polygon_json(const LatticePolygon& p) {
  Json j = Json::array();
  for (const auto& v : p.vertices())
    j.push_back(Json::array({v.x.get_str(), v.y.get_str()}));
  return j;
}

inline Json fan_json(const NormalFan& f) {
  Json j = Json::array();
  for (const auto& r : f.rays())
    j.push_back(Json::array({r.x.get_str(), r.y.get_str()}));
  return j;
}

inline Json landmark_json(const Landmark& lm) {
  Json j;
  j["kind"] = to_string(lm.kind);
  if (lm.at_infinity)
    j["location"] = "infinity";
  else if (lm.exact_point())
    j["location"] = lm.lo.get_str();
  else
    j["location"] = Json::array({lm.lo.get_str(), lm.hi.get_str()});
  if (lm.phi_sign != 0) j["phi_sign"] = lm.phi_sign;
  if (lm.multiplicity != 1) j["multiplicity"] = lm.multiplicity;
  if (!lm.note.empty()) j["note"] = lm.note;
  return j;
}

}  // namespace detail

struct AnalyzeOutcome {
  Json report;
  int exit_code = kOk;
};

// Full analysis of one system: normalization, reduction, certified counts,
// bound checks, the real-landmark summary of phi, and the Newton-polygon
// criteria for trinomial pairs.
inline AnalyzeOutcome analyze_system(const SystemSpec& spec, const Settings& st = Settings{},
                                     bool with_phi_report = true) {
  AnalyzeOutcome out;
  Json& rep = out.report;
  rep["schema_version"] = kSchemaVersion;
  rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rep["settings"] = {{"max_precision", st.max_precision}, {"max_depth", st.max_depth}};
  rep["input"] = {{"f", detail::poly_json(spec.f)},
                  {"g", detail::poly_json(spec.g)},
                  {"f_text", render_poly(spec.f)},
                  {"g_text", render_poly(spec.g)}};

  bool undecided = false;
  bool violation = false;

  PipelineRun run;
  try {
    run = run_pipeline(spec.f, spec.g, st, /*with_stages=*/true);
  } catch (const AllSameSign&) {
    run.short_circuit_zero = true;
  }

  if (run.short_circuit_zero) {
    rep["count"] = {{"count", 0}, {"status", "certified_exact"},
                    {"reason", "all coefficients of g share one sign"}};
    rep["pass"] = {{"theorem_violation", false}, {"all_certified", true}};
    return out;
  }

  Json norm;
  norm["unit_map"] = detail::map_json(normalize_trinomial_unit(spec.g, st.max_precision));
  if (spec.g.integer_exponents()) {
    try {
      LatticeNormalization lat = normalize_trinomial_lattice(spec.g, st.max_precision);
      norm["lattice_map"] = detail::map_json(lat.map);
      norm["k3"] = lat.k3;
      norm["k4"] = lat.k4;
      norm["l4"] = lat.l4;
    } catch (const Error& e) {
      norm["lattice_map_error"] = e.what();
    }
  }
  rep["normalization"] = norm;
  rep["F"] = detail::genpoly_json(run.F);

  Json chain = Json::array();
  for (const auto& stagerep : run.chain) {
    Json js;
    js["stage"] = stagerep.stage;
    js["rolle_budget"] = stagerep.rolle_budget;
    Json layers = Json::array();
    for (const auto& layer : stagerep.layers) {
      layers.push_back(Json{{"m", layer.m.get_str()},
                            {"n", layer.n.get_str()},
                            {"degree", layer.h.body().degree()}});
    }
    js["layers"] = layers;
    chain.push_back(js);
  }
  rep["chain"] = chain;

  BoundReport bounds = bounds_from_run(run);
  rep["count"] = detail::count_json(run.count);
  if (!run.count.exact()) undecided = true;
  Json jn = Json::array();
  for (const auto& c : run.stage_counts) jn.push_back(detail::count_json(c));
  rep["stage_counts"] = jn;

  Json jb;
  if (run.t >= 3) jb["bound_t"] = bound_t(run.t);
  jb["t"] = run.t;
  if (bounds.phi_bound) jb["bound_phi"] = *bounds.phi_bound;
  jb["rolle_ok"] = bounds.rolle_ok;
  jb["degrees_ok"] = bounds.degrees_ok;
  jb["bound_ok"] = bounds.bound_ok;
  rep["bounds"] = jb;
  if (!bounds.pass()) violation = true;
  if (!bounds.all_certified) undecided = true;

  if (run.phi) {
    const PhiMap& phi = *run.phi;
    Json jp;
    jp["alpha"] = phi.alpha.get_str();
    jp["beta"] = phi.beta.get_str();
    jp["deg_P"] = phi.P.body().degree();
    jp["deg_Q"] = phi.Q.body().degree();
    jp["m"] = phi.m;
    jp["prefactor_sign"] = phi.prefactor_sign;
    rep["phi"] = jp;

    if (with_phi_report) {
      try {
        PhiAnalysis pa = analyze_phi(phi, st.max_precision);
        Json jr;
        jr["S0"] = pa.S0;
        jr["flat"] = pa.flat;
        jr["flat_plus"] = pa.flat_plus;
        jr["useful_positive"] = pa.useful_positive_interior.size();
        jr["N"] = detail::count_json(pa.N);
        jr["window_ok"] = pa.window_ok();
        jr["positive_bound_ok"] = pa.positive_bound_ok();
        jr["theorem2_ok"] = pa.theorem2_ok();
        jr["fully_certified"] = pa.fully_certified;
        if (!pa.notes.empty()) jr["notes"] = pa.notes;
        Json lms = Json::array();
        for (const auto& lm : pa.landmarks) lms.push_back(detail::landmark_json(lm));
        jr["landmarks"] = lms;
        rep["phi_report"] = jr;
        if (!pa.fully_certified) undecided = true;
        if (pa.fully_certified && pa.N.exact() &&
            (!pa.window_ok() || !pa.positive_bound_ok() || !pa.theorem2_ok()))
          violation = true;
      } catch (const Error& e) {
        rep["phi_report"] = {{"error", e.what()}};
        undecided = true;
      }
    }
  }

  // Newton polygons and the alternation criterion
  Json jf;
  LatticePolygon d1 = newton_polygon(spec.f);
  LatticePolygon d2 = newton_polygon(spec.g);
  jf["delta1"] = detail::polygon_json(d1);
  jf["delta2"] = detail::polygon_json(d2);
  jf["delta1_degenerate"] = d1.degenerate();
  jf["delta2_degenerate"] = d2.degenerate();
  if (!d1.degenerate() && !d2.degenerate()) {
    jf["fan1"] = detail::fan_json(NormalFan::of(d1));
    jf["fan2"] = detail::fan_json(NormalFan::of(d2));
    MinkowskiSum ms = minkowski_sum(d1, d2);
    jf["minkowski"] = detail::polygon_json(ms.polygon);
    jf["minkowski_edges"] = ms.edge_count;
    jf["hexagon"] = ms.hexagon;
    if (spec.f.size() == 3 && spec.g.size() == 3) {
      bool parallel = false;
      bool alt = false;
      try {
        alt = alternates(NormalFan::of(d1), NormalFan::of(d2));
      } catch (const ParallelRays&) {
        parallel = true;
      }
      jf["parallel_rays"] = parallel;
      jf["alternates"] = alt;
      if (ms.hexagon) jf["translate_pair"] = consecutive_translate_check(d1, d2);
      if (run.count.exact() && run.count.count == 5 && (alt || !ms.hexagon)) violation = true;

      try {
        T3Result t3 = t3_phi(spec.f, spec.g, st.max_precision);
        Json jt;
        jt["k3"] = t3.k3;
        jt["k4"] = t3.k4;
        jt["l4"] = t3.l4;
        jt["alpha1"] = t3.alpha1.get_str();
        jt["alpha2"] = t3.alpha2.get_str();
        jt["beta1"] = t3.beta1.get_str();
        jt["beta2"] = t3.beta2.get_str();
        jt["violations"] = t3.violations;
        if (t3.violations.empty()) {
          CaseReport cr = t3_landmark_case(
              t3, run.count.exact() ? std::optional<unsigned>(run.count.count) : std::nullopt);
          jt["ptilde"] = cr.ptilde.get_str();
          jt["qtilde"] = cr.qtilde.get_str();
          jt["ordering_case"] = cr.which_case;
          if (run.count.exact() && run.count.count == 5 && !cr.consistent_with_five)
            violation = true;
        }
        rep["t3"] = jt;
      } catch (const Error& e) {
        rep["t3"] = {{"error", e.what()}};
      }
    }
  }
  rep["fans"] = jf;

  rep["pass"] = {{"theorem_violation", violation}, {"all_certified", !undecided}};
  out.exit_code = violation ? kTheoremViolation : (undecided ? kUndecided : kOk);
  return out;
}

// Interval samples of F or phi over (0,1) for external plotting.
inline std::string sample_csv(const SystemSpec& spec, const std::string& what, unsigned n,
                              const Settings& st = Settings{}) {
  if (n < 2) throw Error("sample: need at least 2 points");
  std::string csv = "x,value_lo,value_hi\n";
  PipelineRun run = run_pipeline(spec.f, spec.g, st, /*with_stages=*/false);
  unsigned w = 128;
  for (unsigned i = 1; i <= n; ++i) {
    Rat x(i, n + 1);
    x.canonicalize();
    Interval v = Interval::point(0);
    if (what == "F") {
      v = run.F.eval_at(x, w);
    } else if (what == "phi") {
      if (!run.phi) throw Error("sample: no phi for this system");
      const PhiMap& phi = *run.phi;
      Interval X = Interval::from_rat(x, w);
      Interval acc = Interval::pow(X, phi.alpha, w);
      Interval omx = Interval::sub(Interval::point(1), X, w);
      acc = Interval::mul(acc, Interval::pow(omx, phi.beta, w), w);
      acc = Interval::mul(acc, phi.P.scale()->eval_working(w), w);
      acc = Interval::mul(acc, phi.P.body().eval_interval(X, w), w);
      Interval den = Interval::mul(phi.Q.scale()->eval_working(w),
                                   phi.Q.body().eval_interval(X, w), w);
      acc = Interval::div(acc, den, w);
      v = acc;
    } else {
      throw Error("sample: unknown target '" + what + "'");
    }
    csv += x.get_str();
    csv += ",";
    csv += detail::dyadic_str(v.lo());
    csv += ",";
    csv += detail::dyadic_str(v.hi());
    csv += "\n";
  }
  return csv;
}

}  // namespace fewnomial
