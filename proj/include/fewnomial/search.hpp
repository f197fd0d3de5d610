#pragma once

#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fewnomial/analyze.hpp"

namespace fewnomial {

struct SearchOptions {
  unsigned trials = 0;           // random mode when > 0
  unsigned long long seed = 0;
  unsigned grid_steps = 0;       // grid mode when > 0
  Rat grid_range = Rat(1, 20);   // relative perturbation half-width
  std::optional<Rat> perturb_coeff;  // grid mode: which coefficient to move
  unsigned record_min = 5;
  long coeff_bound = 100;        // random mode numerator/denominator bound
  Settings settings;
};

struct SearchSummary {
  unsigned trials = 0;
  unsigned recorded = 0;
  unsigned violations = 0;
  unsigned undecided = 0;
  unsigned max_count = 0;
};

namespace detail {

inline SparsePolyQ2 with_coeffs(const SparsePolyQ2& shape, const std::vector<Rat>& coeffs) {
  std::vector<Term2> ts;
  size_t i = 0;
  for (const auto& t : shape.terms()) {
    ts.push_back(Term2{re_const(coeffs[i]), Sign::undecided, t.kx, t.ky});
    ++i;
  }
  return SparsePolyQ2::make(std::move(ts));
}

inline std::vector<Rat> coeffs_of(const SparsePolyQ2& p) {
  std::vector<Rat> out;
  for (const auto& t : p.terms()) {
    if (!t.coeff->exact()) throw Error("search needs exact rational coefficients");
    out.push_back(*t.coeff->exact());
  }
  return out;
}

inline Json record_json(unsigned trial, const SystemSpec& spec, const Theorem3Report& rep) {
  Json j;
  j["trial"] = trial;
  j["f"] = render_poly(spec.f);
  j["g"] = render_poly(spec.g);
  j["count"] = rep.count.count;
  j["certified"] = rep.count.exact();
  j["hexagon"] = rep.hexagon;
  j["alternates"] = rep.alternate;
  j["parallel_rays"] = rep.parallel_rays;
  j["translate_pair"] = rep.translate_pair;
  return j;
}

}  // namespace detail

// Seeded search for systems with many positive solutions over fixed
// supports. Grid mode perturbs every occurrence of one rational coefficient
// multiplicatively over a uniform rational grid; random mode redraws all
// coefficients. Every certified five-solution trinomial pair is checked
// against the alternation criterion.
inline SearchSummary run_search(const SystemSpec& base, const SearchOptions& opt,
                                std::ostream& records, std::ostream& log) {
  SearchSummary sum;
  bool t3 = base.f.size() == 3 && base.g.size() == 3;

  auto run_one = [&](unsigned trial, const SystemSpec& spec) {
    unsigned count = 0;
    bool certified = false;
    Theorem3Report rep;
    try {
      if (t3) {
        rep = theorem3_check(spec.f, spec.g, opt.settings);
        count = rep.count.count;
        certified = rep.count.exact() && !rep.short_circuit_zero;
        if (rep.violation) ++sum.violations;
      } else {
        rep.count = count_positive_solutions(spec.f, spec.g, opt.settings.max_precision,
                                             opt.settings.max_depth);
        count = rep.count.count;
        certified = rep.count.exact();
      }
    } catch (const AllSameSign&) {
      certified = true;
    } catch (const Error& e) {
      log << "trial " << trial << ": " << e.what() << "\n";
      return;
    }
    if (!certified) ++sum.undecided;
    if (certified && count > sum.max_count) sum.max_count = count;
    if (certified && count >= opt.record_min) {
      records << detail::record_json(trial, spec, rep).dump() << "\n";
      ++sum.recorded;
    }
  };

  if (opt.grid_steps > 0) {
    if (!opt.perturb_coeff) throw Error("grid search needs --perturb");
    std::vector<Rat> fc = detail::coeffs_of(base.f);
    std::vector<Rat> gc = detail::coeffs_of(base.g);
    std::vector<std::pair<bool, size_t>> slots;  // (in_f, index)
    for (size_t i = 0; i < fc.size(); ++i)
      if (fc[i] == *opt.perturb_coeff) slots.push_back({true, i});
    for (size_t i = 0; i < gc.size(); ++i)
      if (gc[i] == *opt.perturb_coeff) slots.push_back({false, i});
    if (slots.empty()) throw Error("grid search: no term carries the given coefficient");
    unsigned long long total = 1;
    for (size_t i = 0; i < slots.size(); ++i) {
      total *= opt.grid_steps;
      if (total > 2000000) throw Error("grid too large");
    }
    long steps = static_cast<long>(opt.grid_steps);
    for (unsigned long long idx = 0; idx < total; ++idx) {
      std::vector<Rat> fc2 = fc, gc2 = gc;
      unsigned long long rem = idx;
      for (const auto& slot : slots) {
        long i = static_cast<long>(rem % opt.grid_steps);
        rem /= opt.grid_steps;
        Rat mult = steps == 1 ? Rat(1)
                              : Rat(1) + opt.grid_range * Rat(2 * i - (steps - 1), steps - 1);
        mult.canonicalize();
        if (slot.first)
          fc2[slot.second] = fc[slot.second] * mult;
        else
          gc2[slot.second] = gc[slot.second] * mult;
      }
      SystemSpec spec{detail::with_coeffs(base.f, fc2), detail::with_coeffs(base.g, gc2)};
      run_one(static_cast<unsigned>(idx), spec);
      ++sum.trials;
    }
    return sum;
  }

  for (unsigned trial = 0; trial < opt.trials; ++trial) {
    std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ULL + trial + 1);
    auto draw = [&]() {
      std::uniform_int_distribution<long> num(-opt.coeff_bound, opt.coeff_bound);
      std::uniform_int_distribution<long> den(1, opt.coeff_bound);
      long n = 0;
      while (n == 0) n = num(rng);
      return rat(n, den(rng));
    };
    std::vector<Rat> fc, gc;
    for (size_t i = 0; i < base.f.terms().size(); ++i) fc.push_back(draw());
    for (size_t i = 0; i < base.g.terms().size(); ++i) gc.push_back(draw());
    SystemSpec spec{detail::with_coeffs(base.f, fc), detail::with_coeffs(base.g, gc)};
    run_one(trial, spec);
    ++sum.trials;
  }
  return sum;
}

}  // namespace fewnomial
