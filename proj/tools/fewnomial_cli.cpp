// Command-line front end: analyze one system, emit plot samples, run
// coefficient searches, or print the closed-form bounds.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fewnomial/analyze.hpp"
#include "fewnomial/search.hpp"

namespace fn = fewnomial;

namespace {

std::string read_input(const std::string& arg, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw fn::Error("cannot open input file: " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

fn::SystemSpec parse_input(const std::string& text) {
  // structured JSON alternative to the expression grammar
  std::string trimmed = text;
  size_t b = trimmed.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && trimmed[b] == '{') {
    fn::Json j = fn::Json::parse(trimmed);
    auto poly = [](const fn::Json& arr) {
      std::vector<std::tuple<fn::Rat, fn::Rat, fn::Rat>> ts;
      for (const auto& t : arr) {
        fn::Rat c = fn::rat_from_string(t.at("coeff").get<std::string>());
        if (!t.at("kx").is_number_integer() || !t.at("ky").is_number_integer())
          throw fn::NonIntegerExponent("exponents must be integers");
        ts.push_back({c, fn::Rat(t.at("kx").get<long>()), fn::Rat(t.at("ky").get<long>())});
      }
      return fn::SparsePolyQ2::from_rational_terms(ts);
    };
    fn::SystemSpec spec;
    spec.f = poly(j.at("f"));
    spec.g = poly(j.at("g"));
    if (spec.g.size() != 3) throw fn::GNotTrinomial("g must have exactly 3 terms");
    return spec;
  }
  return fn::parse_system(text);
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fn::Error("cannot open output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified positive-solution counting for a t-nomial and a trinomial in two "
               "variables, with sharp-bound and Newton-polygon checks"};
  app.require_subcommand(1);

  unsigned precision = 4096;
  unsigned max_depth = 64;
  app.add_option("--precision", precision, "maximum certification precision in bits");
  app.add_option("--max-depth", max_depth, "maximum bisection depth");

  std::string system_text, input_file, out_path;
  bool timings = false;

  auto* analyze = app.add_subcommand("analyze", "analyze one system 'f ; g'");
  analyze->add_option("system", system_text, "system as 'f ; g'");
  analyze->add_option("--in", input_file, "read the system from a file (text or JSON)");
  analyze->add_option("--out", out_path, "write the JSON report here instead of stdout");
  analyze->add_flag("--timings", timings,
                    "include wall-clock timings (breaks byte-for-byte reproducibility)");

  std::string what = "F";
  unsigned npoints = 0;
  auto* sample = app.add_subcommand("sample", "emit certified interval samples as CSV");
  sample->add_option("system", system_text, "system as 'f ; g'");
  sample->add_option("--in", input_file, "read the system from a file");
  sample->add_option("--what", what, "F or phi")->check(CLI::IsMember({"F", "phi"}));
  sample->add_option("--n", npoints, "number of sample points")->required();
  sample->add_option("--out", out_path, "output CSV path");

  unsigned trials = 0, grid_steps = 0, record_min = 5;
  unsigned long long seed = 0;
  std::string perturb, range_str = "1/20";
  long coeff_bound = 100;
  auto* search = app.add_subcommand("search", "seeded coefficient search over fixed supports");
  search->add_option("system", system_text, "template system as 'f ; g'");
  search->add_option("--in", input_file, "read the template from a file");
  search->add_option("--trials", trials, "random trials");
  search->add_option("--seed", seed, "random seed");
  search->add_option("--grid", grid_steps, "grid steps per perturbed coefficient");
  search->add_option("--range", range_str, "relative grid half-width (rational)");
  search->add_option("--perturb", perturb, "coefficient value to perturb in grid mode");
  search->add_option("--record-min", record_min, "record trials with at least this many solutions");
  search->add_option("--coeff-bound", coeff_bound, "random coefficient numerator/denominator bound");
  search->add_option("--out", out_path, "JSONL output path for records");

  unsigned tmax = 8;
  auto* bounds = app.add_subcommand("bounds", "print the closed-form bounds");
  bounds->add_option("--tmax", tmax, "largest t to tabulate");

  CLI11_PARSE(app, argc, argv);
  fn::Settings st{precision, max_depth};

  try {
    if (*analyze) {
      auto t0 = std::chrono::steady_clock::now();
      fn::SystemSpec spec = parse_input(read_input(system_text, input_file));
      fn::AnalyzeOutcome res = fn::analyze_system(spec, st);
      if (timings) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        res.report["timings"] = {{"total_ms", ms}};
      }
      write_out(out_path, res.report.dump(2) + "\n");
      return res.exit_code;
    }
    if (*sample) {
      fn::SystemSpec spec = parse_input(read_input(system_text, input_file));
      write_out(out_path, fn::sample_csv(spec, what, npoints, st));
      return fn::kOk;
    }
    if (*search) {
      fn::SystemSpec spec = parse_input(read_input(system_text, input_file));
      fn::SearchOptions opt;
      opt.trials = trials;
      opt.seed = seed;
      opt.grid_steps = grid_steps;
      opt.record_min = record_min;
      opt.coeff_bound = coeff_bound;
      opt.grid_range = fn::rat_from_string(range_str);
      if (!perturb.empty()) opt.perturb_coeff = fn::rat_from_string(perturb);
      opt.settings = st;
      std::ofstream file_out;
      std::ostream* records = &std::cout;
      if (!out_path.empty() && out_path != "-") {
        file_out.open(out_path, std::ios::app);
        if (!file_out) throw fn::Error("cannot open output file: " + out_path);
        records = &file_out;
      }
      fn::SearchSummary sum = fn::run_search(spec, opt, *records, std::cerr);
      fn::Json js = {{"trials", sum.trials},
                     {"recorded", sum.recorded},
                     {"max_certified_count", sum.max_count},
                     {"undecided", sum.undecided},
                     {"violations", sum.violations}};
      std::cerr << js.dump() << "\n";
      return sum.violations > 0 ? fn::kTheoremViolation : fn::kOk;
    }
    if (*bounds) {
      fn::Json out = fn::Json::array();
      for (unsigned t = 3; t <= tmax; ++t)
        out.push_back({{"t", t}, {"bound", fn::bound_t(t)}});
      fn::Json j = {{"bound_formula", "3*2^(t-2)-1"},
                    {"table", out},
                    {"phi_bound_formula", "deg P + deg Q + 2"}};
      write_out(out_path, j.dump(2) + "\n");
      return fn::kOk;
    }
  } catch (const fn::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return fn::kUsage;
  } catch (const fn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fn::kUsage;
  }
  return fn::kUsage;
}
