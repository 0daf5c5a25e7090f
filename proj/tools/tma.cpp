#include "tma/tma.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace tma;

constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string domain = "intervals";
  unsigned widen_delay = 2;
  unsigned max_iters = 64;
  bool narrowing = false;
  bool check_invariants = false;
  std::size_t max_steps = 10'000;
  std::size_t max_threads = 4;
  std::vector<long long> nondet{-1, 0, 1, 3};
  std::string mutation = "none";
  bool json = false;
  bool stats = false;

  GeneratorSpec gen;
  std::vector<std::size_t> sizes{100, 200, 300, 400, 500};
  std::vector<std::size_t> depths{0, 1, 2};
};

Program load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream text;
  text << in.rdbuf();
  try {
    return parse(text.str());
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

DomainKind domain_of(const Options& o) {
  auto kind = parse_domain_kind(o.domain);
  if (!kind) throw UsageError("unknown domain " + o.domain);
  return *kind;
}

AnalysisSettings settings_of(const Options& o) {
  AnalysisSettings s;
  s.widening_delay = o.widen_delay;
  s.max_iterations = o.max_iters;
  s.narrowing = o.narrowing;
  s.check_invariants = o.check_invariants;
  if (o.mutation == "drop-glue") s.mutation = Mutation::DropGlueInterference;
  else if (o.mutation == "skip-assign") s.mutation = Mutation::SkipAssignGuarantee;
  else if (o.mutation == "skip-init") s.mutation = Mutation::SkipChildInitInterference;
  else if (o.mutation != "none") throw UsageError("unknown mutation " + o.mutation);
  return s;
}

template <AbstractDomain D>
int analyze_with(const Program& p, const D& domain, const Options& o) {
  const auto r = analyze_program(p, domain, settings_of(o));
  if (o.json) {
    auto out = to_json(r, p, domain);
    if (o.stats) {
      out["stats"] = {{"n", command_count(p.body())},
                      {"d", nesting_depth(p)},
                      {"w", r.max_rounds}};
    }
    if (o.check_invariants) out["invariantFailures"] = r.invariant_failures;
    std::cout << out.dump(2) << "\n";
  } else {
    std::size_t width = 5;
    for (auto l : report_labels(p)) width = std::max(width, p.label_name(l).size());
    for (auto l : report_labels(p)) {
      const auto name = p.label_name(l);
      std::cout << name << std::string(width - name.size() + 2, ' ')
                << domain.render(r.per_label[l.id]) << "\n";
    }
    const auto cfg = configuration_json(r.final_config, p, domain);
    std::cout << "\nfinal C: " << cfg["C"].template get<std::string>() << "\n      L: {";
    for (std::size_t k = 0; k < cfg["L"].size(); ++k) {
      std::cout << (k ? ", " : "") << cfg["L"][k].template get<std::string>();
    }
    std::cout << "}\n      K:";
    for (const auto& [label, store] : cfg["K"].items()) {
      std::cout << " " << label << " -> " << store.template get<std::string>() << ";";
    }
    std::cout << "\n      I: " << cfg["I"].template get<std::string>() << "\n";
    std::cout << "passes: " << r.passes << "\n";
    if (o.stats) {
      std::cout << "transfers: " << r.transfer_count << "\nn: " << command_count(p.body())
                << "\nd: " << nesting_depth(p) << "\nw: " << r.max_rounds << "\n";
    }
    for (const auto& f : r.invariant_failures) std::cout << "invariant: " << f << "\n";
  }
  return r.invariant_failures.empty() ? 0 : kViolation;
}

int run_analyze(const Options& o) {
  const Program p = load(o.inputs.at(0));
  if (domain_of(o) == DomainKind::Intervals) return analyze_with(p, IntervalDomain(p.vars()), o);
  return analyze_with(p, InitializedVariablesDomain(p.vars()), o);
}

int run_check(const Options& o) {
  CheckOptions check;
  check.settings = settings_of(o);
  check.bounds.max_steps = o.max_steps;
  check.bounds.max_threads = o.max_threads;
  check.bounds.nondet_values.assign(o.nondet.begin(), o.nondet.end());
  const DomainKind kind = domain_of(o);
  std::size_t total = 0;
  bool failed = false;
  for (const auto& path : o.inputs) {
    const Program p = load(path);
    const auto report = check_soundness(p, kind, check, path);
    total += report.violations.size();
    failed |= !report.passed();
    if (o.json) {
      std::cout << to_json(report, p).dump() << "\n";
      continue;
    }
    std::cout << path << " [" << to_string(kind) << "]: " << report.violations.size()
              << " violations, " << report.states << " states"
              << (report.truncated ? ", truncated" : "") << "\n";
    if (report.error) std::cout << "  error: " << *report.error << "\n";
    for (const auto& v : report.violations) {
      std::cout << "  at " << p.label_name(v.label) << ": " << render_store(v.store, p.vars())
                << " not in " << v.abstract_store << "\n";
      for (const auto& line : v.witness) std::cout << "    " << line << "\n";
    }
  }
  if (!o.json) std::cout << total << " violations\n";
  return failed ? kViolation : 0;
}

int run_gen(const Options& o) {
  for (const auto& g : generate_programs(o.gen)) {
    if (o.json) {
      std::cout << nlohmann::json{{"id", g.id}, {"source", g.source}}.dump() << "\n";
    } else {
      std::cout << "# " << g.id << "\n" << g.source << "\n\n";
    }
  }
  return 0;
}

int run_bench(const Options& o) {
  const auto rows =
      measure_complexity(complexity_family(o.sizes, o.depths, o.gen.seed), settings_of(o));
  if (o.json) {
    for (const auto& r : rows) std::cout << to_json(r).dump() << "\n";
    return 0;
  }
  std::cout << "id\tn\td\tw\ttransfers\tc\n";
  for (const auto& r : rows) {
    std::cout << r.id << "\t" << r.n << "\t" << r.d << "\t" << r.w << "\t" << r.transfer_count
              << "\t" << r.constant() << "\n";
  }
  std::cout << "max c: " << max_constant(rows) << "\n";
  return 0;
}

void analysis_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--domain", o.domain, "intervals or initvars")
      ->check(CLI::IsMember({"intervals", "initvars"}));
  cmd->add_option("--widen-delay", o.widen_delay, "joins before widening");
  cmd->add_option("--max-iters", o.max_iters, "round cap for loops and fixpoints")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--narrowing", o.narrowing, "one descending round after each loop");
  cmd->add_option("--mutation", o.mutation, "none, drop-glue, skip-assign or skip-init");
  cmd->add_flag("--json", o.json, "JSON output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thread-modular analyzer for programs with dynamic thread creation"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "print per-label invariants");
  analyze->add_option("file", o.inputs, "program (.mt)")->required()->expected(1);
  analysis_flags(analyze, o);
  analyze->add_flag("--stats", o.stats, "print instrumentation counters");
  analyze->add_flag("--check-invariants", o.check_invariants, "check configuration invariants");

  auto* check = app.add_subcommand("check", "compare the analysis with the bounded oracle");
  check->add_option("files", o.inputs, "programs (.mt)")->required();
  analysis_flags(check, o);
  check->add_option("--max-steps", o.max_steps, "distinct states explored")
      ->check(CLI::PositiveNumber);
  check->add_option("--max-threads", o.max_threads, "threads per state")
      ->check(CLI::PositiveNumber);
  check->add_option("--nondet", o.nondet, "values of ?")->delimiter(',');

  auto* gen = app.add_subcommand("gen", "emit a generated program family");
  gen->add_option("--count", o.gen.count);
  gen->add_option("--seed", o.gen.seed);
  gen->add_option("--max-commands", o.gen.max_commands)->check(CLI::PositiveNumber);
  gen->add_option("--max-create", o.gen.max_create_nesting);
  gen->add_option("--max-while", o.gen.max_while_nesting);
  gen->add_option("--vars", o.gen.var_count)->check(CLI::Range(1, 6));
  gen->add_flag("--json", o.json, "JSON lines");

  auto* bench = app.add_subcommand("bench", "transfer counts on sized programs");
  bench->add_option("--sizes", o.sizes)->delimiter(',');
  bench->add_option("--depths", o.depths)->delimiter(',')->check(CLI::Range(0, 2));
  bench->add_option("--seed", o.gen.seed);
  bench->add_option("--widen-delay", o.widen_delay);
  bench->add_option("--max-iters", o.max_iters)->check(CLI::PositiveNumber);
  bench->add_flag("--json", o.json, "JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*check) return run_check(o);
    if (*gen) return run_gen(o);
    return run_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return kViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
