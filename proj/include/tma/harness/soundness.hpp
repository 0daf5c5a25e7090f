#pragma once

#include "tma/analyzer/analyzer.hpp"
#include "tma/concrete/explore.hpp"
#include "tma/domains/gen_kill.hpp"
#include "tma/domains/interval.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tma {

enum class DomainKind { Intervals, InitializedVariables };

inline std::optional<DomainKind> parse_domain_kind(std::string_view name) {
  if (name == "intervals") return DomainKind::Intervals;
  if (name == "initvars") return DomainKind::InitializedVariables;
  return std::nullopt;
}

inline std::string to_string(DomainKind kind) {
  return kind == DomainKind::Intervals ? "intervals" : "initvars";
}

struct Violation {
  Label label;
  ConcreteStore store;
  std::string abstract_store;
  /// Shortest trace reaching the offending state, one line per state.
  std::vector<std::string> witness;
};

struct SoundnessReport {
  std::string program_id;
  DomainKind domain = DomainKind::Intervals;
  std::vector<Violation> violations;
  bool truncated = false;
  std::size_t states = 0;
  /// Set when the analysis itself failed, e.g. a loop hit the round cap.
  std::optional<std::string> error;

  bool passed() const { return violations.empty() && !error; }
};

struct CheckOptions {
  ExploreBounds bounds;
  AnalysisSettings settings;
  /// Cap on the product of `?` values over the variables used as initial
  /// stores.
  std::size_t max_initial_stores = 64;
};

inline std::string render_store(const ConcreteStore& m, const VarTable& vars) {
  std::string out;
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (v) out += ", ";
    out += vars.name(static_cast<VarId>(v)) + "=" + to_string(m.values[v]);
  }
  return out;
}

inline std::string describe_state(const State& s, const Program& program) {
  std::string out = "thread " + std::to_string(s.current) + " [";
  for (std::size_t j = 0; j < s.control.size(); ++j) {
    if (j) out += ' ';
    out += program.label_name(s.control[j]);
  }
  return out + "] " + render_store(s.store, program.vars());
}

/// Runs the analysis and the bounded oracle, and checks that every store
/// the oracle observes at a label lies in the analysis invariant there.
template <AbstractDomain D>
SoundnessReport check_soundness_with(const Program& program, const D& domain,
                                     const CheckOptions& options, std::string program_id) {
  SoundnessReport report;
  report.program_id = std::move(program_id);

  std::vector<ConcreteStore> initial =
      enumerate_stores(program.vars().size(), options.bounds.nondet_values,
                       options.max_initial_stores + 1);
  if (initial.size() > options.max_initial_stores) {
    initial.resize(options.max_initial_stores);
    report.truncated = true;
  }
  const ExplorationResult run = explore(program, initial, options.bounds);
  report.truncated |= run.truncated();
  report.states = run.states.size();

  std::optional<AnalysisResult<typename D::Store>> analysis;
  try {
    analysis = analyze_program(program, domain, options.settings);
  } catch (const AnalysisError& e) {
    report.error = e.what();
    return report;
  }

  for (const auto& [label, stores] : run.stores_at) {
    const auto& invariant = analysis->per_label.at(label.id);
    for (const auto& [store, first] : stores) {
      if (domain.contains(invariant, store)) continue;
      Violation v{label, store, domain.render(invariant), {}};
      for (auto index : run.trace_to(first)) {
        v.witness.push_back(describe_state(run.states[index], program));
      }
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

inline SoundnessReport check_soundness(const Program& program, DomainKind kind,
                                       const CheckOptions& options,
                                       std::string program_id = "program") {
  SoundnessReport report =
      kind == DomainKind::Intervals
          ? check_soundness_with(program, IntervalDomain(program.vars()), options,
                                 std::move(program_id))
          : check_soundness_with(program, InitializedVariablesDomain(program.vars()), options,
                                 std::move(program_id));
  report.domain = kind;
  return report;
}

inline nlohmann::json to_json(const SoundnessReport& r, const Program& program) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"label", program.label_name(v.label)},
                          {"store", detail::store_json(v.store, program.vars())},
                          {"abstract", v.abstract_store},
                          {"witness", v.witness}});
  }
  nlohmann::json out = {{"program", r.program_id},
                        {"domain", to_string(r.domain)},
                        {"verdict", r.passed() ? "pass" : "fail"},
                        {"violations", violations},
                        {"truncated", r.truncated},
                        {"states", r.states}};
  if (r.error) out["error"] = *r.error;
  return out;
}

}  // namespace tma
