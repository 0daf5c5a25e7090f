#include "support.hpp"

#include "tma/harness/complexity.hpp"
#include "tma/harness/generator.hpp"
#include "tma/harness/soundness.hpp"
#include "tma/lang/printer.hpp"

#include <gtest/gtest.h>

using namespace tma;
using tma::testing::corpus;
using tma::testing::kInterfere;
using tma::testing::kMessage;
using tma::testing::load_program;

namespace {

bool has_create_in_while(const Block& block, bool in_loop) {
  for (const auto& c : block) {
    if (const auto* w = std::get_if<While>(&c.node)) {
      if (has_create_in_while(w->body, true)) return true;
    } else if (const auto* i = std::get_if<If>(&c.node)) {
      if (has_create_in_while(i->then_block, in_loop)) return true;
      if (has_create_in_while(i->else_block, in_loop)) return true;
    } else if (const auto* k = std::get_if<Create>(&c.node)) {
      if (in_loop || has_create_in_while(k->body, false)) return true;
    }
  }
  return false;
}

std::size_t total_violations(const std::vector<Program>& programs, DomainKind kind,
                             Mutation mutation) {
  CheckOptions o;
  o.settings.mutation = mutation;
  std::size_t total = 0;
  for (const auto& p : programs) total += check_soundness(p, kind, o).violations.size();
  return total;
}

std::vector<Program> family() {
  std::vector<Program> out;
  for (auto& g : generate_programs({})) out.push_back(std::move(g.program));
  return out;
}

}  // namespace

TEST(Generator, Deterministic) {
  auto a = generate_programs({});
  auto b = generate_programs({});
  ASSERT_EQ(a.size(), 30u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].id, b[k].id);
    EXPECT_EQ(a[k].source, b[k].source);
  }
  auto c = generate_programs({.seed = 2});
  std::size_t differ = 0;
  for (std::size_t k = 0; k < a.size(); ++k) differ += a[k].source != c[k].source;
  EXPECT_GT(differ, 0u);
}

TEST(Generator, RespectsLimitsAndCoversSpawnLoops) {
  GeneratorSpec spec;
  std::size_t spawning_loops = 0, with_create = 0;
  for (const auto& g : generate_programs(spec)) {
    EXPECT_EQ(parse(g.source).body(), g.program.body());
    EXPECT_LE(g.program.vars().size(), spec.var_count);
    spawning_loops += has_create_in_while(g.program.body(), false);
    with_create += contains_create(g.program.body());
  }
  EXPECT_GE(spawning_loops, 10u);
  EXPECT_GE(with_create, 15u);
}

TEST(Generator, SizedPrograms) {
  for (std::size_t d : {0u, 1u, 2u}) {
    for (std::size_t n : {20u, 100u, 333u}) {
      Program p = parse(sized_program_source(n, d, 1));
      EXPECT_EQ(command_count(p.body()), n);
      EXPECT_EQ(nesting_depth(p), d);
    }
  }
}

TEST(Soundness, ExamplesPass) {
  for (const char* src : {kMessage, kInterfere}) {
    Program p = parse(src);
    for (auto kind : {DomainKind::Intervals, DomainKind::InitializedVariables}) {
      auto r = check_soundness(p, kind, {});
      EXPECT_TRUE(r.passed()) << src;
      EXPECT_FALSE(r.truncated);
    }
  }
}

TEST(Soundness, InterferenceIsCovered) {
  Program p = parse(kInterfere);
  auto r = analyze_program(p, IntervalDomain(p.vars()));
  const Interval z = r.final_config.current.values[*p.vars().find("z")];
  EXPECT_TRUE(z.contains(Integer(1)));
  EXPECT_TRUE(z.contains(Integer(3)));
}

TEST(Soundness, CorpusAndFamily) {
  std::vector<Program> programs = family();
  for (const auto& name : corpus()) programs.push_back(load_program(name));
  for (auto kind : {DomainKind::Intervals, DomainKind::InitializedVariables}) {
    for (const auto& p : programs) {
      auto r = check_soundness(p, kind, {});
      EXPECT_TRUE(r.passed()) << pretty_print(p) << to_json(r, p).dump(2);
    }
  }
}

TEST(Soundness, TruncationIsFlagged) {
  Program p = load_program("workers.mt");
  auto r = check_soundness(p, DomainKind::Intervals, {});
  EXPECT_TRUE(r.truncated);
  EXPECT_TRUE(r.passed());
  CheckOptions few;
  few.max_initial_stores = 1;
  EXPECT_TRUE(check_soundness(parse("x := y"), DomainKind::Intervals, few).truncated);
}

TEST(Soundness, RoundCapIsReportedAsError) {
  CheckOptions o;
  o.settings.max_iterations = 1;
  auto r = check_soundness(parse(tma::testing::kSpawnLoop), DomainKind::Intervals, o);
  EXPECT_TRUE(r.error.has_value());
  EXPECT_FALSE(r.passed());
}

TEST(Mutation, DropGlueInterference) {
  Program p = parse(kInterfere);
  CheckOptions o;
  o.settings.mutation = Mutation::DropGlueInterference;
  auto r = check_soundness(p, DomainKind::Intervals, o);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_FALSE(r.violations.front().witness.empty());
}

TEST(Mutation, EachIsCaught) {
  const auto programs = family();
  for (auto m : {Mutation::DropGlueInterference, Mutation::SkipAssignGuarantee,
                 Mutation::SkipChildInitInterference}) {
    EXPECT_GT(total_violations(programs, DomainKind::Intervals, m), 0u);
  }
  EXPECT_EQ(total_violations(programs, DomainKind::Intervals, Mutation::None), 0u);
}

TEST(Soundness, JsonShape) {
  Program p = parse(kMessage);
  auto j = to_json(check_soundness(p, DomainKind::Intervals, {}, "message"), p);
  EXPECT_EQ(j["program"], "message");
  EXPECT_EQ(j["domain"], "intervals");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_TRUE(j["violations"].empty());
}

TEST(Complexity, SingleAssignment) {
  auto row = measure(parse("x := 0"), {}, "one");
  EXPECT_EQ(row.n, 1u);
  EXPECT_EQ(row.d, 0u);
  EXPECT_EQ(row.w, 1u);
  EXPECT_LE(row.transfer_count, 4u);
}

TEST(Complexity, BoundedConstantAndLinearGrowth) {
  const auto rows =
      measure_complexity(complexity_family({100, 200, 300, 400, 500}, {0, 1, 2}, 1), {});
  ASSERT_EQ(rows.size(), 15u);
  EXPECT_LE(max_constant(rows), 8.0);
  for (std::size_t d : {0u, 1u, 2u}) {
    const double low = slope(rows, d, 100, 100);
    const double high = slope(rows, d, 500, 500);
    ASSERT_GT(low, 0);
    EXPECT_LE(std::max(low, high) / std::min(low, high), 1.5) << "d=" << d;
  }
}
