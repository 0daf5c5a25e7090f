#include "support.hpp"

#include "tma/analyzer/analyzer.hpp"
#include "tma/analyzer/report.hpp"
#include "tma/domains/gen_kill.hpp"
#include "tma/domains/interval.hpp"
#include "tma/harness/generator.hpp"
#include "tma/lang/control.hpp"
#include "tma/lang/printer.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace tma;
using tma::testing::corpus;
using tma::testing::kMessage;
using tma::testing::kSpawnLoop;
using tma::testing::load_program;

namespace {

using Config = Configuration<IntervalStore>;

Interval iv(long long lo, long long hi) { return Interval::make(Integer(lo), Integer(hi)); }

/// Rendered configuration: K lists only non-bottom entries.
struct Row {
  std::string c;
  std::set<std::string> l;
  std::map<std::string, std::string> k;
  std::string i;
  friend bool operator==(const Row&, const Row&) = default;
};

std::ostream& operator<<(std::ostream& os, const Row& r) {
  os << "C=" << r.c << " L={";
  for (const auto& x : r.l) os << x << " ";
  os << "} K={";
  for (const auto& [l, v] : r.k) os << l << ":" << v << " ";
  return os << "} I=" << r.i;
}

Row row(const Config& q, const Program& p, const IntervalDomain& d) {
  Row r{d.render(q.current), {}, {}, d.render(q.interference)};
  for (auto l : q.encountered.elements()) r.l.insert(p.label_name(l));
  for (std::uint32_t k = 0; k < q.guarantee.size(); ++k) {
    if (!d.leq(q.guarantee[k], d.bottom())) {
      r.k[p.label_name(Label{k})] = d.render(q.guarantee[k]);
    }
  }
  return r;
}

struct Message {
  Program p = parse(kMessage);
  IntervalDomain d{p.vars()};
  Analyzer<IntervalDomain> a{p, d};

  Label l(std::string_view name) const { return *p.labels().find(name); }
  const Assign& assign(std::size_t k) const { return std::get<Assign>(p.body()[k].node); }
  const Assign& child_assign() const {
    return std::get<Assign>(std::get<Create>(p.body()[2].node).body[0].node);
  }
  IntervalStore store(Interval y, Interval z) const { return IntervalStore{{y, z}}; }
  IntervalStore only_y(Interval y) const { return store(y, Interval::bottom()); }
  IntervalStore only_z(Interval z) const { return store(Interval::bottom(), z); }
};

std::vector<Program> sweep_programs() {
  std::vector<Program> out;
  for (const auto& name : corpus()) out.push_back(load_program(name));
  for (auto& g : generate_programs({})) out.push_back(std::move(g.program));
  for (auto& g : generate_programs({.count = 30, .max_commands = 10, .var_count = 3, .seed = 9})) {
    out.push_back(std::move(g.program));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Basic steps
// ---------------------------------------------------------------------------

TEST(AssignStep, FirstRowOfTheExample) {
  Message m;
  Config q0 = m.a.initial_configuration();
  Config q = m.a.assign_step(q0, m.assign(0));
  EXPECT_EQ(m.d.render(q.current), "y=[0,0], z=⊤");
  EXPECT_TRUE(m.d.equal(q.guarantee[kFin.id], m.only_y(iv(0, 0))));
  EXPECT_TRUE(q.encountered == q0.encountered);
  EXPECT_TRUE(m.d.equal(q.interference, m.d.bottom()));
}

TEST(AssignStep, JoinsIntoEveryEncounteredLabel) {
  Message m;
  Config q = m.a.initial_configuration();
  q.current = m.store(iv(0, 3), iv(0, 0));
  q.encountered.insert(m.l("l3"));
  q.guarantee[kFin.id] = m.store(iv(0, 3), iv(0, 3));
  q.guarantee[m.l("l3").id] = m.only_z(iv(3, 3));
  q.interference = m.only_y(iv(0, 3));
  Config out = m.a.assign_step(q, m.assign(3));
  EXPECT_TRUE(m.d.equal(out.guarantee[m.l("l3").id], m.only_z(iv(3, 3))));
  EXPECT_TRUE(m.d.equal(out.guarantee[kFin.id], m.store(iv(0, 3), iv(0, 3))));
  EXPECT_EQ(m.d.render(out.current), "y=[0,3], z=[3,3]");
}

TEST(AssignStep, FromTop) {
  Message m;
  Config out = m.a.assign_step(m.a.initial_configuration(), m.assign(3));
  EXPECT_EQ(m.d.render(out.current), "y=⊤, z=[3,3]");
}

TEST(GuardStep, RefinesOnly) {
  Program p = parse("if (x <= 3) { x := 1 }; if (?) { x := 2 }");
  IntervalDomain d(p.vars());
  Analyzer<IntervalDomain> a(p, d);
  Config q = a.initial_configuration();
  q.current = IntervalStore{{iv(0, 9)}};
  q.guarantee[kFin.id] = IntervalStore{{iv(1, 1)}};
  Config out = a.guard_step(q, *std::get<If>(p.body()[0].node).cond);
  EXPECT_EQ(d.render(out.current), "x=[0,3]");
  EXPECT_TRUE(out.encountered == q.encountered);
  EXPECT_TRUE(d.equal(out.guarantee[kFin.id], q.guarantee[kFin.id]));
  EXPECT_TRUE(a.equal_config(a.guard_step(q, *std::get<If>(p.body()[1].node).cond), q));
}

TEST(SpawnStep, AddsTheSite) {
  Message m;
  Config q = m.a.initial_configuration();
  Config once = m.a.spawn_step(q, m.l("l3"));
  EXPECT_TRUE(once.encountered.contains(m.l("l3")));
  EXPECT_TRUE(once.encountered.contains(kFin));
  EXPECT_TRUE(m.a.equal_config(m.a.spawn_step(once, m.l("l3")), once));
  EXPECT_TRUE(m.d.equal(once.current, q.current));
}

TEST(ChildInit, BothPasses) {
  Message m;
  Config q = m.a.initial_configuration();
  q.current = m.store(iv(0, 0), iv(0, 0));
  q.guarantee[kFin.id] = m.store(iv(0, 0), iv(0, 0));
  Config first = m.a.child_init(q, m.l("l3"));
  EXPECT_TRUE(m.d.equal(first.current, q.current));
  EXPECT_TRUE(m.d.equal(first.interference, m.d.bottom()));
  EXPECT_EQ(first.encountered.elements(), std::vector<Label>{kFin});
  for (const auto& k : first.guarantee) EXPECT_TRUE(m.d.equal(k, m.d.bottom()));

  q.guarantee[m.l("l3").id] = m.only_z(iv(3, 3));
  Config second = m.a.child_init(q, m.l("l3"));
  EXPECT_EQ(m.d.render(second.current), "y=[0,0], z=[0,3]");
  EXPECT_TRUE(m.d.equal(second.interference, m.only_z(iv(3, 3))));
}

TEST(Glue, BothPasses) {
  Message m;
  Config pre = m.a.initial_configuration();
  pre.current = m.store(iv(0, 0), iv(0, 0));
  pre.guarantee[kFin.id] = m.store(iv(0, 0), iv(0, 0));
  auto child = m.a.bottom_guarantee();
  child[kFin.id] = m.only_y(iv(0, 0));
  Config first = m.a.glue_step(pre, m.l("l3"), child);
  EXPECT_EQ(m.d.render(first.current), "y=[0,0], z=[0,0]");
  EXPECT_EQ(first.encountered.elements(), (std::vector<Label>{kFin, m.l("l3")}));
  EXPECT_TRUE(m.d.equal(first.guarantee[kFin.id], m.store(iv(0, 0), iv(0, 0))));
  EXPECT_TRUE(m.d.equal(first.guarantee[m.l("l3").id], m.d.bottom()));
  EXPECT_TRUE(m.d.equal(first.interference, m.only_y(iv(0, 0))));

  pre.guarantee[kFin.id] = m.store(iv(0, 0), iv(0, 3));
  pre.guarantee[m.l("l3").id] = m.only_z(iv(3, 3));
  child[kFin.id] = m.only_y(iv(0, 3));
  Config second = m.a.glue_step(pre, m.l("l3"), child);
  EXPECT_EQ(m.d.render(second.current), "y=[0,3], z=[0,0]");
  EXPECT_TRUE(m.d.equal(second.guarantee[kFin.id], m.store(iv(0, 3), iv(0, 3))));
  EXPECT_TRUE(m.d.equal(second.guarantee[m.l("l3").id], m.only_z(iv(3, 3))));
  EXPECT_TRUE(m.d.equal(second.interference, m.only_y(iv(0, 3))));
}

TEST(Glue, BottomChildOnlyAddsTheSite) {
  Message m;
  Config pre = m.a.initial_configuration();
  Config out = m.a.glue_step(pre, m.l("l3"), m.a.bottom_guarantee());
  EXPECT_TRUE(m.a.equal_config(out, m.a.spawn_step(pre, m.l("l3"))));
}

TEST(ConfigLattice, JoinLeqWiden) {
  Message m;
  Config q = m.a.initial_configuration();
  q.current = m.store(iv(0, 0), iv(1, 2));
  EXPECT_TRUE(m.a.equal_config(m.a.join_config(q, q), q));
  Config r = q;
  r.current = m.store(iv(0, 5), iv(1, 2));
  EXPECT_TRUE(m.a.leq_config(q, r));
  EXPECT_FALSE(m.a.leq_config(r, q));
  r.encountered.insert(m.l("l3"));
  EXPECT_TRUE(m.a.leq_config(q, r));
  EXPECT_FALSE(m.a.leq_config(r, q));
  Config w = m.a.widen_config(q, r);
  EXPECT_TRUE(m.d.equal(w.current, m.d.widen(q.current, r.current)));
}

TEST(ConfigLattice, JoinRecloses) {
  Message m;
  Config a = m.a.initial_configuration();
  a.current = m.store(iv(0, 0), iv(0, 0));
  Config b = a;
  b.interference = m.only_z(iv(5, 5));
  b.current = m.store(iv(0, 0), iv(0, 5));
  Config j = m.a.join_config(a, b);
  EXPECT_EQ(m.d.render(j.current), "y=[0,0], z=[0,5]");
}

// ---------------------------------------------------------------------------
// The worked example, all fourteen rows
// ---------------------------------------------------------------------------

TEST(Example, FourteenRows) {
  Message m;
  const std::string top = "y=⊤, z=⊤", none = "y=⊥, z=⊥";
  const std::set<std::string> fin{"fin"}, fin_l3{"fin", "l3"};
  using K = std::map<std::string, std::string>;
  auto big_k = [](const std::string& y) {
    return K{{"fin", "y=" + y + ", z=[0,3]"}, {"l3", "y=⊥, z=[3,3]"}};
  };
  const std::vector<Row> expected = {
      // First pass.
      {top, fin, {}, none},
      {"y=[0,0], z=⊤", fin, {{"fin", "y=[0,0], z=⊥"}}, none},
      {"y=[0,0], z=[0,0]", fin, {{"fin", "y=[0,0], z=[0,0]"}}, none},
      {"y=[0,0], z=[0,0]", fin, {}, none},
      {"y=[0,0], z=[0,0]", fin, {{"fin", "y=[0,0], z=⊥"}}, none},
      {"y=[0,0], z=[0,0]", fin_l3, {{"fin", "y=[0,0], z=[0,0]"}}, "y=[0,0], z=⊥"},
      {"y=[0,0], z=[3,3]", fin_l3, big_k("[0,0]"), "y=[0,0], z=⊥"},
      // Second pass.
      {top, fin, big_k("[0,0]"), none},
      {"y=[0,0], z=⊤", fin, big_k("[0,0]"), none},
      {"y=[0,0], z=[0,0]", fin, big_k("[0,0]"), none},
      {"y=[0,0], z=[0,3]", fin, {}, "y=⊥, z=[3,3]"},
      {"y=[0,3], z=[0,3]", fin, {{"fin", "y=[0,3], z=⊥"}}, "y=⊥, z=[3,3]"},
      {"y=[0,3], z=[0,0]", fin_l3, big_k("[0,3]"), "y=[0,3], z=⊥"},
      {"y=[0,3], z=[3,3]", fin_l3, big_k("[0,3]"), "y=[0,3], z=⊥"},
  };

  std::vector<Row> rows;
  std::size_t pass_starts = 0;
  m.a.set_trace([&](const TraceEvent<IntervalStore>& e) {
    if (e.kind == StepKind::PassStart) ++pass_starts;
    if (pass_starts <= 2) rows.push_back(row(e.config, m.p, m.d));
  });
  auto result = m.a.run();
  ASSERT_EQ(rows.size(), expected.size());
  for (std::size_t k = 0; k < rows.size(); ++k) EXPECT_EQ(rows[k], expected[k]) << "row " << k;
  EXPECT_EQ(result.passes, 3u);
  EXPECT_EQ(m.d.render(result.final_config.current), "y=[0,3], z=[3,3]");
}

TEST(Example, DenoteReproducesEachPass) {
  Message m;
  Config q0 = m.a.initial_configuration();
  Config first = m.a.denote(m.p.statement(), q0);
  EXPECT_EQ(row(first, m.p, m.d),
            (Row{"y=[0,0], z=[3,3]", {"fin", "l3"},
                 {{"fin", "y=[0,0], z=[0,3]"}, {"l3", "y=⊥, z=[3,3]"}}, "y=[0,0], z=⊥"}));
  Config again = q0;
  again.guarantee = first.guarantee;
  Config second = m.a.denote(m.p.statement(), again);
  EXPECT_EQ(row(second, m.p, m.d),
            (Row{"y=[0,3], z=[3,3]", {"fin", "l3"},
                 {{"fin", "y=[0,3], z=[0,3]"}, {"l3", "y=⊥, z=[3,3]"}}, "y=[0,3], z=⊥"}));
}

// ---------------------------------------------------------------------------
// Fixpoints and whole programs
// ---------------------------------------------------------------------------

TEST(GuaranteeFixpoint, OnePassWithoutCreate) {
  Program p = parse("x := 0; while (x < 10) { x := x + 1 }");
  IntervalDomain d(p.vars());
  Analyzer<IntervalDomain> a(p, d);
  std::size_t passes = 0;
  a.set_trace([&](const TraceEvent<IntervalStore>& e) {
    if (e.kind == StepKind::PassStart) ++passes;
  });
  auto r = a.run();
  EXPECT_EQ(r.passes, 1u);
  EXPECT_EQ(passes, 2u);  // the fixpoint pass and the recording pass
}

TEST(GuaranteeFixpoint, StableInputReturnsInOnePass) {
  Message m;
  auto stable = analyze_program(m.p, m.d).guarantee;
  Config q0 = m.a.initial_configuration();
  q0.guarantee = stable;
  Analyzer<IntervalDomain> fresh(m.p, m.d);
  auto again = fresh.guarantee_fixpoint(m.p.statement(), q0);
  EXPECT_EQ(fresh.max_rounds(), 1u);
  for (std::size_t k = 0; k < again.size(); ++k) EXPECT_TRUE(m.d.equal(again[k], stable[k]));
}

TEST(GuaranteeFixpoint, RoundCapIsADiagnostic) {
  Program p = parse("x := 0; while (?) { create { x := x + 1 } }");
  AnalysisSettings s;
  s.max_iterations = 1;
  EXPECT_THROW(analyze_program(p, IntervalDomain(p.vars()), s), AnalysisError);
  s.max_iterations = 0;
  EXPECT_THROW(analyze_program(p, IntervalDomain(p.vars()), s), std::invalid_argument);
}

TEST(Analyze, Message) {
  Program p = parse(kMessage);
  IntervalDomain d(p.vars());
  auto r = analyze_program(p, d);
  EXPECT_EQ(d.render(r.final_config.current), "y=[0,3], z=[3,3]");
  EXPECT_TRUE(d.get(r.final_config.current, *p.vars().find("y")).contains(Integer(3)));
  EXPECT_EQ(r.per_label.size(), p.labels().size());
}

TEST(Analyze, SingleAssignment) {
  Program p = parse("x := 0");
  IntervalDomain d(p.vars());
  auto r = analyze_program(p, d);
  EXPECT_EQ(d.render(r.final_config.current), "x=[0,0]");
  EXPECT_EQ(d.render(r.final_config.guarantee[kFin.id]), "x=[0,0]");
  EXPECT_EQ(r.passes, 1u);
  EXPECT_EQ(r.transfer_count, 2u);
}

TEST(Analyze, SpawnLoopWidens) {
  Program p = parse(kSpawnLoop);
  IntervalDomain d(p.vars());
  for (unsigned delay : {0u, 1u, 2u, 5u}) {
    AnalysisSettings s;
    s.widening_delay = delay;
    auto r = analyze_program(p, d, s);
    const Label body = std::get<Create>(std::get<While>(p.body()[1].node).body[0].node).body[0].label;
    const Interval x = d.get(r.per_label[body.id], 0);
    EXPECT_TRUE(x.hi().is_pos_inf());
    EXPECT_GE(x.lo(), Bound(0));
  }
}

TEST(Analyze, SkipLikeAssignmentOnlyTouchesK) {
  Program p = parse("x := x");
  IntervalDomain d(p.vars());
  Analyzer<IntervalDomain> a(p, d);
  Config q = a.initial_configuration();
  q.current = IntervalStore{{iv(2, 4)}};
  Config out = a.denote(p.statement(), q);
  EXPECT_TRUE(d.equal(out.current, q.current));
  EXPECT_TRUE(d.equal(out.guarantee[kFin.id], q.current));
}

TEST(Analyze, IfWithoutElse) {
  Program p = parse("x := ?; if (x > 5) { x := 5 }");
  IntervalDomain d(p.vars());
  auto r = analyze_program(p, d);
  EXPECT_EQ(d.render(r.final_config.current), "x=[-oo,5]");
}

TEST(Analyze, NarrowingRecoversTheExitBound) {
  Program p = parse("i := 0; while (i < 5) { i := i + 1 }");
  IntervalDomain d(p.vars());
  AnalysisSettings s;
  EXPECT_EQ(d.render(analyze_program(p, d, s).final_config.current), "i=[5,+oo]");
  s.narrowing = true;
  EXPECT_EQ(d.render(analyze_program(p, d, s).final_config.current), "i=[5,5]");
}

TEST(Analyze, InitializedVariables) {
  Program p = tma::testing::load_program("uninit.mt");
  InitializedVariablesDomain d(p.vars());
  auto r = analyze_program(p, d);
  const Label read = p.body()[2].label;
  EXPECT_EQ(d.render(r.per_label[read.id]), "{x, y}");
  EXPECT_EQ(d.render(r.final_config.current), "{x, y, z}");
}

TEST(Analyze, CountsAtLeastTheBasicStatements) {
  for (const auto& p : sweep_programs()) {
    auto r = analyze_program(p, IntervalDomain(p.vars()));
    EXPECT_GE(r.transfer_count, decompose(p.statement()).size());
    EXPECT_EQ(r.per_label.size(), p.labels().size());
  }
}

TEST(Analyze, JsonReport) {
  Program p = parse(kMessage);
  IntervalDomain d(p.vars());
  auto j = to_json(analyze_program(p, d), p, d);
  EXPECT_EQ(j["final"]["C"], "y=[0,3], z=[3,3]");
  EXPECT_EQ(j["final"]["L"], nlohmann::ordered_json({"fin", "l3"}));
  EXPECT_EQ(j["final"]["K"]["l3"], "y=⊥, z=[3,3]");
  EXPECT_EQ(j["perLabel"]["l4"], "y=[0,0], z=[0,3]");
  EXPECT_EQ(j["passes"], 3);
  EXPECT_EQ(j["transferCount"], 20);
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

TEST(Invariants, HoldOnEveryStep) {
  for (const auto& p : sweep_programs()) {
    AnalysisSettings s;
    s.check_invariants = true;
    auto r = analyze_program(p, IntervalDomain(p.vars()), s);
    EXPECT_TRUE(r.invariant_failures.empty()) << pretty_print(p) << "\n" << r.invariant_failures.front();
    auto g = analyze_program(p, InitializedVariablesDomain(p.vars()), s);
    EXPECT_TRUE(g.invariant_failures.empty()) << pretty_print(p);
  }
}

TEST(Invariants, RelyMonotonicity) {
  std::mt19937 rng(17);
  GeneratorSpec spec{.count = 40, .max_commands = 6, .max_create_nesting = 1,
                     .max_while_nesting = 0, .var_count = 2, .seed = 23};
  auto random_store = [&](std::size_t n) {
    IntervalStore s{std::vector<Interval>(n, Interval::bottom())};
    for (auto& v : s.values) {
      if (rng() % 2) continue;
      const long long lo = static_cast<long long>(rng() % 7) - 3;
      v = iv(lo, lo + static_cast<long long>(rng() % 4));
    }
    return s;
  };
  std::size_t checked = 0;
  for (const auto& g : generate_programs(spec)) {
    const Program& p = g.program;
    IntervalDomain d(p.vars());
    for (int trial = 0; trial < 5; ++trial) {
      Analyzer<IntervalDomain> a(p, d);
      Config qa = a.initial_configuration();
      Config qb = qa;
      for (std::size_t k = 0; k < qa.guarantee.size(); ++k) {
        qa.guarantee[k] = random_store(d.var_count());
        qb.guarantee[k] = d.join(qa.guarantee[k], random_store(d.var_count()));
      }
      qa.interference = random_store(d.var_count());
      qb.interference = d.join(qa.interference, random_store(d.var_count()));
      qa.current = qb.current = d.apply_interference(qb.interference, d.top());
      ASSERT_TRUE(a.leq_config(qa, qb));
      Config ra = a.denote(p.statement(), qa);
      Config rb = a.denote(p.statement(), qb);
      EXPECT_TRUE(a.leq_config(ra, rb)) << g.source;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 200u);
}
