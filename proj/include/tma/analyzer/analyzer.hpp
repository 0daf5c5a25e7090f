#pragma once

#include "tma/analyzer/configuration.hpp"
#include "tma/domains/domain.hpp"
#include "tma/lang/ast.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tma {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deliberate defects, for checking that the soundness harness notices a
/// broken analyzer.
enum class Mutation {
  None,
  /// glue does not add the child's guarantee to the parent's interference.
  DropGlueInterference,
  /// assign does not record its write in the guarantee.
  SkipAssignGuarantee,
  /// child_init does not add the creation-site guarantee to the child's
  /// interference.
  SkipChildInitInterference,
};

struct AnalysisSettings {
  /// Rounds that combine iterates by join before widening takes over.
  unsigned widening_delay = 2;
  /// Bound on the rounds of any loop or guarantee fixpoint.
  unsigned max_iterations = 64;
  /// One descending iteration after each loop stabilizes.
  bool narrowing = false;
  /// Check the configuration invariants after every step.
  bool check_invariants = false;
  Mutation mutation = Mutation::None;
};

enum class StepKind { PassStart, Assign, Guard, Spawn, ChildInit, Glue };

template <class Store>
struct TraceEvent {
  StepKind kind;
  Label label;
  const Configuration<Store>& config;
};

template <class Store>
struct AnalysisResult {
  Configuration<Store> final_config;
  /// Stabilized guarantee of the whole program.
  GuaranteeMap<Store> guarantee;
  /// Join of every abstract store seen at each label, indexed by label id.
  std::vector<Store> per_label;
  /// Rounds of the top-level guarantee fixpoint.
  std::size_t passes = 0;
  /// Applications of basic transfer functions (assign, guard, spawn).
  std::size_t transfer_count = 0;
  /// Largest number of rounds any loop or fixpoint needed.
  std::size_t max_rounds = 0;
  std::vector<std::string> invariant_failures;
};

template <AbstractDomain D>
class Analyzer {
 public:
  using Store = typename D::Store;
  using Config = Configuration<Store>;
  using Guarantee = GuaranteeMap<Store>;
  using TraceFn = std::function<void(const TraceEvent<Store>&)>;

  Analyzer(const Program& program, D domain, AnalysisSettings settings = {})
      : program_(program), domain_(std::move(domain)), settings_(settings) {
    if (settings_.max_iterations < 1) {
      throw std::invalid_argument("max_iterations must be at least 1");
    }
  }

  const D& domain() const { return domain_; }
  const AnalysisSettings& settings() const { return settings_; }
  void set_trace(TraceFn fn) { trace_ = std::move(fn); }

  std::size_t transfer_count() const { return transfer_count_; }
  std::size_t max_rounds() const { return max_rounds_; }
  const std::vector<std::string>& invariant_failures() const { return failures_; }

  /// <initial store, {fin}, λl.⊥, ⊥>
  Config initial_configuration() const {
    return make_config(domain_.initial(), bottom_guarantee(), domain_.bottom());
  }

  Guarantee bottom_guarantee() const {
    return Guarantee(program_.labels().size(), domain_.bottom());
  }

  bool is_bottom(const Store& s) const { return domain_.leq(s, domain_.bottom()); }

  // -------------------------------------------------------------------------
  // Basic steps
  // -------------------------------------------------------------------------

  Config assign_step(const Config& q, const Assign& a) {
    ++transfer_count_;
    Config out = q;
    out.current = domain_.apply_interference(q.interference, domain_.assign(q.current, a));
    if (settings_.mutation != Mutation::SkipAssignGuarantee) {
      const Store written = domain_.interference(q.current, a);
      for (Label l : q.encountered.elements()) {
        out.guarantee[l.id] = domain_.join(out.guarantee[l.id], written);
      }
    }
    return out;
  }

  Config guard_step(const Config& q, const Cond& cond) {
    ++transfer_count_;
    Config out = q;
    out.current = domain_.apply_interference(q.interference, domain_.enforce(q.current, cond));
    return out;
  }

  Config spawn_step(const Config& q, Label site) {
    ++transfer_count_;
    Config out = q;
    out.encountered.insert(site);
    return out;
  }

  /// Initial configuration of a thread created at `site`: it inherits the
  /// parent's interference plus what the parent may do after `site`.
  Config child_init(const Config& q, Label site) const {
    Store assume = q.interference;
    if (settings_.mutation != Mutation::SkipChildInitInterference) {
      assume = domain_.join(assume, q.guarantee.at(site.id));
    }
    Store current = domain_.apply_interference(assume, q.current);
    return make_config(std::move(current), bottom_guarantee(), std::move(assume));
  }

  /// Combines the configuration at a create site with the guarantee of the
  /// created thread. `pre` is the configuration before the spawn.
  Config glue_step(const Config& pre, Label site, const Guarantee& child) {
    Config out = spawn_step(pre, site);
    const Store& whole = child.at(kFin.id);
    if (settings_.mutation != Mutation::DropGlueInterference) {
      out.interference = domain_.join(out.interference, whole);
    }
    for (std::size_t k = 0; k < out.guarantee.size(); ++k) {
      const Label l{static_cast<std::uint32_t>(k)};
      out.guarantee[k] = domain_.join(out.guarantee[k], child[k]);
      // Threads created at sites already encountered run alongside the
      // child. `site` itself only joins L now.
      if (pre.encountered.contains(l)) {
        out.guarantee[k] = domain_.join(out.guarantee[k], whole);
      }
      if (l != kEnd && !is_bottom(child[k])) out.encountered.insert(l);
    }
    out.current = domain_.apply_interference(out.interference, out.current);
    return out;
  }

  // -------------------------------------------------------------------------
  // Lattice of configurations
  // -------------------------------------------------------------------------

  bool leq_config(const Config& a, const Config& b) const {
    if (!domain_.leq(a.current, b.current)) return false;
    if (!a.encountered.subset_of(b.encountered)) return false;
    if (!domain_.leq(a.interference, b.interference)) return false;
    for (std::size_t k = 0; k < a.guarantee.size(); ++k) {
      if (!domain_.leq(a.guarantee[k], b.guarantee[k])) return false;
    }
    return true;
  }

  bool equal_config(const Config& a, const Config& b) const {
    return leq_config(a, b) && leq_config(b, a);
  }

  Config join_config(const Config& a, const Config& b) const {
    Config out = a;
    out.encountered |= b.encountered;
    out.interference = domain_.join(a.interference, b.interference);
    out.guarantee = join_guarantee(a.guarantee, b.guarantee);
    out.current = domain_.apply_interference(out.interference,
                                             domain_.join(a.current, b.current));
    return out;
  }

  Config widen_config(const Config& a, const Config& b) const {
    Config out = a;
    out.encountered |= b.encountered;
    out.interference = domain_.widen(a.interference, b.interference);
    out.guarantee = widen_guarantee(a.guarantee, b.guarantee);
    out.current = domain_.apply_interference(out.interference,
                                             domain_.widen(a.current, b.current));
    return out;
  }

  bool leq_guarantee(const Guarantee& a, const Guarantee& b) const {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!domain_.leq(a[k], b[k])) return false;
    }
    return true;
  }

  Guarantee join_guarantee(const Guarantee& a, const Guarantee& b) const {
    Guarantee out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = domain_.join(a[k], b[k]);
    return out;
  }

  /// Pointwise widening; fin is then re-joined with every entry so it
  /// still dominates them.
  Guarantee widen_guarantee(const Guarantee& a, const Guarantee& b) const {
    Guarantee out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = domain_.widen(a[k], b[k]);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[kFin.id] = domain_.join(out[kFin.id], out[k]);
    }
    return out;
  }

  // -------------------------------------------------------------------------
  // Denotational evaluation
  // -------------------------------------------------------------------------

  /// Guarantee of `body` run from `q0`, iterated until stable. A body that
  /// creates no thread never reads K, so one round suffices.
  Guarantee guarantee_fixpoint(const Statement& body, const Config& q0) {
    std::size_t rounds = 0;
    return guarantee_fixpoint(body, q0, rounds, false);
  }

  Config denote(const Statement& stmt, Config q) {
    const LabelSet before = q.encountered;
    for (std::size_t k = 0; k < stmt.body.size(); ++k) {
      const Label next = k + 1 < stmt.body.size() ? stmt.body[k + 1].label : stmt.exit;
      q = denote_command(stmt.body[k], next, std::move(q));
    }
    if (stmt.exit == kEnd) record(kEnd, q.current);
    if (settings_.check_invariants && !before.subset_of(q.encountered)) {
      fail(stmt.entry(), "L shrank across a statement");
    }
    return q;
  }

  /// Whole-program analysis from <initial, {fin}, λl.⊥, ⊥>: stabilize the
  /// guarantee, then one more pass with it records per-label invariants.
  AnalysisResult<Store> run() {
    const Statement main = program_.statement();
    Config q0 = initial_configuration();
    std::size_t passes = 0;
    Guarantee stable = guarantee_fixpoint(main, q0, passes, true);

    per_label_.assign(program_.labels().size(), domain_.bottom());
    recording_ = true;
    q0.guarantee = stable;
    emit(StepKind::PassStart, program_.entry(), q0);
    Config final_config = denote(main, q0);
    recording_ = false;

    if (settings_.check_invariants && !leq_guarantee(final_config.guarantee, stable)) {
      fail(program_.entry(), "re-running the program with its stable guarantee grew it");
    }

    AnalysisResult<Store> result{std::move(final_config), std::move(stable),
                                 std::move(per_label_), passes, transfer_count_,
                                 max_rounds_, failures_};
    return result;
  }

 private:
  Config make_config(Store current, Guarantee guarantee, Store interference) const {
    Config q{std::move(current), LabelSet(program_.labels().size()), std::move(guarantee),
             std::move(interference)};
    q.encountered.insert(kFin);
    return q;
  }

  Guarantee guarantee_fixpoint(const Statement& body, const Config& q0, std::size_t& rounds,
                               bool top_level) {
    Config start = q0;
    if (!contains_create(body.body)) {
      rounds = 1;
      observe_rounds(1);
      if (top_level) emit(StepKind::PassStart, body.entry(), start);
      return denote(body, std::move(start)).guarantee;
    }
    Guarantee acc = q0.guarantee;
    for (rounds = 1; rounds <= settings_.max_iterations; ++rounds) {
      start.guarantee = acc;
      if (top_level) emit(StepKind::PassStart, body.entry(), start);
      Guarantee next = denote(body, start).guarantee;
      if (leq_guarantee(next, acc)) {
        observe_rounds(rounds);
        if (settings_.check_invariants) check_idempotent(body, q0, next);
        return next;
      }
      acc = rounds <= settings_.widening_delay ? join_guarantee(acc, next)
                                               : widen_guarantee(acc, next);
    }
    throw AnalysisError("guarantee fixpoint for the thread starting at " +
                        program_.label_name(body.entry()) + " did not stabilize within " +
                        std::to_string(settings_.max_iterations) + " rounds");
  }

  void check_idempotent(const Statement& body, const Config& q0, const Guarantee& k) {
    const bool was_recording = recording_;
    const bool was_checking = settings_.check_invariants;
    const std::size_t count = transfer_count_;
    settings_.check_invariants = false;
    Config again = q0;
    again.guarantee = k;
    auto silenced = std::exchange(trace_, nullptr);
    Guarantee rerun = denote(body, again).guarantee;
    trace_ = std::move(silenced);
    settings_.check_invariants = was_checking;
    recording_ = was_recording;
    transfer_count_ = count;
    if (!leq_guarantee(rerun, k)) {
      fail(body.entry(), "guarantee fixpoint is not idempotent");
    }
  }

  Config denote_command(const Command& cmd, Label next, Config q) {
    record(cmd.label, q.current);
    if (auto* a = std::get_if<Assign>(&cmd.node)) {
      Config out = assign_step(q, *a);
      emit(StepKind::Assign, cmd.label, out);
      check(out, cmd.label);
      return out;
    }
    if (auto* i = std::get_if<If>(&cmd.node)) {
      Config then_in = guard_step(q, *i->cond);
      emit(StepKind::Guard, cmd.label, then_in);
      Config then_out = denote({i->then_block, next}, std::move(then_in));
      Config else_out = guard_step(q, *negate(*i->cond));
      emit(StepKind::Guard, cmd.label, else_out);
      if (!i->else_block.empty()) else_out = denote({i->else_block, next}, std::move(else_out));
      Config out = join_config(then_out, else_out);
      check(out, cmd.label);
      return out;
    }
    if (auto* w = std::get_if<While>(&cmd.node)) return denote_while(cmd.label, *w, std::move(q));
    return denote_create(cmd.label, std::get<Create>(cmd.node), std::move(q));
  }

  Config denote_while(Label label, const While& w, const Config& entry) {
    const Statement body{w.body, label};
    Config x = entry;
    std::size_t rounds = 1;
    for (;; ++rounds) {
      if (rounds > settings_.max_iterations) {
        throw AnalysisError("loop at " + program_.label_name(label) +
                            " did not stabilize within " +
                            std::to_string(settings_.max_iterations) + " rounds");
      }
      record(label, x.current);
      Config next = join_config(denote(body, guard_step(x, *w.cond)), x);
      check(next, label);
      if (leq_config(next, x)) {
        x = std::move(next);
        break;
      }
      x = rounds <= settings_.widening_delay ? join_config(x, next) : widen_config(x, next);
      check(x, label);
    }
    observe_rounds(rounds);
    if (settings_.narrowing) {
      Config down = join_config(entry, denote(body, guard_step(x, *w.cond)));
      if (leq_config(down, x)) x = std::move(down);
    }
    record(label, x.current);
    Config out = guard_step(x, *negate(*w.cond));
    emit(StepKind::Guard, label, out);
    check(out, label);
    return out;
  }

  Config denote_create(Label site, const Create& c, const Config& q) {
    Config child = child_init(q, site);
    emit(StepKind::ChildInit, site, child);
    check(child, site);
    std::size_t rounds = 0;
    Guarantee child_guarantee =
        guarantee_fixpoint({c.body, kEnd}, child, rounds, false);
    Config out = glue_step(q, site, child_guarantee);
    emit(StepKind::Glue, site, out);
    check(out, site);
    return out;
  }

  void record(Label label, const Store& c) {
    if (recording_) per_label_[label.id] = domain_.join(per_label_[label.id], c);
  }

  void emit(StepKind kind, Label label, const Config& q) {
    if (trace_) trace_(TraceEvent<Store>{kind, label, q});
  }

  void observe_rounds(std::size_t rounds) { max_rounds_ = std::max(max_rounds_, rounds); }

  void fail(Label label, const std::string& what) {
    failures_.push_back(program_.label_name(label) + ": " + what);
  }

  void check(const Config& q, Label label) {
    if (!settings_.check_invariants) return;
    if (!q.encountered.contains(kFin)) fail(label, "fin missing from L");
    if (!domain_.equal(domain_.apply_interference(q.interference, q.current), q.current)) {
      fail(label, "C is not closed under I");
    }
    for (std::size_t k = 0; k < q.guarantee.size(); ++k) {
      if (!domain_.leq(q.guarantee[k], q.guarantee[kFin.id])) {
        fail(label, "K(" + program_.label_name(Label{static_cast<std::uint32_t>(k)}) +
                        ") exceeds K(fin)");
      }
    }
  }

  const Program& program_;
  D domain_;
  AnalysisSettings settings_;
  TraceFn trace_;
  bool recording_ = false;
  std::vector<Store> per_label_;
  std::size_t transfer_count_ = 0;
  std::size_t max_rounds_ = 0;
  std::vector<std::string> failures_;
};

template <AbstractDomain D>
AnalysisResult<typename D::Store> analyze_program(const Program& program, D domain,
                                                  const AnalysisSettings& settings = {}) {
  return Analyzer<D>(program, std::move(domain), settings).run();
}

}  // namespace tma
