#pragma once

#include "tma/concrete/store.hpp"
#include "tma/lang/control.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace tma {

using ThreadId = std::uint32_t;
inline constexpr ThreadId kMainThread = 0;

/// One genealogy letter: `parent` created `child` while sitting at `site`.
struct Birth {
  ThreadId parent;
  Label site;
  ThreadId child;

  friend bool operator==(const Birth&, const Birth&) = default;
};

using Genealogy = std::vector<Birth>;

/// A node of the interleaving transition system.
///
/// Thread ids are allocated densely in creation order (main is 0, the k-th
/// created thread is k), so `control` is indexed by thread id and its domain
/// is exactly main plus the children recorded in the genealogy. Dense
/// allocation is the canonical order-preserving renaming of ids, so two
/// states that differ only by thread names compare equal.
struct State {
  ThreadId current = kMainThread;
  std::vector<Label> control;
  ConcreteStore store;
  Genealogy genealogy;

  Label label() const { return control.at(current); }

  friend bool operator==(const State&, const State&) = default;
};

inline State initial_state(Label entry, ConcreteStore store) {
  return State{kMainThread, {entry}, std::move(store), {}};
}

/// Checks the structural invariants of a state.
inline bool is_valid(const State& s) {
  if (s.current >= s.control.size()) return false;
  if (s.control.size() != s.genealogy.size() + 1) return false;
  std::set<ThreadId> children;
  for (const auto& b : s.genealogy) {
    if (b.child == kMainThread || !children.insert(b.child).second) return false;
    if (b.child >= s.control.size()) return false;
  }
  return true;
}

/// Least set containing `seed` and closed under the parent-to-child letters
/// of `h`, scanned left to right.
inline std::set<ThreadId> descendants(const Genealogy& h, std::set<ThreadId> seed) {
  for (const auto& b : h) {
    if (seed.contains(b.parent)) seed.insert(b.child);
  }
  return seed;
}

/// Whether `s` is a state from which the thread current in `s0`, or one of
/// the threads it created after `s0`, executes.
inline bool is_after(const State& s0, const State& s) {
  const auto& h0 = s0.genealogy;
  const auto& h = s.genealogy;
  if (h.size() < h0.size() || !std::equal(h0.begin(), h0.end(), h.begin())) {
    return false;
  }
  Genealogy suffix(h.begin() + static_cast<std::ptrdiff_t>(h0.size()), h.end());
  return descendants(suffix, {s0.current}).contains(s.current);
}

struct Successors {
  std::vector<State> states;
  bool enumerated_nondet = false;
};

/// Non-schedule successors of `s`: the basic statements available at the
/// current thread's label. A stuck or terminated thread yields nothing.
inline Successors step(const ControlTable& table, const State& s,
                       std::span<const Integer> nondet) {
  Successors out;
  const ThreadId self = s.current;
  for (const auto& basic : table.at(s.label())) {
    if (auto* a = std::get_if<AssignStep>(&basic)) {
      auto eval = evaluate(s.store, *a->value, nondet);
      out.enumerated_nondet |= eval.enumerated_nondet;
      for (auto& v : eval.values) {
        State next = s;
        next.control[self] = a->to;
        next.store.write(a->var, std::move(v));
        out.states.push_back(std::move(next));
      }
    } else if (auto* g = std::get_if<GuardStep>(&basic)) {
      if (outcomes(s.store, *g->cond, nondet).can_be_true) {
        State next = s;
        next.control[self] = g->to;
        out.states.push_back(std::move(next));
      }
    } else {
      const auto& sp = std::get<SpawnStep>(basic);
      State next = s;
      auto child = static_cast<ThreadId>(next.control.size());
      next.control[self] = sp.to;
      next.control.push_back(sp.child);
      next.genealogy.push_back(Birth{self, sp.from, child});
      out.states.push_back(std::move(next));
    }
  }
  return out;
}

inline Successors step(const Program& program, const State& s,
                       std::span<const Integer> nondet) {
  return step(ControlTable(program), s, nondet);
}

/// One state per other existing thread, identical except for `current`.
inline std::vector<State> schedule_successors(const State& s) {
  std::vector<State> out;
  for (ThreadId j = 0; j < s.control.size(); ++j) {
    if (j == s.current) continue;
    State next = s;
    next.current = j;
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace tma
