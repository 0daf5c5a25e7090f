#pragma once

#include "tma/concrete/semantics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tma {

struct ExploreBounds {
  /// Maximum number of distinct states kept.
  std::size_t max_steps = 10'000;
  /// Maximum size of a state's thread domain, terminated threads included.
  std::size_t max_threads = 4;
  /// Values `?` ranges over in expressions.
  std::vector<Integer> nondet_values{-1, 0, 1, 3};
};

struct Transition {
  std::size_t source;
  std::size_t target;
  bool schedule;
};

struct ExplorationResult {
  /// Reachable states in breadth-first discovery order.
  std::vector<State> states;
  /// Breadth-first tree: the state each one was first reached from.
  std::vector<std::optional<std::size_t>> parent;
  std::vector<Transition> transitions;
  /// label -> store -> first state (smallest index) where some thread sits
  /// at the label with that store.
  std::map<Label, std::map<ConcreteStore, std::size_t>> stores_at;

  bool hit_step_bound = false;
  bool hit_thread_bound = false;
  bool hit_nondet_bound = false;

  bool truncated() const { return hit_step_bound || hit_thread_bound || hit_nondet_bound; }

  /// Shortest known path from an initial state to `index`.
  std::vector<std::size_t> trace_to(std::size_t index) const {
    std::vector<std::size_t> path{index};
    while (auto p = parent.at(path.back())) path.push_back(*p);
    std::reverse(path.begin(), path.end());
    return path;
  }
};

namespace detail {

inline std::string state_key(const State& s) {
  std::string key = std::to_string(s.current);
  key += '|';
  for (auto l : s.control) key += std::to_string(l.id) + ',';
  key += '|';
  for (std::size_t v = 0; v < s.store.size(); ++v) {
    key += s.store.values[v].str();
    key += s.store.initialized[v] ? '!' : ',';
  }
  key += '|';
  for (const auto& b : s.genealogy) {
    key += std::to_string(b.parent) + ':' + std::to_string(b.site.id) + ':' +
           std::to_string(b.child) + ',';
  }
  return key;
}

}  // namespace detail

/// Breadth-first closure of the initial states under basic steps and
/// schedule transitions, cut at `bounds`. Deterministic for fixed inputs.
inline ExplorationResult explore(const Program& program,
                                 const std::vector<ConcreteStore>& initial_stores,
                                 const ExploreBounds& bounds) {
  const ControlTable table(program);
  ExplorationResult result;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::size_t> queue;

  auto add = [&](State s, std::optional<std::size_t> from) -> std::optional<std::size_t> {
    auto key = detail::state_key(s);
    if (auto it = index.find(key); it != index.end()) return it->second;
    if (result.states.size() >= bounds.max_steps) {
      result.hit_step_bound = true;
      return std::nullopt;
    }
    const std::size_t id = result.states.size();
    for (const auto& label : s.control) {
      result.stores_at[label].try_emplace(s.store, id);
    }
    index.emplace(std::move(key), id);
    result.states.push_back(std::move(s));
    result.parent.push_back(from);
    queue.push_back(id);
    return id;
  };

  for (const auto& store : initial_stores) {
    add(initial_state(program.entry(), store), std::nullopt);
  }

  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    // Copied: `add` may reallocate `states`.
    const State s = result.states[id];
    auto succ = step(table, s, bounds.nondet_values);
    result.hit_nondet_bound |= succ.enumerated_nondet;
    for (auto& next : succ.states) {
      if (next.control.size() > bounds.max_threads) {
        result.hit_thread_bound = true;
        continue;
      }
      if (auto target = add(std::move(next), id)) {
        result.transitions.push_back({id, *target, false});
      }
    }
    for (auto& next : schedule_successors(s)) {
      if (auto target = add(std::move(next), id)) {
        result.transitions.push_back({id, *target, true});
      }
    }
  }
  return result;
}

/// Every combination of `values` over `var_count` variables, in
/// lexicographic order, at most `limit` of them.
inline std::vector<ConcreteStore> enumerate_stores(std::size_t var_count,
                                                   const std::vector<Integer>& values,
                                                   std::size_t limit) {
  std::vector<ConcreteStore> out;
  if (values.empty()) return out;
  std::vector<std::size_t> digits(var_count, 0);
  while (out.size() < limit) {
    std::vector<Integer> vals;
    for (auto d : digits) vals.push_back(values[d]);
    out.emplace_back(std::move(vals));
    std::size_t k = var_count;
    while (k > 0) {
      --k;
      if (++digits[k] < values.size()) break;
      digits[k] = 0;
      if (k == 0) return out;
    }
    if (var_count == 0) break;
  }
  return out;
}

namespace detail {

inline nlohmann::json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

inline nlohmann::json store_json(const ConcreteStore& m, const VarTable& vars) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t v = 0; v < m.size(); ++v) {
    out[vars.name(static_cast<VarId>(v))] = integer_json(m.values[v]);
  }
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const State& s, const Program& program) {
  nlohmann::json labels = nlohmann::json::array();
  for (auto l : s.control) labels.push_back(program.label_name(l));
  nlohmann::json genealogy = nlohmann::json::array();
  for (const auto& b : s.genealogy) {
    genealogy.push_back({b.parent, program.label_name(b.site), b.child});
  }
  nlohmann::json initialized = nlohmann::json::array();
  for (std::size_t v = 0; v < s.store.size(); ++v) {
    if (s.store.initialized[v]) {
      initialized.push_back(program.vars().name(static_cast<VarId>(v)));
    }
  }
  return {{"thread", s.current},
          {"labels", labels},
          {"store", detail::store_json(s.store, program.vars())},
          {"initialized", initialized},
          {"genealogy", genealogy}};
}

inline nlohmann::json to_json(const ExplorationResult& r, const Program& program) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : r.states) states.push_back(to_json(s, program));
  nlohmann::json per_label = nlohmann::json::object();
  for (const auto& [label, stores] : r.stores_at) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [m, first] : stores) {
      list.push_back(detail::store_json(m, program.vars()));
    }
    per_label[program.label_name(label)] = list;
  }
  return {{"states", states},
          {"transitions", r.transitions.size()},
          {"storesAt", per_label},
          {"truncated", r.truncated()}};
}

}  // namespace tma
