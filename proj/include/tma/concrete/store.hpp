#pragma once

#include "tma/integer.hpp"
#include "tma/lang/ast.hpp"

#include <span>
#include <vector>

namespace tma {

/// Concrete store over the program's variables. Besides the integer value
/// it tracks which variables have been written, for the initialized-
/// variables analysis.
struct ConcreteStore {
  std::vector<Integer> values;
  std::vector<bool> initialized;

  ConcreteStore() = default;
  explicit ConcreteStore(std::vector<Integer> vals)
      : values(std::move(vals)), initialized(values.size(), false) {}

  std::size_t size() const { return values.size(); }

  void write(VarId var, Integer value) {
    values.at(var) = std::move(value);
    initialized.at(var) = true;
  }

  friend bool operator==(const ConcreteStore&, const ConcreteStore&) = default;
  friend bool operator<(const ConcreteStore& a, const ConcreteStore& b) {
    if (a.values != b.values) {
      return std::lexicographical_compare(a.values.begin(), a.values.end(),
                                          b.values.begin(), b.values.end());
    }
    return a.initialized < b.initialized;
  }
};

/// Result of evaluating with `?` enumerated over a finite value set.
struct Evaluation {
  std::vector<Integer> values;
  bool enumerated_nondet = false;
};

inline Evaluation evaluate(const ConcreteStore& m, const Expr& e,
                           std::span<const Integer> nondet) {
  if (auto* c = std::get_if<Const>(&e.node)) return {{c->value}, false};
  if (auto* v = std::get_if<VarRef>(&e.node)) return {{m.values.at(v->var)}, false};
  if (std::holds_alternative<NondetExpr>(e.node)) {
    return {{nondet.begin(), nondet.end()}, true};
  }
  const auto& b = std::get<Binary>(e.node);
  Evaluation lhs = evaluate(m, *b.lhs, nondet);
  Evaluation rhs = evaluate(m, *b.rhs, nondet);
  Evaluation out{{}, lhs.enumerated_nondet || rhs.enumerated_nondet};
  for (const auto& x : lhs.values) {
    for (const auto& y : rhs.values) {
      Integer r = b.op == BinaryOp::Add ? Integer(x + y)
                  : b.op == BinaryOp::Sub ? Integer(x - y)
                                          : Integer(x * y);
      if (std::find(out.values.begin(), out.values.end(), r) == out.values.end()) {
        out.values.push_back(std::move(r));
      }
    }
  }
  return out;
}

inline bool compare(CompareOp op, const Integer& x, const Integer& y) {
  switch (op) {
    case CompareOp::Lt: return x < y;
    case CompareOp::Le: return x <= y;
    case CompareOp::Eq: return x == y;
    case CompareOp::Ne: return x != y;
    case CompareOp::Ge: return x >= y;
    case CompareOp::Gt: return x > y;
  }
  return false;
}

/// Which truth values a condition can take in a store.
struct Outcomes {
  bool can_be_true = false;
  bool can_be_false = false;
};

inline Outcomes outcomes(const ConcreteStore& m, const Cond& c,
                         std::span<const Integer> nondet) {
  if (auto* cmp = std::get_if<Compare>(&c.node)) {
    Outcomes out;
    auto lhs = evaluate(m, *cmp->lhs, nondet);
    auto rhs = evaluate(m, *cmp->rhs, nondet);
    for (const auto& x : lhs.values) {
      for (const auto& y : rhs.values) {
        (compare(cmp->op, x, y) ? out.can_be_true : out.can_be_false) = true;
      }
    }
    return out;
  }
  if (auto* n = std::get_if<Not>(&c.node)) {
    auto inner = outcomes(m, *n->inner, nondet);
    return {inner.can_be_false, inner.can_be_true};
  }
  if (auto* a = std::get_if<And>(&c.node)) {
    auto l = outcomes(m, *a->lhs, nondet);
    auto r = outcomes(m, *a->rhs, nondet);
    return {l.can_be_true && r.can_be_true, l.can_be_false || r.can_be_false};
  }
  if (auto* o = std::get_if<Or>(&c.node)) {
    auto l = outcomes(m, *o->lhs, nondet);
    auto r = outcomes(m, *o->rhs, nondet);
    return {l.can_be_true || r.can_be_true, l.can_be_false && r.can_be_false};
  }
  return {true, true};
}

/// `bool(m, cond)` for conditions without `?`.
inline bool holds(const ConcreteStore& m, const Cond& c) {
  return outcomes(m, c, {}).can_be_true;
}

}  // namespace tma
