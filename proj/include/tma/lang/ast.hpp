#pragma once

#include "tma/integer.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace tma {

// ---------------------------------------------------------------------------
// Labels and variables
// ---------------------------------------------------------------------------

/// Program point. Ids are dense; 0 and 1 are the reserved sentinels.
struct Label {
  std::uint32_t id = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

/// Return label of a whole thread. Never attached to a command.
inline constexpr Label kEnd{0};
/// Index of the global guarantee. Never attached to a command.
inline constexpr Label kFin{1};

inline constexpr std::string_view kEndName = "end";
inline constexpr std::string_view kFinName = "fin";

class LabelTable {
 public:
  LabelTable() : names_{std::string(kEndName), std::string(kFinName)} {}

  Label add(std::string name) {
    if (index_.contains(name) || name == kEndName || name == kFinName) {
      throw std::invalid_argument("duplicate label '" + name + "'");
    }
    Label label{static_cast<std::uint32_t>(names_.size())};
    index_.emplace(name, label.id);
    names_.push_back(std::move(name));
    return label;
  }

  std::optional<Label> find(std::string_view name) const {
    if (name == kEndName) return kEnd;
    if (name == kFinName) return kFin;
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return Label{it->second};
  }

  const std::string& name(Label label) const { return names_.at(label.id); }

  /// Number of label ids including the two sentinels.
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

using VarId = std::uint32_t;

class VarTable {
 public:
  VarId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    auto id = static_cast<VarId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<VarId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(VarId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

// ---------------------------------------------------------------------------
// Expressions and conditions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { Add, Sub, Mul };

struct Const {
  Integer value;
};
struct VarRef {
  VarId var;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
/// `?`: any integer.
struct NondetExpr {};

struct Expr {
  std::variant<Const, VarRef, Binary, NondetExpr> node;
};

inline ExprPtr make_const(Integer value) {
  return std::make_shared<const Expr>(Expr{Const{std::move(value)}});
}
inline ExprPtr make_var(VarId var) {
  return std::make_shared<const Expr>(Expr{VarRef{var}});
}
inline ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(
      Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}
inline ExprPtr make_nondet() {
  return std::make_shared<const Expr>(Expr{NondetExpr{}});
}

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

enum class CompareOp { Lt, Le, Eq, Ne, Ge, Gt };

struct Compare {
  CompareOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Not {
  CondPtr inner;
};
struct And {
  CondPtr lhs;
  CondPtr rhs;
};
struct Or {
  CondPtr lhs;
  CondPtr rhs;
};
/// `?` as a condition: may be true or false.
struct NondetCond {};

struct Cond {
  std::variant<Compare, Not, And, Or, NondetCond> node;
};

inline CondPtr make_compare(CompareOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Cond>(
      Cond{Compare{op, std::move(lhs), std::move(rhs)}});
}
inline CondPtr make_not(CondPtr inner) {
  return std::make_shared<const Cond>(Cond{Not{std::move(inner)}});
}
inline CondPtr make_and(CondPtr lhs, CondPtr rhs) {
  return std::make_shared<const Cond>(Cond{And{std::move(lhs), std::move(rhs)}});
}
inline CondPtr make_or(CondPtr lhs, CondPtr rhs) {
  return std::make_shared<const Cond>(Cond{Or{std::move(lhs), std::move(rhs)}});
}
inline CondPtr make_nondet_cond() {
  return std::make_shared<const Cond>(Cond{NondetCond{}});
}

inline CompareOp negate(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Ge;
    case CompareOp::Le: return CompareOp::Gt;
    case CompareOp::Eq: return CompareOp::Ne;
    case CompareOp::Ne: return CompareOp::Eq;
    case CompareOp::Ge: return CompareOp::Lt;
    case CompareOp::Gt: return CompareOp::Le;
  }
  return op;
}

inline CondPtr push_negations(const Cond& cond);

/// Negation with `Not` pushed down to the comparisons. The result never
/// contains a `Not` node.
inline CondPtr negate(const Cond& cond) {
  struct Visitor {
    CondPtr operator()(const Compare& c) const {
      return make_compare(negate(c.op), c.lhs, c.rhs);
    }
    CondPtr operator()(const Not& n) const { return push_negations(*n.inner); }
    CondPtr operator()(const And& a) const {
      return make_or(negate(*a.lhs), negate(*a.rhs));
    }
    CondPtr operator()(const Or& o) const {
      return make_and(negate(*o.lhs), negate(*o.rhs));
    }
    CondPtr operator()(const NondetCond&) const { return make_nondet_cond(); }
  };
  return std::visit(Visitor{}, cond.node);
}

/// Same condition with every `Not` eliminated.
inline CondPtr push_negations(const Cond& cond) {
  struct Visitor {
    CondPtr operator()(const Compare& c) const {
      return make_compare(c.op, c.lhs, c.rhs);
    }
    CondPtr operator()(const Not& n) const { return negate(*n.inner); }
    CondPtr operator()(const And& a) const {
      return make_and(push_negations(*a.lhs), push_negations(*a.rhs));
    }
    CondPtr operator()(const Or& o) const {
      return make_or(push_negations(*o.lhs), push_negations(*o.rhs));
    }
    CondPtr operator()(const NondetCond&) const { return make_nondet_cond(); }
  };
  return std::visit(Visitor{}, cond.node);
}

inline bool operator==(const Expr& a, const Expr& b);
inline bool operator==(const Cond& a, const Cond& b);

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* c = std::get_if<Const>(&a.node)) {
    return c->value == std::get<Const>(b.node).value;
  }
  if (auto* v = std::get_if<VarRef>(&a.node)) {
    return v->var == std::get<VarRef>(b.node).var;
  }
  if (auto* x = std::get_if<Binary>(&a.node)) {
    const auto& y = std::get<Binary>(b.node);
    return x->op == y.op && *x->lhs == *y.lhs && *x->rhs == *y.rhs;
  }
  return true;
}

inline bool operator==(const Cond& a, const Cond& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* c = std::get_if<Compare>(&a.node)) {
    const auto& d = std::get<Compare>(b.node);
    return c->op == d.op && *c->lhs == *d.lhs && *c->rhs == *d.rhs;
  }
  if (auto* n = std::get_if<Not>(&a.node)) {
    return *n->inner == *std::get<Not>(b.node).inner;
  }
  if (auto* x = std::get_if<And>(&a.node)) {
    const auto& y = std::get<And>(b.node);
    return *x->lhs == *y.lhs && *x->rhs == *y.rhs;
  }
  if (auto* x = std::get_if<Or>(&a.node)) {
    const auto& y = std::get<Or>(b.node);
    return *x->lhs == *y.lhs && *x->rhs == *y.rhs;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Command;
/// A sequence. It has no label of its own: its label is the first command's.
using Block = std::vector<Command>;

struct Assign {
  VarId var;
  ExprPtr value;
};
struct If {
  CondPtr cond;
  Block then_block;
  Block else_block;  // empty when the source has no else branch
};
struct While {
  CondPtr cond;
  Block body;
};
struct Create {
  Block body;
};

struct Command {
  Label label;
  std::variant<Assign, If, While, Create> node;
};

inline bool operator==(const Command& a, const Command& b);

inline bool operator==(const Command& a, const Command& b) {
  if (a.label != b.label || a.node.index() != b.node.index()) return false;
  if (auto* x = std::get_if<Assign>(&a.node)) {
    const auto& y = std::get<Assign>(b.node);
    return x->var == y.var && *x->value == *y.value;
  }
  if (auto* x = std::get_if<If>(&a.node)) {
    const auto& y = std::get<If>(b.node);
    return *x->cond == *y.cond && x->then_block == y.then_block &&
           x->else_block == y.else_block;
  }
  if (auto* x = std::get_if<While>(&a.node)) {
    const auto& y = std::get<While>(b.node);
    return *x->cond == *y.cond && x->body == y.body;
  }
  return std::get<Create>(a.node).body == std::get<Create>(b.node).body;
}

/// A command sequence together with the label it returns to.
struct Statement {
  std::span<const Command> body;
  Label exit;

  Label entry() const { return body.empty() ? exit : body.front().label; }
};

/// A parsed program: the main thread's statement, returning to `end`.
class Program {
 public:
  Program(Block body, VarTable vars, LabelTable labels)
      : body_(std::move(body)), vars_(std::move(vars)), labels_(std::move(labels)) {}

  const Block& body() const { return body_; }
  Statement statement() const { return {body_, kEnd}; }
  Label entry() const { return statement().entry(); }
  const VarTable& vars() const { return vars_; }
  const LabelTable& labels() const { return labels_; }
  const std::string& label_name(Label label) const { return labels_.name(label); }

 private:
  Block body_;
  VarTable vars_;
  LabelTable labels_;
};

using LabelCollection = std::set<Label>;

namespace detail {

inline void collect_labels(std::span<const Command> block, LabelCollection& out) {
  for (const auto& cmd : block) {
    out.insert(cmd.label);
    if (auto* i = std::get_if<If>(&cmd.node)) {
      collect_labels(i->then_block, out);
      collect_labels(i->else_block, out);
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      collect_labels(w->body, out);
    } else if (auto* c = std::get_if<Create>(&cmd.node)) {
      collect_labels(c->body, out);
      out.insert(kEnd);
    }
  }
}

inline void collect_subthread_labels(std::span<const Command> block,
                                     LabelCollection& out) {
  for (const auto& cmd : block) {
    if (auto* i = std::get_if<If>(&cmd.node)) {
      collect_subthread_labels(i->then_block, out);
      collect_subthread_labels(i->else_block, out);
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      collect_subthread_labels(w->body, out);
    } else if (auto* c = std::get_if<Create>(&cmd.node)) {
      collect_labels(c->body, out);
      out.insert(kEnd);
    }
  }
}

}  // namespace detail

/// All labels occurring in the statement, its return label included.
inline LabelCollection labels_of(const Statement& stmt) {
  LabelCollection out{stmt.exit};
  detail::collect_labels(stmt.body, out);
  return out;
}

/// Labels that belong to bodies of `create` subcommands.
inline LabelCollection subthread_labels_of(const Statement& stmt) {
  LabelCollection out;
  detail::collect_subthread_labels(stmt.body, out);
  return out;
}

inline bool contains_create(std::span<const Command> block) {
  return std::ranges::any_of(block, [](const Command& cmd) {
    if (std::holds_alternative<Create>(cmd.node)) return true;
    if (auto* i = std::get_if<If>(&cmd.node)) {
      return contains_create(i->then_block) || contains_create(i->else_block);
    }
    if (auto* w = std::get_if<While>(&cmd.node)) return contains_create(w->body);
    return false;
  });
}

/// Nesting of `while` loops and of `create`s whose body itself creates
/// threads. Only those need a fixpoint computation.
inline std::size_t nesting_depth(std::span<const Command> block) {
  std::size_t depth = 0;
  for (const auto& cmd : block) {
    std::size_t d = 0;
    if (auto* i = std::get_if<If>(&cmd.node)) {
      d = std::max(nesting_depth(i->then_block), nesting_depth(i->else_block));
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      d = 1 + nesting_depth(w->body);
    } else if (auto* c = std::get_if<Create>(&cmd.node)) {
      d = nesting_depth(c->body) + (contains_create(c->body) ? 1 : 0);
    }
    depth = std::max(depth, d);
  }
  return depth;
}

inline std::size_t nesting_depth(const Program& program) {
  return nesting_depth(program.body());
}

/// Number of commands, sequences not counted.
inline std::size_t command_count(std::span<const Command> block) {
  std::size_t n = 0;
  for (const auto& cmd : block) {
    ++n;
    if (auto* i = std::get_if<If>(&cmd.node)) {
      n += command_count(i->then_block) + command_count(i->else_block);
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      n += command_count(w->body);
    } else if (auto* c = std::get_if<Create>(&cmd.node)) {
      n += command_count(c->body);
    }
  }
  return n;
}

}  // namespace tma
