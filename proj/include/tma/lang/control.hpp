#pragma once

#include "tma/lang/ast.hpp"

#include <variant>
#include <vector>

namespace tma {

// Basic statements: the atomic steps `if`, `while` and `create` decompose
// into. They never appear in source text.

struct AssignStep {
  Label from;
  VarId var;
  ExprPtr value;
  Label to;
};

struct GuardStep {
  Label from;
  CondPtr cond;
  Label to;
};

/// `rcreate`: the executing thread moves from `from` to `to` and a fresh
/// child starts at `child`.
struct SpawnStep {
  Label from;
  Label child;
  Label to;
};

using BasicStatement = std::variant<AssignStep, GuardStep, SpawnStep>;

inline Label source_of(const BasicStatement& b) {
  return std::visit([](const auto& s) { return s.from; }, b);
}

inline Label target_of(const BasicStatement& b) {
  return std::visit([](const auto& s) { return s.to; }, b);
}

namespace detail {

inline void decompose_block(std::span<const Command> block, Label exit,
                            std::vector<BasicStatement>& out) {
  for (std::size_t k = 0; k < block.size(); ++k) {
    const Command& cmd = block[k];
    Label next = k + 1 < block.size() ? block[k + 1].label : exit;
    if (auto* a = std::get_if<Assign>(&cmd.node)) {
      out.push_back(AssignStep{cmd.label, a->var, a->value, next});
    } else if (auto* i = std::get_if<If>(&cmd.node)) {
      out.push_back(GuardStep{cmd.label, i->cond, i->then_block.front().label});
      Label else_entry = i->else_block.empty() ? next : i->else_block.front().label;
      out.push_back(GuardStep{cmd.label, negate(*i->cond), else_entry});
      decompose_block(i->then_block, next, out);
      decompose_block(i->else_block, next, out);
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      out.push_back(GuardStep{cmd.label, w->cond, w->body.front().label});
      out.push_back(GuardStep{cmd.label, negate(*w->cond), next});
      decompose_block(w->body, cmd.label, out);
    } else {
      const auto& c = std::get<Create>(cmd.node);
      out.push_back(SpawnStep{cmd.label, c.body.front().label, next});
      decompose_block(c.body, kEnd, out);
    }
  }
}

}  // namespace detail

/// Every basic statement generated by `stmt`, in pre-order.
inline std::vector<BasicStatement> decompose(const Statement& stmt) {
  std::vector<BasicStatement> out;
  detail::decompose_block(stmt.body, stmt.exit, out);
  return out;
}

/// Basic statements indexed by their source label.
class ControlTable {
 public:
  ControlTable(const Statement& stmt, std::size_t label_count)
      : outgoing_(label_count) {
    for (auto& b : decompose(stmt)) {
      outgoing_.at(source_of(b).id).push_back(std::move(b));
    }
  }

  explicit ControlTable(const Program& program)
      : ControlTable(program.statement(), program.labels().size()) {}

  const std::vector<BasicStatement>& at(Label label) const {
    return outgoing_.at(label.id);
  }

  std::size_t label_count() const { return outgoing_.size(); }

 private:
  std::vector<std::vector<BasicStatement>> outgoing_;
};

}  // namespace tma
