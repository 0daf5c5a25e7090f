#pragma once

#include "tma/lang/ast.hpp"

#include <sstream>
#include <string>

namespace tma {

namespace detail {

inline bool is_additive(const Expr& e) {
  auto* b = std::get_if<Binary>(&e.node);
  return b && b->op != BinaryOp::Mul;
}

inline void print_expr(std::ostream& os, const Expr& e, const VarTable& vars) {
  if (auto* c = std::get_if<Const>(&e.node)) {
    os << c->value;
  } else if (auto* v = std::get_if<VarRef>(&e.node)) {
    os << vars.name(v->var);
  } else if (std::holds_alternative<NondetExpr>(e.node)) {
    os << '?';
  } else {
    const auto& b = std::get<Binary>(e.node);
    bool wrap_lhs = b.op == BinaryOp::Mul && is_additive(*b.lhs);
    bool wrap_rhs = b.op == BinaryOp::Mul
                        ? std::holds_alternative<Binary>(b.rhs->node)
                        : is_additive(*b.rhs);
    if (wrap_lhs) os << '(';
    print_expr(os, *b.lhs, vars);
    if (wrap_lhs) os << ')';
    os << (b.op == BinaryOp::Add ? " + " : b.op == BinaryOp::Sub ? " - " : " * ");
    if (wrap_rhs) os << '(';
    print_expr(os, *b.rhs, vars);
    if (wrap_rhs) os << ')';
  }
}

inline const char* compare_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Gt: return ">";
  }
  return "?";
}

inline void print_cond(std::ostream& os, const Cond& c, const VarTable& vars) {
  auto wrapped = [&](const Cond& inner, bool wrap) {
    if (wrap) os << '(';
    print_cond(os, inner, vars);
    if (wrap) os << ')';
  };
  if (auto* cmp = std::get_if<Compare>(&c.node)) {
    print_expr(os, *cmp->lhs, vars);
    os << ' ' << compare_symbol(cmp->op) << ' ';
    print_expr(os, *cmp->rhs, vars);
  } else if (auto* n = std::get_if<Not>(&c.node)) {
    os << '!';
    wrapped(*n->inner, !std::holds_alternative<NondetCond>(n->inner->node) &&
                           !std::holds_alternative<Not>(n->inner->node));
  } else if (auto* a = std::get_if<And>(&c.node)) {
    wrapped(*a->lhs, std::holds_alternative<Or>(a->lhs->node));
    os << " && ";
    wrapped(*a->rhs, std::holds_alternative<Or>(a->rhs->node) ||
                         std::holds_alternative<And>(a->rhs->node));
  } else if (auto* o = std::get_if<Or>(&c.node)) {
    print_cond(os, *o->lhs, vars);
    os << " || ";
    wrapped(*o->rhs, std::holds_alternative<Or>(o->rhs->node));
  } else {
    os << '?';
  }
}

inline void print_block(std::ostream& os, std::span<const Command> block,
                        const Program& program, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (std::size_t k = 0; k < block.size(); ++k) {
    const Command& cmd = block[k];
    os << pad << '@' << program.label_name(cmd.label) << ": ";
    if (auto* a = std::get_if<Assign>(&cmd.node)) {
      os << program.vars().name(a->var) << " := ";
      print_expr(os, *a->value, program.vars());
    } else if (auto* i = std::get_if<If>(&cmd.node)) {
      os << "if (";
      print_cond(os, *i->cond, program.vars());
      os << ") {\n";
      print_block(os, i->then_block, program, indent + 1);
      os << pad << '}';
      if (!i->else_block.empty()) {
        os << " else {\n";
        print_block(os, i->else_block, program, indent + 1);
        os << pad << '}';
      }
    } else if (auto* w = std::get_if<While>(&cmd.node)) {
      os << "while (";
      print_cond(os, *w->cond, program.vars());
      os << ") {\n";
      print_block(os, w->body, program, indent + 1);
      os << pad << '}';
    } else {
      os << "create {\n";
      print_block(os, std::get<Create>(cmd.node).body, program, indent + 1);
      os << pad << '}';
    }
    os << (k + 1 < block.size() ? ";\n" : "\n");
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e, const VarTable& vars) {
  std::ostringstream os;
  detail::print_expr(os, e, vars);
  return os.str();
}

inline std::string to_string(const Cond& c, const VarTable& vars) {
  std::ostringstream os;
  detail::print_cond(os, c, vars);
  return os.str();
}

/// Source text that parses back to the same program, labels included.
inline std::string pretty_print(const Program& program) {
  std::ostringstream os;
  detail::print_block(os, program.body(), program, 0);
  return os.str();
}

}  // namespace tma
