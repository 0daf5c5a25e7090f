#pragma once

#include "tma/lang/ast.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tma {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : std::runtime_error(std::to_string(pos.line) + ":" +
                           std::to_string(pos.column) + ": " + message),
        pos_(pos) {}

  SourcePos position() const { return pos_; }

 private:
  SourcePos pos_;
};

namespace detail {

enum class Tok {
  Ident, Number, Assign, Semi, LBrace, RBrace, LParen, RParen, At, Colon,
  Plus, Minus, Star, Question, Bang, AndAnd, OrOr,
  Lt, Le, Eq, Ne, Ge, Gt, Eof
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  auto push = [&](Tok kind, std::size_t len) {
    out.push_back({kind, std::string(src.substr(i, len)), pos});
    advance(len);
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      push(Tok::Ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::Number, j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == ":=") { push(Tok::Assign, 2); continue; }
    if (two == "<=") { push(Tok::Le, 2); continue; }
    if (two == ">=") { push(Tok::Ge, 2); continue; }
    if (two == "==") { push(Tok::Eq, 2); continue; }
    if (two == "!=") { push(Tok::Ne, 2); continue; }
    if (two == "&&") { push(Tok::AndAnd, 2); continue; }
    if (two == "||") { push(Tok::OrOr, 2); continue; }
    switch (c) {
      case ';': push(Tok::Semi, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '@': push(Tok::At, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '?': push(Tok::Question, 1); continue;
      case '!': push(Tok::Bang, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      default:
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::Eof, "", pos});
  return out;
}

inline bool is_reserved(std::string_view word) {
  return word == "end" || word == "fin" || word == "create" || word == "while" ||
         word == "if" || word == "else";
}

// Commands are parsed with optional explicit labels first; automatic labels
// are assigned afterwards so they can avoid every explicit name.
struct RawCommand;
using RawBlock = std::vector<RawCommand>;

struct RawCommand {
  std::optional<std::string> label;
  SourcePos pos;
  std::variant<Assign, If, While, Create> node;
  RawBlock first;   // then-block / loop body / create body
  RawBlock second;  // else-block
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Program parse_program() {
    RawBlock block = parse_block(Tok::Eof);
    expect(Tok::Eof, "end of input");
    if (block.empty()) throw ParseError(toks_.front().pos, "empty program");

    std::set<std::string> explicit_names;
    collect_explicit(block, explicit_names);
    LabelTable labels;
    std::size_t counter = 0;
    Block body = assign_labels(block, labels, explicit_names, counter);
    return Program(std::move(body), std::move(vars_), std::move(labels));
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const {
    return at(Tok::Ident) && peek().text == word;
  }
  const Token& take() { return toks_[pos_++]; }
  const Token& expect(Tok kind, std::string_view what) {
    if (!at(kind)) {
      throw ParseError(peek().pos, "expected " + std::string(what) + ", found '" +
                                       (at(Tok::Eof) ? "end of input" : peek().text) +
                                       "'");
    }
    return take();
  }

  RawBlock parse_block(Tok terminator) {
    RawBlock block;
    while (!at(terminator)) {
      block.push_back(parse_command());
      bool braced = !block.back().first.empty();
      if (at(Tok::Semi)) {
        take();
      } else if (!braced && !at(terminator)) {
        throw ParseError(peek().pos, "expected ';' between commands, found '" +
                                         peek().text + "'");
      }
    }
    return block;
  }

  RawBlock parse_braced() {
    expect(Tok::LBrace, "'{'");
    RawBlock block = parse_block(Tok::RBrace);
    if (block.empty()) throw ParseError(peek().pos, "empty block");
    expect(Tok::RBrace, "'}'");
    return block;
  }

  RawCommand parse_command() {
    RawCommand cmd;
    if (at(Tok::At)) {
      take();
      const Token& name = expect(Tok::Ident, "label name");
      if (is_reserved(name.text)) {
        throw ParseError(name.pos, "reserved label '" + name.text + "'");
      }
      cmd.label = name.text;
      expect(Tok::Colon, "':' after label");
    }
    cmd.pos = peek().pos;
    if (at_keyword("if")) {
      take();
      expect(Tok::LParen, "'('");
      CondPtr cond = parse_cond();
      expect(Tok::RParen, "')'");
      cmd.first = parse_braced();
      if (at_keyword("else")) {
        take();
        cmd.second = parse_braced();
      }
      cmd.node = If{std::move(cond), {}, {}};
    } else if (at_keyword("while")) {
      take();
      expect(Tok::LParen, "'('");
      CondPtr cond = parse_cond();
      expect(Tok::RParen, "')'");
      cmd.first = parse_braced();
      cmd.node = While{std::move(cond), {}};
    } else if (at_keyword("create")) {
      take();
      cmd.first = parse_braced();
      cmd.node = Create{};
    } else {
      const Token& name = expect(Tok::Ident, "command");
      if (is_reserved(name.text)) {
        throw ParseError(name.pos, "unexpected keyword '" + name.text + "'");
      }
      expect(Tok::Assign, "':='");
      VarId var = vars_.intern(name.text);
      cmd.node = Assign{var, parse_expr()};
    }
    return cmd;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = take().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (at(Tok::Star)) {
      take();
      lhs = make_binary(BinaryOp::Mul, lhs, parse_factor());
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    if (at(Tok::Number)) return make_const(Integer(take().text));
    if (at(Tok::Question)) {
      take();
      return make_nondet();
    }
    if (at(Tok::Minus)) {
      take();
      if (at(Tok::Number)) return make_const(-Integer(take().text));
      return make_binary(BinaryOp::Sub, make_const(0), parse_factor());
    }
    if (at(Tok::LParen)) {
      take();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    const Token& name = expect(Tok::Ident, "expression");
    if (is_reserved(name.text)) {
      throw ParseError(name.pos, "reserved identifier '" + name.text + "'");
    }
    return make_var(vars_.intern(name.text));
  }

  CondPtr parse_cond() {
    CondPtr lhs = parse_conj();
    while (at(Tok::OrOr)) {
      take();
      lhs = make_or(lhs, parse_conj());
    }
    return lhs;
  }

  CondPtr parse_conj() {
    CondPtr lhs = parse_atom();
    while (at(Tok::AndAnd)) {
      take();
      lhs = make_and(lhs, parse_atom());
    }
    return lhs;
  }

  static std::optional<CompareOp> compare_op(Tok kind) {
    switch (kind) {
      case Tok::Lt: return CompareOp::Lt;
      case Tok::Le: return CompareOp::Le;
      case Tok::Eq: return CompareOp::Eq;
      case Tok::Ne: return CompareOp::Ne;
      case Tok::Ge: return CompareOp::Ge;
      case Tok::Gt: return CompareOp::Gt;
      default: return std::nullopt;
    }
  }

  CondPtr parse_atom() {
    if (at(Tok::Bang)) {
      take();
      return make_not(parse_atom());
    }
    // A comparison is tried first; `(` may open either a parenthesised
    // expression or a parenthesised condition.
    std::size_t saved = pos_;
    std::optional<ParseError> expr_error;
    try {
      bool lone_question = at(Tok::Question);
      ExprPtr lhs = parse_expr();
      if (auto op = compare_op(peek().kind)) {
        take();
        return make_compare(*op, lhs, parse_expr());
      }
      if (lone_question && pos_ == saved + 1) return make_nondet_cond();
    } catch (const ParseError& e) {
      expr_error = e;
    }
    pos_ = saved;
    if (at(Tok::LParen)) {
      take();
      CondPtr inner = parse_cond();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (expr_error) throw *expr_error;
    throw ParseError(peek().pos, "expected comparison");
  }

  static void collect_explicit(const RawBlock& block, std::set<std::string>& names) {
    for (const auto& cmd : block) {
      if (cmd.label) {
        if (!names.insert(*cmd.label).second) {
          throw ParseError(cmd.pos, "duplicate label '" + *cmd.label + "'");
        }
      }
      collect_explicit(cmd.first, names);
      collect_explicit(cmd.second, names);
    }
  }

  static Block assign_labels(const RawBlock& raw, LabelTable& labels,
                             const std::set<std::string>& explicit_names,
                             std::size_t& counter) {
    Block block;
    block.reserve(raw.size());
    for (const auto& rc : raw) {
      std::string name;
      if (rc.label) {
        name = *rc.label;
      } else {
        do {
          name = "l" + std::to_string(++counter);
        } while (explicit_names.contains(name));
      }
      Command cmd{labels.add(name), rc.node};
      auto first = assign_labels(rc.first, labels, explicit_names, counter);
      if (auto* i = std::get_if<If>(&cmd.node)) {
        i->then_block = std::move(first);
        i->else_block = assign_labels(rc.second, labels, explicit_names, counter);
      } else if (auto* w = std::get_if<While>(&cmd.node)) {
        w->body = std::move(first);
      } else if (auto* c = std::get_if<Create>(&cmd.node)) {
        c->body = std::move(first);
      }
      block.push_back(std::move(cmd));
    }
    return block;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarTable vars_;
};

}  // namespace detail

/// Parses `.mt` source. Unannotated commands get labels `l1`, `l2`, ... in
/// pre-order, skipping names already used by `@name:` annotations.
inline Program parse(std::string_view text) {
  return detail::Parser(text).parse_program();
}

}  // namespace tma
