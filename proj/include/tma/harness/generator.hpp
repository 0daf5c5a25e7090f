#pragma once

#include "tma/lang/parser.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tma {

struct GeneratorSpec {
  std::size_t count = 30;
  /// Commands per program, compound ones included.
  std::size_t max_commands = 6;
  std::size_t max_create_nesting = 2;
  std::size_t max_while_nesting = 1;
  std::size_t var_count = 2;
  std::uint64_t seed = 1;
};

struct GeneratedProgram {
  std::string id;
  std::string source;
  Program program;
};

namespace detail {

inline std::string var_name(std::size_t k) {
  static const char* const kNames[] = {"x", "y", "z", "u", "v", "w"};
  return k < 6 ? kNames[k] : "v" + std::to_string(k);
}

/// Draws from a fixed engine with plain modulo, so families are the same
/// across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(std::size_t percent) { return below(100) < percent; }

 private:
  std::mt19937_64 rng_;
};

class RandomProgram {
 public:
  RandomProgram(const GeneratorSpec& spec, Draw& draw) : spec_(spec), draw_(draw) {}

  std::string program() {
    budget_ = 1 + draw_.below(spec_.max_commands);
    return block(0, 0, 0);
  }

  /// `create` inside a `while`, with the rest random.
  std::string loop_spawn() {
    budget_ = spec_.max_commands > 4 ? spec_.max_commands - 4 : 0;
    const std::string v = var();
    std::string out = v + " := 0;\nwhile (" + v + " < " + std::to_string(1 + draw_.below(3)) +
                      ") {\n" + v + " := " + v + " + 1;\ncreate {\n" + assign() + "\n}\n}";
    if (budget_ > 0) out += ";\n" + block(0, 0, 0);
    return out;
  }

 private:
  std::string var() { return var_name(draw_.below(spec_.var_count)); }

  std::string atom() {
    switch (draw_.below(4)) {
      case 0: return std::to_string(draw_.below(4));
      case 1: return "?";
      default: return var();
    }
  }

  std::string expr() {
    switch (draw_.below(6)) {
      case 0: return atom();
      case 1: return var() + " + " + atom();
      case 2: return var() + " - " + atom();
      case 3: return var() + " * " + std::to_string(draw_.below(3));
      case 4: return var() + " + 1";
      default: return std::to_string(draw_.below(4));
    }
  }

  std::string cond() {
    if (draw_.chance(15)) return "?";
    static const char* const kOps[] = {"<", "<=", "==", "!=", ">=", ">"};
    std::string c = var() + " " + kOps[draw_.below(6)] + " " + atom();
    if (draw_.chance(15)) c = "(" + c + ") && " + var() + " >= 0";
    return c;
  }

  std::string assign() { return var() + " := " + expr(); }

  std::string block(std::size_t creates, std::size_t whiles, std::size_t depth) {
    std::string out;
    std::size_t emitted = 0;
    do {
      if (emitted) out += ";\n";
      out += command(creates, whiles, depth);
      ++emitted;
    } while (budget_ > 0 && draw_.chance(depth == 0 ? 80 : 40));
    return out;
  }

  std::string command(std::size_t creates, std::size_t whiles, std::size_t depth) {
    if (budget_ > 0) --budget_;
    const bool room = budget_ > 0 && depth < 4;
    const std::size_t pick = draw_.below(10);
    if (room && pick < 2 && creates < spec_.max_create_nesting) {
      return "create {\n" + block(creates + 1, whiles, depth + 1) + "\n}";
    }
    if (room && pick < 4 && whiles < spec_.max_while_nesting) {
      // The counter step keeps most loops finite without interference.
      const std::string v = var();
      return "while (" + v + " < " + std::to_string(1 + draw_.below(3)) + ") {\n" + v + " := " +
             v + " + 1;\n" + block(creates, whiles + 1, depth + 1) + "\n}";
    }
    if (room && pick < 5) {
      std::string out = "if (" + cond() + ") {\n" + block(creates, whiles, depth + 1) + "\n}";
      if (budget_ > 0 && draw_.chance(50)) {
        out += " else {\n" + block(creates, whiles, depth + 1) + "\n}";
      }
      return out;
    }
    return assign();
  }

  const GeneratorSpec& spec_;
  Draw& draw_;
  std::size_t budget_ = 0;
};

}  // namespace detail

/// Deterministic family of small programs mixing assign/if/while/create.
/// Every third program has a `create` inside a `while`.
inline std::vector<GeneratedProgram> generate_programs(const GeneratorSpec& spec) {
  if (spec.max_commands < 1 || spec.var_count < 1) {
    throw std::invalid_argument("generator bounds must be positive");
  }
  detail::Draw draw(spec.seed);
  std::vector<GeneratedProgram> out;
  for (std::size_t k = 0; k < spec.count; ++k) {
    detail::RandomProgram gen(spec, draw);
    const bool loop_spawn = k % 3 == 2 && spec.max_while_nesting > 0 &&
                            spec.max_create_nesting > 0;
    std::string source = loop_spawn ? gen.loop_spawn() : gen.program();
    Program program = parse(source);
    out.push_back({"gen-" + std::to_string(spec.seed) + "-" + std::to_string(k),
                   std::move(source), std::move(program)});
  }
  return out;
}

/// A program with exactly `n` commands and nesting depth `d` (0, 1 or 2),
/// built from repeated segments so that work grows with `n` alone.
inline std::string sized_program_source(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d > 2) throw std::invalid_argument("depth must be 0, 1 or 2");
  detail::Draw draw(seed);
  const std::size_t vars = 3;
  auto v = [&] { return detail::var_name(draw.below(vars)); };
  auto k = [&] { return std::to_string(draw.below(4)); };
  std::string out;
  std::size_t left = n;
  auto emit = [&](const std::string& s) {
    if (!out.empty()) out += ";\n";
    out += s;
  };
  // Segment sizes: depth 0 uses 4, depth 1 uses 5, depth 2 uses 6 commands.
  const std::size_t segment = d == 0 ? 4 : d == 1 ? 5 : 6;
  std::size_t made = 0;
  while (left >= segment) {
    const std::string a = v(), b = v();
    if (d == 0) {
      emit(a + " := " + b + " + " + k());
      if (made % 2) {
        emit("create {\n" + b + " := " + a + " + 1\n}");
      } else {
        emit("u := " + a);
        emit(b + " := u");
      }
    } else if (d == 1) {
      emit("while (" + a + " < " + k() + ") {\n" + a + " := " + a + " + 1;\ncreate {\n" + b +
           " := " + b + " + " + a + "\n};\n" + b + " := " + k() + "\n}");
    } else {
      emit("while (" + a + " < " + k() + ") {\n" + a + " := " + a + " + 1;\nwhile (" + b +
           " < " + k() + ") {\n" + b + " := " + b + " + 1;\ncreate {\nu := " + a + "\n}\n}\n}");
    }
    left -= segment;
    ++made;
    if (d == 0) emit(v() + " := " + k());
  }
  while (left > 0) {
    emit(v() + " := " + k());
    --left;
  }
  return out;
}

}  // namespace tma
