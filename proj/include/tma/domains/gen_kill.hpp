#pragma once

#include "tma/concrete/store.hpp"
#include "tma/lang/ast.hpp"

#include <string>
#include <vector>

namespace tma {

/// Finite set of variables.
struct VarSet {
  std::vector<bool> members;

  bool contains(VarId x) const { return x < members.size() && members[x]; }
  friend bool operator==(const VarSet&, const VarSet&) = default;
};

/// Gen/kill store: a set of variables, e.g. the variables that may be
/// initialized. States and transitions share the carrier; as a transition
/// the set holds the variables that may be written.
///
/// `Rules` supplies `gen` and `kill` for an assignment; `gen` must be
/// monotone and `kill` antitone in the input set.
template <class Rules>
class GenKillDomain {
 public:
  using Store = VarSet;

  explicit GenKillDomain(std::vector<std::string> var_names)
      : names_(std::move(var_names)) {}
  explicit GenKillDomain(const VarTable& vars) : GenKillDomain(vars.names()) {}

  std::size_t var_count() const { return names_.size(); }
  const std::vector<std::string>& var_names() const { return names_; }

  Store bottom() const { return {std::vector<bool>(names_.size(), false)}; }
  Store top() const { return {std::vector<bool>(names_.size(), true)}; }
  Store initial() const { return Rules::initial(*this); }

  bool equal(const Store& a, const Store& b) const { return a == b; }

  bool leq(const Store& a, const Store& b) const {
    for (std::size_t x = 0; x < a.members.size(); ++x) {
      if (a.members[x] && !b.members[x]) return false;
    }
    return true;
  }

  Store join(const Store& a, const Store& b) const {
    Store out = a;
    for (std::size_t x = 0; x < out.members.size(); ++x) {
      if (b.members[x]) out.members[x] = true;
    }
    return out;
  }

  /// The lattice has finite height, so join already terminates.
  Store widen(const Store& a, const Store& b) const { return join(a, b); }

  Store assign(const Store& c, const Assign& a) const {
    Store out = c;
    Store killed = Rules::kill(*this, c, a);
    Store generated = Rules::gen(*this, c, a);
    for (std::size_t x = 0; x < out.members.size(); ++x) {
      out.members[x] = (out.members[x] && !killed.members[x]) || generated.members[x];
    }
    return out;
  }

  Store interference(const Store& c, const Assign& a) const { return Rules::gen(*this, c, a); }

  Store apply_interference(const Store& i, const Store& c) const { return join(i, c); }

  Store enforce(const Store& c, const Cond&) const { return c; }

  /// Every variable initialized in `m` is in the set.
  bool contains(const Store& c, const ConcreteStore& m) const {
    for (std::size_t x = 0; x < m.initialized.size(); ++x) {
      if (m.initialized[x] && !c.members.at(x)) return false;
    }
    return true;
  }

  Store singleton(VarId x) const {
    Store s = bottom();
    s.members.at(x) = true;
    return s;
  }

  std::string render(const Store& s) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t x = 0; x < names_.size(); ++x) {
      if (!s.members[x]) continue;
      if (!first) out += ", ";
      out += names_[x];
      first = false;
    }
    return out + "}";
  }

 private:
  std::vector<std::string> names_;
};

/// May-be-initialized variables: an assignment generates its target and
/// kills nothing. Programs start with no variable initialized.
struct InitializedVariablesRules {
  template <class D>
  static VarSet initial(const D& d) { return d.bottom(); }
  template <class D>
  static VarSet gen(const D& d, const VarSet&, const Assign& a) { return d.singleton(a.var); }
  template <class D>
  static VarSet kill(const D& d, const VarSet&, const Assign&) { return d.bottom(); }
};

using InitializedVariablesDomain = GenKillDomain<InitializedVariablesRules>;

}  // namespace tma
