#pragma once

#include "tma/concrete/store.hpp"
#include "tma/lang/ast.hpp"

#include <concepts>
#include <string>

namespace tma {

/// What the analyzer needs from a single-thread abstract store. The same
/// `Store` type encodes sets of states and sets of transitions.
template <class D>
concept AbstractDomain = requires(const D& d, const typename D::Store& s,
                                  const Assign& a, const Cond& c,
                                  const ConcreteStore& m) {
  typename D::Store;
  { d.bottom() } -> std::same_as<typename D::Store>;
  { d.top() } -> std::same_as<typename D::Store>;
  { d.initial() } -> std::same_as<typename D::Store>;
  { d.leq(s, s) } -> std::same_as<bool>;
  { d.equal(s, s) } -> std::same_as<bool>;
  { d.join(s, s) } -> std::same_as<typename D::Store>;
  { d.widen(s, s) } -> std::same_as<typename D::Store>;
  { d.assign(s, a) } -> std::same_as<typename D::Store>;
  { d.interference(s, a) } -> std::same_as<typename D::Store>;
  { d.apply_interference(s, s) } -> std::same_as<typename D::Store>;
  { d.enforce(s, c) } -> std::same_as<typename D::Store>;
  { d.contains(s, m) } -> std::same_as<bool>;
  { d.render(s) } -> std::same_as<std::string>;
};

}  // namespace tma
