#pragma once

#include "tma/lang/ast.hpp"

#include <vector>

namespace tma {

/// Set of labels as a dense bit vector over the program's label ids.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t label_count) : bits_(label_count, false) {}

  bool contains(Label l) const { return l.id < bits_.size() && bits_[l.id]; }
  void insert(Label l) { bits_.at(l.id) = true; }

  LabelSet& operator|=(const LabelSet& o) {
    for (std::size_t k = 0; k < bits_.size(); ++k) {
      if (o.bits_[k]) bits_[k] = true;
    }
    return *this;
  }

  bool subset_of(const LabelSet& o) const {
    for (std::size_t k = 0; k < bits_.size(); ++k) {
      if (bits_[k] && !o.bits_[k]) return false;
    }
    return true;
  }

  std::vector<Label> elements() const {
    std::vector<Label> out;
    for (std::size_t k = 0; k < bits_.size(); ++k) {
      if (bits_[k]) out.push_back(Label{static_cast<std::uint32_t>(k)});
    }
    return out;
  }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<bool> bits_;
};

/// Guarantee K: one transition value per label id. Entry `fin` abstracts
/// the whole guarantee; entry l the part visible to threads created at l.
template <class Store>
using GuaranteeMap = std::vector<Store>;

/// Abstract configuration <C, L, K, I>.
template <class Store>
struct Configuration {
  /// C: abstraction of the current thread's states.
  Store current;
  /// L: creation sites encountered so far; always contains fin.
  LabelSet encountered;
  /// K: what this thread and its descendants may do.
  GuaranteeMap<Store> guarantee;
  /// I: what the other threads may do.
  Store interference;
};

}  // namespace tma
