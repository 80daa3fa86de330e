#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "xpathsat/content_model.hpp"

namespace xpathsat {

/// Glushkov (position) automaton of a content model.
///
/// State 0 is the initial state; state i > 0 is the i-th symbol occurrence
/// in the hash-expanded expression. The automaton has no epsilon moves and,
/// because the expression language has no empty set, every state is both
/// reachable and co-reachable.
class PositionAutomaton {
 public:
  using State = std::size_t;
  using StateSet = std::set<State>;

  explicit PositionAutomaton(const ContentModel& e);

  std::size_t state_count() const noexcept { return labels_.size(); }
  const LabelSet& alphabet() const noexcept { return alphabet_; }

  StateSet initial() const { return {0}; }
  bool is_final(State q) const { return finals_.contains(q); }
  bool accepts(const StateSet& states) const;

  /// Successors of `states` on `a`.
  StateSet step(const StateSet& states, const Label& a) const;

  /// States reachable from `states` in zero or more moves on any symbol.
  StateSet reach(const StateSet& states) const;

  /// Label carried by position `q` (empty for the initial state).
  const Label& label_of(State q) const { return labels_[q]; }

  const std::vector<State>& follow(State q) const { return follow_[q]; }

 private:
  std::vector<Label> labels_;
  std::vector<std::vector<State>> follow_;
  std::set<State> finals_;
  LabelSet alphabet_;
};

}  // namespace xpathsat
