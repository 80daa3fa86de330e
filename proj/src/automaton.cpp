#include "xpathsat/automaton.hpp"

#include <algorithm>
#include <deque>
#include <utility>

namespace xpathsat {

namespace {

using Kind = ContentModel::Kind;

struct Glushkov {
  bool nullable = true;
  std::vector<std::size_t> first;
  std::vector<std::size_t> last;
};

class Builder {
 public:
  std::vector<Label> labels{Label{}};
  std::vector<std::set<std::size_t>> follow{{}};

  Glushkov build(const ContentModel& e) {
    switch (e.kind()) {
      case Kind::Epsilon:
        return {};
      case Kind::Symbol: {
        std::size_t q = labels.size();
        labels.push_back(e.label());
        follow.emplace_back();
        return {false, {q}, {q}};
      }
      case Kind::Concat: {
        Glushkov acc;
        for (const auto& item : e.items()) {
          Glushkov g = build(item);
          link(acc.last, g.first);
          if (acc.nullable) acc.first.insert(acc.first.end(), g.first.begin(), g.first.end());
          if (g.nullable) {
            acc.last.insert(acc.last.end(), g.last.begin(), g.last.end());
          } else {
            acc.last = std::move(g.last);
          }
          acc.nullable = acc.nullable && g.nullable;
        }
        return acc;
      }
      case Kind::Disj: {
        Glushkov acc{false, {}, {}};
        for (const auto& item : e.items()) {
          Glushkov g = build(item);
          acc.nullable = acc.nullable || g.nullable;
          acc.first.insert(acc.first.end(), g.first.begin(), g.first.end());
          acc.last.insert(acc.last.end(), g.last.begin(), g.last.end());
        }
        return acc;
      }
      case Kind::Star:
      case Kind::Plus: {
        Glushkov g = build(e.body());
        link(g.last, g.first);
        if (e.is(Kind::Star)) g.nullable = true;
        return g;
      }
      case Kind::Opt: {
        Glushkov g = build(e.body());
        g.nullable = true;
        return g;
      }
      case Kind::Hash:
        return build(expand_hash(e));
    }
    return {};
  }

 private:
  void link(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
    for (std::size_t p : from) follow[p].insert(to.begin(), to.end());
  }
};

}  // namespace

PositionAutomaton::PositionAutomaton(const ContentModel& e) {
  Builder b;
  Glushkov g = b.build(e);
  b.follow[0].insert(g.first.begin(), g.first.end());
  labels_ = std::move(b.labels);
  for (auto& f : b.follow) follow_.emplace_back(f.begin(), f.end());
  finals_.insert(g.last.begin(), g.last.end());
  if (g.nullable) finals_.insert(0);
  for (std::size_t q = 1; q < labels_.size(); ++q) alphabet_.insert(labels_[q]);
}

bool PositionAutomaton::accepts(const StateSet& states) const {
  return std::ranges::any_of(states, [this](State q) { return is_final(q); });
}

PositionAutomaton::StateSet PositionAutomaton::step(const StateSet& states, const Label& a) const {
  StateSet out;
  for (State q : states) {
    for (State r : follow_[q]) {
      if (labels_[r] == a) out.insert(r);
    }
  }
  return out;
}

PositionAutomaton::StateSet PositionAutomaton::reach(const StateSet& states) const {
  StateSet seen = states;
  std::vector<State> stack(states.begin(), states.end());
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State r : follow_[q]) {
      if (seen.insert(r).second) stack.push_back(r);
    }
  }
  return seen;
}

bool matches(const ContentModel& e, const Word& w) {
  PositionAutomaton a(e);
  auto states = a.initial();
  for (const auto& l : w) {
    states = a.step(states, l);
    if (states.empty()) return false;
  }
  return a.accepts(states);
}

bool equivalent(const ContentModel& e1, const ContentModel& e2) {
  PositionAutomaton a1(e1);
  PositionAutomaton a2(e2);
  LabelSet sigma = a1.alphabet();
  sigma.insert(a2.alphabet().begin(), a2.alphabet().end());

  using Pair = std::pair<PositionAutomaton::StateSet, PositionAutomaton::StateSet>;
  std::set<Pair> seen{{a1.initial(), a2.initial()}};
  std::deque<Pair> queue{{a1.initial(), a2.initial()}};
  while (!queue.empty()) {
    auto [s1, s2] = std::move(queue.front());
    queue.pop_front();
    if (a1.accepts(s1) != a2.accepts(s2)) return false;
    for (const auto& l : sigma) {
      Pair next{a1.step(s1, l), a2.step(s2, l)};
      if (next.first.empty() && next.second.empty()) continue;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return true;
}

std::vector<Word> enumerate_words(const ContentModel& e, std::size_t max_len) {
  PositionAutomaton a(e);
  std::vector<Word> out;
  // Level-by-level expansion; each layer is kept in lexicographic order and
  // labels are tried in alphabet order, so the output is sorted.
  std::vector<std::pair<Word, PositionAutomaton::StateSet>> layer{{Word{}, a.initial()}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& [w, states] : layer) {
      if (a.accepts(states)) out.push_back(w);
    }
    if (len == max_len) break;
    std::vector<std::pair<Word, PositionAutomaton::StateSet>> next;
    for (const auto& [w, states] : layer) {
      for (const auto& l : a.alphabet()) {
        auto succ = a.step(states, l);
        if (succ.empty()) continue;
        Word w2 = w;
        w2.push_back(l);
        next.emplace_back(std::move(w2), std::move(succ));
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

}  // namespace xpathsat
