#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xpathsat/constraints.hpp"
#include "xpathsat/dtd.hpp"
#include "xpathsat/schema_graph.hpp"
#include "xpathsat/xpath.hpp"

namespace xpathsat {

/// State (U0…Un, β) of the top-down procedure for X(↓,↑,→⁺,←⁺).
///
/// β is kept as a trie over label paths so that each step touches O(1)
/// entries; beta() renders it as a SibMap.
class Eval1State {
 public:
  explicit Eval1State(const SchemaGraph& g);

  const std::vector<std::vector<NodeId>>& levels() const noexcept { return levels_; }
  SibMap beta() const;
  LabelPath path() const;

  /// `({u0}{u1,u5}, {r↦∅})`
  std::string to_string() const;

 private:
  friend struct Eval1Stepper;

  struct Entry {
    Label label;
    std::size_t parent = 0;
    bool dfs = false;
    std::optional<LabelSet> value;
    std::map<Label, std::size_t> children;
  };

  std::size_t child_entry(std::size_t at, const Label& l, bool dfs);

  const SchemaGraph* graph_;
  std::vector<std::vector<NodeId>> levels_;
  std::vector<Entry> trie_;      // trie_[0] is the key of the root path
  std::vector<std::size_t> at_;  // trie entry of each level's label path
};

struct StepOutcome {
  bool ok = true;
  std::string reason;                      // set on failure
  std::optional<std::string> inconsistent;  // rendered map that failed the check
};

/// Applies one atomic step in place. On failure the state holds the
/// rejected map and must not be reused.
StepOutcome eval1_step(const XPathExpr& step, Eval1State& st, const SchemaGraph& g);

struct Verdict {
  bool sat = false;
  std::string algorithm;  // "eval1" or "eval2"
  std::optional<std::size_t> failed_step;  // eval1: 0-based step index
  std::string reason;
  std::optional<std::string> inconsistent_map;
  std::string final_state;
  std::vector<std::string> trace;
};

/// Requires fragment X(↓,↑,→⁺,←⁺) without union or qualifiers
/// (UnsupportedFragment otherwise).
Verdict eval1(const XPathExpr& p, const SchemaGraph& g, bool trace = false);

/// Tuple ((start, pre), (end, post), rel_path) of the bottom-up procedure.
/// `rel_dfs` records whether every node on rel_path is DFS; `anchored`
/// whether the expression starts with a child step.
struct Eval2Tuple {
  NodeId start = 0;
  SibMap pre;
  NodeId end = 0;
  SibMap post;
  LabelPath rel;
  bool rel_dfs = true;
  bool anchored = false;

  auto operator<=>(const Eval2Tuple&) const = default;

  /// `((u0,β⊥),(u1,{r↦∅}),r)`
  std::string to_string() const;
};

using Eval2Set = std::set<Eval2Tuple>;

struct Eval2Trace {
  std::string expr;
  Eval2Set tuples;
};

/// Requires fragment X(↓,→⁺,←⁺,[]) with conjunctive qualifiers only. The
/// expression is normalized first. Each computed subexpression is appended
/// to `trace` when given.
Eval2Set eval2(const XPathExpr& p, const SchemaGraph& g, std::vector<Eval2Trace>* trace = nullptr);

/// True iff some tuple starts at the root sentinel with no requirement.
bool eval2_accepts(const Eval2Set& tuples);

std::string to_string(const Eval2Set& tuples);

enum class Route { Eval1, Eval2 };

/// Routing by fragment; UnsupportedFragment for anything else.
Route route(const XPathExpr& p);

/// MRW DTD → δ → schema graph → eval1/eval2. Throws NotMrwError or
/// UnsupportedFragment.
Verdict satisfiable(const XPathExpr& p, const Dtd& d, bool trace = false);

/// Same on a prepared graph.
Verdict satisfiable(const XPathExpr& p, const SchemaGraph& g, bool trace = false);

}  // namespace xpathsat
