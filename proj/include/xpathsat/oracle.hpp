#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xpathsat/constraints.hpp"
#include "xpathsat/error.hpp"
#include "xpathsat/dtd.hpp"
#include "xpathsat/schema_graph.hpp"
#include "xpathsat/xpath.hpp"

namespace xpathsat {

/// Ordered labeled tree stored as a flat node array. Node 0 is the root.
class DocTree {
 public:
  using Id = std::size_t;

  struct Node {
    Label label;
    std::optional<Id> parent;
    std::vector<Id> children;
  };

  DocTree() = default;
  explicit DocTree(Label root_label);

  /// Appends a child as the last child of `parent` and returns its id.
  Id add_child(Id parent, Label label);

  const Node& node(Id v) const { return nodes_.at(v); }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  /// Number of edges on the longest root-to-leaf path.
  std::size_t depth() const;

  Word children_word(Id v) const;
  LabelPath label_path(Id v) const;  // root label first

  friend bool operator==(const DocTree&, const DocTree&) = default;

 private:
  std::vector<Node> nodes_;
};

/// Term syntax: `r(r(c),a,a,b(a))`; a leaf is written without parentheses
/// and `a()` is also accepted.
DocTree parse_tree(std::string_view text);
std::string to_string(const DocTree& t);

bool conforms(const DocTree& t, const Dtd& d);

/// Nodes selected by `p` from the context set.
std::vector<DocTree::Id> eval_xpath(const DocTree& t, const XPathExpr& p, const std::vector<DocTree::Id>& context);

/// True iff `p` selects some node from the root.
bool eval_xpath_full(const DocTree& t, const XPathExpr& p);

struct TreeBounds {
  std::size_t depth = 4;  // maximum number of edges from the root
  std::size_t rep = 2;    // maximum iterations of each * or + subexpression
  std::size_t budget = 5'000'000;  // subtrees built plus trees visited
};

/// Thrown by the enumerators when the bounds' budget runs out.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Children words of `e` in which every * and + is iterated at most `rep`
/// times; sorted by length, then lexicographically.
std::vector<Word> capped_words(const ContentModel& e, std::size_t rep);

/// Streams every conforming tree within the bounds, ordered by node count
/// and then by term string. Stops early when `visit` returns false.
void for_each_tree(const Dtd& d, const TreeBounds& bounds, const std::function<bool(const DocTree&)>& visit);

std::vector<DocTree> enumerate_trees(const Dtd& d, const TreeBounds& bounds);

/// Streams the trees built only from maximal choices: children words that
/// are maximal under the subsequence order among the capped words realizable
/// within the remaining depth, and below them subtrees not embeddable into
/// another candidate. Every conforming tree within the bounds is obtained
/// from one of these by deleting subtrees, which preserves satisfaction of
/// positive queries.
void for_each_maximal_tree(const Dtd& d, const TreeBounds& bounds,
                           const std::function<bool(const DocTree&)>& visit);

struct OracleResult {
  bool sat = false;  // false means UNKNOWN, not UNSAT
  std::optional<DocTree> witness;
  std::size_t trees_examined = 0;
  bool exhausted = false;  // the search stopped on the budget
};

/// max(2, size(p))
std::size_t default_rep(const XPathExpr& p);

/// Bounded search. Existence is decided over the maximal trees; with
/// `smallest_witness` the first witness in full enumeration order is then
/// returned.
OracleResult oracle_satisfiable(const XPathExpr& p, const Dtd& d, const TreeBounds& bounds,
                                bool smallest_witness = true);

/// θ as a schema-graph node per tree node.
using SgMapping = std::vector<NodeId>;

/// Every SG mapping of `t` into `g`: each node's children are assigned to
/// factor positions in non-decreasing order, a single-symbol factor taking
/// at most its own symbol and a starred factor any word over its labels.
std::vector<SgMapping> compute_sg_mapping(const DocTree& t, const SchemaGraph& g);

/// For every entry s ↦ L some node w with label path s has DF children
/// (per θ) covering L. Keys are absolute label paths.
bool beta_satisfied(const DocTree& t, const SgMapping& theta, const SibMap& b, const SchemaGraph& g);

}  // namespace xpathsat
