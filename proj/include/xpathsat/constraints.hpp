#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "xpathsat/content_model.hpp"
#include "xpathsat/dtd.hpp"
#include "xpathsat/schema_graph.hpp"

namespace xpathsat {

using LabelPath = std::vector<Label>;

/// Renders a path by juxtaposition when every label is one character and
/// with '/' otherwise; "ε" for the empty path.
std::string to_string(const LabelPath& p, bool compact);

bool is_prefix(const LabelPath& prefix, const LabelPath& p);

/// Value of one sibling-constraint entry. `dfs` records whether every node
/// on the key path is DFS; it is fixed when the entry is created.
struct SibEntry {
  LabelSet labels;
  bool dfs = false;

  auto operator<=>(const SibEntry&) const = default;
};

/// Sibling-constraint mapping keyed by label paths.
///
/// Absolute keys start with the root label: "r" constrains the children of
/// the root. Relative keys are relative to the parent of some context node,
/// so ε constrains the context's siblings.
struct SibMap {
  enum class Mode { Absolute, Relative };

  Mode mode = Mode::Absolute;
  std::map<LabelPath, SibEntry> entries;

  bool empty() const noexcept { return entries.empty(); }

  /// Adds `labels` under `key`, creating the entry with flag `dfs` if absent.
  void add(const LabelPath& key, const LabelSet& labels, bool dfs);

  auto operator<=>(const SibMap&) const = default;
};

/// {λ(u)} if u is DF, else ∅.
LabelSet psi(const SgNode& u);

/// Pointwise union. Throws PreconditionError on a mode or flag mismatch.
SibMap join(const SibMap& b1, const SibMap& b2);

/// Keeps entries that are flagged DFS or whose key is a prefix of `current`
/// (the key equal to `current` included).
SibMap restrict_dfs(const SibMap& b, const LabelPath& current);

/// Prepends `prefix` to every key. With `prefix_dfs` false every shifted
/// flag is cleared.
SibMap shift(const SibMap& b, const LabelPath& prefix, bool prefix_dfs = true);

/// True iff some word of `e` contains every label of `s`. Every label of `s`
/// must occur exactly once in `e` (PreconditionError otherwise).
bool coverable(const ContentModel& e, const LabelSet& s);

/// Each entry with a non-empty key ending in `a` must be coverable by P(a).
bool consistent(const SibMap& b, const Dtd& d);

/// Checks a single entry (always true for the empty key).
bool entry_consistent(const LabelPath& key, const LabelSet& labels, const Dtd& d);

/// `{r↦{b,c}, rb↦{a}}`; "β⊥" for the empty map.
std::string to_string(const SibMap& b);
std::string to_string(const LabelSet& s);

}  // namespace xpathsat
