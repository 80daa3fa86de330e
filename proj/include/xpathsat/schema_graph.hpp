#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xpathsat/content_model.hpp"
#include "xpathsat/dtd.hpp"

namespace xpathsat {

/// One top-level factor of a DC-converted content model.
struct DcFactor {
  std::size_t position = 0;  // 1-based
  ContentModel body;         // a single symbol or a starred expression
  char omega = '-';          // '-' for a single symbol, '*' for a star
  LabelSet labels;
  LabelSet df_labels;   // labels occurring exactly once in the source model
  LabelSet dfs_labels;  // DF labels outside every star

  friend bool operator==(const DcFactor&, const DcFactor&) = default;
};

/// Turns every disjunction outside stars into a concatenation and flattens
/// the result into single-symbol and starred factors. Requires an MDF/DC
/// model (PreconditionError otherwise).
std::vector<DcFactor> dc_convert(const ContentModel& e);

using NodeId = std::size_t;

struct SgNode {
  std::optional<Label> lambda_par;  // nullopt for the root sentinel
  std::size_t pos = 1;
  char omega = '-';
  Label label;
  bool is_df = false;
  bool is_dfs = false;

  friend bool operator==(const SgNode&, const SgNode&) = default;
};

/// Schema graph of an MDF/DC DTD. Node 0 is the root sentinel (⊥,1,-,r).
/// The other nodes come in breadth-first order of their parent label,
/// starting from the root, and by (pos, label) under one parent. Labels not
/// reachable from the root contribute no nodes.
class SchemaGraph {
 public:
  static constexpr NodeId kRoot = 0;

  explicit SchemaGraph(Dtd d);

  const Dtd& dtd() const noexcept { return dtd_; }
  const std::vector<SgNode>& nodes() const noexcept { return nodes_; }
  const SgNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Nodes u' with λ_par(u') = parent_label, ordered by (pos, label).
  const std::vector<NodeId>& children(const Label& parent_label) const;
  std::vector<NodeId> children_with_label(const Label& parent_label, const Label& l) const;

  /// Factors of the converted rule for `a`.
  const std::vector<DcFactor>& factors(const Label& a) const;

  /// "u<id>"
  static std::string name(NodeId id);

  /// One line per node: `node <λpar|⊥> <pos> <ω> <λ> df=<0|1> dfs=<0|1>`.
  std::string to_text() const;
  std::string to_json() const;

 private:
  Dtd dtd_;
  std::vector<SgNode> nodes_;
  std::map<Label, std::vector<NodeId>> by_parent_;
  std::map<Label, std::vector<DcFactor>> factors_;
};

/// Requires every rule to be MDF/DC.
SchemaGraph build_schema_graph(const Dtd& d);

}  // namespace xpathsat
