#include "xpathsat/schema_graph.hpp"

#include <deque>

#include "json.hpp"

#include "xpathsat/error.hpp"

namespace xpathsat {

using Kind = ContentModel::Kind;

namespace {

void collect_factors(const ContentModel& e, std::vector<ContentModel>& out) {
  switch (e.kind()) {
    case Kind::Epsilon:
      return;
    case Kind::Symbol:
    case Kind::Star:
      out.push_back(e);
      return;
    case Kind::Concat:
    case Kind::Disj:
      for (const auto& item : e.items()) collect_factors(item, out);
      return;
    default:
      throw PreconditionError("dc_convert: unexpected operator in " + to_string(e));
  }
}

}  // namespace

std::vector<DcFactor> dc_convert(const ContentModel& e) {
  if (!is_mdf_dc(e)) throw PreconditionError("dc_convert: model is not MDF/DC: " + to_string(e));
  auto counts = occurrence_counts(e);
  std::vector<ContentModel> bodies;
  collect_factors(e, bodies);
  std::vector<DcFactor> out;
  for (auto& body : bodies) {
    DcFactor f;
    f.position = out.size() + 1;
    f.omega = body.is(Kind::Symbol) ? '-' : '*';
    f.labels = symbols(body);
    for (const auto& a : f.labels) {
      if (counts[a] == 1) f.df_labels.insert(a);
    }
    if (f.omega == '-') f.dfs_labels = f.df_labels;
    f.body = std::move(body);
    out.push_back(std::move(f));
  }
  return out;
}

SchemaGraph::SchemaGraph(Dtd d) : dtd_(std::move(d)) {
  nodes_.push_back({std::nullopt, 1, '-', dtd_.root, true, true});
  LabelSet seen{dtd_.root};
  std::deque<Label> queue{dtd_.root};
  while (!queue.empty()) {
    Label a = queue.front();
    queue.pop_front();
    auto& ids = by_parent_[a];
    auto& fs = factors_[a] = dc_convert(dtd_.rule(a));
    for (const auto& f : fs) {
      for (const auto& b : f.labels) {
        ids.push_back(nodes_.size());
        nodes_.push_back({a, f.position, f.omega, b, f.df_labels.contains(b), f.dfs_labels.contains(b)});
        if (seen.insert(b).second) queue.push_back(b);
      }
    }
  }
}

const std::vector<NodeId>& SchemaGraph::children(const Label& parent_label) const {
  static const std::vector<NodeId> kNone;
  auto it = by_parent_.find(parent_label);
  return it == by_parent_.end() ? kNone : it->second;
}

std::vector<NodeId> SchemaGraph::children_with_label(const Label& parent_label, const Label& l) const {
  std::vector<NodeId> out;
  for (NodeId id : children(parent_label)) {
    if (nodes_[id].label == l) out.push_back(id);
  }
  return out;
}

const std::vector<DcFactor>& SchemaGraph::factors(const Label& a) const {
  auto it = factors_.find(a);
  if (it == factors_.end()) throw PreconditionError("label '" + a + "' is not in the schema graph");
  return it->second;
}

std::string SchemaGraph::name(NodeId id) { return "u" + std::to_string(id); }

std::string SchemaGraph::to_text() const {
  std::string out;
  for (const auto& u : nodes_) {
    out += "node " + u.lambda_par.value_or("\xE2\x8A\xA5") + " " + std::to_string(u.pos) + " " + u.omega +
           " " + u.label + " df=" + (u.is_df ? "1" : "0") + " dfs=" + (u.is_dfs ? "1" : "0") + "\n";
  }
  return out;
}

std::string SchemaGraph::to_json() const {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const auto& u = nodes_[id];
    nlohmann::ordered_json j;
    j["id"] = name(id);
    j["lambda_par"] = u.lambda_par ? nlohmann::ordered_json(*u.lambda_par) : nlohmann::ordered_json();
    j["pos"] = u.pos;
    j["omega"] = std::string(1, u.omega);
    j["label"] = u.label;
    j["df"] = u.is_df;
    j["dfs"] = u.is_dfs;
    nodes.push_back(std::move(j));
    for (NodeId child : children(u.label)) edges.push_back({name(id), name(child)});
  }
  nlohmann::ordered_json doc;
  doc["root"] = dtd_.root;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

SchemaGraph build_schema_graph(const Dtd& d) { return SchemaGraph(d); }

}  // namespace xpathsat
