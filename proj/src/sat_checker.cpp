#include "xpathsat/sat_checker.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "xpathsat/error.hpp"

namespace xpathsat {

namespace {

bool all_single_char(const LabelPath& p) {
  return std::ranges::all_of(p, [](const Label& l) { return l.size() == 1; });
}

std::string node_set(const std::vector<NodeId>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += SchemaGraph::name(ids[i]);
  }
  return s + "}";
}

// pos(u) < pos(u') when ω(u) = "-", pos(u) ≤ pos(u') when ω(u) = "*";
// mirrored for preceding siblings.
bool sibling_admissible(const SgNode& u, const SgNode& v, Axis axis) {
  if (axis == Axis::FollSibling) return u.omega == '*' ? u.pos <= v.pos : u.pos < v.pos;
  return u.omega == '*' ? v.pos <= u.pos : v.pos < u.pos;
}

bool is_sibling_axis(Axis a) { return a == Axis::FollSibling || a == Axis::PrecSibling; }

}  // namespace

// ---------------------------------------------------------------------------
// eval1

Eval1State::Eval1State(const SchemaGraph& g) : graph_(&g) {
  levels_.push_back({SchemaGraph::kRoot});
  trie_.push_back({g.dtd().root, 0, true, std::nullopt, {}});
  at_.push_back(0);
}

std::size_t Eval1State::child_entry(std::size_t at, const Label& l, bool dfs) {
  auto it = trie_[at].children.find(l);
  if (it != trie_[at].children.end()) return it->second;
  std::size_t id = trie_.size();
  trie_.push_back({l, at, dfs, std::nullopt, {}});
  trie_[at].children.emplace(l, id);
  return id;
}

SibMap Eval1State::beta() const {
  SibMap out;
  for (std::size_t i = 0; i < trie_.size(); ++i) {
    if (!trie_[i].value) continue;
    LabelPath key;
    for (std::size_t j = i;; j = trie_[j].parent) {
      key.push_back(trie_[j].label);
      if (j == 0) break;
    }
    std::ranges::reverse(key);
    out.entries.emplace(std::move(key), SibEntry{*trie_[i].value, trie_[i].dfs});
  }
  return out;
}

LabelPath Eval1State::path() const {
  LabelPath p;
  for (const auto& level : levels_) p.push_back(graph_->node(level.front()).label);
  return p;
}

std::string Eval1State::to_string() const {
  std::string s = "(";
  for (const auto& level : levels_) s += node_set(level);
  return s + ", " + xpathsat::to_string(beta()) + ")";
}

struct Eval1Stepper {
  Eval1State& st;
  const SchemaGraph& g;

  const SgNode& head(std::size_t level) const { return g.node(st.levels_[level].front()); }

  StepOutcome fail(std::string reason) const { return {false, std::move(reason), std::nullopt}; }

  // Adds ψ to the entry of level `level` and checks that entry only.
  StepOutcome record(std::size_t level, const LabelSet& psi_value) {
    auto& entry = st.trie_[st.at_[level]];
    if (!entry.value) entry.value.emplace();
    entry.value->insert(psi_value.begin(), psi_value.end());
    if (!coverable(g.dtd().rule(entry.label), *entry.value)) {
      return {false, "inconsistent sibling constraints", xpathsat::to_string(st.beta())};
    }
    return {};
  }

  // Drops the entry of the context being left unless its path is DFS.
  void leave(std::size_t level) {
    auto& entry = st.trie_[st.at_[level]];
    if (!entry.dfs) entry.value.reset();
  }

  StepOutcome child(const Label& l) {
    std::size_t n = st.levels_.size() - 1;
    const Label& here = head(n).label;
    auto next = g.children_with_label(here, l);
    if (next.empty()) return fail("no child '" + l + "' under '" + here + "'");
    const SgNode& u = g.node(next.front());
    if (auto out = record(n, psi(u)); !out.ok) return out;
    bool dfs = st.trie_[st.at_[n]].dfs && u.is_dfs;
    st.levels_.push_back(std::move(next));
    st.at_.push_back(st.child_entry(st.at_[n], l, dfs));
    return {};
  }

  StepOutcome parent(const Label& l) {
    std::size_t n = st.levels_.size() - 1;
    if (n == 0) return fail("the root has no parent");
    if (head(n - 1).label != l) return fail("parent is '" + head(n - 1).label + "', not '" + l + "'");
    leave(n);
    st.levels_.pop_back();
    st.at_.pop_back();
    return {};
  }

  StepOutcome sibling(Axis axis, const Label& l) {
    std::size_t n = st.levels_.size() - 1;
    if (n == 0) return fail("the root has no siblings");
    std::vector<NodeId> next;
    for (NodeId v : g.children(head(n - 1).label)) {
      const SgNode& cand = g.node(v);
      if (cand.label != l) continue;
      bool ok = std::ranges::any_of(st.levels_[n], [&](NodeId u) {
        return sibling_admissible(g.node(u), cand, axis);
      });
      if (ok) next.push_back(v);
    }
    if (next.empty()) return fail("no admissible sibling '" + l + "'");
    const SgNode& u = g.node(next.front());
    leave(n);
    if (auto out = record(n - 1, psi(u)); !out.ok) return out;
    bool dfs = st.trie_[st.at_[n - 1]].dfs && u.is_dfs;
    st.levels_[n] = std::move(next);
    st.at_[n] = st.child_entry(st.at_[n - 1], l, dfs);
    return {};
  }
};

StepOutcome eval1_step(const XPathExpr& step, Eval1State& st, const SchemaGraph& g) {
  if (step.kind != XPathExpr::Kind::Step) throw PreconditionError("eval1_step expects an atomic step");
  Eval1Stepper s{st, g};
  switch (step.axis) {
    case Axis::Child:
      return s.child(step.label);
    case Axis::Parent:
      return s.parent(step.label);
    case Axis::FollSibling:
    case Axis::PrecSibling:
      return s.sibling(step.axis, step.label);
    default:
      throw UnsupportedFragment("eval1 does not handle axis " + to_string(step.axis));
  }
}

namespace {

void flatten_steps(const XPathExpr& p, std::vector<const XPathExpr*>& out) {
  if (p.kind == XPathExpr::Kind::Seq) {
    flatten_steps(*p.left, out);
    flatten_steps(*p.right, out);
  } else if (p.kind == XPathExpr::Kind::Step) {
    out.push_back(&p);
  } else {
    throw UnsupportedFragment("eval1 handles neither union nor qualifiers");
  }
}

}  // namespace

Verdict eval1(const XPathExpr& p, const SchemaGraph& g, bool trace) {
  std::vector<const XPathExpr*> steps;
  flatten_steps(p, steps);
  Verdict v;
  v.algorithm = "eval1";
  Eval1State st(g);
  if (trace) v.trace.push_back(st.to_string());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    StepOutcome out = eval1_step(*steps[i], st, g);
    if (!out.ok) {
      v.failed_step = i;
      v.reason = to_string(*steps[i], XPathStyle::Arrows) + ": " + out.reason;
      v.inconsistent_map = out.inconsistent;
      if (trace) v.trace.push_back("fail at " + to_string(*steps[i], XPathStyle::Arrows) + ": " +
                                   out.reason + (out.inconsistent ? " " + *out.inconsistent : ""));
      return v;
    }
    if (trace) v.trace.push_back(st.to_string());
  }
  v.sat = true;
  v.final_state = st.to_string();
  return v;
}

// ---------------------------------------------------------------------------
// eval2

std::string Eval2Tuple::to_string() const {
  return "((" + SchemaGraph::name(start) + "," + xpathsat::to_string(pre) + "),(" + SchemaGraph::name(end) +
         "," + xpathsat::to_string(post) + ")," + xpathsat::to_string(rel, all_single_char(rel)) + ")";
}

std::string to_string(const Eval2Set& tuples) {
  std::vector<const Eval2Tuple*> sorted;
  for (const auto& t : tuples) sorted.push_back(&t);
  std::ranges::stable_sort(sorted, [](const Eval2Tuple* a, const Eval2Tuple* b) {
    return std::tie(a->start, a->end) < std::tie(b->start, b->end);
  });
  std::string s = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) s += ", ";
    s += sorted[i]->to_string();
  }
  return s + "}";
}

namespace {

class Eval2Runner {
 public:
  Eval2Runner(const SchemaGraph& g, std::vector<Eval2Trace>* trace) : g_(g), trace_(trace) {}

  Eval2Set run(const XPathExpr& p) {
    Eval2Set out;
    switch (p.kind) {
      case XPathExpr::Kind::Step:
        out = atom(p);
        break;
      case XPathExpr::Kind::Seq: {
        Eval2Set first = run(*p.left);
        out = compose(first, run(*p.right));
        break;
      }
      case XPathExpr::Kind::Qual: {
        Eval2Set base = run(*p.left);
        if (p.qual->kind != Qualifier::Kind::Path) {
          throw UnsupportedFragment("eval2 handles only conjunctive qualifiers");
        }
        out = filter(base, run(*p.qual->path));
        break;
      }
      case XPathExpr::Kind::Union:
        throw UnsupportedFragment("eval2 does not handle union");
    }
    if (trace_) trace_->push_back({to_string(p, XPathStyle::Arrows), out});
    return out;
  }

 private:
  static SibMap relative() {
    SibMap m;
    m.mode = SibMap::Mode::Relative;
    return m;
  }

  Eval2Set atom(const XPathExpr& p) {
    Eval2Set out;
    if (p.axis == Axis::Child) {
      for (NodeId u = 0; u < g_.size(); ++u) {
        const SgNode& nu = g_.node(u);
        for (NodeId v : g_.children_with_label(nu.label, p.label)) {
          Eval2Tuple t;
          t.start = u;
          t.pre = relative();
          t.end = v;
          t.post = relative();
          t.post.add({nu.label}, psi(g_.node(v)), nu.is_dfs);
          t.rel = {nu.label};
          t.rel_dfs = nu.is_dfs;
          t.anchored = true;
          out.insert(std::move(t));
        }
      }
      return out;
    }
    if (!is_sibling_axis(p.axis)) throw UnsupportedFragment("eval2 does not handle axis " + to_string(p.axis));
    for (NodeId u = 0; u < g_.size(); ++u) {
      const SgNode& nu = g_.node(u);
      if (!nu.lambda_par) continue;
      for (NodeId v : g_.children(*nu.lambda_par)) {
        const SgNode& nv = g_.node(v);
        if (nv.label != p.label || !sibling_admissible(nu, nv, p.axis)) continue;
        Eval2Tuple t;
        t.start = u;
        t.pre = relative();
        t.pre.add({}, psi(nu), true);
        t.end = v;
        t.post = relative();
        t.post.add({}, psi(nu), true);
        t.post.add({}, psi(nv), true);
        t.rel = {};
        t.rel_dfs = true;
        t.anchored = false;
        if (consistent(t.post, g_.dtd())) out.insert(std::move(t));
      }
    }
    return out;
  }

  static std::map<NodeId, std::vector<const Eval2Tuple*>> by_start(const Eval2Set& ts) {
    std::map<NodeId, std::vector<const Eval2Tuple*>> idx;
    for (const auto& t : ts) idx[t.start].push_back(&t);
    return idx;
  }

  LabelPath extend(LabelPath p, const LabelPath& q) const {
    p.insert(p.end(), q.begin(), q.end());
    return p;
  }

  Eval2Set compose(const Eval2Set& first, const Eval2Set& second) {
    auto idx = by_start(second);
    Eval2Set out;
    for (const auto& t1 : first) {
      auto it = idx.find(t1.end);
      if (it == idx.end()) continue;
      for (const Eval2Tuple* t2 : it->second) {
        // Moving to a sibling leaves t1's end node, so its own entry goes.
        SibMap kept = t2->anchored ? t1.post : restrict_dfs(t1.post, t1.rel);
        SibMap joined = join(kept, shift(t2->post, t1.rel, t1.rel_dfs));
        if (!consistent(joined, g_.dtd())) continue;
        Eval2Tuple t;
        t.start = t1.start;
        t.pre = t1.pre;
        t.end = t2->end;
        t.rel = extend(t1.rel, t2->rel);
        t.rel_dfs = t1.rel_dfs && t2->rel_dfs;
        t.anchored = t1.anchored;
        LabelPath here = t.rel;
        here.push_back(g_.node(t.end).label);
        t.post = restrict_dfs(joined, here);
        out.insert(std::move(t));
      }
    }
    return out;
  }

  Eval2Set filter(const Eval2Set& base, const Eval2Set& qual) {
    auto idx = by_start(qual);
    Eval2Set out;
    for (const auto& t1 : base) {
      auto it = idx.find(t1.end);
      if (it == idx.end()) continue;
      const Label& here_label = g_.node(t1.end).label;
      for (const Eval2Tuple* t2 : it->second) {
        // The qualifier's own frame: back at its context node.
        LabelPath ctx = t2->anchored ? LabelPath{here_label} : LabelPath{};
        SibMap back = restrict_dfs(t2->post, ctx);
        SibMap joined = join(t1.post, shift(back, t1.rel, t1.rel_dfs));
        if (!consistent(joined, g_.dtd())) continue;
        Eval2Tuple t = t1;
        LabelPath here = t1.rel;
        here.push_back(here_label);
        t.post = restrict_dfs(joined, here);
        out.insert(std::move(t));
      }
    }
    return out;
  }

  const SchemaGraph& g_;
  std::vector<Eval2Trace>* trace_;
};

}  // namespace

Eval2Set eval2(const XPathExpr& p, const SchemaGraph& g, std::vector<Eval2Trace>* trace) {
  Fragment f = fragment_of(p);
  if (f.uses_union || f.qualifier_disjunction || f.axes.contains(Axis::Parent) ||
      f.axes.contains(Axis::DescOrSelf) || f.axes.contains(Axis::AncOrSelf)) {
    throw UnsupportedFragment("eval2 does not handle " + f.describe());
  }
  ExprPtr normalized = normalize_qualifiers(std::make_shared<XPathExpr>(p));
  return Eval2Runner(g, trace).run(*normalized);
}

bool eval2_accepts(const Eval2Set& tuples) {
  return std::ranges::any_of(tuples, [](const Eval2Tuple& t) {
    return t.start == SchemaGraph::kRoot &&
           std::ranges::all_of(t.pre.entries, [](const auto& kv) { return kv.second.labels.empty(); });
  });
}

// ---------------------------------------------------------------------------
// Entry points

Route route(const XPathExpr& p) {
  Fragment f = fragment_of(p);
  auto within = [&](std::initializer_list<Axis> allowed) {
    return std::ranges::all_of(f.axes, [&](Axis a) { return std::ranges::find(allowed, a) != allowed.end(); });
  };
  if (!f.uses_union && !f.uses_qualifier &&
      within({Axis::Child, Axis::Parent, Axis::FollSibling, Axis::PrecSibling})) {
    return Route::Eval1;
  }
  if (!f.uses_union && !f.qualifier_disjunction &&
      within({Axis::Child, Axis::FollSibling, Axis::PrecSibling})) {
    return Route::Eval2;
  }
  throw UnsupportedFragment("no polynomial procedure for fragment " + f.describe());
}

Verdict satisfiable(const XPathExpr& p, const SchemaGraph& g, bool trace) {
  if (route(p) == Route::Eval1) return eval1(p, g, trace);
  std::vector<Eval2Trace> steps;
  Eval2Set result = eval2(p, g, trace ? &steps : nullptr);
  Verdict v;
  v.algorithm = "eval2";
  v.sat = eval2_accepts(result);
  v.final_state = to_string(result);
  if (!v.sat) v.reason = "no tuple starts at the root with an empty requirement";
  for (const auto& s : steps) v.trace.push_back("eval2(" + s.expr + ") = " + to_string(s.tuples));
  return v;
}

Verdict satisfiable(const XPathExpr& p, const Dtd& d, bool trace) {
  SchemaGraph g(delta_dtd(d));
  return satisfiable(p, g, trace);
}

}  // namespace xpathsat
