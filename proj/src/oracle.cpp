#include "xpathsat/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>

#include "xpathsat/automaton.hpp"
#include "xpathsat/error.hpp"

namespace xpathsat {

using Kind = ContentModel::Kind;

// ---------------------------------------------------------------------------
// Trees

DocTree::DocTree(Label root_label) { nodes_.push_back({std::move(root_label), std::nullopt, {}}); }

DocTree::Id DocTree::add_child(Id parent, Label label) {
  Id id = nodes_.size();
  nodes_.push_back({std::move(label), parent, {}});
  nodes_.at(parent).children.push_back(id);
  return id;
}

std::size_t DocTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (Id v = 1; v < nodes_.size(); ++v) {
    d[v] = d[*nodes_[v].parent] + 1;  // parents precede children
    best = std::max(best, d[v]);
  }
  return best;
}

Word DocTree::children_word(Id v) const {
  Word w;
  for (Id c : nodes_.at(v).children) w.push_back(nodes_[c].label);
  return w;
}

LabelPath DocTree::label_path(Id v) const {
  LabelPath p;
  for (std::optional<Id> cur = v; cur; cur = nodes_.at(*cur).parent) p.push_back(nodes_[*cur].label);
  std::ranges::reverse(p);
  return p;
}

namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  DocTree parse() {
    DocTree t(label());
    body(t, 0);
    skip_ws();
    if (pos_ < text_.size()) throw SyntaxError("unexpected input in tree term", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Label label() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_' || text_[pos_] == '.' || text_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) throw SyntaxError("expected a label in tree term", pos_);
    return Label(text_.substr(start, pos_ - start));
  }

  void body(DocTree& t, DocTree::Id v) {
    if (!accept('(')) return;
    if (accept(')')) return;
    do {
      DocTree::Id c = t.add_child(v, label());
      body(t, c);
    } while (accept(','));
    if (!accept(')')) throw SyntaxError("expected ')' in tree term", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_tree(const DocTree& t, DocTree::Id v, std::string& out) {
  out += t.node(v).label;
  const auto& kids = t.node(v).children;
  if (kids.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ',';
    print_tree(t, kids[i], out);
  }
  out += ')';
}

}  // namespace

DocTree parse_tree(std::string_view text) { return TreeParser(text).parse(); }

std::string to_string(const DocTree& t) {
  std::string out;
  if (!t.empty()) print_tree(t, 0, out);
  return out;
}

bool conforms(const DocTree& t, const Dtd& d) {
  if (t.empty() || t.node(0).label != d.root) return false;
  std::map<Label, PositionAutomaton> automata;
  for (DocTree::Id v = 0; v < t.size(); ++v) {
    const Label& a = t.node(v).label;
    auto rule = d.rules.find(a);
    if (rule == d.rules.end()) return false;
    auto it = automata.try_emplace(a, rule->second).first;
    const PositionAutomaton& aut = it->second;
    auto states = aut.initial();
    for (DocTree::Id c : t.node(v).children) states = aut.step(states, t.node(c).label);
    if (!aut.accepts(states)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// XPath semantics

namespace {

using Marks = std::vector<char>;

class TreeEvaluator {
 public:
  explicit TreeEvaluator(const DocTree& t) : t_(t), index_(t.size(), 0) {
    for (DocTree::Id v = 0; v < t.size(); ++v) {
      const auto& kids = t.node(v).children;
      for (std::size_t i = 0; i < kids.size(); ++i) index_[kids[i]] = i;
    }
  }

  Marks eval(const XPathExpr& p, const Marks& in) const {
    switch (p.kind) {
      case XPathExpr::Kind::Step:
        return step(p.axis, p.label, in);
      case XPathExpr::Kind::Seq:
        return eval(*p.right, eval(*p.left, in));
      case XPathExpr::Kind::Union: {
        Marks a = eval(*p.left, in);
        Marks b = eval(*p.right, in);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
        return a;
      }
      case XPathExpr::Kind::Qual: {
        Marks a = eval(*p.left, in);
        for (DocTree::Id v = 0; v < a.size(); ++v) {
          if (a[v] && !holds(*p.qual, v)) a[v] = 0;
        }
        return a;
      }
    }
    return Marks(t_.size(), 0);
  }

  bool holds(const Qualifier& q, DocTree::Id v) const {
    switch (q.kind) {
      case Qualifier::Kind::Path: {
        Marks ctx(t_.size(), 0);
        ctx[v] = 1;
        Marks out = eval(*q.path, ctx);
        return std::ranges::any_of(out, [](char c) { return c != 0; });
      }
      case Qualifier::Kind::And:
        return holds(*q.left, v) && holds(*q.right, v);
      case Qualifier::Kind::Or:
        return holds(*q.left, v) || holds(*q.right, v);
    }
    return false;
  }

 private:
  void mark(Marks& out, DocTree::Id v, const Label& l) const {
    if (t_.node(v).label == l) out[v] = 1;
  }

  void mark_subtree(Marks& out, DocTree::Id v, const Label& l) const {
    mark(out, v, l);
    for (DocTree::Id c : t_.node(v).children) mark_subtree(out, c, l);
  }

  Marks step(Axis axis, const Label& l, const Marks& in) const {
    Marks out(t_.size(), 0);
    for (DocTree::Id v = 0; v < in.size(); ++v) {
      if (!in[v]) continue;
      const auto& node = t_.node(v);
      switch (axis) {
        case Axis::Child:
          for (DocTree::Id c : node.children) mark(out, c, l);
          break;
        case Axis::Parent:
          if (node.parent) mark(out, *node.parent, l);
          break;
        case Axis::DescOrSelf:
          mark_subtree(out, v, l);
          break;
        case Axis::AncOrSelf:
          for (std::optional<DocTree::Id> cur = v; cur; cur = t_.node(*cur).parent) mark(out, *cur, l);
          break;
        case Axis::FollSibling:
        case Axis::PrecSibling: {
          if (!node.parent) break;
          const auto& sibs = t_.node(*node.parent).children;
          if (axis == Axis::FollSibling) {
            for (std::size_t i = index_[v] + 1; i < sibs.size(); ++i) mark(out, sibs[i], l);
          } else {
            for (std::size_t i = 0; i < index_[v]; ++i) mark(out, sibs[i], l);
          }
          break;
        }
      }
    }
    return out;
  }

  const DocTree& t_;
  std::vector<std::size_t> index_;
};

}  // namespace

std::vector<DocTree::Id> eval_xpath(const DocTree& t, const XPathExpr& p, const std::vector<DocTree::Id>& context) {
  Marks in(t.size(), 0);
  for (DocTree::Id v : context) in.at(v) = 1;
  Marks out = TreeEvaluator(t).eval(p, in);
  std::vector<DocTree::Id> ids;
  for (DocTree::Id v = 0; v < out.size(); ++v) {
    if (out[v]) ids.push_back(v);
  }
  return ids;
}

bool eval_xpath_full(const DocTree& t, const XPathExpr& p) {
  if (t.empty()) return false;
  return !eval_xpath(t, p, {0}).empty();
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

using WordSet = std::set<Word>;

WordSet concat_sets(const WordSet& a, const WordSet& b) {
  WordSet out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Word w = x;
      w.insert(w.end(), y.begin(), y.end());
      out.insert(std::move(w));
    }
  }
  return out;
}

WordSet capped(const ContentModel& e, std::size_t rep) {
  switch (e.kind()) {
    case Kind::Epsilon:
      return {Word{}};
    case Kind::Symbol:
      return {Word{e.label()}};
    case Kind::Concat: {
      WordSet acc{Word{}};
      for (const auto& item : e.items()) acc = concat_sets(acc, capped(item, rep));
      return acc;
    }
    case Kind::Disj: {
      WordSet acc;
      for (const auto& item : e.items()) acc.merge(capped(item, rep));
      return acc;
    }
    case Kind::Opt: {
      WordSet acc = capped(e.body(), rep);
      acc.insert(Word{});
      return acc;
    }
    case Kind::Star:
    case Kind::Plus: {
      WordSet body = capped(e.body(), rep);
      WordSet power{Word{}};
      WordSet acc;
      if (e.is(Kind::Star)) acc.insert(Word{});
      for (std::size_t i = 1; i <= rep; ++i) {
        power = concat_sets(power, body);
        acc.insert(power.begin(), power.end());
      }
      return acc;
    }
    case Kind::Hash:
      return capped(expand_hash(e), rep);
  }
  return {};
}

bool by_length_then_lex(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool is_subsequence(const Word& small, const Word& big) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < big.size() && i < small.size(); ++j) {
    if (big[j] == small[i]) ++i;
  }
  return i == small.size();
}

struct SubTree {
  Label label;
  std::vector<std::shared_ptr<const SubTree>> kids;
  std::size_t size = 1;
  std::string term;
};
using SubTreePtr = std::shared_ptr<const SubTree>;

SubTreePtr make_subtree(const Label& label, std::vector<SubTreePtr> kids) {
  auto t = std::make_shared<SubTree>();
  t->label = label;
  t->term = label;
  if (!kids.empty()) {
    t->term += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) t->term += ',';
      t->term += kids[i]->term;
      t->size += kids[i]->size;
    }
    t->term += ')';
  }
  t->kids = std::move(kids);
  return t;
}

void append_subtree(DocTree& t, DocTree::Id at, const SubTree& s) {
  for (const auto& k : s.kids) append_subtree(t, t.add_child(at, k->label), *k);
}

DocTree materialize(const SubTree& s) {
  DocTree t(s.label);
  append_subtree(t, 0, s);
  return t;
}

// T1 is T2 with some subtrees deleted.
bool embeds(const SubTree& t1, const SubTree& t2) {
  if (t1.label != t2.label || t1.size > t2.size) return false;
  std::size_t j = 0;
  for (const auto& k : t1.kids) {
    while (j < t2.kids.size() && !embeds(*k, *t2.kids[j])) ++j;
    if (j == t2.kids.size()) return false;
    ++j;
  }
  return true;
}

class Enumerator {
 public:
  Enumerator(const Dtd& d, const TreeBounds& bounds) : d_(d), bounds_(bounds) {}

  void charge(std::size_t cost = 1) {
    spent_ += cost;
    if (spent_ > bounds_.budget) throw BudgetExhausted("tree search budget exhausted");
  }

  SubTreePtr build(const Label& label, std::vector<SubTreePtr> kids) {
    charge(1 + kids.size());
    return make_subtree(label, std::move(kids));
  }

  DocTree visit_cost(const SubTree& t) {
    charge(t.size);
    return materialize(t);
  }

  const std::vector<Word>& words(const Label& a) {
    auto it = words_.find(a);
    if (it != words_.end()) return it->second;
    std::vector<Word> ws;
    if (auto rule = d_.rules.find(a); rule != d_.rules.end()) {
      WordSet s = capped(rule->second, bounds_.rep);
      ws.assign(s.begin(), s.end());
      std::ranges::sort(ws, by_length_then_lex);
    }
    return words_.emplace(a, std::move(ws)).first->second;
  }

  // Largest node count of a tree rooted at `a` within `depth`; 0 if none.
  std::size_t max_size(const Label& a, std::size_t depth) {
    auto key = std::make_pair(a, depth);
    if (auto it = max_size_.find(key); it != max_size_.end()) return it->second;
    std::size_t best = 0;
    for (const auto& w : words(a)) {
      if (depth == 0 && !w.empty()) continue;
      std::size_t total = 1;
      for (const auto& b : w) {
        std::size_t s = max_size(b, depth - 1);
        if (s == 0) {
          total = 0;
          break;
        }
        total += s;
      }
      best = std::max(best, total);
    }
    return max_size_[key] = best;
  }

  // All trees rooted at `a` within `depth` with exactly `n` nodes, sorted by term.
  const std::vector<SubTreePtr>& exact(const Label& a, std::size_t depth, std::size_t n) {
    auto key = std::make_tuple(a, depth, n);
    if (auto it = exact_.find(key); it != exact_.end()) return it->second;
    std::vector<SubTreePtr> out;
    if (n >= 1 && n <= max_size(a, depth)) {
      for (const auto& w : words(a)) {
        if (w.size() > n - 1 || (depth == 0 && !w.empty())) continue;
        if (w.empty()) {
          if (n == 1) out.push_back(build(a, {}));
          continue;
        }
        std::vector<SubTreePtr> kids;
        fill(a, w, 0, depth - 1, n - 1, kids, out);
      }
      std::ranges::sort(out, [](const SubTreePtr& x, const SubTreePtr& y) { return x->term < y->term; });
    }
    return exact_[key] = std::move(out);
  }

  // Trees built from maximal choices, without those embedding into another.
  const std::vector<SubTreePtr>& maximal(const Label& a, std::size_t depth) {
    auto key = std::make_pair(a, depth);
    if (auto it = maximal_.find(key); it != maximal_.end()) return it->second;
    std::vector<SubTreePtr> all;
    for (const auto& w : maximal_words(a, depth)) {
      std::vector<const std::vector<SubTreePtr>*> choices;
      for (const auto& b : w) choices.push_back(&maximal(b, depth - 1));
      for_each_product(choices, [&](std::vector<SubTreePtr> kids) {
        all.push_back(build(a, std::move(kids)));
        return true;
      });
    }
    std::vector<SubTreePtr> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
        if (i == j) continue;
        charge(std::min(all[i]->size, all[j]->size));
        // Of two mutually embeddable trees (equal ones) keep the first.
        dominated = embeds(*all[i], *all[j]) && (j < i || !embeds(*all[j], *all[i]));
      }
      if (!dominated) out.push_back(all[i]);
    }
    return maximal_[key] = std::move(out);
  }

  std::vector<Word> maximal_words(const Label& a, std::size_t depth) {
    std::vector<Word> realizable;
    for (const auto& w : words(a)) {
      if (depth == 0 && !w.empty()) continue;
      bool ok = std::ranges::all_of(w, [&](const Label& b) { return max_size(b, depth - 1) > 0; });
      if (ok) realizable.push_back(w);
    }
    std::vector<Word> out;
    for (const auto& w : realizable) {
      bool dominated = std::ranges::any_of(realizable, [&](const Word& v) {
        return v.size() > w.size() && is_subsequence(w, v);
      });
      if (!dominated) out.push_back(w);
    }
    return out;
  }

  template <typename Visit>
  static bool for_each_product(const std::vector<const std::vector<SubTreePtr>*>& choices, Visit&& visit) {
    for (const auto* c : choices) {
      if (c->empty()) return true;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    for (;;) {
      std::vector<SubTreePtr> kids;
      for (std::size_t i = 0; i < choices.size(); ++i) kids.push_back((*choices[i])[idx[i]]);
      if (!visit(std::move(kids))) return false;
      std::size_t i = choices.size();
      while (i > 0) {
        --i;
        if (++idx[i] < choices[i]->size()) break;
        idx[i] = 0;
        if (i == 0) return true;
      }
      if (choices.empty()) return true;
    }
  }

 private:
  void fill(const Label& a, const Word& w, std::size_t i, std::size_t depth, std::size_t remaining,
            std::vector<SubTreePtr>& kids, std::vector<SubTreePtr>& out) {
    if (i == w.size()) {
      if (remaining == 0) out.push_back(build(a, kids));
      return;
    }
    std::size_t rest = w.size() - i - 1;  // each later child needs at least one node
    if (remaining < rest + 1) return;
    for (std::size_t s = 1; s + rest <= remaining; ++s) {
      for (const auto& t : exact(w[i], depth, s)) {
        kids.push_back(t);
        fill(a, w, i + 1, depth, remaining - s, kids, out);
        kids.pop_back();
      }
    }
  }

  const Dtd& d_;
  TreeBounds bounds_;
  std::map<Label, std::vector<Word>> words_;
  std::map<std::pair<Label, std::size_t>, std::size_t> max_size_;
  std::map<std::tuple<Label, std::size_t, std::size_t>, std::vector<SubTreePtr>> exact_;
  std::map<std::pair<Label, std::size_t>, std::vector<SubTreePtr>> maximal_;
  std::size_t spent_ = 0;
};

void for_each_tree_upto(const Dtd& d, const TreeBounds& bounds, std::size_t max_nodes,
                        const std::function<bool(const DocTree&)>& visit) {
  Enumerator en(d, bounds);
  std::size_t limit = std::min(max_nodes, en.max_size(d.root, bounds.depth));
  for (std::size_t n = 1; n <= limit; ++n) {
    for (const auto& t : en.exact(d.root, bounds.depth, n)) {
      if (!visit(en.visit_cost(*t))) return;
    }
  }
}

}  // namespace

std::vector<Word> capped_words(const ContentModel& e, std::size_t rep) {
  WordSet s = capped(e, rep);
  std::vector<Word> out(s.begin(), s.end());
  std::ranges::sort(out, by_length_then_lex);
  return out;
}

void for_each_tree(const Dtd& d, const TreeBounds& bounds, const std::function<bool(const DocTree&)>& visit) {
  for_each_tree_upto(d, bounds, static_cast<std::size_t>(-1), visit);
}

std::vector<DocTree> enumerate_trees(const Dtd& d, const TreeBounds& bounds) {
  std::vector<DocTree> out;
  for_each_tree(d, bounds, [&](const DocTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

void for_each_maximal_tree(const Dtd& d, const TreeBounds& bounds,
                           const std::function<bool(const DocTree&)>& visit) {
  Enumerator en(d, bounds);
  if (en.max_size(d.root, bounds.depth) == 0) return;
  // The root level is streamed; only the levels below are materialized.
  for (const auto& w : en.maximal_words(d.root, bounds.depth)) {
    std::vector<const std::vector<SubTreePtr>*> choices;
    for (const auto& b : w) choices.push_back(&en.maximal(b, bounds.depth - 1));
    bool go_on = Enumerator::for_each_product(choices, [&](std::vector<SubTreePtr> kids) {
      return visit(en.visit_cost(*en.build(d.root, std::move(kids))));
    });
    if (!go_on) return;
  }
}

std::size_t default_rep(const XPathExpr& p) { return std::max<std::size_t>(2, size(p)); }

OracleResult oracle_satisfiable(const XPathExpr& p, const Dtd& d, const TreeBounds& bounds, bool smallest_witness) {
  if (bounds.depth == 0 || bounds.rep == 0) throw PreconditionError("oracle bounds must be positive");
  OracleResult r;
  try {
    for_each_maximal_tree(d, bounds, [&](const DocTree& t) {
      ++r.trees_examined;
      if (!eval_xpath_full(t, p)) return true;
      r.sat = true;
      r.witness = t;
      return false;
    });
  } catch (const BudgetExhausted&) {
    r.exhausted = true;
    return r;
  }
  if (r.sat && smallest_witness) {
    std::size_t cap = r.witness->size();
    try {
      for_each_tree_upto(d, bounds, cap, [&](const DocTree& t) {
        ++r.trees_examined;
        if (!eval_xpath_full(t, p)) return true;
        r.witness = t;
        return false;
      });
    } catch (const BudgetExhausted&) {
      // Keep the first witness; it is valid, only not the smallest.
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// SG mappings

namespace {

// Non-decreasing factor positions for a children word.
void assign_positions(const std::vector<DcFactor>& fs, const Word& w, std::size_t j, std::size_t from,
                      std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (j == w.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < fs.size(); ++i) {
    const DcFactor& f = fs[i];
    if (!f.labels.contains(w[j])) continue;
    // A single-symbol factor takes at most one child.
    if (f.omega == '-' && j > 0 && cur.back() == f.position) continue;
    cur.push_back(f.position);
    assign_positions(fs, w, j + 1, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<SgMapping> compute_sg_mapping(const DocTree& t, const SchemaGraph& g) {
  if (t.empty() || t.node(0).label != g.dtd().root) return {};
  // Per node: list of candidate schema nodes for each child.
  std::vector<std::vector<std::vector<NodeId>>> options(t.size());
  for (DocTree::Id v = 0; v < t.size(); ++v) {
    const auto& node = t.node(v);
    if (node.children.empty()) continue;
    const auto& parent_nodes = g.children(node.label);
    if (parent_nodes.empty()) return {};
    Word w = t.children_word(v);
    std::vector<std::vector<std::size_t>> assignments;
    std::vector<std::size_t> cur;
    assign_positions(g.factors(node.label), w, 0, 0, cur, assignments);
    if (assignments.empty()) return {};
    for (const auto& a : assignments) {
      std::vector<NodeId> ids;
      for (std::size_t j = 0; j < w.size(); ++j) {
        for (NodeId u : parent_nodes) {
          if (g.node(u).pos == a[j] && g.node(u).label == w[j]) ids.push_back(u);
        }
      }
      options[v].push_back(std::move(ids));
    }
  }
  std::vector<SgMapping> out{SgMapping(t.size(), SchemaGraph::kRoot)};
  for (DocTree::Id v = 0; v < t.size(); ++v) {
    if (options[v].empty()) continue;
    std::vector<SgMapping> next;
    for (const auto& partial : out) {
      for (const auto& ids : options[v]) {
        SgMapping m = partial;
        const auto& kids = t.node(v).children;
        for (std::size_t j = 0; j < kids.size(); ++j) m[kids[j]] = ids[j];
        next.push_back(std::move(m));
      }
    }
    out = std::move(next);
  }
  return out;
}

bool beta_satisfied(const DocTree& t, const SgMapping& theta, const SibMap& b, const SchemaGraph& g) {
  if (b.mode != SibMap::Mode::Absolute) throw PreconditionError("beta_satisfied needs an absolute map");
  std::vector<LabelPath> paths;
  for (DocTree::Id v = 0; v < t.size(); ++v) paths.push_back(t.label_path(v));
  return std::ranges::all_of(b.entries, [&](const auto& kv) {
    for (DocTree::Id w = 0; w < t.size(); ++w) {
      if (paths[w] != kv.first) continue;
      LabelSet df_children;
      for (DocTree::Id c : t.node(w).children) {
        if (g.node(theta.at(c)).is_df) df_children.insert(t.node(c).label);
      }
      if (std::ranges::includes(df_children, kv.second.labels)) return true;
    }
    return false;
  });
}

}  // namespace xpathsat
