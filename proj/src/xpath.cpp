#include "xpathsat/xpath.hpp"

#include <cctype>
#include <utility>

#include "xpathsat/error.hpp"

namespace xpathsat {

ExprPtr XPathExpr::step(Axis axis, Label label) {
  auto e = std::make_shared<XPathExpr>();
  e->kind = Kind::Step;
  e->axis = axis;
  e->label = std::move(label);
  return e;
}

namespace {

ExprPtr binary(XPathExpr::Kind kind, ExprPtr p1, ExprPtr p2) {
  auto e = std::make_shared<XPathExpr>();
  e->kind = kind;
  e->left = std::move(p1);
  e->right = std::move(p2);
  return e;
}

QualPtr qbinary(Qualifier::Kind kind, QualPtr q1, QualPtr q2) {
  auto q = std::make_shared<Qualifier>();
  q->kind = kind;
  q->left = std::move(q1);
  q->right = std::move(q2);
  return q;
}

}  // namespace

ExprPtr XPathExpr::seq(ExprPtr p1, ExprPtr p2) { return binary(Kind::Seq, std::move(p1), std::move(p2)); }
ExprPtr XPathExpr::alt(ExprPtr p1, ExprPtr p2) { return binary(Kind::Union, std::move(p1), std::move(p2)); }

ExprPtr XPathExpr::filter(ExprPtr p, QualPtr q) {
  auto e = std::make_shared<XPathExpr>();
  e->kind = Kind::Qual;
  e->left = std::move(p);
  e->qual = std::move(q);
  return e;
}

QualPtr Qualifier::of(ExprPtr p) {
  auto q = std::make_shared<Qualifier>();
  q->kind = Kind::Path;
  q->path = std::move(p);
  return q;
}

QualPtr Qualifier::conj(QualPtr q1, QualPtr q2) { return qbinary(Kind::And, std::move(q1), std::move(q2)); }
QualPtr Qualifier::disj(QualPtr q1, QualPtr q2) { return qbinary(Kind::Or, std::move(q1), std::move(q2)); }

bool operator==(const XPathExpr& a, const XPathExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case XPathExpr::Kind::Step:
      return a.axis == b.axis && a.label == b.label;
    case XPathExpr::Kind::Seq:
    case XPathExpr::Kind::Union:
      return *a.left == *b.left && *a.right == *b.right;
    case XPathExpr::Kind::Qual:
      return *a.left == *b.left && *a.qual == *b.qual;
  }
  return false;
}

bool operator==(const Qualifier& a, const Qualifier& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Qualifier::Kind::Path) return *a.path == *b.path;
  return *a.left == *b.left && *a.right == *b.right;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_symbol_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

struct AxisSpelling {
  std::string_view text;
  Axis axis;
};

// Longer spellings first so that prefixes do not shadow them.
constexpr AxisSpelling kArrowAxes[] = {
    {"\xE2\x86\x93*", Axis::DescOrSelf},           // ↓*
    {"\xE2\x86\x91*", Axis::AncOrSelf},            // ↑*
    {"\xE2\x86\x92\xE2\x81\xBA", Axis::FollSibling},  // →⁺
    {"\xE2\x86\x90\xE2\x81\xBA", Axis::PrecSibling},  // ←⁺
    {"\xE2\x86\x92+", Axis::FollSibling},          // →+
    {"\xE2\x86\x90+", Axis::PrecSibling},          // ←+
    {"\xE2\x86\x93", Axis::Child},                 // ↓
    {"\xE2\x86\x91", Axis::Parent},                // ↑
};

constexpr AxisSpelling kNamedAxes[] = {
    {"child", Axis::Child},
    {"parent", Axis::Parent},
    {"desc-or-self", Axis::DescOrSelf},
    {"descendant-or-self", Axis::DescOrSelf},
    {"anc-or-self", Axis::AncOrSelf},
    {"ancestor-or-self", Axis::AncOrSelf},
    {"fsib", Axis::FollSibling},
    {"following-sibling", Axis::FollSibling},
    {"psib", Axis::PrecSibling},
    {"preceding-sibling", Axis::PrecSibling},
};

class XPathParser {
 public:
  explicit XPathParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_ws();
    if (at_end()) fail("empty XPath expression");
    ExprPtr p = parse_pathexpr();
    skip_ws();
    if (!at_end()) fail("unexpected input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool lookahead(std::string_view s) {
    skip_ws();
    return text_.substr(pos_).starts_with(s);
  }

  bool accept(std::string_view s) {
    if (!lookahead(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  bool keyword(std::string_view word) {
    if (!lookahead(word)) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && is_symbol_char(text_[end])) return false;
    pos_ = end;
    return true;
  }

  bool accept_union() { return accept("|u|") || accept("\xE2\x88\xAA") || accept("|"); }

  ExprPtr parse_pathexpr() {
    ExprPtr p = parse_path();
    while (accept_union()) p = XPathExpr::alt(std::move(p), parse_path());
    return p;
  }

  ExprPtr parse_path() {
    ExprPtr p = parse_step();
    while (accept("/")) p = XPathExpr::seq(std::move(p), parse_step());
    return p;
  }

  ExprPtr parse_step() {
    ExprPtr p;
    if (accept("(")) {
      p = parse_pathexpr();
      expect(")");
    } else {
      Axis axis = parse_axis();
      expect("::");
      skip_ws();
      if (at_end() || !is_symbol_start(text_[pos_])) fail("expected a label");
      std::size_t start = pos_;
      while (!at_end() && is_symbol_char(text_[pos_])) ++pos_;
      p = XPathExpr::step(axis, Label(text_.substr(start, pos_ - start)));
    }
    while (accept("[")) {
      QualPtr q = parse_qexpr();
      expect("]");
      p = XPathExpr::filter(std::move(p), std::move(q));
    }
    return p;
  }

  Axis parse_axis() {
    skip_ws();
    for (const auto& a : kArrowAxes) {
      if (accept(a.text)) return a.axis;
    }
    std::size_t start = pos_;
    while (!at_end() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    for (const auto& a : kNamedAxes) {
      if (a.text == name) return a.axis;
    }
    pos_ = start;
    fail(name.empty() ? "expected an axis" : "unknown axis '" + std::string(name) + "'");
  }

  QualPtr parse_qexpr() {
    QualPtr q = parse_qand();
    while (keyword("or")) q = Qualifier::disj(std::move(q), parse_qand());
    return q;
  }

  QualPtr parse_qand() {
    QualPtr q = parse_qatom();
    while (keyword("and")) q = Qualifier::conj(std::move(q), parse_qatom());
    return q;
  }

  // A '(' may open either a parenthesized path or a grouped qualifier
  // expression; try the path reading first.
  QualPtr parse_qatom() {
    if (!lookahead("(")) return Qualifier::of(parse_pathexpr());
    std::size_t start = pos_;
    try {
      ExprPtr p = parse_pathexpr();
      if (lookahead("]") || lookahead(")") || lookahead("and") || lookahead("or")) return Qualifier::of(p);
    } catch (const SyntaxError&) {
    }
    pos_ = start;
    expect("(");
    QualPtr q = parse_qexpr();
    expect(")");
    return q;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_xpath(std::string_view text) { return XPathParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printing

std::string to_string(Axis a, XPathStyle style) {
  bool arrows = style == XPathStyle::Arrows;
  switch (a) {
    case Axis::Child:
      return arrows ? "\xE2\x86\x93" : "child";
    case Axis::Parent:
      return arrows ? "\xE2\x86\x91" : "parent";
    case Axis::DescOrSelf:
      return arrows ? "\xE2\x86\x93*" : "desc-or-self";
    case Axis::AncOrSelf:
      return arrows ? "\xE2\x86\x91*" : "anc-or-self";
    case Axis::FollSibling:
      return arrows ? "\xE2\x86\x92\xE2\x81\xBA" : "fsib";
    case Axis::PrecSibling:
      return arrows ? "\xE2\x86\x90\xE2\x81\xBA" : "psib";
  }
  return {};
}

namespace {

// Path contexts: 0 = union allowed, 1 = sequence operand, 2 = step.
// Qualifier contexts: 0 = or, 1 = and, 2 = atom.
class XPathPrinter {
 public:
  explicit XPathPrinter(XPathStyle style) : style_(style) {}

  std::string path(const XPathExpr& p, int ctx) const {
    using K = XPathExpr::Kind;
    switch (p.kind) {
      case K::Step:
        return to_string(p.axis, style_) + "::" + p.label;
      case K::Union: {
        std::string s = path(*p.left, 0) + union_sep() + path(*p.right, 1);
        return ctx > 0 ? "(" + s + ")" : s;
      }
      case K::Seq: {
        std::string s = path(*p.left, 1) + "/" + path(*p.right, 2);
        return ctx > 1 ? "(" + s + ")" : s;
      }
      case K::Qual:
        return path(*p.left, 2) + "[" + qual(*p.qual, 0) + "]";
    }
    return {};
  }

  std::string qual(const Qualifier& q, int ctx) const {
    using K = Qualifier::Kind;
    switch (q.kind) {
      case K::Path:
        return path(*q.path, 0);
      case K::Or: {
        std::string s = qual(*q.left, 0) + " or " + qual(*q.right, 1);
        return ctx > 0 ? "(" + s + ")" : s;
      }
      case K::And: {
        std::string s = qual(*q.left, 1) + " and " + qual(*q.right, 2);
        return ctx > 1 ? "(" + s + ")" : s;
      }
    }
    return {};
  }

 private:
  std::string union_sep() const { return style_ == XPathStyle::Arrows ? " \xE2\x88\xAA " : " |u| "; }

  XPathStyle style_;
};

}  // namespace

std::string to_string(const XPathExpr& p, XPathStyle style) { return XPathPrinter(style).path(p, 0); }
std::string to_string(const Qualifier& q, XPathStyle style) { return XPathPrinter(style).qual(q, 0); }

// ---------------------------------------------------------------------------
// Analysis

namespace {

std::size_t qsize(const Qualifier& q) {
  if (q.kind == Qualifier::Kind::Path) return size(*q.path);
  return qsize(*q.left) + qsize(*q.right);
}

void scan(const XPathExpr& p, Fragment& f);

void qscan(const Qualifier& q, Fragment& f) {
  if (q.kind == Qualifier::Kind::Path) {
    scan(*q.path, f);
    return;
  }
  if (q.kind == Qualifier::Kind::Or) f.qualifier_disjunction = true;
  qscan(*q.left, f);
  qscan(*q.right, f);
}

void scan(const XPathExpr& p, Fragment& f) {
  switch (p.kind) {
    case XPathExpr::Kind::Step:
      f.axes.insert(p.axis);
      return;
    case XPathExpr::Kind::Union:
      f.uses_union = true;
      [[fallthrough]];
    case XPathExpr::Kind::Seq:
      scan(*p.left, f);
      scan(*p.right, f);
      return;
    case XPathExpr::Kind::Qual:
      f.uses_qualifier = true;
      scan(*p.left, f);
      qscan(*p.qual, f);
      return;
  }
}

QualPtr normalize_q(const QualPtr& q) {
  switch (q->kind) {
    case Qualifier::Kind::Path:
      return Qualifier::of(normalize_qualifiers(q->path));
    case Qualifier::Kind::And:
      return Qualifier::conj(normalize_q(q->left), normalize_q(q->right));
    case Qualifier::Kind::Or:
      return Qualifier::disj(normalize_q(q->left), normalize_q(q->right));
  }
  return q;
}

ExprPtr apply_conjuncts(ExprPtr p, const QualPtr& q) {
  if (q->kind == Qualifier::Kind::And) return apply_conjuncts(apply_conjuncts(std::move(p), q->left), q->right);
  return XPathExpr::filter(std::move(p), q);
}

}  // namespace

std::size_t size(const XPathExpr& p) {
  switch (p.kind) {
    case XPathExpr::Kind::Step:
      return 1;
    case XPathExpr::Kind::Seq:
    case XPathExpr::Kind::Union:
      return size(*p.left) + size(*p.right);
    case XPathExpr::Kind::Qual:
      return size(*p.left) + qsize(*p.qual);
  }
  return 0;
}

Fragment fragment_of(const XPathExpr& p) {
  Fragment f;
  scan(p, f);
  return f;
}

std::string Fragment::describe() const {
  std::string s = "X(";
  bool first = true;
  auto add = [&](const std::string& part) {
    if (!first) s += ',';
    s += part;
    first = false;
  };
  for (Axis a : axes) add(to_string(a));
  if (uses_union) add("union");
  if (uses_qualifier) add(qualifier_disjunction ? "[] with or" : "[]");
  return s + ")";
}

ExprPtr normalize_qualifiers(const ExprPtr& p) {
  switch (p->kind) {
    case XPathExpr::Kind::Step:
      return p;
    case XPathExpr::Kind::Seq:
      return XPathExpr::seq(normalize_qualifiers(p->left), normalize_qualifiers(p->right));
    case XPathExpr::Kind::Union:
      return XPathExpr::alt(normalize_qualifiers(p->left), normalize_qualifiers(p->right));
    case XPathExpr::Kind::Qual:
      return apply_conjuncts(normalize_qualifiers(p->left), normalize_q(p->qual));
  }
  return p;
}

}  // namespace xpathsat
