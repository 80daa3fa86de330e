#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "xpathsat/content_model.hpp"

namespace xpathsat {

enum class Axis { Child, Parent, DescOrSelf, AncOrSelf, FollSibling, PrecSibling };

struct XPathExpr;
struct Qualifier;
using ExprPtr = std::shared_ptr<const XPathExpr>;
using QualPtr = std::shared_ptr<const Qualifier>;

/// Immutable XPath AST node: `χ::l`, `p/p`, `p ∪ p` or `p[q]`.
struct XPathExpr {
  enum class Kind { Step, Seq, Union, Qual };

  Kind kind = Kind::Step;
  Axis axis = Axis::Child;  // Step
  Label label;              // Step
  ExprPtr left, right;      // Seq, Union; `left` is the filtered path of Qual
  QualPtr qual;             // Qual

  static ExprPtr step(Axis axis, Label label);
  static ExprPtr seq(ExprPtr p1, ExprPtr p2);
  static ExprPtr alt(ExprPtr p1, ExprPtr p2);
  static ExprPtr filter(ExprPtr p, QualPtr q);
};

struct Qualifier {
  enum class Kind { Path, And, Or };

  Kind kind = Kind::Path;
  ExprPtr path;          // Path
  QualPtr left, right;   // And, Or

  static QualPtr of(ExprPtr p);
  static QualPtr conj(QualPtr q1, QualPtr q2);
  static QualPtr disj(QualPtr q1, QualPtr q2);
};

bool operator==(const XPathExpr& a, const XPathExpr& b);
bool operator==(const Qualifier& a, const Qualifier& b);

/// Grammar:
///
///   pathexpr := path ('|u|' path)*
///   path     := step ('/' step)*
///   step     := (AXIS '::' SYMBOL | '(' pathexpr ')') ('[' qexpr ']')*
///   qexpr    := qand ('or' qand)* ;  qand := qatom ('and' qatom)*
///   qatom    := pathexpr | '(' qexpr ')'
///
/// Axes: child parent desc-or-self anc-or-self fsib psib, the XPath long
/// names, and the arrows ↓ ↑ ↓* ↑* →+ ←+ →⁺ ←⁺. Unions may also be written
/// with ∪ or a bare '|'.
ExprPtr parse_xpath(std::string_view text);

enum class XPathStyle { Ascii, Arrows };

/// Parenthesized so that parse_xpath(to_string(p)) == p.
std::string to_string(const XPathExpr& p, XPathStyle style = XPathStyle::Ascii);
std::string to_string(const Qualifier& q, XPathStyle style = XPathStyle::Ascii);
std::string to_string(Axis a, XPathStyle style = XPathStyle::Ascii);

/// Number of steps, qualifiers included.
std::size_t size(const XPathExpr& p);

struct Fragment {
  std::set<Axis> axes;
  bool uses_union = false;
  bool uses_qualifier = false;
  bool qualifier_disjunction = false;

  /// e.g. "X(child,fsib,[])"
  std::string describe() const;
};

Fragment fragment_of(const XPathExpr& p);

/// Rewrites `p[q1 and q2]` to `p[q1][q2]` everywhere.
ExprPtr normalize_qualifiers(const ExprPtr& p);

}  // namespace xpathsat
