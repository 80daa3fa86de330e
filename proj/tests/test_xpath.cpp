#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/random_instances.hpp"
#include "xpathsat/error.hpp"
#include "xpathsat/xpath.hpp"

using namespace xpathsat;
using namespace xpathsat::testing;

namespace {

ExprPtr step(Axis a, const char* l) { return XPathExpr::step(a, l); }

}  // namespace

TEST_CASE("parse examples") {
  auto p = parse_xpath("child::r/fsib::b[child::a]");
  auto expected = XPathExpr::seq(step(Axis::Child, "r"),
                                 XPathExpr::filter(step(Axis::FollSibling, "b"),
                                                   Qualifier::of(step(Axis::Child, "a"))));
  CHECK(*p == *expected);
  CHECK(*parse_xpath("child::a") == *step(Axis::Child, "a"));
  CHECK(*parse_xpath("↓::r/→⁺::b[↓::a]") == *expected);
  CHECK(*parse_xpath("↓::r / →+::b [ ↓::a ]") == *expected);
  CHECK(*parse_xpath("following-sibling::x") == *step(Axis::FollSibling, "x"));
  CHECK(*parse_xpath("↑*::x") == *step(Axis::AncOrSelf, "x"));
  CHECK(*parse_xpath("desc-or-self::x") == *step(Axis::DescOrSelf, "x"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_xpath("child::a["), SyntaxError);
  CHECK_THROWS_AS(parse_xpath(""), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("sideways::a"), SyntaxError);
  CHECK_THROWS_AS(parse_xpath("child::a/"), SyntaxError);
  try {
    parse_xpath("child::a/child::");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() >= 15);
  }
}

TEST_CASE("qualifier connectives") {
  auto p = parse_xpath("child::a[child::b and child::c or fsib::d]");
  REQUIRE(p->kind == XPathExpr::Kind::Qual);
  CHECK(p->qual->kind == Qualifier::Kind::Or);
  CHECK(p->qual->left->kind == Qualifier::Kind::And);
  auto grouped = parse_xpath("child::a[child::b and (child::c or fsib::d)]");
  CHECK(grouped->qual->kind == Qualifier::Kind::And);
  auto path_group = parse_xpath("child::a[(child::b/child::c)]");
  CHECK(path_group->qual->kind == Qualifier::Kind::Path);
}

TEST_CASE("union syntax") {
  auto a = parse_xpath("child::a |u| child::b");
  CHECK(a->kind == XPathExpr::Kind::Union);
  CHECK(*parse_xpath("child::a ∪ child::b") == *a);
  CHECK(*parse_xpath("child::a | child::b") == *a);
}

TEST_CASE("size") {
  CHECK(size(*parse_xpath("child::a")) == 1);
  CHECK(size(*parse_xpath("child::r/fsib::b[child::a]")) == 3);
  CHECK(size(*parse_xpath("(child::r/fsib::b)/(child::a/parent::b)")) == 4);
}

TEST_CASE("fragments") {
  auto f = fragment_of(*parse_xpath("(↓::r/→⁺::b)/(↓::a/↑::b)"));
  CHECK(f.axes == std::set<Axis>{Axis::Child, Axis::Parent, Axis::FollSibling});
  CHECK_FALSE(f.uses_union);
  CHECK_FALSE(f.uses_qualifier);

  f = fragment_of(*parse_xpath("↓::r/→⁺::b[↓::a]"));
  CHECK(f.axes == std::set<Axis>{Axis::Child, Axis::FollSibling});
  CHECK(f.uses_qualifier);
  CHECK_FALSE(f.qualifier_disjunction);

  CHECK(fragment_of(*parse_xpath("↓::a ∪ ↓::b")).uses_union);
  CHECK(fragment_of(*parse_xpath("↓::a[↓::b or ↓::c]")).qualifier_disjunction);
}

TEST_CASE("normalize_qualifiers") {
  auto p = normalize_qualifiers(parse_xpath("child::a[child::b and child::c]"));
  CHECK(*p == *parse_xpath("child::a[child::b][child::c]"));
  auto nested = normalize_qualifiers(parse_xpath("child::a[child::b[child::c and fsib::d]]"));
  CHECK(*nested == *parse_xpath("child::a[child::b[child::c][fsib::d]]"));
}

TEST_CASE("print and parse round trip") {
  std::mt19937 rng(9);
  std::vector<Axis> axes{Axis::Child,      Axis::Parent,      Axis::DescOrSelf,
                         Axis::AncOrSelf,  Axis::FollSibling, Axis::PrecSibling};
  Word labels{"a", "b", "item", "x.y"};
  for (int i = 0; i < 500; ++i) {
    ExprPtr p = random_qualified(rng, 1 + pick(rng, 6), axes, labels);
    if (pick(rng, 3) == 0) p = XPathExpr::alt(p, random_chain(rng, 1 + pick(rng, 3), axes, labels));
    if (pick(rng, 4) == 0) {
      p = XPathExpr::filter(p, Qualifier::disj(Qualifier::of(random_chain(rng, 2, axes, labels)),
                                               Qualifier::of(random_chain(rng, 1, axes, labels))));
    }
    for (auto style : {XPathStyle::Ascii, XPathStyle::Arrows}) {
      std::string text = to_string(*p, style);
      CAPTURE(text);
      CHECK(*parse_xpath(text) == *p);
    }
  }
}

TEST_CASE("fragment monotone under subexpressions") {
  std::mt19937 rng(10);
  std::vector<Axis> axes{Axis::Child, Axis::Parent, Axis::FollSibling, Axis::PrecSibling, Axis::DescOrSelf};
  Word labels{"a", "b"};
  for (int i = 0; i < 200; ++i) {
    ExprPtr p = random_qualified(rng, 2 + pick(rng, 5), axes, labels);
    Fragment whole = fragment_of(*p);
    std::vector<const XPathExpr*> stack{p.get()};
    while (!stack.empty()) {
      const XPathExpr* q = stack.back();
      stack.pop_back();
      Fragment part = fragment_of(*q);
      CHECK(std::ranges::includes(whole.axes, part.axes));
      if (part.uses_qualifier) CHECK(whole.uses_qualifier);
      if (q->left) stack.push_back(q->left.get());
      if (q->right) stack.push_back(q->right.get());
      if (q->qual && q->qual->path) stack.push_back(q->qual->path.get());
    }
  }
}
