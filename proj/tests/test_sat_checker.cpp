#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"
#include "xpathsat/error.hpp"
#include "xpathsat/oracle.hpp"
#include "xpathsat/sat_checker.hpp"

using namespace xpathsat;
using namespace xpathsat::testing;

namespace {

constexpr const char* kEval1Query = "(↓::r/→⁺::b)/(↓::a/↑::b)";
constexpr const char* kEval2Query = "↓::r/→⁺::b[↓::a]";

std::map<std::string, Eval2Set> eval2_steps(const char* query, const SchemaGraph& g) {
  std::vector<Eval2Trace> trace;
  eval2(*parse_xpath(query), g, &trace);
  std::map<std::string, Eval2Set> out;
  for (auto& t : trace) out[t.expr] = t.tuples;
  return out;
}

}  // namespace

TEST_CASE("eval1 reproduces the example trace") {
  SchemaGraph g(example_dtd());
  Verdict v = eval1(*parse_xpath(kEval1Query), g, true);
  CHECK(v.sat);
  CHECK(v.trace == std::vector<std::string>{
                       "({u0}, β⊥)",
                       "({u0}{u1,u5}, {r↦∅})",
                       "({u0}{u3}, {r↦{b}})",
                       "({u0}{u3}{u6}, {r↦{b}, rb↦{a}})",
                       "({u0}{u3}, {r↦{b}, rb↦{a}})",
                   });
  CHECK(v.final_state == "({u0}{u3}, {r↦{b}, rb↦{a}})");

  Verdict bad = eval1(*parse_xpath(std::string(kEval1Query) + "/→⁺::c"), g, true);
  CHECK_FALSE(bad.sat);
  CHECK(bad.failed_step == 4);
  CHECK(bad.inconsistent_map == "{r↦{b,c}, rb↦{a}}");
  CHECK(bad.trace.back() == "fail at →⁺::c: inconsistent sibling constraints {r↦{b,c}, rb↦{a}}");
}

TEST_CASE("eval1 single steps") {
  SchemaGraph g(example_dtd());
  Eval1State st(g);
  CHECK_FALSE(eval1_step(*parse_xpath("↑::r"), st, g).ok);

  Eval1State s2(g);
  CHECK(eval1_step(*parse_xpath("↓::r"), s2, g).ok);
  CHECK(s2.to_string() == "({u0}{u1,u5}, {r↦∅})");
  CHECK(eval1_step(*parse_xpath("→⁺::b"), s2, g).ok);
  CHECK(s2.to_string() == "({u0}{u3}, {r↦{b}})");
  CHECK(s2.path() == LabelPath{"r", "b"});

  Eval1State s3(g);
  CHECK_FALSE(eval1_step(*parse_xpath("→⁺::r"), s3, g).ok);
  CHECK_FALSE(eval1(*parse_xpath("↓::c/↓::a"), g).sat);
  // A star factor admits a sibling at its own position; a single symbol does not.
  CHECK(eval1(*parse_xpath("↓::a/→⁺::a"), g).sat);
  CHECK_FALSE(eval1(*parse_xpath("↓::b/→⁺::b"), g).sat);
  CHECK(eval1(*parse_xpath("↓::c/←⁺::r"), g).sat);
  CHECK_FALSE(eval1(*parse_xpath("↓::c/←⁺::b"), g).sat);
}

TEST_CASE("eval1 forgets constraints under non-DFS paths") {
  SchemaGraph g(example_dtd());
  // Same r node twice: b and c clash.
  CHECK_FALSE(eval1(*parse_xpath("↓::r/↓::b/↑::r/↓::c"), g).sat);
  // The second ↓::r may pick a different r node.
  CHECK(eval1(*parse_xpath("↓::r/↓::r/↓::b/↑::r/↑::r/↓::r/↓::c"), g).sat);
}

TEST_CASE("eval2 reproduces the example sets") {
  SchemaGraph g(example_dtd());
  auto steps = eval2_steps(kEval2Query, g);
  CHECK(steps.at("↓::r").size() == 6);
  CHECK(to_string(steps.at("→⁺::b")) ==
        "{((u1,{ε↦∅}),(u3,{ε↦{b}}),ε), ((u2,{ε↦{a}}),(u3,{ε↦{a,b}}),ε)}");
  CHECK(to_string(steps.at("↓::a")) ==
        "{((u0,β⊥),(u2,{r↦{a}}),r), ((u1,β⊥),(u2,{r↦{a}}),r), ((u3,β⊥),(u6,{b↦{a}}),b), "
        "((u5,β⊥),(u2,{r↦{a}}),r)}");
  CHECK(to_string(steps.at("→⁺::b[↓::a]")) ==
        "{((u1,{ε↦∅}),(u3,{ε↦{b}, b↦{a}}),ε), ((u2,{ε↦{a}}),(u3,{ε↦{a,b}, b↦{a}}),ε)}");
  CHECK(to_string(steps.at(kEval2Query)) ==
        "{((u0,β⊥),(u3,{r↦{b}, rb↦{a}}),r), ((u1,β⊥),(u3,{r↦{b}, rb↦{a}}),r), "
        "((u5,β⊥),(u3,{r↦{b}, rb↦{a}}),r)}");
  CHECK(to_string(steps.at("↓::r")) ==
        "{((u0,β⊥),(u1,{r↦∅}),r), ((u0,β⊥),(u5,{r↦∅}),r), ((u1,β⊥),(u1,{r↦∅}),r), "
        "((u1,β⊥),(u5,{r↦∅}),r), ((u5,β⊥),(u1,{r↦∅}),r), ((u5,β⊥),(u5,{r↦∅}),r)}");

  auto longer = eval2_steps("↓::r/→⁺::b[↓::a]/→⁺::c", g);
  CHECK(to_string(longer.at("→⁺::c")) ==
        "{((u1,{ε↦∅}),(u4,{ε↦{c}}),ε), ((u2,{ε↦{a}}),(u4,{ε↦{a,c}}),ε), ((u3,{ε↦{b}}),(u4,{ε↦{b,c}}),ε)}");
  CHECK(longer.at("↓::r/→⁺::b[↓::a]/→⁺::c").empty());
}

TEST_CASE("satisfiable routes and reduces") {
  Dtd d = example_dtd();
  Verdict a = satisfiable(*parse_xpath(kEval2Query), d);
  CHECK(a.sat);
  CHECK(a.algorithm == "eval2");
  CHECK_FALSE(satisfiable(*parse_xpath(std::string(kEval2Query) + "/→⁺::c"), d).sat);
  Verdict b = satisfiable(*parse_xpath(kEval1Query), d);
  CHECK(b.sat);
  CHECK(b.algorithm == "eval1");

  CHECK(route(*parse_xpath("↓::a/↑::r")) == Route::Eval1);
  CHECK(route(*parse_xpath("↓::a[↓::b and →⁺::c]")) == Route::Eval2);
  CHECK_THROWS_AS(route(*parse_xpath("↓::a[↑::r]")), UnsupportedFragment);
  CHECK_THROWS_AS(route(*parse_xpath("↓::a ∪ ↓::b")), UnsupportedFragment);
  CHECK_THROWS_AS(route(*parse_xpath("↓*::a")), UnsupportedFragment);
  CHECK_THROWS_AS(route(*parse_xpath("↓::a[↓::b or ↓::c]")), UnsupportedFragment);

  Dtd not_mrw = parse_dtd("r := a|aa\na := eps\n", DtdFormat::Native);
  CHECK_THROWS_AS(satisfiable(*parse_xpath("↓::a"), not_mrw), NotMrwError);
  CHECK_THROWS_AS(satisfiable(*parse_xpath("↓*::a"), not_mrw), NotMrwError);
}

TEST_CASE("MRW DTDs are checked through delta") {
  Dtd d = parse_dtd("r := (a|b)*ca+\na := eps\nb := eps\nc := eps\n", DtdFormat::Native);
  CHECK(satisfiable(*parse_xpath("↓::c/→⁺::a"), d).sat);
  CHECK_FALSE(satisfiable(*parse_xpath("↓::c/→⁺::b"), d).sat);
  Dtd h = parse_dtd("r := a#b\na := eps\nb := eps\n", DtdFormat::Native);
  CHECK(satisfiable(*parse_xpath("↓::a/→⁺::b"), h).sat);
  CHECK_FALSE(satisfiable(*parse_xpath("↓::b/→⁺::a"), h).sat);
}

TEST_CASE("eval1 levels share a label and runs are deterministic") {
  std::mt19937 rng(21);
  std::vector<Axis> axes{Axis::Child, Axis::Parent, Axis::FollSibling, Axis::PrecSibling};
  for (int i = 0; i < 200; ++i) {
    DtdOptions opt;
    opt.recursive = true;
    SchemaGraph g(random_dtd(rng, opt));
    Word labels(g.dtd().alphabet.begin(), g.dtd().alphabet.end());
    auto p = random_chain(rng, 1 + pick(rng, 6), axes, labels);
    Verdict v1 = eval1(*p, g, true);
    Verdict v2 = eval1(*p, g, true);
    CHECK(v1.trace == v2.trace);

    Eval1State st(g);
    std::vector<const XPathExpr*> steps;
    for (const XPathExpr* q = p.get(); q;) {
      if (q->kind == XPathExpr::Kind::Seq) {
        steps.push_back(q->right.get());
        q = q->left.get();
      } else {
        steps.push_back(q);
        q = nullptr;
      }
    }
    std::ranges::reverse(steps);
    SibMap previous;
    for (const auto* s : steps) {
      if (!eval1_step(*s, st, g).ok) break;
      for (const auto& level : st.levels()) {
        for (NodeId u : level) CHECK(g.node(u).label == g.node(level.front()).label);
      }
      SibMap now = st.beta();
      // Entries on DFS paths only grow.
      for (const auto& [key, entry] : previous.entries) {
        if (!entry.dfs) continue;
        REQUIRE(now.entries.contains(key));
        CHECK(std::ranges::includes(now.entries.at(key).labels, entry.labels));
      }
      previous = now;
    }
  }
}

TEST_CASE("eval2 tuple sets stay within |U|^2") {
  std::mt19937 rng(22);
  std::vector<Axis> axes{Axis::Child, Axis::FollSibling, Axis::PrecSibling};
  for (int i = 0; i < 200; ++i) {
    DtdOptions opt;
    opt.recursive = true;
    SchemaGraph g(random_dtd(rng, opt));
    Word labels(g.dtd().alphabet.begin(), g.dtd().alphabet.end());
    auto p = random_qualified(rng, 1 + pick(rng, 5), axes, labels);
    std::vector<Eval2Trace> trace;
    eval2(*p, g, &trace);
    for (const auto& t : trace) {
      CHECK(t.tuples.size() <= g.size() * g.size());
      std::set<std::pair<NodeId, NodeId>> pairs;
      for (const auto& tup : t.tuples) pairs.insert({tup.start, tup.end});
      CHECK(pairs.size() == t.tuples.size());
    }
  }
}

TEST_CASE("decisions agree with the oracle on small random instances") {
  std::mt19937 rng(23);
  std::vector<Axis> eval1_axes{Axis::Child, Axis::Parent, Axis::FollSibling, Axis::PrecSibling};
  std::vector<Axis> eval2_axes{Axis::Child, Axis::FollSibling, Axis::PrecSibling};
  for (int i = 0; i < 120; ++i) {
    DtdOptions opt;
    opt.mrw_only = i % 3 == 0;
    Dtd d = random_dtd(rng, opt);
    Word labels(d.alphabet.begin(), d.alphabet.end());
    ExprPtr p = i % 2 == 0 ? random_chain(rng, 1 + pick(rng, 4), eval1_axes, labels)
                           : random_qualified(rng, 1 + pick(rng, 4), eval2_axes, labels);
    Verdict v = satisfiable(*p, d);
    OracleResult o = oracle_satisfiable(*p, d, {4, default_rep(*p)}, false);
    CAPTURE(to_string(d));
    CAPTURE(to_string(*p));
    CHECK(v.sat == o.sat);
  }
}
