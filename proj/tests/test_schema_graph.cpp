#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"
#include "xpathsat/error.hpp"
#include "xpathsat/schema_graph.hpp"

using namespace xpathsat;
using namespace xpathsat::testing;

namespace {

std::vector<std::string> bodies(const std::vector<DcFactor>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(to_string(f.body));
  return out;
}

}  // namespace

TEST_CASE("dc_convert") {
  auto fs = dc_convert(parse_content_model("r*(a*b|c)r*"));
  CHECK(bodies(fs) == std::vector<std::string>{"r*", "a*", "b", "c", "r*"});
  for (std::size_t i = 0; i < fs.size(); ++i) CHECK(fs[i].position == i + 1);
  CHECK(fs[2].omega == '-');
  CHECK(fs[0].omega == '*');
  CHECK(fs[1].df_labels == LabelSet{"a"});
  CHECK(fs[1].dfs_labels.empty());
  CHECK(fs[0].df_labels.empty());
  CHECK(fs[3].dfs_labels == LabelSet{"c"});

  CHECK(bodies(dc_convert(parse_content_model("(a|b(c|d)*)ef*"))) ==
        std::vector<std::string>{"a", "b", "(c|d)*", "e", "f*"});

  auto single = dc_convert(parse_content_model("a"));
  REQUIRE(single.size() == 1);
  CHECK(single[0].omega == '-');
  CHECK(dc_convert(parse_content_model("eps")).empty());

  CHECK_THROWS_AS(dc_convert(parse_content_model("a?")), PreconditionError);
}

TEST_CASE("example schema graph") {
  SchemaGraph g(example_dtd());
  REQUIRE(g.size() == 7);
  auto expect = [&](NodeId id, std::optional<Label> par, std::size_t pos, char omega, Label l, bool df, bool dfs) {
    CAPTURE(id);
    CHECK(g.node(id) == SgNode{std::move(par), pos, omega, std::move(l), df, dfs});
  };
  expect(0, std::nullopt, 1, '-', "r", true, true);
  expect(1, "r", 1, '*', "r", false, false);
  expect(2, "r", 2, '*', "a", true, false);
  expect(3, "r", 3, '-', "b", true, true);
  expect(4, "r", 4, '-', "c", true, true);
  expect(5, "r", 5, '*', "r", false, false);
  expect(6, "b", 1, '-', "a", true, true);

  CHECK(g.children_with_label("r", "r") == std::vector<NodeId>{1, 5});
  CHECK(g.children_with_label("b", "a") == std::vector<NodeId>{6});
  CHECK(g.children("c").empty());
  CHECK(SchemaGraph::name(3) == "u3");
}

TEST_CASE("schema graph exports match the snapshots") {
  SchemaGraph g(example_dtd());
  CHECK(g.to_text() == read_fixture("example_graph.txt"));
  CHECK(g.to_json() + "\n" == read_fixture("example_graph.json"));
}

TEST_CASE("trivial and invalid graphs") {
  SchemaGraph g(parse_dtd("r := eps\n", DtdFormat::Native));
  CHECK(g.size() == 1);
  CHECK(g.children("r").empty());
  CHECK_THROWS_AS(SchemaGraph(parse_dtd("r := a?\na := eps\n", DtdFormat::Native)), PreconditionError);
}

TEST_CASE("schema graph properties on random DTDs") {
  std::mt19937 rng(11);
  for (int round = 0; round < 300; ++round) {
    DtdOptions opt;
    opt.recursive = round % 2 == 0;
    opt.star_depth = 2;
    SchemaGraph g(random_dtd(rng, opt));
    for (const auto& a : g.dtd().alphabet) {
      const auto& fs = g.factors(a);
      for (std::size_t i = 0; i < fs.size(); ++i) CHECK(fs[i].position == i + 1);
      auto counts = occurrence_counts(g.dtd().rule(a));
      std::map<Label, std::size_t> nodes_per_label;
      for (NodeId v : g.children(a)) ++nodes_per_label[g.node(v).label];
      for (const auto& [l, n] : counts) {
        if (n == 1) CHECK(nodes_per_label[l] == 1);
      }
    }
    for (NodeId v = 1; v < g.size(); ++v) {
      const SgNode& n = g.node(v);
      if (n.is_dfs) CHECK(n.omega == '-');
      if (n.is_dfs) CHECK(n.is_df);
    }
  }
}
