#include <algorithm>
#include <random>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"
#include "xpathsat/constraints.hpp"
#include "xpathsat/error.hpp"

using namespace xpathsat;
using namespace xpathsat::testing;

namespace {

LabelPath path(std::string_view s) {
  LabelPath p;
  for (char c : s) p.emplace_back(1, c);
  return p;
}

SibMap map_of(std::initializer_list<std::tuple<const char*, LabelSet, bool>> entries,
              SibMap::Mode mode = SibMap::Mode::Absolute) {
  SibMap m;
  m.mode = mode;
  for (const auto& [k, v, dfs] : entries) m.add(path(k), v, dfs);
  return m;
}

bool brute_coverable(const ContentModel& e, const LabelSet& s, std::size_t max_len) {
  for (const auto& w : enumerate_words(e, max_len)) {
    LabelSet present(w.begin(), w.end());
    if (std::ranges::includes(present, s)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("psi") {
  SchemaGraph g(example_dtd());
  CHECK(psi(g.node(3)) == LabelSet{"b"});
  CHECK(psi(g.node(1)).empty());
  CHECK(psi(g.node(6)) == LabelSet{"a"});
}

TEST_CASE("join") {
  auto b = map_of({{"r", {"b"}, true}});
  CHECK(to_string(join(b, map_of({{"r", {"c"}, true}}))) == "{r↦{b,c}}");
  CHECK(join(b, SibMap{}) == b);
  CHECK(to_string(join(b, map_of({{"rb", {"a"}, true}}))) == "{r↦{b}, rb↦{a}}");
  CHECK_THROWS_AS(join(b, map_of({{"r", {"c"}, false}})), PreconditionError);
  CHECK_THROWS_AS(join(b, map_of({{"r", {"c"}, true}}, SibMap::Mode::Relative)), PreconditionError);
}

TEST_CASE("join algebra") {
  auto x = map_of({{"r", {"a"}, true}, {"rr", {}, false}});
  auto y = map_of({{"r", {"b"}, true}});
  auto z = map_of({{"rb", {"a"}, true}});
  CHECK(join(x, x) == x);
  CHECK(join(x, y) == join(y, x));
  CHECK(join(join(x, y), z) == join(x, join(y, z)));
}

TEST_CASE("restrict_dfs") {
  auto dfs_root = map_of({{"r", {}, true}});
  CHECK(restrict_dfs(dfs_root, path("r")) == dfs_root);
  CHECK(restrict_dfs(map_of({{"rr", {"a"}, false}}), path("rb")).empty());
  CHECK(restrict_dfs(map_of({{"r", {"a"}, false}}), path("rb")) == map_of({{"r", {"a"}, false}}));
  // The key of the current path itself is kept.
  CHECK(restrict_dfs(map_of({{"rr", {"a"}, false}}), path("rr")).entries.size() == 1);
}

TEST_CASE("shift") {
  auto rel = [](std::initializer_list<std::tuple<const char*, LabelSet, bool>> e) {
    return map_of(e, SibMap::Mode::Relative);
  };
  CHECK(shift(rel({{"", {"b"}, true}}), path("r")) == rel({{"r", {"b"}, true}}));
  CHECK(shift(rel({}), path("rb")).empty());
  CHECK(shift(rel({{"b", {"a"}, true}}), path("r")) == rel({{"rb", {"a"}, true}}));
  CHECK(shift(rel({{"b", {"a"}, true}}), path("r"), false) == rel({{"rb", {"a"}, false}}));
}

TEST_CASE("coverable") {
  auto e = parse_content_model("r*(a*b|c)r*");
  CHECK(coverable(e, {"a", "b"}));
  CHECK_FALSE(coverable(e, {"a", "b", "c"}));
  CHECK(coverable(e, {}));
  CHECK(coverable(parse_content_model("eps"), {}));
  CHECK_THROWS_AS(coverable(e, {"r"}), PreconditionError);
  CHECK_THROWS_AS(coverable(e, {"z"}), PreconditionError);
}

TEST_CASE("coverable agrees with word enumeration") {
  std::mt19937 rng(5);
  ModelOptions opt;
  opt.allow_qph = false;
  opt.max_star_depth = 2;
  Word sigma = letters(4);
  int checked = 0;
  while (checked < 150) {
    auto e = random_model(rng, sigma, 1 + pick(rng, 8), opt);
    if (!is_mdf_dc(e)) continue;
    ++checked;
    Word unique;
    for (const auto& [l, n] : occurrence_counts(e)) {
      if (n == 1) unique.push_back(l);
    }
    for (std::size_t mask = 0; mask < (1u << unique.size()); ++mask) {
      LabelSet s;
      for (std::size_t i = 0; i < unique.size(); ++i) {
        if (mask & (1u << i)) s.insert(unique[i]);
      }
      CAPTURE(to_string(e));
      CHECK(coverable(e, s) == brute_coverable(e, s, 8));
    }
  }
}

TEST_CASE("consistent") {
  Dtd d = example_dtd();
  CHECK_FALSE(consistent(map_of({{"r", {"b", "c"}, true}, {"rb", {"a"}, true}}), d));
  CHECK(consistent(map_of({{"r", {"b"}, true}, {"rb", {"a"}, true}}), d));
  CHECK(consistent(map_of({{"", {"a", "c"}, true}}, SibMap::Mode::Relative), d));
  CHECK(consistent(SibMap{}, d));
}

TEST_CASE("rendering") {
  CHECK(to_string(SibMap{}) == "β⊥");
  CHECK(to_string(map_of({{"r", {}, true}})) == "{r↦∅}");
  CHECK(to_string(map_of({{"", {"a", "c"}, true}}, SibMap::Mode::Relative)) == "{ε↦{a,c}}");
  SibMap long_labels;
  long_labels.add({"root", "item"}, {"name"}, true);
  CHECK(to_string(long_labels) == "{root/item↦{name}}");
}
