#include "xpathsat/constraints.hpp"

#include <algorithm>

#include "xpathsat/error.hpp"

namespace xpathsat {

using Kind = ContentModel::Kind;

std::string to_string(const LabelPath& p, bool compact) {
  if (p.empty()) return "\xCE\xB5";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i && !compact) s += '/';
    s += p[i];
  }
  return s;
}

bool is_prefix(const LabelPath& prefix, const LabelPath& p) {
  return prefix.size() <= p.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

void SibMap::add(const LabelPath& key, const LabelSet& labels, bool dfs) {
  auto [it, inserted] = entries.try_emplace(key, SibEntry{{}, dfs});
  if (!inserted && it->second.dfs != dfs) {
    throw PreconditionError("DFS flag mismatch on key " + to_string(key, false));
  }
  it->second.labels.insert(labels.begin(), labels.end());
}

LabelSet psi(const SgNode& u) {
  if (u.is_df) return {u.label};
  return {};
}

SibMap join(const SibMap& b1, const SibMap& b2) {
  if (b1.mode != b2.mode) throw PreconditionError("join of absolute and relative maps");
  SibMap out = b1;
  for (const auto& [key, entry] : b2.entries) out.add(key, entry.labels, entry.dfs);
  return out;
}

SibMap restrict_dfs(const SibMap& b, const LabelPath& current) {
  SibMap out;
  out.mode = b.mode;
  for (const auto& [key, entry] : b.entries) {
    if (entry.dfs || is_prefix(key, current)) out.entries.emplace(key, entry);
  }
  return out;
}

SibMap shift(const SibMap& b, const LabelPath& prefix, bool prefix_dfs) {
  SibMap out;
  out.mode = b.mode;
  for (const auto& [key, entry] : b.entries) {
    LabelPath k = prefix;
    k.insert(k.end(), key.begin(), key.end());
    out.entries.emplace(std::move(k), SibEntry{entry.labels, entry.dfs && prefix_dfs});
  }
  return out;
}

namespace {

bool cover(const ContentModel& e, const LabelSet& s) {
  switch (e.kind()) {
    case Kind::Epsilon:
      return s.empty();
    case Kind::Symbol:
      return s.empty() || (s.size() == 1 && *s.begin() == e.label());
    case Kind::Concat:
      return std::ranges::all_of(e.items(), [&](const ContentModel& item) {
        LabelSet part;
        LabelSet syms = symbols(item);
        std::ranges::set_intersection(s, syms, std::inserter(part, part.end()));
        return cover(item, part);
      });
    case Kind::Disj:
      return std::ranges::any_of(e.items(), [&](const ContentModel& item) {
        return std::ranges::includes(symbols(item), s) && cover(item, s);
      });
    case Kind::Star:
    case Kind::Plus:
      return std::ranges::includes(symbols(e), s);
    case Kind::Opt:
      return s.empty() || cover(e.body(), s);
    case Kind::Hash:
      return cover(expand_hash(e), s);
  }
  return false;
}

}  // namespace

bool coverable(const ContentModel& e, const LabelSet& s) {
  auto counts = occurrence_counts(e);
  for (const auto& a : s) {
    auto it = counts.find(a);
    if (it == counts.end()) {
      throw PreconditionError("coverable: '" + a + "' does not occur in " + to_string(e));
    }
    if (it->second != 1) {
      throw PreconditionError("coverable: '" + a + "' occurs more than once in " + to_string(e));
    }
  }
  return cover(e, s);
}

bool entry_consistent(const LabelPath& key, const LabelSet& labels, const Dtd& d) {
  if (key.empty()) return true;
  return coverable(d.rule(key.back()), labels);
}

bool consistent(const SibMap& b, const Dtd& d) {
  return std::ranges::all_of(b.entries, [&](const auto& kv) {
    return entry_consistent(kv.first, kv.second.labels, d);
  });
}

std::string to_string(const LabelSet& s) {
  if (s.empty()) return "\xE2\x88\x85";
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ',';
    out += a;
    first = false;
  }
  return out + "}";
}

std::string to_string(const SibMap& b) {
  if (b.empty()) return "\xCE\xB2\xE2\x8A\xA5";
  bool compact = std::ranges::all_of(b.entries, [](const auto& kv) {
    return std::ranges::all_of(kv.first, [](const Label& l) { return l.size() == 1; });
  });
  std::string out = "{";
  bool first = true;
  for (const auto& [key, entry] : b.entries) {
    if (!first) out += ", ";
    out += to_string(key, compact) + "\xE2\x86\xA6" + to_string(entry.labels);
    first = false;
  }
  return out + "}";
}

}  // namespace xpathsat
