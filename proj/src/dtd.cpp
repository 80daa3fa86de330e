#include "xpathsat/dtd.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

#include "xpathsat/automaton.hpp"
#include "xpathsat/error.hpp"

namespace xpathsat {

using Kind = ContentModel::Kind;

const ContentModel& Dtd::rule(const Label& a) const {
  auto it = rules.find(a);
  if (it == rules.end()) throw PreconditionError("no rule for label '" + a + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::ranges::all_of(s, [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

struct RawRule {
  Label label;
  std::string model;
  std::string where;
};

Dtd assemble(const std::vector<RawRule>& raw, std::optional<Label> root) {
  if (raw.empty()) throw DtdError("DTD declares no rules");
  Dtd d;
  for (const auto& r : raw) {
    if (!d.alphabet.insert(r.label).second) {
      throw DtdError(r.where + ": duplicate rule for '" + r.label + "'");
    }
    d.order.push_back(r.label);
  }
  for (const auto& r : raw) {
    try {
      d.rules.emplace(r.label, parse_content_model(r.model, d.alphabet));
    } catch (const SyntaxError& ex) {
      std::string msg = ex.what();
      if (msg.starts_with("unknown symbol")) msg = "undeclared label: " + msg;
      throw DtdError(r.where + ": " + msg);
    }
  }
  d.root = root.value_or(raw.front().label);
  if (!d.alphabet.contains(d.root)) throw DtdError("root '" + d.root + "' has no rule");
  return d;
}

Dtd parse_native(std::string_view text, std::optional<Label> root) {
  std::vector<RawRule> raw;
  std::optional<Label> directive;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    std::string where = "line " + std::to_string(line_no);
    if (s.starts_with("root") && s.size() > 4 && std::isspace(static_cast<unsigned char>(s[4]))) {
      std::string_view name = trim(s.substr(4));
      if (!is_name(name)) throw DtdError(where + ": malformed root directive");
      if (directive) throw DtdError(where + ": duplicate root directive");
      directive = Label(name);
      continue;
    }
    auto sep = s.find(":=");
    if (sep == std::string_view::npos) throw DtdError(where + ": expected 'label := model'");
    std::string_view name = trim(s.substr(0, sep));
    if (!is_name(name)) throw DtdError(where + ": malformed label '" + std::string(name) + "'");
    raw.push_back({Label(name), std::string(trim(s.substr(sep + 2))), where});
  }
  if (!root) root = directive;
  return assemble(raw, root);
}

Dtd parse_xml(std::string_view text, std::optional<Label> root) {
  std::vector<RawRule> raw;
  std::optional<Label> directive;
  std::size_t pos = 0;
  auto where = [&](std::size_t at) { return "offset " + std::to_string(at); };
  while (true) {
    std::size_t open = text.find('<', pos);
    if (open == std::string_view::npos) {
      if (!trim(text.substr(pos)).empty()) throw DtdError(where(pos) + ": stray text");
      break;
    }
    if (!trim(text.substr(pos, open - pos)).empty()) throw DtdError(where(pos) + ": stray text");
    if (text.substr(open).starts_with("<!--")) {
      std::size_t close = text.find("-->", open + 4);
      if (close == std::string_view::npos) throw DtdError(where(open) + ": unterminated comment");
      std::string_view body = trim(text.substr(open + 4, close - open - 4));
      if (body.starts_with("root:")) {
        std::string_view name = trim(body.substr(5));
        if (!is_name(name)) throw DtdError(where(open) + ": malformed root comment");
        directive = Label(name);
      }
      pos = close + 3;
      continue;
    }
    std::size_t close = text.find('>', open);
    if (close == std::string_view::npos) throw DtdError(where(open) + ": unterminated declaration");
    std::string_view decl = text.substr(open, close - open);
    pos = close + 1;
    if (decl.starts_with("<!ATTLIST")) continue;
    if (decl.starts_with("<?")) continue;  // XML declaration / processing instruction
    if (!decl.starts_with("<!ELEMENT")) {
      throw DtdError(where(open) + ": unsupported declaration '" +
                     std::string(decl.substr(0, std::min<std::size_t>(decl.size(), 12))) + "'");
    }
    std::string_view rest = trim(decl.substr(9));
    std::size_t name_end = 0;
    while (name_end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[name_end])) &&
           rest[name_end] != '(') {
      ++name_end;
    }
    std::string_view name = rest.substr(0, name_end);
    if (!is_name(name)) throw DtdError(where(open) + ": malformed element name");
    std::string_view model = trim(rest.substr(name_end));
    std::string m;
    if (model == "EMPTY") {
      m = "eps";
    } else if (model == "ANY") {
      throw DtdError(where(open) + ": ANY content of '" + std::string(name) + "' is not supported");
    } else if (model.find("#PCDATA") != std::string_view::npos) {
      std::string compact;
      for (char c : model) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      }
      if (compact != "(#PCDATA)" && compact != "(#PCDATA)*") {
        throw DtdError(where(open) + ": mixed content of '" + std::string(name) +
                       "' is not supported");
      }
      m = "eps";
    } else {
      m = std::string(model);
    }
    raw.push_back({Label(name), m, where(open)});
  }
  if (!root) root = directive;
  if (!root) throw DtdError("no root given: add '<!-- root: name -->' or pass a root explicitly");
  return assemble(raw, root);
}

}  // namespace

Dtd parse_dtd(std::string_view text, DtdFormat format, const std::optional<Label>& root_override) {
  return format == DtdFormat::Native ? parse_native(text, root_override)
                                     : parse_xml(text, root_override);
}

std::string to_string(const Dtd& d) {
  std::string out = "root " + d.root + "\n";
  for (const auto& a : d.order) out += a + " := " + to_string(d.rule(a)) + "\n";
  return out;
}

LabelSet validate_no_useless(const Dtd& d) {
  LabelSet seen{d.root};
  std::deque<Label> queue{d.root};
  while (!queue.empty()) {
    Label a = queue.front();
    queue.pop_front();
    auto it = d.rules.find(a);
    if (it == d.rules.end()) continue;
    for (const auto& b : symbols(it->second)) {
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  LabelSet useless;
  std::ranges::set_difference(d.alphabet, seen, std::inserter(useless, useless.end()));
  return useless;
}

// ---------------------------------------------------------------------------
// Classification

bool is_df(const ContentModel& e) {
  return std::ranges::all_of(occurrence_counts(e), [](const auto& kv) { return kv.second <= 1; });
}

namespace {

bool is_dc_qph_factor(const ContentModel& f) {
  switch (f.kind()) {
    case Kind::Epsilon:
    case Kind::Symbol:
    case Kind::Star:
    case Kind::Plus:
      return true;
    case Kind::Opt:
      return is_dc_qph(f.body());
    case Kind::Hash:
      return std::ranges::all_of(f.items(), [](const ContentModel& op) { return is_dc_qph(op); });
    case Kind::Concat:
    case Kind::Disj:
      return false;
  }
  return false;
}

bool has_qph(const ContentModel& e) {
  return contains_kind(e, Kind::Opt) || contains_kind(e, Kind::Plus) || contains_kind(e, Kind::Hash);
}

void count_unstarred(const ContentModel& e, bool starred, std::map<Label, std::size_t>& out) {
  if (e.is(Kind::Symbol) && !starred) ++out[e.label()];
  bool inner = starred || e.is(Kind::Star) || e.is(Kind::Plus);
  for (const auto& item : e.items()) count_unstarred(item, inner, out);
}

}  // namespace

bool is_dc_qph(const ContentModel& e) { return std::ranges::all_of(e.factors(), is_dc_qph_factor); }

bool is_dc(const ContentModel& e) { return is_dc_qph(e) && !has_qph(e); }

bool is_rw(const ContentModel& e) {
  auto counts = occurrence_counts(e);
  return std::ranges::all_of(e.factors(), [&](const ContentModel& f) {
    if (is_dc_qph_factor(f)) return true;
    return std::ranges::all_of(symbols(f), [&](const Label& a) { return counts[a] == 1; });
  });
}

bool is_mrw(const ContentModel& e) {
  if (!is_rw(e)) return false;
  auto counts = occurrence_counts(e);
  std::map<Label, std::size_t> outside;
  count_unstarred(e, false, outside);
  return std::ranges::all_of(outside, [&](const auto& kv) { return counts[kv.first] == 1; });
}

bool is_mdf_dc(const ContentModel& e) { return is_mrw(e) && !has_qph(e); }

RuleClassification classify(const ContentModel& e) {
  RuleClassification c;
  c.is_df = is_df(e);
  c.is_dc = is_dc(e);
  c.is_dc_qph = is_dc_qph(e);
  c.is_rw = is_rw(e);
  c.is_mrw = is_mrw(e);
  c.is_mdf_dc = is_mdf_dc(e);
  return c;
}

DtdClassification classify(const Dtd& d) {
  DtdClassification out;
  for (const auto& a : d.order) {
    RuleClassification c = classify(d.rule(a));
    out.df += c.is_df;
    out.dc += c.is_dc;
    out.dc_qph += c.is_dc_qph;
    out.rw += c.is_rw;
    out.mrw += c.is_mrw;
    out.mdf_dc += c.is_mdf_dc;
    out.rules.emplace_back(a, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

ContentModel delta(const ContentModel& e) {
  switch (e.kind()) {
    case Kind::Epsilon:
    case Kind::Symbol:
      return e;
    case Kind::Concat:
    case Kind::Disj: {
      std::vector<ContentModel> items;
      for (const auto& item : e.items()) items.push_back(delta(item));
      return e.is(Kind::Concat) ? ContentModel::concat(std::move(items))
                                : ContentModel::disj(std::move(items));
    }
    case Kind::Star:
    case Kind::Plus:
      return ContentModel::star(delta(e.body()));
    case Kind::Opt:
      return delta(e.body());
    case Kind::Hash: {
      std::vector<ContentModel> items;
      for (const auto& item : e.items()) items.push_back(delta(item));
      return ContentModel::concat(std::move(items));
    }
  }
  return e;
}

Dtd delta_dtd(const Dtd& d) {
  Dtd out = d;
  for (const auto& a : d.order) {
    const ContentModel& e = d.rule(a);
    if (!is_mrw(e)) throw NotMrwError(a, to_string(e));
    out.rules.at(a) = delta(e);
  }
  return out;
}

namespace {

// Every word of L(from) up to max_len embeds into some word of L(into).
bool embeds(const ContentModel& from, const ContentModel& into, std::size_t max_len) {
  PositionAutomaton a(into);
  for (const Word& w : enumerate_words(from, max_len)) {
    auto states = a.reach(a.initial());
    for (const auto& l : w) {
      states = a.reach(a.step(states, l));
      if (states.empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool subsequence_preserves(const ContentModel& e, const ContentModel& e2, std::size_t max_len) {
  return embeds(e, e2, max_len) && embeds(e2, e, max_len);
}

}  // namespace xpathsat
