#include "xpathsat/content_model.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "xpathsat/error.hpp"

namespace xpathsat {

ContentModel ContentModel::epsilon() { return ContentModel{}; }

ContentModel ContentModel::symbol(Label label) {
  ContentModel e;
  e.kind_ = Kind::Symbol;
  e.label_ = std::move(label);
  return e;
}

namespace {

ContentModel flatten_nary(ContentModel::Kind kind, std::vector<ContentModel> items,
                          std::vector<ContentModel>& out) {
  for (auto& item : items) {
    if (item.is(kind)) {
      for (const auto& sub : item.items()) out.push_back(sub);
    } else if (kind == ContentModel::Kind::Concat && item.is(ContentModel::Kind::Epsilon)) {
      continue;
    } else {
      out.push_back(std::move(item));
    }
  }
  return {};
}

}  // namespace

ContentModel ContentModel::concat(std::vector<ContentModel> items) {
  std::vector<ContentModel> flat;
  flatten_nary(Kind::Concat, std::move(items), flat);
  if (flat.empty()) return epsilon();
  if (flat.size() == 1) return std::move(flat.front());
  ContentModel e;
  e.kind_ = Kind::Concat;
  e.items_ = std::move(flat);
  return e;
}

ContentModel ContentModel::disj(std::vector<ContentModel> items) {
  if (items.empty()) throw PreconditionError("disjunction needs at least one operand");
  std::vector<ContentModel> flat;
  flatten_nary(Kind::Disj, std::move(items), flat);
  if (flat.size() == 1) return std::move(flat.front());
  ContentModel e;
  e.kind_ = Kind::Disj;
  e.items_ = std::move(flat);
  return e;
}

ContentModel ContentModel::star(ContentModel body) {
  ContentModel e;
  e.kind_ = Kind::Star;
  e.items_.push_back(std::move(body));
  return e;
}

ContentModel ContentModel::opt(ContentModel body) {
  ContentModel e;
  e.kind_ = Kind::Opt;
  e.items_.push_back(std::move(body));
  return e;
}

ContentModel ContentModel::plus(ContentModel body) {
  ContentModel e;
  e.kind_ = Kind::Plus;
  e.items_.push_back(std::move(body));
  return e;
}

ContentModel ContentModel::hash(std::vector<ContentModel> left, std::vector<ContentModel> right) {
  if (left.empty() || right.empty()) {
    throw PreconditionError("both operand lists of '#' must be non-empty");
  }
  ContentModel e;
  e.kind_ = Kind::Hash;
  e.split_ = left.size();
  e.items_ = std::move(left);
  for (auto& r : right) e.items_.push_back(std::move(r));
  return e;
}

std::vector<ContentModel> ContentModel::factors() const {
  if (is(Kind::Concat)) return {items_.begin(), items_.end()};
  if (is(Kind::Epsilon)) return {};
  return {*this};
}

std::size_t ContentModel::size() const {
  std::size_t n = 1;
  for (const auto& item : items_) n += item.size();
  if (is(Kind::Concat) || is(Kind::Disj)) n += items_.size() - 2;  // n-ary = n-1 binary ops
  return n;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_symbol_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class ModelParser {
 public:
  ModelParser(std::string_view text, const LabelSet& alphabet) : text_(text), alphabet_(alphabet) {}

  ContentModel parse() {
    skip_ws();
    if (at_end()) fail("empty content model");
    ContentModel e = parse_alt(true);
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return at_end() ? '\0' : text_[pos_];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool starts_item(char c) const { return c == '(' || is_symbol_start(c) || c == '\xCE'; }

  ContentModel parse_alt(bool commas) {
    std::vector<ContentModel> alts{parse_seq(commas)};
    while (peek() == '|') {
      ++pos_;
      alts.push_back(parse_seq(commas));
    }
    return ContentModel::disj(std::move(alts));
  }

  ContentModel parse_seq(bool commas) {
    std::vector<ContentModel> items{parse_item()};
    for (;;) {
      char c = peek();
      if (commas && c == ',') {
        ++pos_;
        items.push_back(parse_item());
      } else if (starts_item(c)) {
        items.push_back(parse_item());
      } else {
        break;
      }
    }
    return ContentModel::concat(std::move(items));
  }

  ContentModel parse_item() {
    ContentModel e = parse_base();
    for (;;) {
      char c = peek();
      if (c == '*') {
        e = ContentModel::star(std::move(e));
      } else if (c == '?') {
        e = ContentModel::opt(std::move(e));
      } else if (c == '+') {
        e = ContentModel::plus(std::move(e));
      } else {
        break;
      }
      ++pos_;
    }
    return e;
  }

  ContentModel parse_base() {
    char c = peek();
    if (c == '(') {
      std::size_t start = pos_;
      ++pos_;
      ContentModel inner = parse_alt(true);
      expect(')');
      if (peek() != '#') return inner;
      pos_ = start;
      auto left = parse_operands();
      expect('#');
      auto right = parse_operands();
      return ContentModel::hash(std::move(left), std::move(right));
    }
    if (at_end()) fail("unexpected end of content model");
    if (text_.substr(pos_).starts_with("\xCE\xB5")) {  // ε
      pos_ += 2;
      return ContentModel::epsilon();
    }
    if (!is_symbol_start(c)) fail(std::string("unexpected '") + c + "'");
    ContentModel sym = parse_one_symbol();
    if (!sym.is(ContentModel::Kind::Symbol)) return sym;
    if (peek() == '#') {
      ++pos_;
      return ContentModel::hash({std::move(sym)}, parse_operands());
    }
    return sym;
  }

  // Consumes one symbol (or "eps") from the identifier at the cursor.
  ContentModel parse_one_symbol() {
    std::size_t start = pos_;
    std::vector<ContentModel> run = parse_identifier();
    if (run.empty()) return ContentModel::epsilon();
    pos_ = start + run.front().label().size();
    return std::move(run.front());
  }

  std::vector<ContentModel> parse_operands() {
    if (peek() == '(') {
      ++pos_;
      std::vector<ContentModel> ops{parse_alt(false)};
      while (peek() == ',') {
        ++pos_;
        ops.push_back(parse_alt(false));
      }
      expect(')');
      return ops;
    }
    if (!is_symbol_start(peek())) fail("expected '#' operand");
    std::size_t start = pos_;
    ContentModel sym = parse_one_symbol();
    if (!sym.is(ContentModel::Kind::Symbol)) {
      throw SyntaxError("a bare '#' operand must be a symbol", start);
    }
    return {std::move(sym)};
  }

  // Reads one identifier token and splits it into symbols. With an alphabet
  // the token is segmented into alphabet labels (whole token preferred);
  // without one every character is its own symbol. "eps" is epsilon unless
  // the alphabet declares it.
  std::vector<ContentModel> parse_identifier() {
    std::size_t start = pos_;
    while (!at_end() && is_symbol_char(text_[pos_])) ++pos_;
    std::string_view token = text_.substr(start, pos_ - start);
    if (token == "eps" && !alphabet_.contains("eps")) return {};
    std::vector<ContentModel> out;
    if (alphabet_.empty()) {
      for (char ch : token) out.push_back(ContentModel::symbol(Label(1, ch)));
      return out;
    }
    if (!segment(token, out)) {
      throw SyntaxError("unknown symbol '" + std::string(token) + "'", start);
    }
    return out;
  }

  bool segment(std::string_view rest, std::vector<ContentModel>& out) const {
    if (rest.empty()) return true;
    for (std::size_t len = rest.size(); len > 0; --len) {
      Label head(rest.substr(0, len));
      if (!alphabet_.contains(head)) continue;
      out.push_back(ContentModel::symbol(std::move(head)));
      if (segment(rest.substr(len), out)) return true;
      out.pop_back();
    }
    return false;
  }

  std::string_view text_;
  const LabelSet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace

ContentModel parse_content_model(std::string_view text, const LabelSet& alphabet) {
  return ModelParser(text, alphabet).parse();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

using Kind = ContentModel::Kind;

// Precedence levels: 0 = alternative, 1 = sequence, 2 = postfix operand.
class Printer {
 public:
  explicit Printer(bool compact) : sep_(compact ? "" : ", ") {}

  std::string print(const ContentModel& e, int ctx) const {
    switch (e.kind()) {
      case Kind::Epsilon:
        return "eps";
      case Kind::Symbol:
        return e.label();
      case Kind::Concat: {
        std::string s;
        for (std::size_t i = 0; i < e.items().size(); ++i) {
          if (i) s += sep_;
          s += print(e.items()[i], 2);
        }
        return ctx > 1 ? "(" + s + ")" : s;
      }
      case Kind::Disj: {
        std::string s;
        for (std::size_t i = 0; i < e.items().size(); ++i) {
          if (i) s += "|";
          s += print(e.items()[i], 1);
        }
        return ctx > 0 ? "(" + s + ")" : s;
      }
      case Kind::Star:
        return print(e.body(), 3) + "*";
      case Kind::Opt:
        return print(e.body(), 3) + "?";
      case Kind::Plus:
        return print(e.body(), 3) + "+";
      case Kind::Hash: {
        std::string s = operands(e.hash_left()) + "#" + operands(e.hash_right());
        return ctx > 2 ? "(" + s + ")" : s;
      }
    }
    return {};
  }

 private:
  std::string operands(std::span<const ContentModel> ops) const {
    if (ops.size() == 1 && ops.front().is(Kind::Symbol)) return ops.front().label();
    std::string s = "(";
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i) s += ",";
      // Operand sequences are juxtaposition-only, so a comma-separated
      // concatenation must be wrapped.
      s += print(ops[i], sep_.empty() ? 0 : 2);
    }
    return s + ")";
  }

  std::string sep_;
};

bool all_single_char(const ContentModel& e) {
  if (e.is(Kind::Symbol)) return e.label().size() == 1;
  return std::ranges::all_of(e.items(), all_single_char);
}

}  // namespace

std::string to_string(const ContentModel& e) { return Printer(all_single_char(e)).print(e, 0); }

std::string to_string(const Word& w) {
  if (w.empty()) return "\xCE\xB5";
  bool compact = std::ranges::all_of(w, [](const Label& l) { return l.size() == 1; });
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !compact) s += ' ';
    s += w[i];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Structural helpers

ContentModel expand_hash(const ContentModel& e) {
  switch (e.kind()) {
    case Kind::Epsilon:
    case Kind::Symbol:
      return e;
    case Kind::Concat:
    case Kind::Disj: {
      std::vector<ContentModel> items;
      for (const auto& item : e.items()) items.push_back(expand_hash(item));
      return e.is(Kind::Concat) ? ContentModel::concat(std::move(items))
                                : ContentModel::disj(std::move(items));
    }
    case Kind::Star:
      return ContentModel::star(expand_hash(e.body()));
    case Kind::Opt:
      return ContentModel::opt(expand_hash(e.body()));
    case Kind::Plus:
      return ContentModel::plus(expand_hash(e.body()));
    case Kind::Hash: {
      std::vector<ContentModel> left_full, left_opt, right_full, right_opt;
      for (const auto& op : e.hash_left()) {
        left_full.push_back(expand_hash(op));
        left_opt.push_back(ContentModel::opt(left_full.back()));
      }
      for (const auto& op : e.hash_right()) {
        right_full.push_back(expand_hash(op));
        right_opt.push_back(ContentModel::opt(right_full.back()));
      }
      std::vector<ContentModel> first = std::move(left_full);
      first.insert(first.end(), right_opt.begin(), right_opt.end());
      std::vector<ContentModel> second = std::move(left_opt);
      second.insert(second.end(), right_full.begin(), right_full.end());
      return ContentModel::disj(
          {ContentModel::concat(std::move(first)), ContentModel::concat(std::move(second))});
    }
  }
  return e;
}

namespace {

void count_into(const ContentModel& e, std::map<Label, std::size_t>& counts) {
  if (e.is(Kind::Symbol)) ++counts[e.label()];
  for (const auto& item : e.items()) count_into(item, counts);
}

}  // namespace

std::map<Label, std::size_t> occurrence_counts(const ContentModel& e) {
  std::map<Label, std::size_t> counts;
  count_into(e, counts);
  return counts;
}

LabelSet symbols(const ContentModel& e) {
  LabelSet out;
  for (const auto& [label, n] : occurrence_counts(e)) out.insert(label);
  return out;
}

bool contains_kind(const ContentModel& e, Kind kind) {
  if (e.is(kind)) return true;
  return std::ranges::any_of(e.items(), [kind](const ContentModel& c) { return contains_kind(c, kind); });
}

}  // namespace xpathsat
