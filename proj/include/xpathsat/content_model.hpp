#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xpathsat {

using Label = std::string;
using LabelSet = std::set<Label>;
using Word = std::vector<Label>;

/// Regular expression over element labels, as used for DTD content models.
///
/// Supported operators are concatenation, disjunction, `*`, `?`, `+` and the
/// "either or both" operator `(a1,...,am)#(b1,...,bl)`. There is no empty-set
/// constant, so every expression denotes a non-empty language.
///
/// The factory functions normalize as they build: nested concatenations and
/// disjunctions are flattened, epsilon is dropped from concatenations, and a
/// one-element concatenation or disjunction collapses to its element. As a
/// result Concat and Disj nodes always carry at least two items.
class ContentModel {
 public:
  enum class Kind { Epsilon, Symbol, Concat, Disj, Star, Opt, Plus, Hash };

  ContentModel() = default;  // epsilon

  static ContentModel epsilon();
  static ContentModel symbol(Label label);
  static ContentModel concat(std::vector<ContentModel> items);
  static ContentModel disj(std::vector<ContentModel> items);
  static ContentModel star(ContentModel body);
  static ContentModel opt(ContentModel body);
  static ContentModel plus(ContentModel body);
  static ContentModel hash(std::vector<ContentModel> left, std::vector<ContentModel> right);

  Kind kind() const noexcept { return kind_; }
  bool is(Kind k) const noexcept { return kind_ == k; }

  /// Symbol label. Only meaningful for Kind::Symbol.
  const Label& label() const noexcept { return label_; }

  /// Operands of Concat/Disj, the single body of Star/Opt/Plus, or the
  /// concatenated left and right operand lists of Hash.
  std::span<const ContentModel> items() const noexcept { return items_; }

  /// Body of Star/Opt/Plus.
  const ContentModel& body() const noexcept { return items_.front(); }

  std::span<const ContentModel> hash_left() const noexcept {
    return std::span<const ContentModel>(items_).first(split_);
  }
  std::span<const ContentModel> hash_right() const noexcept {
    return std::span<const ContentModel>(items_).subspan(split_);
  }

  /// Top-level concatenation factors: the items of a Concat, nothing for
  /// epsilon, or the expression itself.
  std::vector<ContentModel> factors() const;

  /// Number of constants and operators (symbols, epsilon, and one per
  /// operator application).
  std::size_t size() const;

  friend bool operator==(const ContentModel&, const ContentModel&) = default;

 private:
  Kind kind_ = Kind::Epsilon;
  Label label_;
  std::vector<ContentModel> items_;
  std::size_t split_ = 0;
};

/// Parses the textual content-model syntax:
///
///   expr := alt ; alt := seq ('|' seq)* ; seq := item (','? item)*
///   item := base ('*'|'?'|'+')*
///   base := SYMBOL | 'eps' | '(' expr ')' | hash
///   hash := operands '#' operands
///   operands := SYMBOL | '(' operand (',' operand)* ')'
///
/// An operand is an alternative whose sequences use juxtaposition only, so
/// `(c,d,e,f+)#(g)` has four left operands and `b#(c#d)` nests.
///
/// When `alphabet` is non-empty every symbol must belong to it.
ContentModel parse_content_model(std::string_view text, const LabelSet& alphabet = {});

/// Renders in the syntax accepted by parse_content_model. Concatenation is
/// written by juxtaposition when every label is a single character and with
/// ", " otherwise.
std::string to_string(const ContentModel& e);

/// Rewrites every `#` into `a1..am b1?..bl? | a1?..am? b1..bl`.
ContentModel expand_hash(const ContentModel& e);

/// Labels occurring syntactically in `e`.
LabelSet symbols(const ContentModel& e);

/// Number of syntactic occurrences of each label.
std::map<Label, std::size_t> occurrence_counts(const ContentModel& e);

/// True iff `e` contains an operator of the given kind anywhere.
bool contains_kind(const ContentModel& e, ContentModel::Kind kind);

/// Membership test `w ∈ L(e)`.
bool matches(const ContentModel& e, const Word& w);

/// Language equivalence `L(e1) = L(e2)`.
bool equivalent(const ContentModel& e1, const ContentModel& e2);

/// Every word of `L(e)` of length at most `max_len`, ordered by length and
/// then lexicographically.
std::vector<Word> enumerate_words(const ContentModel& e, std::size_t max_len);

/// Compact word rendering: labels juxtaposed when all are single characters,
/// separated by spaces otherwise; "ε" for the empty word.
std::string to_string(const Word& w);

}  // namespace xpathsat
