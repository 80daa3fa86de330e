#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xpathsat/content_model.hpp"

namespace xpathsat {

/// A DTD (alphabet, root, rules). Every label of the alphabet has a rule;
/// `order` lists the labels in declaration order.
struct Dtd {
  LabelSet alphabet;
  Label root;
  std::map<Label, ContentModel> rules;
  std::vector<Label> order;

  const ContentModel& rule(const Label& a) const;
};

enum class DtdFormat { Native, XmlDtd };

/// Parses a DTD.
///
/// Native format, one item per line:
///
///   # comment
///   root r
///   r := r*(a*b|c)r*
///   a := eps
///
/// The first rule's label is the root unless a `root` directive is present.
///
/// The XML format accepts `<!ELEMENT name model>` declarations with EMPTY
/// and `(#PCDATA)` read as the empty word. ATTLIST declarations are ignored.
/// The root comes from a `<!-- root: name -->` comment.
///
/// `root_override`, when set, wins over either source.
Dtd parse_dtd(std::string_view text, DtdFormat format,
              const std::optional<Label>& root_override = std::nullopt);

/// Renders in the native format.
std::string to_string(const Dtd& d);

/// Labels not reachable from the root. Empty means the DTD is valid.
LabelSet validate_no_useless(const Dtd& d);

bool is_df(const ContentModel& e);
bool is_dc(const ContentModel& e);
bool is_dc_qph(const ContentModel& e);
bool is_rw(const ContentModel& e);
bool is_mrw(const ContentModel& e);
bool is_mdf_dc(const ContentModel& e);

struct RuleClassification {
  bool is_df = false;
  bool is_dc = false;
  bool is_dc_qph = false;
  bool is_rw = false;
  bool is_mrw = false;
  bool is_mdf_dc = false;
};

RuleClassification classify(const ContentModel& e);

struct DtdClassification {
  std::vector<std::pair<Label, RuleClassification>> rules;  // declaration order
  std::size_t df = 0, dc = 0, dc_qph = 0, rw = 0, mrw = 0, mdf_dc = 0;

  bool all_mrw() const { return mrw == rules.size(); }
  bool all_mdf_dc() const { return mdf_dc == rules.size(); }
};

DtdClassification classify(const Dtd& d);

/// Drops `?`, turns `e+` into `e*` and `#` into the concatenation of its
/// operands, recursively.
ContentModel delta(const ContentModel& e);

/// Rule-wise delta. Throws NotMrwError for the first non-MRW rule.
Dtd delta_dtd(const Dtd& d);

/// Bounded check that every word of either language up to `max_len` is a
/// subsequence of some word of the other.
bool subsequence_preserves(const ContentModel& e, const ContentModel& e2, std::size_t max_len = 6);

}  // namespace xpathsat
