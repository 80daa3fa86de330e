#include "xpathsat/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xpathsat/error.hpp"
#include "xpathsat/oracle.hpp"
#include "xpathsat/sat_checker.hpp"

namespace xpathsat::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string dtd_path;
  std::string format = "auto";
  std::string root;
  std::string xpath;
  std::string model;
  std::string alphabet;
  std::vector<std::string> models;
  std::size_t depth = 4;
  std::size_t rep = 0;  // 0: derived from the query
  std::size_t budget = TreeBounds{}.budget;
  bool json = false;
  bool trace = false;
};

std::string read_text(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DtdError("cannot read " + path);
  ss << in.rdbuf();
  return ss.str();
}

Dtd load_dtd(const Options& o) {
  std::string text = read_text(o.dtd_path);
  DtdFormat fmt = DtdFormat::Native;
  if (o.format == "xml" || (o.format == "auto" && text.find("<!ELEMENT") != std::string::npos)) {
    fmt = DtdFormat::XmlDtd;
  }
  std::optional<Label> root;
  if (!o.root.empty()) root = o.root;
  return parse_dtd(text, fmt, root);
}

LabelSet parse_alphabet(const std::string& s) {
  LabelSet out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_classify(const Options& o, std::ostream& out) {
  Dtd d = load_dtd(o);
  DtdClassification c = classify(d);
  if (o.json) {
    json rules = json::array();
    for (const auto& [label, r] : c.rules) {
      rules.push_back({{"label", label},
                       {"model", to_string(d.rule(label))},
                       {"df", r.is_df},
                       {"dc", r.is_dc},
                       {"dc_qph", r.is_dc_qph},
                       {"rw", r.is_rw},
                       {"mrw", r.is_mrw},
                       {"mdf_dc", r.is_mdf_dc}});
    }
    json totals = {{"rules", c.rules.size()}, {"df", c.df},   {"dc", c.dc},         {"dc_qph", c.dc_qph},
                   {"rw", c.rw},              {"mrw", c.mrw}, {"mdf_dc", c.mdf_dc}};
    out << json{{"rules", rules}, {"totals", totals}, {"mrw", c.all_mrw()}, {"mdf_dc", c.all_mdf_dc()}}.dump(2)
        << "\n";
    return kYes;
  }
  std::size_t width = 6;
  for (const auto& [label, r] : c.rules) width = std::max(width, label.size() + 1);
  auto row = [&](const std::string& name, const std::vector<std::string>& cells) {
    out << std::left << std::setw(static_cast<int>(width)) << name;
    for (const auto& cell : cells) out << std::setw(8) << cell;
    out << "\n";
  };
  row("rule", {"DF", "DC", "DC?+#", "RW", "MRW", "MDF/DC"});
  for (const auto& [label, r] : c.rules) {
    row(label, {yes_no(r.is_df), yes_no(r.is_dc), yes_no(r.is_dc_qph), yes_no(r.is_rw), yes_no(r.is_mrw),
                yes_no(r.is_mdf_dc)});
  }
  row("total", {std::to_string(c.df), std::to_string(c.dc), std::to_string(c.dc_qph), std::to_string(c.rw),
                std::to_string(c.mrw), std::to_string(c.mdf_dc)});
  return kYes;
}

int cmd_sat(const Options& o, std::ostream& out) {
  Dtd d = load_dtd(o);
  ExprPtr p = parse_xpath(o.xpath);
  Verdict v = satisfiable(*p, d, o.trace);
  if (o.json) {
    json j = {{"verdict", v.sat ? "SAT" : "UNSAT"}, {"algorithm", v.algorithm}, {"final_state", v.final_state}};
    if (v.failed_step) j["failed_step"] = *v.failed_step;
    if (!v.reason.empty()) j["reason"] = v.reason;
    if (v.inconsistent_map) j["inconsistent_map"] = *v.inconsistent_map;
    if (o.trace) j["trace"] = v.trace;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& line : v.trace) out << line << "\n";
    if (v.sat) {
      out << "SAT (" << v.algorithm << ")\n";
    } else {
      out << "UNSAT (" << v.algorithm << "): " << v.reason << "\n";
    }
  }
  return v.sat ? kYes : kNo;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  Dtd d = load_dtd(o);
  ExprPtr p = parse_xpath(o.xpath);
  TreeBounds b{o.depth, o.rep == 0 ? default_rep(*p) : o.rep, o.budget};
  if (b.depth == 0) {
    err << "error: --depth must be positive\n";
    return kInputError;
  }
  OracleResult r = oracle_satisfiable(*p, d, b);
  if (o.json) {
    json j = {{"verdict", r.sat ? "SAT" : "UNKNOWN"}, {"depth", b.depth}, {"rep", b.rep}, {"exhausted", r.exhausted}};
    if (r.witness) j["witness"] = to_string(*r.witness);
    j["trees_examined"] = r.trees_examined;
    out << j.dump(2) << "\n";
  } else if (r.sat) {
    out << "SAT " << to_string(*r.witness) << "\n";
  } else if (r.exhausted) {
    out << "UNKNOWN (search budget of " << b.budget << " exhausted)\n";
  } else {
    out << "UNKNOWN (no witness with depth <= " << b.depth << ", rep <= " << b.rep << ")\n";
  }
  return r.sat ? kYes : kNo;
}

int cmd_equiv(const Options& o, std::ostream& out) {
  LabelSet alphabet = parse_alphabet(o.alphabet);
  ContentModel e1 = parse_content_model(o.models.at(0), alphabet);
  ContentModel e2 = parse_content_model(o.models.at(1), alphabet);
  bool eq = equivalent(e1, e2);
  if (o.json) {
    out << json{{"equivalent", eq}, {"left", to_string(e1)}, {"right", to_string(e2)}}.dump(2) << "\n";
  } else {
    out << (eq ? "equivalent" : "not equivalent") << "\n";
  }
  return eq ? kYes : kNo;
}

int cmd_delta(const Options& o, std::ostream& out) {
  if (!o.model.empty()) {
    ContentModel e = parse_content_model(o.model, parse_alphabet(o.alphabet));
    if (!is_mrw(e)) throw NotMrwError("(model)", to_string(e));
    ContentModel r = delta(e);
    if (o.json) {
      out << json{{"model", to_string(e)}, {"delta", to_string(r)}}.dump(2) << "\n";
    } else {
      out << to_string(r) << "\n";
    }
    return kYes;
  }
  Dtd d = delta_dtd(load_dtd(o));
  if (o.json) {
    json rules = json::object();
    for (const auto& a : d.order) rules[a] = to_string(d.rule(a));
    out << json{{"root", d.root}, {"rules", rules}}.dump(2) << "\n";
  } else {
    out << to_string(d);
  }
  return kYes;
}

int cmd_graph(const Options& o, std::ostream& out) {
  SchemaGraph g(delta_dtd(load_dtd(o)));
  if (o.json) {
    out << g.to_json() << "\n";
  } else {
    out << g.to_text();
  }
  return kYes;
}

void add_dtd_options(CLI::App* sub, Options& o) {
  sub->add_option("--dtd", o.dtd_path, "DTD file ('-' for stdin)")->required();
  sub->add_option("--format", o.format, "DTD syntax")->check(CLI::IsMember({"auto", "native", "xml"}));
  sub->add_option("--root", o.root, "root label, overriding the file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"XPath satisfiability under DTDs", "xpathsat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* classify_cmd = app.add_subcommand("classify", "classify every rule of a DTD");
  add_dtd_options(classify_cmd, o);

  auto* sat_cmd = app.add_subcommand("sat", "decide satisfiability with the polynomial procedures");
  add_dtd_options(sat_cmd, o);
  sat_cmd->add_option("--xpath", o.xpath, "query")->required();
  sat_cmd->add_flag("--trace", o.trace, "print intermediate states");

  auto* oracle_cmd = app.add_subcommand("oracle", "bounded search for a witness tree");
  add_dtd_options(oracle_cmd, o);
  oracle_cmd->add_option("--xpath", o.xpath, "query")->required();
  oracle_cmd->add_option("--depth", o.depth, "maximum tree depth");
  oracle_cmd->add_option("--rep", o.rep, "maximum iterations of each * or + (default max(2, size))");
  oracle_cmd->add_option("--budget", o.budget, "maximum search steps");

  auto* equiv_cmd = app.add_subcommand("equiv", "language equivalence of two content models");
  equiv_cmd->add_option("models", o.models, "two content models")->expected(2)->required();
  equiv_cmd->add_option("--alphabet", o.alphabet, "comma-separated labels for multi-character names");

  auto* delta_cmd = app.add_subcommand("delta", "apply the normalization to a DTD or a single model");
  delta_cmd->add_option("--dtd", o.dtd_path, "DTD file ('-' for stdin)");
  delta_cmd->add_option("--format", o.format, "DTD syntax")->check(CLI::IsMember({"auto", "native", "xml"}));
  delta_cmd->add_option("--root", o.root, "root label, overriding the file");
  delta_cmd->add_option("--model", o.model, "single content model");
  delta_cmd->add_option("--alphabet", o.alphabet, "comma-separated labels for --model");

  auto* graph_cmd = app.add_subcommand("graph", "schema graph of the normalized DTD");
  add_dtd_options(graph_cmd, o);

  for (auto* sub : {classify_cmd, sat_cmd, oracle_cmd, equiv_cmd, delta_cmd, graph_cmd}) {
    sub->add_flag("--json", o.json, "machine-readable output");
  }

  std::vector<std::string> argv_store{"xpathsat"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kYes : kInputError;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (sat_cmd->parsed()) return cmd_sat(o, out);
    if (oracle_cmd->parsed()) return cmd_oracle(o, out, err);
    if (equiv_cmd->parsed()) return cmd_equiv(o, out);
    if (delta_cmd->parsed()) {
      if (o.dtd_path.empty() == o.model.empty()) {
        err << "error: delta needs exactly one of --dtd and --model\n";
        return kInputError;
      }
      return cmd_delta(o, out);
    }
    if (graph_cmd->parsed()) return cmd_graph(o, out);
  } catch (const NotMrwError& e) {
    err << "error: " << e.what() << "\n";
    return kNotMrw;
  } catch (const UnsupportedFragment& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace xpathsat::cli
