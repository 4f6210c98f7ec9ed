#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "metareduce/clause.hpp"
#include "metareduce/errors.hpp"
#include "metareduce/fragments.hpp"
#include "metareduce/reduction.hpp"
#include "metareduce/resolution.hpp"
#include "metareduce/theory.hpp"
#include "metareduce/version.hpp"

namespace metareduce::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "text";
  std::string out;
};

struct Fragment {
  std::string constraint = "connected";
  std::string arities;
  std::size_t max_body = 0;
  std::string set;
};

struct Search {
  std::size_t depth = 7;
  std::optional<std::size_t> slack;
  long timeout_ms = 0;
};

std::set<unsigned> parse_arities(const std::string& text) {
  std::set<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.insert(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw UsageError("bad arity '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--arities needs at least one arity");
  return out;
}

std::vector<Metarule> read_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

FragmentSpec fragment_spec(const Fragment& f) {
  if (f.arities.empty() || f.max_body == 0)
    throw UsageError("give --set FILE, or --arities and --max-body");
  return FragmentSpec{parse_arities(f.arities), f.max_body,
                      parse_constraint(f.constraint)};
}

std::vector<Metarule> load(const Fragment& f) {
  if (!f.set.empty()) return read_set(f.set);
  return enumerate(fragment_spec(f));
}

SearchOptions search_options(const Search& s) {
  SearchOptions o;
  o.slack = s.slack;
  o.deadline = Deadline::after(std::chrono::milliseconds(s.timeout_ms));
  return o;
}

ordered_json to_json(const ResolutionStep& s) {
  ordered_json unifier = ordered_json::array();
  for (const auto& [v, r] : s.unifier) unifier.push_back({v, r});
  return {{"left", s.left.text()},       {"body_index", s.body_index},
          {"right", s.right.text()},     {"unifier", unifier},
          {"resolvent", s.resolvent.text()}, {"collapsed", s.collapsed}};
}

ordered_json to_json(const DerivationTrace& t) {
  ordered_json steps = ordered_json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  return {{"base", t.base}, {"steps", steps}};
}

ordered_json to_json(const Removal& r) {
  ordered_json j{{"clause", r.clause.text()}, {"reason", r.reason}};
  if (r.subsumer) j["subsumer"] = r.subsumer->text();
  if (r.trace) j["trace"] = to_json(*r.trace);
  return j;
}

ordered_json to_json(const ReductionReport& r) {
  ordered_json reduced = ordered_json::array();
  for (const auto& m : r.reduced) reduced.push_back(m.text());
  ordered_json removed = ordered_json::array();
  for (const auto& m : r.removed) removed.push_back(to_json(m));
  return {{"source", r.source},
          {"relation", relation_name(r.relation.kind)},
          {"depth", r.relation.depth},
          {"order", order_name(r.order)},
          {"input_count", r.input_size},
          {"kept", reduced},
          {"removed_count", r.removed.size()},
          {"removed", removed},
          {"checks", r.checks},
          {"duration_ms", r.duration_ms},
          {"version", kVersion}};
}

void write_trace_text(std::ostream& os, const DerivationTrace& t) {
  os << "base " << t.base << "\n";
  for (const auto& s : t.steps) {
    os << "resolve " << s.left.text() << " [" << s.body_index << "] with "
       << s.right.text() << "\n  unifier {";
    for (std::size_t i = 0; i < s.unifier.size(); ++i)
      os << (i ? ", " : "") << s.unifier[i].first << "/" << s.unifier[i].second;
    os << "}\n  => " << s.resolvent.text();
    if (s.collapsed) os << "  (" << s.collapsed << " collapsed)";
    os << "\n";
  }
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  app->add_option("--out", c.out, "Write output to FILE");
}

void add_fragment(CLI::App* app, Fragment& f) {
  app->add_option("--constraint", f.constraint,
                  "connected, datalog, singleton-free, duplicate-free or none");
  app->add_option("--arities", f.arities, "Comma-separated literal arities");
  app->add_option("--max-body", f.max_body, "Largest body size");
  app->add_option("--set", f.set, "Read metarules from FILE instead");
}

void add_search(CLI::App* app, Search& s) {
  app->add_option("--depth", s.depth, "Resolution depth bound");
  app->add_option("--slack", s.slack,
                  "Extra body literals for entailment closures (default: "
                  "unbounded)");
  app->add_option("--timeout", s.timeout_ms, "Time budget in ms (0: none)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Reduce sets of second-order Horn metarules", "metareduce"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  Fragment frag;
  Search search;

  auto* en = app.add_subcommand("enumerate", "List the metarules of a fragment");
  bool count_only = false;
  add_common(en, common);
  add_fragment(en, frag);
  en->add_flag("--count-only", count_only, "Print only the number of metarules");

  auto* re = app.add_subcommand("reduce", "Reduce a fragment or a set");
  std::string relation = "e", order = "body-size-desc";
  std::size_t target_max_body = 0;
  add_common(re, common);
  add_fragment(re, frag);
  add_search(re, search);
  re->add_option("--relation", relation, "s, e or d");
  re->add_option("--order", order, "body-size-desc or input");
  re->add_option("--target-max-body", target_max_body,
                 "Reduce onto the same fragment with this body bound");

  auto* ch = app.add_subcommand("check", "Is a clause redundant given a set?");
  std::string clause_text;
  add_common(ch, common);
  add_search(ch, search);
  ch->add_option("--relation", relation, "s, e or d");
  ch->add_option("--set", frag.set, "Metarule file")->required();
  ch->add_option("--clause", clause_text, "Metarule to test")->required();

  auto* de = app.add_subcommand("derive", "Derive a clause from a set");
  bool full_trace = false;
  add_common(de, common);
  add_search(de, search);
  de->add_option("--set", frag.set, "Metarule file")->required();
  de->add_option("--clause", clause_text, "Metarule to derive")->required();
  de->add_flag("--trace", full_trace, "Print every resolution step");

  auto* wi = app.add_subcommand("witness", "Print a witness clause");
  std::string witness_name;
  unsigned param = 0;
  add_common(wi, common);
  wi->add_option("--name", witness_name, "ci, ca, cim, datalog-s or singleton-s")
      ->required()
      ->check(CLI::IsMember({"ci", "ca", "cim", "datalog-s", "singleton-s"}));
  wi->add_option("--param", param, "Size parameter");

  auto* hs = app.add_subcommand("hspace", "Hypothesis-space size bound");
  unsigned long predicates = 0, metarules = 0, max_body = 0, clauses = 0;
  add_common(hs, common);
  hs->add_option("--predicates", predicates)->required();
  hs->add_option("--metarules", metarules)->required();
  hs->add_option("--max-body", max_body)->required();
  hs->add_option("--clauses", clauses)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kUsage;
  }

  std::ostringstream buf;
  int code = kOk;
  const bool json = common.format == "json";
  try {
    if (*en) {
      auto all = enumerate(fragment_spec(frag));
      if (count_only)
        buf << (json ? ordered_json{{"fragment", describe(fragment_spec(frag))},
                                    {"count", all.size()}}
                             .dump() + "\n"
                     : std::to_string(all.size()) + "\n");
      else if (json) {
        ordered_json list = ordered_json::array();
        for (const auto& m : all) list.push_back(m.text());
        buf << ordered_json{{"fragment", describe(fragment_spec(frag))},
                            {"count", all.size()},
                            {"metarules", list}}
                   .dump(2)
            << "\n";
      } else {
        for (const auto& m : all) buf << m.text() << "\n";
      }
    } else if (*re) {
      auto theory = load(frag);
      const std::string source =
          frag.set.empty() ? describe(fragment_spec(frag)) : frag.set;
      ReductionRelation rel{parse_relation(relation), search.depth};
      ReductionOptions opts{parse_order(order), search_options(search)};
      if (target_max_body > 0) {
        std::function<bool(const Metarule&)> target;
        if (frag.set.empty()) {
          FragmentSpec spec = fragment_spec(frag);
          spec.max_body = target_max_body;
          target = [spec](const Metarule& m) { return in_fragment(spec, m); };
        } else {
          target = [&](const Metarule& m) { return m.body_size() <= target_max_body; };
        }
        auto result = mreduce(theory, target, rel, opts);
        if (result.report) result.report->source = source;
        if (!result.report) code = kNegative;
        if (json) {
          ordered_json j{{"success", result.report.has_value()},
                         {"target_max_body", target_max_body}};
          if (result.failed_on) j["failed_on"] = result.failed_on->text();
          ordered_json outside = ordered_json::array();
          for (const auto& r : result.outside) outside.push_back(to_json(r));
          j["outside"] = outside;
          if (result.report) j["report"] = to_json(*result.report);
          buf << j.dump(2) << "\n";
        } else if (result.report) {
          for (const auto& m : result.report->reduced) buf << m.text() << "\n";
        } else {
          err << "not reducible onto the target: " << result.failed_on->text()
              << " does not follow\n";
        }
      } else {
        auto report = reduce(theory, rel, opts);
        report.source = source;
        if (json)
          buf << to_json(report).dump(2) << "\n";
        else
          for (const auto& m : report.reduced) buf << m.text() << "\n";
      }
    } else if (*ch) {
      auto theory = read_set(frag.set);
      Metarule c = parse(clause_text);
      std::vector<Metarule> rest;
      for (const auto& t : theory)
        if (t.text() != c.text()) rest.push_back(t);
      ReductionRelation rel{parse_relation(relation), search.depth};
      Removal why{c, "", {}, {}};
      bool redundant = is_redundant(rest, c, rel, search_options(search), &why);
      code = redundant ? kOk : kNegative;
      if (json) {
        ordered_json j{{"clause", c.text()},
                       {"relation", relation_name(rel.kind)},
                       {"depth", rel.depth},
                       {"redundant", redundant}};
        if (redundant) j["why"] = to_json(why);
        buf << j.dump(2) << "\n";
      } else {
        buf << (redundant ? "redundant" : "not redundant");
        if (redundant) buf << " (" << why.reason << ")";
        buf << "\n";
      }
    } else if (*de) {
      auto theory = read_set(frag.set);
      Metarule c = parse(clause_text);
      auto trace = derives_k(theory, c, search.depth, search_options(search));
      code = trace ? kOk : kNegative;
      if (json) {
        ordered_json j{{"clause", c.text()}, {"depth", search.depth},
                       {"derived", trace.has_value()}};
        if (trace) j["trace"] = to_json(*trace);
        buf << j.dump(2) << "\n";
      } else if (!trace) {
        buf << "not derivable within depth " << search.depth << "\n";
      } else if (full_trace) {
        write_trace_text(buf, *trace);
      } else {
        buf << "derived in " << trace->steps.size() << " step"
            << (trace->steps.size() == 1 ? "" : "s") << " from " << trace->base
            << "\n";
      }
    } else if (*wi) {
      Metarule w = [&] {
        if (witness_name == "ci") return witness_ci();
        if (witness_name == "ca") return witness_ca(param ? param : 2);
        if (witness_name == "cim") return witness_cim(param ? param : 1);
        if (witness_name == "datalog-s") return witness_datalog_s(param ? param : 2);
        return witness_singleton_s(param ? param : 2);
      }();
      if (json)
        buf << ordered_json{{"name", witness_name},
                            {"clause", w.text()},
                            {"body_size", w.body_size()}}
                   .dump(2)
            << "\n";
      else
        buf << w.text() << "\n";
    } else if (*hs) {
      auto size = hypothesis_space_size(predicates, metarules, max_body, clauses);
      if (json)
        buf << ordered_json{{"predicates", predicates}, {"metarules", metarules},
                            {"max_body", max_body},     {"clauses", clauses},
                            {"size", size.str()}}
                   .dump(2)
            << "\n";
      else
        buf << size << "\n";
    }
  } catch (const ResourceError& e) {
    err << "metareduce: " << e.what() << "\n";
    return kResource;
  } catch (const UsageError& e) {
    err << "metareduce: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "metareduce: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "metareduce: " << e.what() << "\n";
    return kUsage;
  }

  if (common.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(common.out);
    if (!file) {
      err << "metareduce: cannot write '" << common.out << "'\n";
      return kUsage;
    }
    file << buf.str();
  }
  return code;
}

}  // namespace metareduce::cli
