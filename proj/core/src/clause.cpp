#include "metareduce/clause.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace metareduce {

namespace {

constexpr std::string_view kPredicatePool = "PQRSTUVW";
constexpr std::string_view kArgumentPool = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

const std::string& cached_name(Sort sort, std::size_t index) {
  static const auto build = [](std::string_view pool) {
    std::vector<std::string> names;
    names.reserve(1024);
    for (std::size_t i = 0; i < 1024; ++i) {
      std::string n(1, pool[i % pool.size()]);
      if (i >= pool.size()) n += std::to_string(i / pool.size());
      names.push_back(std::move(n));
    }
    return names;
  };
  static const std::vector<std::string> preds = build(kPredicatePool);
  static const std::vector<std::string> args = build(kArgumentPool);
  const auto& table = sort == Sort::SecondOrder ? preds : args;
  if (index >= table.size()) throw std::out_of_range("too many variables");
  return table[index];
}

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NamedClause run() {
    NamedClause out;
    skip_ws();
    out.clause.head = literal(out);
    skip_ws();
    if (peek() == '.') fail("facts are not allowed (empty body)");
    if (text_.substr(pos_, 2) == ":-" || text_.substr(pos_, 2) == "<-") {
      pos_ += 2;
    } else {
      fail("expected ':-'");
    }
    skip_ws();
    if (peek() == '.') fail("facts are not allowed (empty body)");
    out.clause.body.push_back(literal(out));
    skip_ws();
    while (peek() == ',') {
      ++pos_;
      skip_ws();
      out.clause.body.push_back(literal(out));
      skip_ws();
    }
    if (peek() != '.') fail("expected ',' or '.'");
    ++pos_;
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return out;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  }

  std::string_view name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  static VarId intern(std::vector<std::string>& names, std::string_view n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it != names.end()) return static_cast<VarId>(it - names.begin());
    names.emplace_back(n);
    return static_cast<VarId>(names.size() - 1);
  }

  Literal literal(NamedClause& out) {
    std::size_t start = pos_;
    std::string_view pred = name();
    if (!std::isupper(static_cast<unsigned char>(pred[0]))) {
      pos_ = start;
      fail("predicate position must hold a second-order variable");
    }
    Literal lit;
    lit.predicate = intern(out.predicate_names, pred);
    skip_ws();
    if (peek() != '(') return lit;
    ++pos_;
    for (;;) {
      skip_ws();
      std::size_t arg_start = pos_;
      std::string_view arg = name();
      skip_ws();
      if (!std::isupper(static_cast<unsigned char>(arg[0])) || peek() == '(') {
        pos_ = arg_start;
        fail("argument is not a first-order variable");
      }
      lit.args.push_back(intern(out.argument_names, arg));
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')'");
    }
    return lit;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------- canonicalization

// Finds the body order whose first-appearance serialization is smallest.
// Only literals rendering to the minimal text at a level can start an
// optimal suffix, because no literal text followed by ',' is a prefix of
// another, so ties are the only branching.
class Canonicalizer {
 public:
  explicit Canonicalizer(const Clause& c) : c_(c) {
    body_ = c.body;
    std::sort(body_.begin(), body_.end());
    body_.erase(std::unique(body_.begin(), body_.end()), body_.end());
    pmap_.assign(c.predicate_bound(), -1);
    fmap_.assign(c.argument_bound(), -1);

    std::vector<int> pred_uses(pmap_.size(), 0);
    ++pred_uses[c.head.predicate];
    for (const auto& l : body_) ++pred_uses[l.predicate];
    // Literals equal up to a predicate variable used nowhere else are
    // interchangeable; explore one per class at each level.
    swap_class_.resize(body_.size());
    std::iota(swap_class_.begin(), swap_class_.end(), 0);
    for (std::size_t i = 0; i < body_.size(); ++i) {
      if (pred_uses[body_[i].predicate] != 1) continue;
      for (std::size_t j = 0; j < i; ++j) {
        if (pred_uses[body_[j].predicate] == 1 &&
            body_[j].args == body_[i].args) {
          swap_class_[i] = swap_class_[j];
          break;
        }
      }
    }
  }

  void search() {
    std::vector<std::pair<Sort, VarId>> undo;
    append_literal(buf_, c_.head, undo);
    buf_ += " :- ";
    used_.assign(body_.size(), false);
    dfs(0);
  }

  std::string best_;
  std::vector<std::size_t> best_order_;
  std::vector<Literal> body_;

 private:
  void append_name(std::string& out, Sort sort, VarId id,
                   std::vector<std::pair<Sort, VarId>>& undo) {
    auto& map = sort == Sort::SecondOrder ? pmap_ : fmap_;
    auto& next = sort == Sort::SecondOrder ? pnext_ : fnext_;
    if (map[id] < 0) {
      map[id] = next++;
      undo.emplace_back(sort, id);
    }
    out += cached_name(sort, static_cast<std::size_t>(map[id]));
  }

  void append_literal(std::string& out, const Literal& l,
                      std::vector<std::pair<Sort, VarId>>& undo) {
    append_name(out, Sort::SecondOrder, l.predicate, undo);
    if (l.args.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      if (i) out += ',';
      append_name(out, Sort::FirstOrder, l.args[i], undo);
    }
    out += ')';
  }

  void rollback(std::vector<std::pair<Sort, VarId>>& undo) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      if (it->first == Sort::SecondOrder) {
        pmap_[it->second] = -1;
        --pnext_;
      } else {
        fmap_[it->second] = -1;
        --fnext_;
      }
    }
    undo.clear();
  }

  // True when the partial buffer already exceeds the incumbent.
  bool worse_than_best() const {
    if (best_.empty()) return false;
    std::size_t n = std::min(buf_.size(), best_.size());
    return buf_.compare(0, n, best_, 0, n) > 0;
  }

  void dfs(std::size_t level) {
    if (level == body_.size()) {
      buf_ += '.';
      if (best_.empty() || buf_ < best_) {
        best_ = buf_;
        best_order_ = order_;
      }
      buf_.pop_back();
      return;
    }
    std::string min_text;
    std::vector<std::size_t> ties;
    std::string scratch;
    std::vector<std::pair<Sort, VarId>> undo;
    for (std::size_t i = 0; i < body_.size(); ++i) {
      if (used_[i]) continue;
      scratch.clear();
      append_literal(scratch, body_[i], undo);
      rollback(undo);
      if (ties.empty() || scratch < min_text) {
        min_text = scratch;
        ties.assign(1, i);
      } else if (scratch == min_text) {
        ties.push_back(i);
      }
    }

    std::size_t mark = buf_.size();
    if (level > 0) buf_ += ',';
    buf_ += min_text;
    if (worse_than_best()) {
      buf_.resize(mark);
      return;
    }
    std::vector<std::size_t> seen_classes;
    for (std::size_t i : ties) {
      std::size_t cls = swap_class_[i];
      if (std::find(seen_classes.begin(), seen_classes.end(), cls) !=
          seen_classes.end())
        continue;
      seen_classes.push_back(cls);
      std::string dummy;
      append_literal(dummy, body_[i], undo);
      used_[i] = true;
      order_.push_back(i);
      dfs(level + 1);
      order_.pop_back();
      used_[i] = false;
      rollback(undo);
    }
    buf_.resize(mark);
  }

  const Clause& c_;
  std::vector<int> pmap_, fmap_;
  int pnext_ = 0, fnext_ = 0;
  std::string buf_;
  std::vector<bool> used_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> swap_class_;
};

void renumber(Clause& c, VarId& preds, VarId& args) {
  std::vector<int> pmap(c.predicate_bound(), -1);
  std::vector<int> fmap(c.argument_bound(), -1);
  int pn = 0, fn = 0;
  auto fix = [&](Literal& l) {
    if (pmap[l.predicate] < 0) pmap[l.predicate] = pn++;
    l.predicate = static_cast<VarId>(pmap[l.predicate]);
    for (auto& a : l.args) {
      if (fmap[a] < 0) fmap[a] = fn++;
      a = static_cast<VarId>(fmap[a]);
    }
  };
  fix(c.head);
  for (auto& l : c.body) fix(l);
  preds = static_cast<VarId>(pn);
  args = static_cast<VarId>(fn);
}

void append_plain(std::string& out, const Literal& l) {
  out += cached_name(Sort::SecondOrder, l.predicate);
  if (l.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) out += ',';
    out += cached_name(Sort::FirstOrder, l.args[i]);
  }
  out += ')';
}

std::string render_renumbered(const Clause& c) {
  std::string out;
  append_plain(out, c.head);
  out += " :- ";
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (i) out += ',';
    append_plain(out, c.body[i]);
  }
  out += '.';
  return out;
}

}  // namespace

VarId Clause::predicate_bound() const {
  VarId b = head.predicate + 1;
  for (const auto& l : body) b = std::max<VarId>(b, l.predicate + 1);
  return b;
}

VarId Clause::argument_bound() const {
  VarId b = 0;
  for (auto a : head.args) b = std::max<VarId>(b, a + 1);
  for (const auto& l : body)
    for (auto a : l.args) b = std::max<VarId>(b, a + 1);
  return b;
}

void Substitution::bind(Variable from, Variable to) {
  if (from.sort != to.sort)
    throw std::invalid_argument("substitution must preserve variable sort");
  map_[from] = to;
}

Variable Substitution::operator()(Variable v) const {
  auto it = map_.find(v);
  return it == map_.end() ? v : it->second;
}

Variable NamedClause::predicate(std::string_view name) const {
  auto it = std::find(predicate_names.begin(), predicate_names.end(), name);
  if (it == predicate_names.end())
    throw std::invalid_argument("unknown predicate variable");
  return {static_cast<VarId>(it - predicate_names.begin()), Sort::SecondOrder};
}

Variable NamedClause::argument(std::string_view name) const {
  auto it = std::find(argument_names.begin(), argument_names.end(), name);
  if (it == argument_names.end())
    throw std::invalid_argument("unknown first-order variable");
  return {static_cast<VarId>(it - argument_names.begin()), Sort::FirstOrder};
}

std::string variable_name(Variable v) {
  return cached_name(v.sort, v.id);
}

NamedClause parse_clause(std::string_view text) { return Parser(text).run(); }

Metarule parse(std::string_view text) {
  return canonicalize(parse_clause(text).clause);
}

std::string render(const Metarule& m) { return m.text(); }

std::string render(const Clause& c) {
  Clause copy = c;
  VarId p, a;
  renumber(copy, p, a);
  return render_renumbered(copy);
}

Metarule canonicalize(const Clause& c) {
  if (c.body.empty())
    throw std::invalid_argument("metarule body must be nonempty");
  Canonicalizer canon(c);
  canon.search();
  Metarule m;
  m.clause_.head = c.head;
  m.clause_.body.reserve(canon.best_order_.size());
  for (std::size_t i : canon.best_order_)
    m.clause_.body.push_back(canon.body_[i]);
  renumber(m.clause_, m.predicates_, m.arguments_);
  m.text_ = std::move(canon.best_);
  return m;
}

bool alpha_equal(const Metarule& a, const Metarule& b) {
  return a.text() == b.text();
}

Clause apply_substitution(const Clause& c, const Substitution& s) {
  auto map_lit = [&](const Literal& l) {
    Literal out;
    out.predicate = s({l.predicate, Sort::SecondOrder}).id;
    for (auto a : l.args) out.args.push_back(s({a, Sort::FirstOrder}).id);
    return out;
  };
  Clause out;
  out.head = map_lit(c.head);
  for (const auto& l : c.body) {
    Literal m = map_lit(l);
    if (std::find(out.body.begin(), out.body.end(), m) == out.body.end())
      out.body.push_back(std::move(m));
  }
  return out;
}

Metarule apply_substitution(const Metarule& m, const Substitution& s) {
  return canonicalize(apply_substitution(m.clause(), s));
}

std::string encapsulate(const Metarule& m) {
  auto enc = [](std::string& out, const Literal& l) {
    out += "enc(";
    out += cached_name(Sort::SecondOrder, l.predicate);
    for (auto a : l.args) {
      out += ',';
      out += cached_name(Sort::FirstOrder, a);
    }
    out += ')';
  };
  std::string out;
  enc(out, m.head());
  out += " :- ";
  bool first = true;
  for (const auto& l : m.body()) {
    if (!first) out += ',';
    first = false;
    enc(out, l);
  }
  out += '.';
  return out;
}

std::vector<Metarule> parse_theory(std::string_view text) {
  std::vector<Metarule> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
      line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.remove_suffix(1);
    if (!line.empty()) out.push_back(parse(line));
    start = end + 1;
  }
  return out;
}

}  // namespace metareduce
