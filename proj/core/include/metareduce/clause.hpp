#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace metareduce {

using VarId = std::uint16_t;

enum class Sort : std::uint8_t { SecondOrder, FirstOrder };

struct Variable {
  VarId id = 0;
  Sort sort = Sort::FirstOrder;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

struct Literal {
  VarId predicate = 0;
  boost::container::small_vector<VarId, 4> args;

  std::size_t arity() const { return args.size(); }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

// A clause in arbitrary variable numbering and body order. Duplicate body
// literals are allowed here; canonicalization collapses them.
struct Clause {
  Literal head;
  std::vector<Literal> body;

  // One past the largest variable id of each sort.
  VarId predicate_bound() const;
  VarId argument_bound() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Canonical metarule. Variables are numbered 0.. in order of first
// appearance (head first) for each sort, and the body is in the order that
// minimizes the serialization.
class Metarule {
 public:
  const Literal& head() const { return clause_.head; }
  std::span<const Literal> body() const { return clause_.body; }
  std::size_t body_size() const { return clause_.body.size(); }
  const Clause& clause() const { return clause_; }
  const std::string& text() const { return text_; }

  VarId predicate_count() const { return predicates_; }
  VarId argument_count() const { return arguments_; }

  friend bool operator==(const Metarule& a, const Metarule& b) {
    return a.text_ == b.text_;
  }
  // Ordered by (body size, canonical text).
  friend bool operator<(const Metarule& a, const Metarule& b) {
    if (a.body_size() != b.body_size()) return a.body_size() < b.body_size();
    return a.text_ < b.text_;
  }

 private:
  friend Metarule canonicalize(const Clause&);
  Metarule() = default;

  Clause clause_;
  std::string text_;
  VarId predicates_ = 0;
  VarId arguments_ = 0;
};

struct MetaruleHash {
  std::size_t operator()(const Metarule& m) const {
    return std::hash<std::string>{}(m.text());
  }
};

// Sort-preserving variable mapping. Identity off its domain.
class Substitution {
 public:
  // Throws std::invalid_argument when the sorts differ.
  void bind(Variable from, Variable to);
  Variable operator()(Variable v) const;
  bool empty() const { return map_.empty(); }
  const std::map<Variable, Variable>& pairs() const { return map_; }

 private:
  std::map<Variable, Variable> map_;
};

struct NamedClause {
  Clause clause;
  std::vector<std::string> predicate_names;
  std::vector<std::string> argument_names;

  Variable predicate(std::string_view name) const;
  Variable argument(std::string_view name) const;
};

// Name of a canonical variable: P,Q,R,S,T,U,V,W,P1,.. and A..Z,A1,..
std::string variable_name(Variable v);

NamedClause parse_clause(std::string_view text);
Metarule parse(std::string_view text);

std::string render(const Metarule& m);
// Renders in the given body order, renaming by first appearance.
std::string render(const Clause& c);

Metarule canonicalize(const Clause& c);
inline Metarule canonicalize(const Metarule& m) { return m; }

bool alpha_equal(const Metarule& a, const Metarule& b);

Clause apply_substitution(const Clause& c, const Substitution& s);
Metarule apply_substitution(const Metarule& m, const Substitution& s);

std::string encapsulate(const Metarule& m);

// Reads one metarule per line; '#' starts a comment, blank lines skipped.
std::vector<Metarule> parse_theory(std::string_view text);

}  // namespace metareduce
