#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metareduce/clause.hpp"

namespace metareduce {

// Each constraint includes the ones before it: duplicate-free clauses are
// singleton-free, which are Datalog, which are connected.
enum class Constraint { None, Connected, Datalog, SingletonFree, DuplicateFree };

struct FragmentSpec {
  std::set<unsigned> arities;
  std::size_t max_body = 1;
  Constraint constraint = Constraint::Connected;
};

struct EnumerationLimits {
  std::size_t max_body = 6;
  unsigned max_arity = 3;
};

bool is_connected(const Clause& c);
bool is_datalog(const Clause& c);
bool is_singleton_free(const Clause& c);
bool is_duplicate_free(const Clause& c);

inline bool is_connected(const Metarule& m) { return is_connected(m.clause()); }
inline bool is_datalog(const Metarule& m) { return is_datalog(m.clause()); }
inline bool is_singleton_free(const Metarule& m) {
  return is_singleton_free(m.clause());
}
inline bool is_duplicate_free(const Metarule& m) {
  return is_duplicate_free(m.clause());
}

bool satisfies(const Clause& c, Constraint constraint);
bool in_fragment(const FragmentSpec& spec, const Metarule& m);

// Canonical clauses of the fragment, one fresh predicate variable per
// literal, sorted by (body size, text). Throws GuardError past the limits.
std::vector<Metarule> enumerate(const FragmentSpec& spec,
                                const EnumerationLimits& limits = {});

Constraint parse_constraint(std::string_view name);
std::string constraint_name(Constraint c);
// Short form such as "C{1,2}5".
std::string describe(const FragmentSpec& spec);

}  // namespace metareduce
