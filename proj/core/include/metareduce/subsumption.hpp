#pragma once

#include <optional>

#include "metareduce/clause.hpp"

namespace metareduce {

// Witness θ with cθ ⊆ d and head(c)θ = head(d). The domain is c's variables,
// the range d's variables (the two clauses are standardized apart).
std::optional<Substitution> subsumes(const Clause& c, const Clause& d);
inline std::optional<Substitution> subsumes(const Metarule& c,
                                            const Metarule& d) {
  return subsumes(c.clause(), d.clause());
}

// Same test without building the witness.
bool subsumes_p(const Clause& c, const Clause& d);
inline bool subsumes_p(const Metarule& c, const Metarule& d) {
  return subsumes_p(c.clause(), d.clause());
}

// Subsumption where distinct body literals of c land on distinct body
// literals of d. Then c can stand in for d in a proof without extra steps.
bool subsumes_injective_p(const Clause& c, const Clause& d);
inline bool subsumes_injective_p(const Metarule& c, const Metarule& d) {
  return subsumes_injective_p(c.clause(), d.clause());
}

bool is_tautology(const Clause& c);
inline bool is_tautology(const Metarule& m) { return is_tautology(m.clause()); }

}  // namespace metareduce
