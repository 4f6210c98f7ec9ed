#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metareduce/clause.hpp"
#include "metareduce/errors.hpp"

namespace metareduce {

struct ResolutionStep {
  Metarule left;
  std::size_t body_index;
  Metarule right;
  // (variable, representative) pairs; right-parent names carry a ' suffix.
  std::vector<std::pair<std::string, std::string>> unifier;
  Metarule resolvent;
  // Body literals lost to set-collapse.
  std::size_t collapsed = 0;
};

struct DerivationTrace {
  // Canonical text of the theory clause the derivation starts from.
  std::string base;
  std::vector<ResolutionStep> steps;
};

struct SearchOptions {
  // Cap on clauses held by a forward closure.
  std::size_t max_clauses = 2'000'000;
  Deadline deadline;
  // Extra body literals allowed for closure members in entails_k. Unset
  // means unbounded (goal-directed search is used when it applies).
  std::optional<std::size_t> slack;
  // Always use the forward closure, even when a goal-directed route exists.
  bool force_closure = false;
};

// Resolves body literal `body_index` of c1 with the head of c2. Throws
// std::out_of_range on a bad index; nullopt on an arity mismatch.
std::optional<ResolutionStep> resolve_step(const Metarule& c1,
                                           std::size_t body_index,
                                           const Metarule& c2);
std::optional<Metarule> resolve(const Metarule& c1, std::size_t body_index,
                                const Metarule& c2);

// Union of R^0..R^depth, keeping clauses with body size <= max_body at
// every level. Sorted by (body size, text).
std::vector<Metarule> closure(const std::vector<Metarule>& theory,
                              std::size_t depth, std::size_t max_body,
                              const SearchOptions& options = {});

std::optional<DerivationTrace> derives_k(const std::vector<Metarule>& theory,
                                         const Metarule& c, std::size_t depth,
                                         const SearchOptions& options = {});

bool entails_k(const std::vector<Metarule>& theory, const Metarule& c,
               std::size_t depth, const SearchOptions& options = {});

// Forward-closure versions of the two checks, kept as reference routes.
std::optional<DerivationTrace> derives_k_closure(
    const std::vector<Metarule>& theory, const Metarule& c, std::size_t depth,
    const SearchOptions& options = {});
bool entails_k_closure(const std::vector<Metarule>& theory, const Metarule& c,
                       std::size_t depth, std::size_t max_body,
                       const SearchOptions& options = {});

// Replays every step through resolve and checks the chain ends in target.
bool replay(const DerivationTrace& trace, const std::vector<Metarule>& theory,
            const Metarule& target);

// Every literal carries its own predicate variable.
bool is_predicate_distinct(const Clause& c);
inline bool is_predicate_distinct(const Metarule& m) {
  return is_predicate_distinct(m.clause());
}

}  // namespace metareduce
