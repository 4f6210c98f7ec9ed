#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metareduce/clause.hpp"
#include "metareduce/fragments.hpp"
#include "metareduce/resolution.hpp"

namespace metareduce {

enum class RelationKind { Subsumption, Entailment, Derivation };

struct ReductionRelation {
  RelationKind kind = RelationKind::Entailment;
  // Resolution steps allowed for the E and D relations.
  std::size_t depth = 7;
};

// Order in which candidate clauses are tested for removal.
enum class OrderPolicy {
  BodySizeDesc,  // larger bodies first, ties by canonical text
  Input,         // as given
};

struct ReductionOptions {
  OrderPolicy order = OrderPolicy::BodySizeDesc;
  SearchOptions search;
};

struct Removal {
  Metarule clause;
  // "tautology", "subsumed", "entailed" or "derived".
  std::string reason;
  // Subsuming clause, when the removal needed no resolution.
  std::optional<Metarule> subsumer;
  // Derivation from the remaining clauses (D relation only).
  std::optional<DerivationTrace> trace;
};

struct ReductionReport {
  std::string source;  // fragment or file the input came from
  ReductionRelation relation;
  OrderPolicy order = OrderPolicy::BodySizeDesc;
  std::size_t input_size = 0;
  // Survivors, sorted by (body size, text).
  std::vector<Metarule> reduced;
  // In removal order.
  std::vector<Removal> removed;
  std::size_t checks = 0;
  double duration_ms = 0;
};

// Whether c follows from `rest` (which should not contain c) under the
// relation. Fills `why` when given and the answer is yes.
bool is_redundant(const std::vector<Metarule>& rest, const Metarule& c,
                  const ReductionRelation& relation,
                  const SearchOptions& options = {}, Removal* why = nullptr);

// Greedy reduction: visit clauses in policy order and drop each one that is
// redundant with respect to the clauses still present. Duplicates (by
// canonical text) are merged first.
ReductionReport reduce(const std::vector<Metarule>& theory,
                       const ReductionRelation& relation,
                       const ReductionOptions& options = {});

struct MReduction {
  // Set when every clause outside the target follows from the clauses
  // inside it; otherwise the first clause that does not.
  std::optional<ReductionReport> report;
  std::optional<Metarule> failed_on;
  std::vector<Removal> outside;  // how each outside clause follows
};

// Reduction onto a target fragment: the clauses of the theory inside the
// target must account for every clause outside it, then are reduced.
MReduction mreduce(const std::vector<Metarule>& theory,
                   const std::function<bool(const Metarule&)>& in_target,
                   const ReductionRelation& relation,
                   const ReductionOptions& options = {});
MReduction mreduce(const std::vector<Metarule>& theory,
                   const FragmentSpec& target,
                   const ReductionRelation& relation,
                   const ReductionOptions& options = {});

std::string relation_name(RelationKind kind);  // "S", "E", "D"
RelationKind parse_relation(std::string_view name);
std::string order_name(OrderPolicy order);     // "body-size-desc", "input"
OrderPolicy parse_order(std::string_view name);

}  // namespace metareduce
