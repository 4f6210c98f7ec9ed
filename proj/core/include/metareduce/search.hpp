#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metareduce/clause.hpp"
#include "metareduce/errors.hpp"
#include "metareduce/resolution.hpp"

namespace metareduce {

// Goal-directed k-derivability over a theory whose clauses are all
// predicate-distinct. Works backwards from the target: the last theory
// clause applied in a derivation has only leaves below it, so undoing it
// replaces a group of target body literals by one literal.
class DerivationSearch {
 public:
  explicit DerivationSearch(const std::vector<Metarule>& theory);

  std::optional<DerivationTrace> derive(const Metarule& c, std::size_t depth,
                                        const Deadline& deadline = {});

  // Drops a clause from the active theory. Failure memos stay valid since
  // the theory only shrinks.
  void remove(const std::string& text);
  // Reinstates a clause. Undoes memoized failures back to the matching
  // remove when it is the most recent one, else forgets them all.
  void restore(const std::string& text);

  // Makes the most recent remove permanent.
  void commit();

  bool contains(const std::string& text) const;
  std::size_t active_count() const { return active_count_; }
  // Search states visited since construction.
  std::size_t states_visited() const { return states_; }

 private:
  struct Step {
    Metarule from;  // the clause the step was undone on
    std::size_t theory_index;
  };

  bool dfs(const Metarule& c, std::size_t depth, std::vector<Step>& path);
  bool expand(const Metarule& c, std::size_t depth, std::vector<Step>& path);

  std::vector<Metarule> theory_;
  std::vector<bool> active_;
  std::unordered_map<std::string, std::size_t> by_text_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_body_;
  std::unordered_map<std::string, std::size_t> failed_;  // text -> depth
  // Memo changes since each outstanding remove, for undoing on restore.
  std::vector<std::pair<std::string, std::size_t>> journal_;
  std::vector<std::pair<std::size_t, std::size_t>> marks_;  // clause, journal size
  std::size_t active_count_ = 0;
  std::size_t max_head_arity_ = 0;
  std::size_t states_ = 0;
  Deadline deadline_;
};

// Goal-directed k-bounded entailment over a predicate-distinct theory.
// Skolemizes the target and computes, for every ground tuple, the fewest
// theory-clause applications proving it from the target's body.
class EntailmentSearch {
 public:
  explicit EntailmentSearch(const std::vector<Metarule>& theory);

  bool entails(const Metarule& c, std::size_t depth,
               const Deadline& deadline = {}) const;

  // Fewest clause applications at the root, or nullopt above depth+1.
  std::optional<std::size_t> proof_size(const Metarule& c, std::size_t depth,
                                        const Deadline& deadline = {}) const;

 private:
  struct Rule {
    std::vector<VarId> head;
    std::vector<std::vector<VarId>> body;
    VarId vars = 0;
  };
  std::vector<Rule> rules_;
};

// One representative per minimal class under injective subsumption: every
// clause of the theory is injectively subsumed by some member. Enough for
// depth-bounded entailment, since a proof through a dropped clause can use
// its subsumer instead at no extra cost.
std::vector<Metarule> subsumption_core(const std::vector<Metarule>& theory);

}  // namespace metareduce
