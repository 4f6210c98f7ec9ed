#include "metareduce/reduction.hpp"

#include <algorithm>
#include <chrono>
#ifdef METAREDUCE_TRACE
#include <iostream>
#endif
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "metareduce/search.hpp"
#include "metareduce/subsumption.hpp"

namespace metareduce {

namespace {

std::vector<Metarule> dedupe(const std::vector<Metarule>& theory) {
  std::vector<Metarule> out;
  std::unordered_set<std::string> seen;
  for (const auto& t : theory)
    if (seen.insert(t.text()).second) out.push_back(t);
  return out;
}

bool all_distinct(const std::vector<Metarule>& theory) {
  return std::all_of(theory.begin(), theory.end(),
                     [](const Metarule& t) { return is_predicate_distinct(t); });
}

bool goal_directed(const std::vector<Metarule>& theory,
                   const SearchOptions& options) {
  return !options.slack && !options.force_closure && all_distinct(theory);
}

std::vector<std::size_t> visit_order(const std::vector<Metarule>& theory,
                                     OrderPolicy order) {
  std::vector<std::size_t> idx(theory.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (order == OrderPolicy::BodySizeDesc)
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const Metarule& x = theory[a];
      const Metarule& y = theory[b];
      if (x.body_size() != y.body_size()) return x.body_size() > y.body_size();
      return x.text() < y.text();
    });
  return idx;
}

std::vector<std::size_t> ascending(const std::vector<Metarule>& theory) {
  std::vector<std::size_t> idx(theory.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return theory[a] < theory[b]; });
  return idx;
}

// Subsumption core over a subset of indices (same construction as
// subsumption_core).
std::vector<std::size_t> core_of(const std::vector<Metarule>& theory,
                                 std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end(),
            [&](std::size_t a, std::size_t b) { return theory[a] < theory[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t t : members) {
    bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return subsumes_injective_p(theory[k], theory[t]);
    });
    if (!covered) kept.push_back(t);
  }
  std::vector<std::size_t> core;
  for (std::size_t t : kept) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return k != t && subsumes_injective_p(theory[k], theory[t]) &&
             !subsumes_injective_p(theory[t], theory[k]);
    });
    if (!dominated) core.push_back(t);
  }
  return core;
}

std::vector<Metarule> pick(const std::vector<Metarule>& theory,
                           const std::vector<std::size_t>& idx) {
  std::vector<Metarule> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(theory[i]);
  return out;
}

// Redundancy checks against a fixed clause set.
class Checker {
 public:
  Checker(const std::vector<Metarule>& base, const ReductionRelation& relation,
          const SearchOptions& options)
      : base_(base), relation_(relation), options_(options),
        fast_(goal_directed(base, options)) {
    if (!fast_) return;
    if (relation.kind == RelationKind::Entailment)
      entail_.emplace(subsumption_core(base));
    if (relation.kind == RelationKind::Derivation) derive_.emplace(base);
  }

  bool check(const Metarule& c, Removal& why) {
    if (!fast_ || relation_.kind == RelationKind::Subsumption)
      return is_redundant(base_, c, relation_, options_, &why);
    options_.deadline.check();
    if (relation_.kind == RelationKind::Entailment) {
      if (is_tautology(c)) {
        why.reason = "tautology";
        return true;
      }
      for (const auto& t : base_)
        if (subsumes_p(t, c)) {
          why.reason = "subsumed";
          why.subsumer = t;
          return true;
        }
      if (!entail_->entails(c, relation_.depth, options_.deadline)) return false;
      why.reason = "entailed";
      return true;
    }
    auto trace = derive_->derive(c, relation_.depth, options_.deadline);
    if (!trace) return false;
    why.reason = "derived";
    why.trace = std::move(trace);
    return true;
  }

 private:
  const std::vector<Metarule>& base_;
  ReductionRelation relation_;
  SearchOptions options_;
  bool fast_;
  std::optional<EntailmentSearch> entail_;
  std::optional<DerivationSearch> derive_;
};

void reduce_subsumption(const std::vector<Metarule>& theory,
                        const std::vector<std::size_t>& order,
                        std::vector<bool>& active, ReductionReport& report,
                        const SearchOptions& options) {
  const auto asc = ascending(theory);
  for (std::size_t i : order) {
    options.deadline.check();
    ++report.checks;
    for (std::size_t j : asc) {
      if (j == i || !active[j] || !subsumes_p(theory[j], theory[i])) continue;
      active[i] = false;
      report.removed.push_back(Removal{theory[i], "subsumed", theory[j], {}});
      break;
    }
  }
}

void reduce_entailment(const std::vector<Metarule>& theory,
                       const std::vector<std::size_t>& order,
                       std::vector<bool>& active, ReductionReport& report,
                       const ReductionRelation& relation,
                       const SearchOptions& options) {
  std::vector<std::size_t> all(theory.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::size_t> core = core_of(theory, all);
  std::vector<bool> in_core(theory.size(), false);
  for (std::size_t k : core) in_core[k] = true;

  for (std::size_t i : order) {
    options.deadline.check();
    ++report.checks;
    const Metarule& c = theory[i];
    if (!in_core[i]) {
      // Some other core member subsumes c.
      for (std::size_t k : core) {
        if (!subsumes_p(theory[k], c)) continue;
        active[i] = false;
        report.removed.push_back(Removal{c, "subsumed", theory[k], {}});
        break;
      }
      if (!active[i]) continue;
    }

    // Core of the theory without c: the rest of the core plus a core of
    // the clauses only c covered.
    std::vector<std::size_t> rest_core;
    for (std::size_t k : core)
      if (k != i) rest_core.push_back(k);
    std::vector<std::size_t> orphans;
    for (std::size_t j = 0; j < theory.size(); ++j) {
      if (j == i || !active[j] || in_core[j]) continue;
      bool covered = std::any_of(rest_core.begin(), rest_core.end(), [&](std::size_t k) {
        return subsumes_injective_p(theory[k], theory[j]);
      });
      if (!covered) orphans.push_back(j);
    }
    std::vector<std::size_t> next = rest_core;
    for (std::size_t k : core_of(theory, orphans)) next.push_back(k);

    Removal why{c, "", {}, {}};
    bool redundant = false;
    for (std::size_t k : next)
      if (subsumes_p(theory[k], c)) {
        why.reason = "subsumed";
        why.subsumer = theory[k];
        redundant = true;
        break;
      }
    if (!redundant) {
      EntailmentSearch search(pick(theory, next));
      redundant = search.entails(c, relation.depth, options.deadline);
      why.reason = "entailed";
    }
    if (!redundant) continue;
    active[i] = false;
    report.removed.push_back(std::move(why));
    in_core[i] = false;
    for (std::size_t k : next) in_core[k] = true;
    core = std::move(next);
  }
}

#ifdef METAREDUCE_TRACE
#define TRACE_PHASE(name, n) \
  std::cerr << name << " " << (n) << " " << search.states_visited() << std::endl
#else
#define TRACE_PHASE(name, n)
#endif

void reduce_derivation(const std::vector<Metarule>& theory,
                       const std::vector<std::size_t>& order,
                       std::vector<bool>& active, ReductionReport& report,
                       const ReductionRelation& relation,
                       const SearchOptions& options) {
  DerivationSearch search(theory);
  std::vector<std::optional<DerivationTrace>> traces(theory.size());
  std::vector<std::size_t> sequence;  // removal order

  // Plain greedy pass.
  for (std::size_t i : order) {
    options.deadline.check();
    ++report.checks;
    search.remove(theory[i].text());
    auto trace = search.derive(theory[i], relation.depth, options.deadline);
    if (!trace) {
      search.restore(theory[i].text());
      continue;
    }
    search.commit();
    active[i] = false;
    traces[i] = std::move(trace);
    sequence.push_back(i);
  }

  // Bounded derivability is not transitive: a clause derived from clauses
  // that were removed later may be out of reach of the final set. Such
  // clauses are put back one at a time, latest removal first, since one
  // put back often brings others within reach again. Every round re-runs
  // the failing searches, so long lists are put back in one go.
  TRACE_PHASE("greedy", sequence.size());
  std::vector<std::size_t> pending;
  for (std::size_t i : sequence) {
    options.deadline.check();
    auto trace = search.derive(theory[i], relation.depth, options.deadline);
    if (trace)
      traces[i] = std::move(trace);
    else
      pending.push_back(i);
  }
  TRACE_PHASE("recheck", pending.size());
  constexpr std::size_t kOneByOne = 32;
  if (pending.size() > kOneByOne) {
    for (std::size_t i : pending) {
      search.restore(theory[i].text());
      active[i] = true;
      traces[i].reset();
    }
    pending.clear();
  }
  while (!pending.empty()) {
    TRACE_PHASE("putback", pending.size());
    std::size_t back = pending.back();
    pending.pop_back();
    search.restore(theory[back].text());
    active[back] = true;
    traces[back].reset();
    std::vector<std::size_t> still;
    for (std::size_t i : pending) {
      options.deadline.check();
      auto trace = search.derive(theory[i], relation.depth, options.deadline);
      if (trace)
        traces[i] = std::move(trace);
      else
        still.push_back(i);
    }
    pending = std::move(still);
  }

  TRACE_PHASE("repaired", 0);
  // Second pass over the survivors. A removal now also has to keep every
  // removed clause whose derivation used the candidate derivable.
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < theory.size(); ++i) index[theory[i].text()] = i;
  auto support = [&](const DerivationTrace& t) {
    std::vector<std::size_t> used{index.at(t.base)};
    for (const auto& s : t.steps) used.push_back(index.at(s.right.text()));
    return used;
  };
  std::vector<std::vector<std::size_t>> users(theory.size());
  for (std::size_t i = 0; i < theory.size(); ++i)
    if (traces[i])
      for (std::size_t u : support(*traces[i])) users[u].push_back(i);

  for (std::size_t i : order) {
    if (!active[i]) continue;
    options.deadline.check();
    ++report.checks;
    search.remove(theory[i].text());
    auto trace = search.derive(theory[i], relation.depth, options.deadline);
    std::vector<std::pair<std::size_t, DerivationTrace>> rederived;
    bool ok = trace.has_value();
    for (std::size_t r : ok ? users[i] : std::vector<std::size_t>{}) {
      if (active[r]) continue;
      auto used = support(*traces[r]);
      if (std::find(used.begin(), used.end(), i) == used.end()) continue;
      auto again = search.derive(theory[r], relation.depth, options.deadline);
      if (!again) {
        ok = false;
        break;
      }
      rederived.emplace_back(r, std::move(*again));
    }
    if (!ok) {
      search.restore(theory[i].text());
      continue;
    }
    search.commit();
    active[i] = false;
    for (std::size_t u : support(*trace)) users[u].push_back(i);
    traces[i] = std::move(trace);
    sequence.push_back(i);
    for (auto& [r, t] : rederived) {
      for (std::size_t u : support(t)) users[u].push_back(r);
      traces[r] = std::move(t);
    }
  }

  for (std::size_t i : sequence)
    if (!active[i])
      report.removed.push_back(Removal{theory[i], "derived", {}, traces[i]});
}

}  // namespace

bool is_redundant(const std::vector<Metarule>& rest, const Metarule& c,
                  const ReductionRelation& relation,
                  const SearchOptions& options, Removal* why) {
  Removal local{c, "", {}, {}};
  Removal& out = why ? *why : local;
  out.clause = c;
  switch (relation.kind) {
    case RelationKind::Subsumption:
      for (const auto& t : rest)
        if (subsumes_p(t, c)) {
          out.reason = "subsumed";
          out.subsumer = t;
          return true;
        }
      return false;
    case RelationKind::Entailment:
      if (is_tautology(c)) {
        out.reason = "tautology";
        return true;
      }
      for (const auto& t : rest)
        if (subsumes_p(t, c)) {
          out.reason = "subsumed";
          out.subsumer = t;
          return true;
        }
      if (!entails_k(rest, c, relation.depth, options)) return false;
      out.reason = "entailed";
      return true;
    case RelationKind::Derivation: {
      auto trace = derives_k(rest, c, relation.depth, options);
      if (!trace) return false;
      out.reason = "derived";
      out.trace = std::move(trace);
      return true;
    }
  }
  return false;
}

ReductionReport reduce(const std::vector<Metarule>& input,
                       const ReductionRelation& relation,
                       const ReductionOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<Metarule> theory = dedupe(input);
  ReductionReport report;
  report.relation = relation;
  report.order = options.order;
  report.input_size = theory.size();

  const auto order = visit_order(theory, options.order);
  std::vector<bool> active(theory.size(), true);
  const SearchOptions& search = options.search;

  if (relation.kind == RelationKind::Subsumption) {
    reduce_subsumption(theory, order, active, report, search);
  } else if (goal_directed(theory, search)) {
    if (relation.kind == RelationKind::Entailment)
      reduce_entailment(theory, order, active, report, relation, search);
    else
      reduce_derivation(theory, order, active, report, relation, search);
  } else {
    for (std::size_t i : order) {
      search.deadline.check();
      ++report.checks;
      std::vector<Metarule> rest;
      for (std::size_t j = 0; j < theory.size(); ++j)
        if (j != i && active[j]) rest.push_back(theory[j]);
      Removal why{theory[i], "", {}, {}};
      if (!is_redundant(rest, theory[i], relation, search, &why)) continue;
      active[i] = false;
      report.removed.push_back(std::move(why));
    }
  }

  for (std::size_t i = 0; i < theory.size(); ++i)
    if (active[i]) report.reduced.push_back(theory[i]);
  std::sort(report.reduced.begin(), report.reduced.end());
  report.duration_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  return report;
}

MReduction mreduce(const std::vector<Metarule>& input,
                   const std::function<bool(const Metarule&)>& in_target,
                   const ReductionRelation& relation,
                   const ReductionOptions& options) {
  const std::vector<Metarule> theory = dedupe(input);
  std::vector<Metarule> base, outside;
  for (const auto& t : theory) (in_target(t) ? base : outside).push_back(t);

  MReduction result;
  Checker checker(base, relation, options.search);
  for (std::size_t i : visit_order(outside, options.order)) {
    Removal why{outside[i], "", {}, {}};
    if (!checker.check(outside[i], why)) {
      result.failed_on = outside[i];
      return result;
    }
    result.outside.push_back(std::move(why));
  }
  result.report = reduce(base, relation, options);
  return result;
}

MReduction mreduce(const std::vector<Metarule>& theory,
                   const FragmentSpec& target,
                   const ReductionRelation& relation,
                   const ReductionOptions& options) {
  return mreduce(
      theory, [&](const Metarule& m) { return in_fragment(target, m); },
      relation, options);
}

std::string relation_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Subsumption: return "S";
    case RelationKind::Entailment: return "E";
    case RelationKind::Derivation: return "D";
  }
  return "?";
}

RelationKind parse_relation(std::string_view name) {
  if (name == "S" || name == "s" || name == "subsumption")
    return RelationKind::Subsumption;
  if (name == "E" || name == "e" || name == "entailment")
    return RelationKind::Entailment;
  if (name == "D" || name == "d" || name == "derivation")
    return RelationKind::Derivation;
  throw std::invalid_argument("unknown relation '" + std::string(name) +
                              "' (expected S, E or D)");
}

std::string order_name(OrderPolicy order) {
  return order == OrderPolicy::Input ? "input" : "body-size-desc";
}

OrderPolicy parse_order(std::string_view name) {
  if (name == "input") return OrderPolicy::Input;
  if (name == "body-size-desc") return OrderPolicy::BodySizeDesc;
  throw std::invalid_argument("unknown order '" + std::string(name) +
                              "' (expected body-size-desc or input)");
}

}  // namespace metareduce
