#include "metareduce/resolution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "metareduce/search.hpp"
#include "metareduce/subsumption.hpp"
#include "parallel.hpp"

namespace metareduce {

namespace {

struct UnionFind {
  std::vector<VarId> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), VarId{0});
  }
  VarId find(VarId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller id becomes the representative, so left-parent variables
  // win over right-parent ones.
  void join(VarId a, VarId b) {
    a = find(a);
    b = find(b);
    if (a < b)
      parent[b] = a;
    else
      parent[a] = b;
  }
};

std::string side_name(Sort sort, VarId id, VarId offset) {
  if (id < offset) return variable_name({id, sort});
  return variable_name({static_cast<VarId>(id - offset), sort}) + "'";
}

struct Origin {
  std::size_t left;  // index into the closure store
  std::size_t body_index;
  std::size_t right;  // index into the theory
};

struct ClosureStore {
  std::vector<Metarule> clauses;
  std::vector<std::optional<Origin>> origins;
  std::unordered_map<std::string, std::size_t> index;
};

// Breadth-first R^0..R^depth with per-level body-size pruning. Stops once
// `stop_at` (if given) is reached.
ClosureStore forward_closure(const std::vector<Metarule>& theory,
                             std::size_t depth, std::size_t max_body,
                             const SearchOptions& options,
                             const std::string* stop_at = nullptr) {
  ClosureStore store;
  std::vector<std::size_t> frontier;
  for (const auto& t : theory) {
    if (t.body_size() > max_body) continue;
    if (store.index.emplace(t.text(), store.clauses.size()).second) {
      frontier.push_back(store.clauses.size());
      store.clauses.push_back(t);
      store.origins.emplace_back();
    }
  }
  if (stop_at && store.index.count(*stop_at)) return store;

  for (std::size_t level = 1; level <= depth && !frontier.empty(); ++level) {
    options.deadline.check();
    const std::size_t chunks = std::max<std::size_t>(1, frontier.size() / 64);
    std::vector<std::vector<std::pair<Metarule, Origin>>> found(chunks);
    detail::parallel_chunks(
        frontier.size(), chunks,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
          for (std::size_t f = begin; f < end; ++f) {
            const Metarule& left = store.clauses[frontier[f]];
            for (std::size_t i = 0; i < left.body_size(); ++i) {
              for (std::size_t r = 0; r < theory.size(); ++r) {
                const Metarule& right = theory[r];
                if (left.body()[i].arity() != right.head().arity()) continue;
                auto res = resolve(left, i, right);
                if (!res || res->body_size() > max_body) continue;
                found[chunk].emplace_back(std::move(*res),
                                          Origin{frontier[f], i, r});
              }
            }
          }
        });
    std::vector<std::size_t> next;
    for (auto& part : found) {
      for (auto& [m, origin] : part) {
        if (!store.index.emplace(m.text(), store.clauses.size()).second)
          continue;
        next.push_back(store.clauses.size());
        store.clauses.push_back(std::move(m));
        store.origins.emplace_back(origin);
        if (store.clauses.size() > options.max_clauses)
          throw GuardError("closure exceeded " +
                           std::to_string(options.max_clauses) + " clauses");
        if (stop_at && store.clauses.back().text() == *stop_at) return store;
      }
    }
    frontier = std::move(next);
  }
  return store;
}

DerivationTrace trace_from_store(const ClosureStore& store,
                                 const std::vector<Metarule>& theory,
                                 std::size_t at) {
  std::vector<std::size_t> chain{at};
  while (store.origins[chain.back()])
    chain.push_back(store.origins[chain.back()]->left);
  DerivationTrace trace;
  trace.base = store.clauses[chain.back()].text();
  for (auto it = chain.rbegin(); it + 1 != chain.rend(); ++it) {
    const Origin& o = *store.origins[*(it + 1)];
    trace.steps.push_back(
        *resolve_step(store.clauses[o.left], o.body_index, theory[o.right]));
  }
  return trace;
}

}  // namespace

std::optional<ResolutionStep> resolve_step(const Metarule& c1,
                                           std::size_t body_index,
                                           const Metarule& c2) {
  if (body_index >= c1.body_size())
    throw std::out_of_range("body index " + std::to_string(body_index) +
                            " out of range");
  const Literal& selected = c1.body()[body_index];
  if (selected.arity() != c2.head().arity()) return std::nullopt;

  const VarId poff = c1.predicate_count();
  const VarId foff = c1.argument_count();
  UnionFind preds(poff + c2.predicate_count());
  UnionFind args(foff + c2.argument_count());

  preds.join(selected.predicate, poff + c2.head().predicate);
  for (std::size_t j = 0; j < selected.args.size(); ++j)
    args.join(selected.args[j], foff + c2.head().args[j]);

  auto map_left = [&](const Literal& l) {
    Literal out;
    out.predicate = preds.find(l.predicate);
    for (VarId a : l.args) out.args.push_back(args.find(a));
    return out;
  };
  auto map_right = [&](const Literal& l) {
    Literal out;
    out.predicate = preds.find(static_cast<VarId>(poff + l.predicate));
    for (VarId a : l.args) out.args.push_back(args.find(static_cast<VarId>(foff + a)));
    return out;
  };

  Clause r;
  r.head = map_left(c1.head());
  for (std::size_t j = 0; j < c1.body_size(); ++j)
    if (j != body_index) r.body.push_back(map_left(c1.body()[j]));
  for (const auto& l : c2.body()) r.body.push_back(map_right(l));
  const std::size_t raw = r.body.size();

  ResolutionStep step{c1, body_index, c2, {}, canonicalize(r), 0};
  step.collapsed = raw - step.resolvent.body_size();
  for (VarId v = 0; v < preds.parent.size(); ++v)
    if (preds.find(v) != v)
      step.unifier.emplace_back(side_name(Sort::SecondOrder, v, poff),
                                side_name(Sort::SecondOrder, preds.find(v), poff));
  for (VarId v = 0; v < args.parent.size(); ++v)
    if (args.find(v) != v)
      step.unifier.emplace_back(side_name(Sort::FirstOrder, v, foff),
                                side_name(Sort::FirstOrder, args.find(v), foff));
  return step;
}

std::optional<Metarule> resolve(const Metarule& c1, std::size_t body_index,
                                const Metarule& c2) {
  auto step = resolve_step(c1, body_index, c2);
  if (!step) return std::nullopt;
  return std::move(step->resolvent);
}

std::vector<Metarule> closure(const std::vector<Metarule>& theory,
                              std::size_t depth, std::size_t max_body,
                              const SearchOptions& options) {
  auto store = forward_closure(theory, depth, max_body, options);
  std::sort(store.clauses.begin(), store.clauses.end());
  return std::move(store.clauses);
}

std::optional<DerivationTrace> derives_k_closure(
    const std::vector<Metarule>& theory, const Metarule& c, std::size_t depth,
    const SearchOptions& options) {
  auto store = forward_closure(theory, depth, c.body_size(), options, &c.text());
  auto it = store.index.find(c.text());
  if (it == store.index.end()) return std::nullopt;
  return trace_from_store(store, theory, it->second);
}

bool entails_k_closure(const std::vector<Metarule>& theory, const Metarule& c,
                       std::size_t depth, std::size_t max_body,
                       const SearchOptions& options) {
  if (is_tautology(c)) return true;
  auto store = forward_closure(theory, depth, max_body, options);
  return std::any_of(store.clauses.begin(), store.clauses.end(),
                     [&](const Metarule& d) { return subsumes_p(d, c); });
}

std::optional<DerivationTrace> derives_k(const std::vector<Metarule>& theory,
                                         const Metarule& c, std::size_t depth,
                                         const SearchOptions& options) {
  bool distinct = std::all_of(theory.begin(), theory.end(), [](const Metarule& t) {
    return is_predicate_distinct(t);
  });
  if (options.force_closure || !distinct)
    return derives_k_closure(theory, c, depth, options);
  DerivationSearch search(theory);
  return search.derive(c, depth, options.deadline);
}

bool entails_k(const std::vector<Metarule>& theory, const Metarule& c,
               std::size_t depth, const SearchOptions& options) {
  if (is_tautology(c)) return true;
  if (options.slack)
    return entails_k_closure(theory, c, depth, c.body_size() + *options.slack,
                             options);
  bool distinct = std::all_of(theory.begin(), theory.end(), [](const Metarule& t) {
    return is_predicate_distinct(t);
  });
  if (options.force_closure || !distinct) {
    // Unbounded slack: bound closure members by the theory's growth limit.
    std::size_t widest = 0;
    for (const auto& t : theory) widest = std::max(widest, t.body_size());
    std::size_t bound = 1 + depth * (widest == 0 ? 0 : widest - 1) + widest;
    return entails_k_closure(theory, c, depth, bound, options);
  }
  for (const auto& t : theory)
    if (subsumes_p(t, c)) return true;
  EntailmentSearch search(subsumption_core(theory));
  return search.entails(c, depth, options.deadline);
}

bool replay(const DerivationTrace& trace, const std::vector<Metarule>& theory,
            const Metarule& target) {
  auto in_theory = [&](const std::string& text) {
    return std::any_of(theory.begin(), theory.end(),
                       [&](const Metarule& t) { return t.text() == text; });
  };
  if (!in_theory(trace.base)) return false;
  std::string current = trace.base;
  for (const auto& step : trace.steps) {
    if (step.left.text() != current || !in_theory(step.right.text()))
      return false;
    auto r = resolve(step.left, step.body_index, step.right);
    if (!r || r->text() != step.resolvent.text()) return false;
    current = r->text();
  }
  return current == target.text();
}

bool is_predicate_distinct(const Clause& c) {
  std::vector<VarId> preds{c.head.predicate};
  for (const auto& l : c.body) preds.push_back(l.predicate);
  std::sort(preds.begin(), preds.end());
  return std::adjacent_find(preds.begin(), preds.end()) == preds.end();
}

}  // namespace metareduce
