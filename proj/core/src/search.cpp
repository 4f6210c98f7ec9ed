#include "metareduce/search.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "metareduce/subsumption.hpp"

namespace metareduce {

namespace {

// Canonical text of a body alone (zero-arity placeholder head, fresh
// predicate per literal).
std::string body_key(const std::vector<Literal>& body) {
  Clause k;
  k.head.predicate = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    Literal l = body[i];
    l.predicate = static_cast<VarId>(i + 1);
    k.body.push_back(std::move(l));
  }
  return canonicalize(k).text();
}

// Calls fn(map) for every literal bijection a -> b that induces a bijection
// of first-order variables; map[x] is the image of a's variable x.
void for_each_isomorphism(const std::vector<Literal>& a,
                          const std::vector<Literal>& b, VarId a_vars,
                          VarId b_vars,
                          const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> fwd(a_vars, -1), back(b_vars, -1);
  std::vector<bool> used(b.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == a.size()) return fn(fwd);
    const Literal& la = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || b[j].arity() != la.arity()) continue;
      std::vector<std::pair<VarId, VarId>> bound;
      bool ok = true;
      for (std::size_t k = 0; k < la.args.size() && ok; ++k) {
        VarId x = la.args[k], y = b[j].args[k];
        if (fwd[x] < 0 && back[y] < 0) {
          fwd[x] = y;
          back[y] = x;
          bound.emplace_back(x, y);
        } else if (fwd[x] != static_cast<int>(y)) {
          ok = false;
        }
      }
      if (ok) {
        used[j] = true;
        if (go(i + 1)) return true;
        used[j] = false;
      }
      for (auto [x, y] : bound) {
        fwd[x] = -1;
        back[y] = -1;
      }
    }
    return false;
  };
  go(0);
}

// Set partitions of n items into exactly k blocks, as restricted-growth
// strings.
void partitions(std::size_t n, std::size_t k,
                std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(n, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                          std::size_t used) {
    if (n - i < k - used) return;
    if (i == n) {
      if (used == k) out.push_back(cur);
      return;
    }
    for (std::size_t b = 0; b <= used && b < k; ++b) {
      cur[i] = b;
      go(i + 1, b == used ? used + 1 : used);
    }
  };
  if (n == 0) {
    if (k == 0) out.emplace_back();
    return;
  }
  go(0, 0);
}

}  // namespace

// ---------------------------------------------------------- derivation

DerivationSearch::DerivationSearch(const std::vector<Metarule>& theory) {
  for (const auto& t : theory) {
    if (!is_predicate_distinct(t))
      throw std::invalid_argument(
          "goal-directed derivation needs predicate-distinct clauses");
    if (by_text_.count(t.text())) continue;
    std::size_t i = theory_.size();
    theory_.push_back(t);
    active_.push_back(true);
    ++active_count_;
    by_text_.emplace(t.text(), i);
    std::vector<Literal> body(t.body().begin(), t.body().end());
    by_body_[body_key(body)].push_back(i);
    max_head_arity_ = std::max(max_head_arity_, t.head().arity());
  }
}

void DerivationSearch::remove(const std::string& text) {
  auto it = by_text_.find(text);
  if (it == by_text_.end() || !active_[it->second]) return;
  active_[it->second] = false;
  --active_count_;
  marks_.emplace_back(it->second, journal_.size());
}

void DerivationSearch::restore(const std::string& text) {
  auto it = by_text_.find(text);
  if (it == by_text_.end() || active_[it->second]) return;
  active_[it->second] = true;
  ++active_count_;
  if (!marks_.empty() && marks_.back().first == it->second) {
    // Failures recorded before the matching remove still hold.
    for (std::size_t j = journal_.size(); j-- > marks_.back().second;) {
      auto& [text, old] = journal_[j];
      if (old == 0)
        failed_.erase(text);
      else
        failed_[text] = old;
    }
    journal_.resize(marks_.back().second);
    marks_.pop_back();
  } else {
    failed_.clear();
    journal_.clear();
    marks_.clear();
  }
}

void DerivationSearch::commit() {
  if (!marks_.empty()) marks_.pop_back();
  if (marks_.empty()) journal_.clear();
}

bool DerivationSearch::contains(const std::string& text) const {
  auto it = by_text_.find(text);
  return it != by_text_.end() && active_[it->second];
}

std::optional<DerivationTrace> DerivationSearch::derive(
    const Metarule& c, std::size_t depth, const Deadline& deadline) {
  deadline_ = deadline;
  if (!is_predicate_distinct(c)) return std::nullopt;
  std::vector<Step> path;
  bool found = false;
  for (std::size_t d = 0; d <= depth && !found; ++d) found = dfs(c, d, path);
  if (!found) return std::nullopt;

  DerivationTrace trace;
  trace.base = path.empty() ? c.text() : path.front().from.text();
  for (std::size_t s = 0; s < path.size(); ++s) {
    const Metarule& next = s + 1 < path.size() ? path[s + 1].from : c;
    const Metarule& right = theory_[path[s].theory_index];
    for (std::size_t i = 0; i < path[s].from.body_size(); ++i) {
      auto step = resolve_step(path[s].from, i, right);
      if (step && step->resolvent.text() == next.text()) {
        trace.steps.push_back(std::move(*step));
        break;
      }
    }
  }
  return trace;
}

bool DerivationSearch::dfs(const Metarule& c, std::size_t depth,
                           std::vector<Step>& path) {
  ++states_;
  if (contains(c.text())) return true;
  if (depth == 0) return false;
  auto it = failed_.find(c.text());
  if (it != failed_.end() && it->second >= depth) return false;
  deadline_.check();
  if (expand(c, depth, path)) return true;
  std::size_t& f = failed_[c.text()];
  if (!marks_.empty()) journal_.emplace_back(c.text(), f);
  f = std::max(f, depth);
  return false;
}

bool DerivationSearch::expand(const Metarule& c, std::size_t depth,
                              std::vector<Step>& path) {
  const std::size_t n = c.body_size();
  const VarId nvars = c.argument_count();
  const Literal& head = c.head();
  // Parents already searched; a candidate that fails to resolve onto c
  // with one clause may still do so with another.
  std::unordered_set<std::string> explored;

  std::vector<std::size_t> masks;
  for (std::size_t s = 2; s <= n; ++s)
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask)
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) == s)
        masks.push_back(mask);
  for (std::size_t i = 0; i < n; ++i) masks.push_back(std::size_t{1} << i);

  for (std::size_t mask : masks) {
    std::vector<Literal> group, rest;
    for (std::size_t i = 0; i < n; ++i)
      ((mask >> i) & 1 ? group : rest).push_back(c.body()[i]);

    std::vector<bool> outside(nvars, false);
    for (VarId a : head.args) outside[a] = true;
    for (const auto& l : rest)
      for (VarId a : l.args) outside[a] = true;

    std::vector<std::size_t> count(nvars, 0);
    for (const auto& l : group)
      for (VarId a : l.args) ++count[a];

    // Candidate splits: none, or one variable's occurrences in the group
    // spread over several head variables of the applied clause.
    struct Split {
      int var = -1;
      std::vector<std::size_t> blocks;  // block per occurrence
    };
    std::vector<Split> splits{Split{}};
    for (VarId v = 0; v < nvars; ++v) {
      for (std::size_t k = 2; k <= std::min(max_head_arity_, count[v]); ++k) {
        std::vector<std::vector<std::size_t>> parts;
        partitions(count[v], k, parts);
        for (auto& p : parts) splits.push_back(Split{static_cast<int>(v), std::move(p)});
      }
    }

    for (const Split& split : splits) {
      // Split parts beyond the first get ids nvars, nvars+1, ...
      std::vector<Literal> gs = group;
      if (split.var >= 0) {
        std::size_t occ = 0;
        for (auto& l : gs)
          for (auto& a : l.args)
            if (a == split.var) {
              std::size_t b = split.blocks[occ++];
              if (b > 0) a = static_cast<VarId>(nvars + b - 1);
            }
      }
      auto base_of = [&](VarId w) -> VarId {
        return w >= nvars ? static_cast<VarId>(split.var) : w;
      };
      auto found = by_body_.find(body_key(gs));
      if (found == by_body_.end()) continue;
      const VarId gs_vars = static_cast<VarId>(nvars + 3);

      for (std::size_t di : found->second) {
        if (!active_[di]) continue;
        const Metarule& d = theory_[di];
        const Literal& dhead = d.head();
        std::vector<Literal> dbody(d.body().begin(), d.body().end());
        std::vector<bool> is_head(d.argument_count(), false);
        for (VarId x : dhead.args) is_head[x] = true;

        bool success = false;
        for_each_isomorphism(
            dbody, gs, d.argument_count(), gs_vars,
            [&](const std::vector<int>& theta) -> bool {
              // Variables shared by several head variables must come from
              // head variables; the rest are private to the group.
              for (VarId x = 0; x < d.argument_count(); ++x) {
                if (theta[x] < 0) continue;
                VarId w = static_cast<VarId>(theta[x]);
                bool split_part = split.var >= 0 && base_of(w) == split.var;
                if (is_head[x]) continue;
                if (split_part || outside[w]) return false;
              }

              // Image of each distinct head variable; -1 marks a head
              // variable absent from the body.
              std::vector<VarId> hvars;
              for (VarId x : dhead.args)
                if (std::find(hvars.begin(), hvars.end(), x) == hvars.end())
                  hvars.push_back(x);
              std::vector<int> image(hvars.size(), -1);
              std::vector<std::size_t> loose;
              for (std::size_t h = 0; h < hvars.size(); ++h) {
                if (theta[hvars[h]] >= 0)
                  image[h] = base_of(static_cast<VarId>(theta[hvars[h]]));
                else
                  loose.push_back(h);
              }

              std::vector<VarId> pool;
              for (VarId v = 0; v < nvars; ++v)
                if (outside[v]) pool.push_back(v);
              for (int im : image)
                if (im >= 0 && std::find(pool.begin(), pool.end(), im) == pool.end())
                  pool.push_back(static_cast<VarId>(im));

              VarId next_id = static_cast<VarId>(nvars + 8);
              std::function<bool(std::size_t, VarId)> assign_loose;
              std::function<bool()> build;

              build = [&]() -> bool {
                // Positions of L per image variable.
                std::vector<VarId> images;
                for (int im : image)
                  if (std::find(images.begin(), images.end(), im) == images.end())
                    images.push_back(static_cast<VarId>(im));

                Literal L;
                L.predicate = 1000;
                L.args.resize(dhead.args.size());
                std::vector<std::vector<std::size_t>> positions(images.size());
                for (std::size_t j = 0; j < dhead.args.size(); ++j) {
                  std::size_t h = std::find(hvars.begin(), hvars.end(), dhead.args[j]) - hvars.begin();
                  VarId v = static_cast<VarId>(image[h]);
                  L.args[j] = v;
                  positions[std::find(images.begin(), images.end(), v) - images.begin()].push_back(j);
                }

                // Each image variable may reach L through several distinct
                // variables of the parent clause, merged by the unifier.
                Clause base;
                base.head = head;
                base.body = rest;
                for (std::size_t r = 0; r < rest.size(); ++r)
                  base.body[r].predicate = static_cast<VarId>(r + 1);
                base.head.predicate = 0;

                std::function<bool(std::size_t, Clause&, Literal&, VarId)> spread;
                spread = [&](std::size_t k, Clause& cl, Literal& lit, VarId fresh) -> bool {
                  if (k == images.size()) {
                    Clause cand = cl;
                    cand.body.push_back(lit);
                    cand.body.back().predicate = static_cast<VarId>(rest.size() + 1);
                    Metarule cp = canonicalize(cand);
                    if (explored.count(cp.text())) return false;
                    bool valid = false;
                    for (std::size_t i = 0; i < cp.body_size() && !valid; ++i) {
                      if (cp.body()[i].arity() != dhead.arity()) continue;
                      auto r = resolve(cp, i, d);
                      valid = r && r->text() == c.text();
                    }
                    if (!valid) return false;
                    explored.insert(cp.text());
                    if (dfs(cp, depth - 1, path)) {
                      path.push_back(Step{cp, di});
                      return true;
                    }
                    return false;
                  }
                  const auto& pos = positions[k];
                  const VarId v = images[k];
                  for (std::size_t blocks = 1; blocks <= pos.size(); ++blocks) {
                    std::vector<std::vector<std::size_t>> parts;
                    partitions(pos.size(), blocks, parts);
                    for (const auto& p : parts) {
                      Literal lit2 = lit;
                      for (std::size_t q = 0; q < pos.size(); ++q)
                        lit2.args[pos[q]] = p[q] == 0 ? v : static_cast<VarId>(fresh + p[q] - 1);
                      VarId fresh2 = static_cast<VarId>(fresh + blocks - 1);
                      if (blocks == 1) {
                        if (spread(k + 1, cl, lit2, fresh2)) return true;
                        continue;
                      }
                      // Occurrences of v outside the group pick a block.
                      std::vector<VarId*> occ;
                      Clause cl2 = cl;
                      for (auto& a : cl2.head.args)
                        if (a == v) occ.push_back(&a);
                      for (auto& l : cl2.body)
                        for (auto& a : l.args)
                          if (a == v) occ.push_back(&a);
                      std::vector<std::size_t> pick(occ.size(), 0);
                      for (;;) {
                        for (std::size_t q = 0; q < occ.size(); ++q)
                          *occ[q] = pick[q] == 0 ? v : static_cast<VarId>(fresh + pick[q] - 1);
                        if (spread(k + 1, cl2, lit2, fresh2)) return true;
                        std::size_t q = 0;
                        while (q < pick.size() && ++pick[q] == blocks) pick[q++] = 0;
                        if (q == pick.size()) break;
                      }
                    }
                  }
                  return false;
                };
                Literal lit = L;
                return spread(0, base, lit, static_cast<VarId>(next_id + 8));
              };

              assign_loose = [&](std::size_t k, VarId fresh) -> bool {
                if (k == loose.size()) return build();
                std::size_t h = loose[k];
                for (VarId v : pool) {
                  image[h] = v;
                  if (assign_loose(k + 1, fresh)) return true;
                }
                for (VarId f = next_id; f <= fresh; ++f) {
                  image[h] = f;
                  if (assign_loose(k + 1, f == fresh ? static_cast<VarId>(fresh + 1) : fresh))
                    return true;
                }
                image[h] = -1;
                return false;
              };
              success = assign_loose(0, next_id);
              return success;
            });
        if (success) return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------- entailment

EntailmentSearch::EntailmentSearch(const std::vector<Metarule>& theory) {
  for (const auto& t : theory) {
    if (!is_predicate_distinct(t))
      throw std::invalid_argument(
          "goal-directed entailment needs predicate-distinct clauses");
    Rule r;
    r.vars = t.argument_count();
    r.head.assign(t.head().args.begin(), t.head().args.end());
    // Order body literals so each shares as many bound variables as
    // possible with the ones before it.
    std::vector<bool> bound(r.vars, false), taken(t.body_size(), false);
    for (VarId a : r.head) (void)a;
    for (std::size_t k = 0; k < t.body_size(); ++k) {
      std::size_t best = 0;
      int best_score = -1;
      for (std::size_t i = 0; i < t.body_size(); ++i) {
        if (taken[i]) continue;
        int score = 0;
        for (VarId a : t.body()[i].args) score += bound[a] ? 2 : 0;
        score = score * 4 - static_cast<int>(t.body()[i].arity());
        if (best_score == -1 || score > best_score) {
          best_score = score;
          best = i;
        }
      }
      taken[best] = true;
      const Literal& l = t.body()[best];
      for (VarId a : l.args) bound[a] = true;
      r.body.emplace_back(l.args.begin(), l.args.end());
    }
    rules_.push_back(std::move(r));
  }
}

bool EntailmentSearch::entails(const Metarule& c, std::size_t depth,
                               const Deadline& deadline) const {
  if (is_tautology(c)) return true;
  return proof_size(c, depth, deadline).has_value();
}

std::optional<std::size_t> EntailmentSearch::proof_size(
    const Metarule& c, std::size_t depth, const Deadline& deadline) const {
  constexpr std::uint8_t kInf = 255;
  const std::size_t m = static_cast<std::size_t>(c.argument_count()) + 1;
  std::size_t max_arity = c.head().arity();
  for (const auto& l : c.body()) max_arity = std::max(max_arity, l.arity());
  for (const auto& r : rules_) {
    max_arity = std::max(max_arity, r.head.size());
    for (const auto& b : r.body) max_arity = std::max(max_arity, b.size());
  }
  std::vector<std::size_t> power(max_arity + 1, 1);
  for (std::size_t a = 1; a <= max_arity; ++a) power[a] = power[a - 1] * m;

  // cost: fewest rule applications proving a tuple (facts cost 0);
  // derived: same, but the last step must be a rule.
  std::vector<std::vector<std::uint8_t>> cost(max_arity + 1), derived(max_arity + 1);
  for (std::size_t a = 0; a <= max_arity; ++a) {
    cost[a].assign(power[a], kInf);
    derived[a].assign(power[a], kInf);
  }
  auto encode = [&](const auto& args) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < args.size(); ++i) code += args[i] * power[i];
    return code;
  };
  for (const auto& l : c.body()) cost[l.arity()][encode(l.args)] = 0;

  const std::size_t cap = std::min<std::size_t>(depth + 1, kInf - 1);
  bool changed = true;
  std::vector<int> bind;
  while (changed) {
    changed = false;
    deadline.check();
    for (const auto& r : rules_) {
      bind.assign(r.vars, -1);
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t k,
                                                             std::size_t acc) {
        if (k == r.body.size()) {
          std::size_t total = acc + 1;
          // Head variables missing from the body range over all constants.
          std::vector<VarId> free;
          for (VarId x : r.head)
            if (bind[x] < 0 && std::find(free.begin(), free.end(), x) == free.end())
              free.push_back(x);
          std::vector<std::size_t> vals(free.size(), 0);
          for (;;) {
            for (std::size_t i = 0; i < free.size(); ++i)
              bind[free[i]] = static_cast<int>(vals[i]);
            std::size_t code = 0;
            for (std::size_t i = 0; i < r.head.size(); ++i)
              code += static_cast<std::size_t>(bind[r.head[i]]) * power[i];
            auto& dv = derived[r.head.size()][code];
            if (total < dv) dv = static_cast<std::uint8_t>(total);
            auto& cv = cost[r.head.size()][code];
            if (total <= depth && total < cv) {
              cv = static_cast<std::uint8_t>(total);
              changed = true;
            }
            std::size_t i = 0;
            while (i < vals.size() && ++vals[i] == m) vals[i++] = 0;
            if (i == vals.size()) break;
          }
          for (VarId x : free) bind[x] = -1;
          return;
        }
        const auto& lit = r.body[k];
        const auto& table = cost[lit.size()];
        std::vector<VarId> newly;
        for (std::size_t code = 0; code < table.size(); ++code) {
          std::uint8_t w = table[code];
          if (w == kInf || acc + w + 1 > cap) continue;
          std::size_t rem = code;
          bool ok = true;
          newly.clear();
          for (std::size_t i = 0; i < lit.size(); ++i) {
            int val = static_cast<int>(rem % m);
            rem /= m;
            if (bind[lit[i]] < 0) {
              bind[lit[i]] = val;
              newly.push_back(lit[i]);
            } else if (bind[lit[i]] != val) {
              ok = false;
              break;
            }
          }
          if (ok) go(k + 1, acc + w);
          for (VarId x : newly) bind[x] = -1;
        }
      };
      go(0, 0);
    }
  }
  std::uint8_t root = derived[c.head().arity()][encode(c.head().args)];
  if (root == kInf || root > cap) return std::nullopt;
  return static_cast<std::size_t>(root);
}

// ---------------------------------------------------------- core

std::vector<Metarule> subsumption_core(const std::vector<Metarule>& theory) {
  std::vector<const Metarule*> sorted;
  for (const auto& t : theory) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Metarule* a, const Metarule* b) { return *a < *b; });
  std::vector<const Metarule*> kept;
  for (const Metarule* t : sorted) {
    bool covered = std::any_of(kept.begin(), kept.end(), [&](const Metarule* k) {
      return subsumes_injective_p(*k, *t);
    });
    if (!covered) kept.push_back(t);
  }
  // A later (larger) clause may strictly subsume an earlier one.
  std::vector<Metarule> core;
  for (const Metarule* t : kept) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Metarule* k) {
      return k != t && subsumes_injective_p(*k, *t) && !subsumes_injective_p(*t, *k);
    });
    if (!dominated) core.push_back(*t);
  }
  return core;
}

}  // namespace metareduce
