#include "metareduce/subsumption.hpp"

#include <algorithm>

namespace metareduce {

namespace {

class Matcher {
 public:
  Matcher(const Clause& c, const Clause& d, bool injective = false)
      : c_(c), d_(d), injective_(injective), pbind_(c.predicate_bound(), -1),
        fbind_(c.argument_bound(), -1), done_(c.body.size(), false),
        used_(d.body.size(), false) {}

  bool run() {
    if (c_.head.arity() != d_.head.arity()) return false;
    if (!bind(c_.head, d_.head)) return false;
    // Cheap necessary condition: every arity of c's body occurs in d's body.
    for (const auto& l : c_.body) {
      bool any = std::any_of(d_.body.begin(), d_.body.end(), [&](const Literal& m) {
        return m.arity() == l.arity();
      });
      if (!any) return false;
    }
    return search(c_.body.size());
  }

  Substitution witness() const {
    Substitution s;
    for (std::size_t i = 0; i < pbind_.size(); ++i)
      if (pbind_[i] >= 0)
        s.bind({static_cast<VarId>(i), Sort::SecondOrder},
               {static_cast<VarId>(pbind_[i]), Sort::SecondOrder});
    for (std::size_t i = 0; i < fbind_.size(); ++i)
      if (fbind_[i] >= 0)
        s.bind({static_cast<VarId>(i), Sort::FirstOrder},
               {static_cast<VarId>(fbind_[i]), Sort::FirstOrder});
    return s;
  }

 private:
  // Binds the variables of `from` onto `to`, recording new bindings on the
  // trail. Leaves partial bindings for the caller to undo on failure.
  bool bind(const Literal& from, const Literal& to) {
    if (!bind_one(pbind_, from.predicate, to.predicate)) return false;
    for (std::size_t i = 0; i < from.args.size(); ++i)
      if (!bind_one(fbind_, from.args[i], to.args[i], true)) return false;
    return true;
  }

  bool bind_one(std::vector<int>& map, VarId v, VarId target,
                bool first_order = false) {
    if (map[v] >= 0) return map[v] == target;
    map[v] = target;
    trail_.push_back(first_order ? v + kOffset : v);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      int t = trail_.back();
      trail_.pop_back();
      if (t >= kOffset)
        fbind_[t - kOffset] = -1;
      else
        pbind_[t] = -1;
    }
  }

  bool compatible(const Literal& from, std::size_t j) const {
    if (injective_ && used_[j]) return false;
    const Literal& to = d_.body[j];
    if (from.arity() != to.arity()) return false;
    if (pbind_[from.predicate] >= 0 && pbind_[from.predicate] != to.predicate)
      return false;
    for (std::size_t i = 0; i < from.args.size(); ++i) {
      int b = fbind_[from.args[i]];
      if (b >= 0 && b != to.args[i]) return false;
    }
    // Repeated variables in `from` need equal arguments in `to`.
    for (std::size_t i = 0; i < from.args.size(); ++i)
      for (std::size_t j = i + 1; j < from.args.size(); ++j)
        if (from.args[i] == from.args[j] && to.args[i] != to.args[j])
          return false;
    return true;
  }

  bool search(std::size_t remaining) {
    if (remaining == 0) return true;
    // Most constrained literal first.
    std::size_t best = c_.body.size();
    std::size_t best_count = d_.body.size() + 1;
    for (std::size_t i = 0; i < c_.body.size(); ++i) {
      if (done_[i]) continue;
      std::size_t count = 0;
      for (std::size_t j = 0; j < d_.body.size(); ++j)
        if (compatible(c_.body[i], j)) ++count;
      if (count == 0) return false;
      if (count < best_count) {
        best_count = count;
        best = i;
      }
    }
    done_[best] = true;
    for (std::size_t j = 0; j < d_.body.size(); ++j) {
      if (!compatible(c_.body[best], j)) continue;
      std::size_t mark = trail_.size();
      used_[j] = true;
      if (bind(c_.body[best], d_.body[j]) && search(remaining - 1)) return true;
      used_[j] = false;
      undo(mark);
    }
    done_[best] = false;
    return false;
  }

  static constexpr int kOffset = 1 << 20;

  const Clause& c_;
  const Clause& d_;
  bool injective_;
  std::vector<int> pbind_, fbind_;
  std::vector<bool> done_, used_;
  std::vector<int> trail_;
};

}  // namespace

std::optional<Substitution> subsumes(const Clause& c, const Clause& d) {
  Matcher m(c, d);
  if (!m.run()) return std::nullopt;
  return m.witness();
}

bool subsumes_p(const Clause& c, const Clause& d) { return Matcher(c, d).run(); }

bool subsumes_injective_p(const Clause& c, const Clause& d) {
  return Matcher(c, d, true).run();
}

bool is_tautology(const Clause& c) {
  return std::find(c.body.begin(), c.body.end(), c.head) != c.body.end();
}

}  // namespace metareduce
