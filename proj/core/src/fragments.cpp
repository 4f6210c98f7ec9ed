#include "metareduce/fragments.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "metareduce/errors.hpp"

namespace metareduce {

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

// Arity pattern of one enumeration job: head arity plus nondecreasing body
// arities.
struct Shape {
  unsigned head;
  std::vector<unsigned> body;
};

class ShapeEnumerator {
 public:
  ShapeEnumerator(const Shape& shape, Constraint constraint)
      : shape_(shape), constraint_(constraint) {
    slots_ = shape.head;
    for (unsigned a : shape.body) slots_ += a;
    labels_.assign(slots_, 0);
    starts_.push_back(shape.head);
    for (std::size_t i = 0; i + 1 < shape.body.size(); ++i)
      starts_.push_back(starts_.back() + shape.body[i]);
  }

  void run(std::vector<Metarule>& out) {
    out_ = &out;
    fill(0, 0);
  }

 private:
  // Body literal owning a slot, or -1 for the head.
  int literal_of(std::size_t slot) const {
    if (slot < shape_.head) return -1;
    auto it = std::upper_bound(starts_.begin(), starts_.end(), slot);
    return static_cast<int>(it - starts_.begin()) - 1;
  }

  // Literal tuples inside a same-arity block are kept nondecreasing; the
  // lexicographically least labeling over block permutations has this form.
  bool ordered_so_far(std::size_t slot) const {
    int li = literal_of(slot);
    if (li <= 0) return true;
    std::size_t lit = static_cast<std::size_t>(li);
    if (shape_.body[lit - 1] != shape_.body[lit]) return true;
    std::size_t cur = starts_[lit], prev = starts_[lit - 1];
    for (std::size_t k = 0; cur + k <= slot; ++k) {
      if (labels_[cur + k] != labels_[prev + k])
        return labels_[cur + k] > labels_[prev + k];
    }
    return true;
  }

  void fill(std::size_t slot, VarId used) {
    if (slot == slots_) {
      emit();
      return;
    }
    for (VarId v = 0; v <= used; ++v) {
      labels_[slot] = v;
      if (!ordered_so_far(slot)) continue;
      fill(slot + 1, v == used ? static_cast<VarId>(used + 1) : used);
    }
  }

  void emit() {
    Clause c;
    c.head.predicate = 0;
    std::size_t s = 0;
    for (; s < shape_.head; ++s) c.head.args.push_back(labels_[s]);
    for (std::size_t i = 0; i < shape_.body.size(); ++i) {
      Literal l;
      l.predicate = static_cast<VarId>(i + 1);
      for (unsigned k = 0; k < shape_.body[i]; ++k)
        l.args.push_back(labels_[s++]);
      c.body.push_back(std::move(l));
    }
    if (!satisfies(c, constraint_)) return;
    Metarule m = canonicalize(c);
    if (seen_.insert(m.text()).second) out_->push_back(std::move(m));
  }

  const Shape& shape_;
  Constraint constraint_;
  std::size_t slots_ = 0;
  std::vector<VarId> labels_;
  std::vector<std::size_t> starts_;
  std::unordered_set<std::string> seen_;
  std::vector<Metarule>* out_ = nullptr;
};

void body_shapes(const std::vector<unsigned>& arities, std::size_t len,
                 std::size_t from, std::vector<unsigned>& cur,
                 std::vector<std::vector<unsigned>>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < arities.size(); ++i) {
    cur.push_back(arities[i]);
    body_shapes(arities, len, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

bool is_connected(const Clause& c) {
  // The head always takes part; zero-arity body literals are exempt.
  std::vector<const Literal*> lits{&c.head};
  for (const auto& l : c.body)
    if (!l.args.empty()) lits.push_back(&l);
  DisjointSets sets(lits.size());
  std::vector<int> owner(c.argument_bound(), -1);
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (VarId a : lits[i]->args) {
      if (owner[a] < 0)
        owner[a] = static_cast<int>(i);
      else
        sets.join(owner[a], static_cast<int>(i));
    }
  }
  int root = sets.find(0);
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (sets.find(static_cast<int>(i)) != root) return false;
  return true;
}

bool is_datalog(const Clause& c) {
  for (VarId a : c.head.args) {
    bool found = false;
    for (const auto& l : c.body) {
      if (std::find(l.args.begin(), l.args.end(), a) != l.args.end()) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool is_singleton_free(const Clause& c) {
  std::vector<int> count(c.argument_bound(), 0);
  for (VarId a : c.head.args) ++count[a];
  for (const auto& l : c.body)
    for (VarId a : l.args) ++count[a];
  return std::all_of(count.begin(), count.end(),
                     [](int n) { return n == 0 || n >= 2; });
}

bool is_duplicate_free(const Clause& c) {
  if (!is_singleton_free(c)) return false;
  auto repeats = [](const Literal& l) {
    for (std::size_t i = 0; i < l.args.size(); ++i)
      for (std::size_t j = i + 1; j < l.args.size(); ++j)
        if (l.args[i] == l.args[j]) return true;
    return false;
  };
  if (repeats(c.head)) return false;
  return std::none_of(c.body.begin(), c.body.end(), repeats);
}

bool satisfies(const Clause& c, Constraint constraint) {
  switch (constraint) {
    case Constraint::None:
      return true;
    case Constraint::Connected:
      return is_connected(c);
    case Constraint::Datalog:
      return is_connected(c) && is_datalog(c);
    case Constraint::SingletonFree:
      return is_connected(c) && is_datalog(c) && is_singleton_free(c);
    case Constraint::DuplicateFree:
      return is_connected(c) && is_datalog(c) && is_duplicate_free(c);
  }
  return false;
}

bool in_fragment(const FragmentSpec& spec, const Metarule& m) {
  if (m.body_size() < 1 || m.body_size() > spec.max_body) return false;
  if (!spec.arities.count(static_cast<unsigned>(m.head().arity())))
    return false;
  for (const auto& l : m.body())
    if (!spec.arities.count(static_cast<unsigned>(l.arity()))) return false;
  return satisfies(m.clause(), spec.constraint);
}

std::vector<Metarule> enumerate(const FragmentSpec& spec,
                                const EnumerationLimits& limits) {
  if (spec.arities.empty()) throw std::invalid_argument("empty arity set");
  if (spec.max_body < 1) throw std::invalid_argument("max body must be >= 1");
  if (spec.max_body > limits.max_body)
    throw GuardError("max body " + std::to_string(spec.max_body) +
                     " exceeds the enumeration guard " +
                     std::to_string(limits.max_body));
  if (*spec.arities.rbegin() > limits.max_arity)
    throw GuardError("arity " + std::to_string(*spec.arities.rbegin()) +
                     " exceeds the enumeration guard " +
                     std::to_string(limits.max_arity));

  std::vector<unsigned> arities(spec.arities.begin(), spec.arities.end());
  std::vector<Shape> shapes;
  for (unsigned h : arities) {
    for (std::size_t len = 1; len <= spec.max_body; ++len) {
      std::vector<std::vector<unsigned>> bodies;
      std::vector<unsigned> cur;
      body_shapes(arities, len, 0, cur, bodies);
      for (auto& b : bodies) shapes.push_back({h, std::move(b)});
    }
  }

  std::vector<std::vector<Metarule>> parts(shapes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < shapes.size(); i = next++)
      ShapeEnumerator(shapes[i], spec.constraint).run(parts[i]);
  };
  unsigned n = std::min<unsigned>(thread_count(),
                                  static_cast<unsigned>(shapes.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<Metarule> out;
  for (auto& p : parts)
    for (auto& m : p) out.push_back(std::move(m));
  std::sort(out.begin(), out.end());
  return out;
}

Constraint parse_constraint(std::string_view name) {
  if (name == "none") return Constraint::None;
  if (name == "connected" || name == "C") return Constraint::Connected;
  if (name == "datalog" || name == "D") return Constraint::Datalog;
  if (name == "singleton-free" || name == "K") return Constraint::SingletonFree;
  if (name == "duplicate-free" || name == "U") return Constraint::DuplicateFree;
  throw std::invalid_argument("unknown constraint: " + std::string(name));
}

std::string constraint_name(Constraint c) {
  switch (c) {
    case Constraint::None:
      return "none";
    case Constraint::Connected:
      return "connected";
    case Constraint::Datalog:
      return "datalog";
    case Constraint::SingletonFree:
      return "singleton-free";
    case Constraint::DuplicateFree:
      return "duplicate-free";
  }
  return "none";
}

std::string describe(const FragmentSpec& spec) {
  static const char* letters[] = {"M", "C", "D", "K", "U"};
  std::string out = letters[static_cast<int>(spec.constraint)];
  out += '{';
  bool first = true;
  for (unsigned a : spec.arities) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(a);
  }
  out += '}';
  out += std::to_string(spec.max_body);
  return out;
}

}  // namespace metareduce
