#include "metareduce/theory.hpp"

#include <stdexcept>
#include <string>

namespace metareduce {

namespace {

// Builds clauses from small integer labels; every literal gets its own
// predicate variable.
class Builder {
 public:
  explicit Builder(std::initializer_list<VarId> head) {
    clause_.head.predicate = next_pred_++;
    clause_.head.args.assign(head.begin(), head.end());
  }
  void add(std::initializer_list<VarId> args) {
    Literal l;
    l.predicate = next_pred_++;
    l.args.assign(args.begin(), args.end());
    clause_.body.push_back(std::move(l));
  }
  void add(const std::vector<VarId>& args) {
    Literal l;
    l.predicate = next_pred_++;
    l.args.assign(args.begin(), args.end());
    clause_.body.push_back(std::move(l));
  }
  Metarule done() const { return canonicalize(clause_); }

 private:
  Clause clause_;
  VarId next_pred_ = 0;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Metarule witness_ci() { return witness_ca(2); }

Metarule witness_ca(unsigned a) {
  require(a >= 2 && a <= 4, "witness ca needs 2 <= a <= 4");
  // A_i = i, B_{j,l} = a + j*(a-1) + l (0-based).
  auto A = [&](unsigned i) { return static_cast<VarId>(i); };
  auto B = [&](unsigned j, unsigned l) {
    return static_cast<VarId>(a + j * (a - 1) + l);
  };
  std::vector<VarId> head;
  for (unsigned i = 0; i < a; ++i) head.push_back(A(i));
  Clause c;
  c.head.predicate = 0;
  c.head.args.assign(head.begin(), head.end());
  VarId pred = 1;
  for (unsigned i = 0; i < a; ++i)
    for (unsigned j = 0; j < a; ++j) {
      Literal l;
      l.predicate = pred++;
      l.args.push_back(A(i));
      for (unsigned k = 0; k + 1 < a; ++k) l.args.push_back(B(j, k));
      c.body.push_back(std::move(l));
    }
  for (unsigned k = 0; k + 1 < a; ++k) {
    Literal l;
    l.predicate = pred++;
    for (unsigned j = 0; j < a; ++j) l.args.push_back(B(j, k));
    c.body.push_back(std::move(l));
  }
  return canonicalize(c);
}

Metarule witness_cim(unsigned m) {
  require(m >= 1 && m <= 10, "witness cim needs 1 <= m <= 10");
  // Start from C_I: A=0 B=1 C=2 D=3. Body: q=Q(A,c) r=R(A,d), then fixed
  // S(B,C), T(B,D), U(C,D).
  enum : VarId { A = 0, B = 1, C = 2, D = 3 };
  std::vector<std::vector<VarId>> fixed{{B, C}, {B, D}, {C, D}};
  VarId c = C, d = D, next = 4;
  for (unsigned k = 1; k <= m; ++k) {
    VarId ck = next++, dk = next++;
    // Q(A,c) and R(A,d) become Q(A,ck), R(A,dk), Vk(ck,dk), Qk(ck,c),
    // Rk(dk,d).
    fixed.push_back({ck, dk});
    fixed.push_back({ck, c});
    fixed.push_back({dk, d});
    c = ck;
    d = dk;
  }
  Builder b({A, B});
  b.add({A, c});
  b.add({A, d});
  for (const auto& args : fixed) b.add(args);
  return b.done();
}

Metarule witness_datalog_s(unsigned a) {
  require(a >= 1 && a <= 4, "witness datalog-s needs 1 <= a <= 4");
  Clause c;
  c.head.predicate = 0;
  for (unsigned i = 0; i < a; ++i) {
    c.head.args.push_back(static_cast<VarId>(i));
    Literal l;
    l.predicate = static_cast<VarId>(i + 1);
    l.args.push_back(static_cast<VarId>(i));
    c.body.push_back(std::move(l));
  }
  return canonicalize(c);
}

Metarule witness_singleton_s(unsigned a) {
  require(a >= 2 && a <= 4, "witness singleton-s needs 2 <= a <= 4");
  Clause c;
  c.head.predicate = 0;
  VarId pred = 1;
  for (unsigned i = 0; i < a; ++i) {
    VarId ai = static_cast<VarId>(i), bi = static_cast<VarId>(a + i);
    c.head.args.push_back(ai);
    for (int twice = 0; twice < 2; ++twice) {
      Literal l;
      l.predicate = pred++;
      l.args.push_back(ai);
      l.args.push_back(bi);
      c.body.push_back(std::move(l));
    }
  }
  return canonicalize(c);
}

BigInt hypothesis_space_size(unsigned long p, unsigned long k, unsigned long m,
                             unsigned long n) {
  BigInt per_clause = boost::multiprecision::pow(BigInt(p), m + 1) * k;
  return boost::multiprecision::pow(per_clause, n);
}

}  // namespace metareduce
