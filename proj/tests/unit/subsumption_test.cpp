#include <gtest/gtest.h>

#include <random>

#include "metareduce/fragments.hpp"
#include "metareduce/subsumption.hpp"
#include "oracles.hpp"

using namespace metareduce;

namespace {

// cθ ⊆ d and head(c)θ = head(d), checked literally.
void expect_witness(const Metarule& c, const Metarule& d, const Substitution& th) {
  auto img = apply_substitution(c.clause(), th);
  EXPECT_EQ(img.head, d.head());
  auto body = oracle::body_set(d.clause());
  for (const auto& l : img.body)
    EXPECT_TRUE(std::binary_search(body.begin(), body.end(), l)) << c.text() << " / " << d.text();
}

}  // namespace

TEST(Subsumes, WorkedExampleWitness) {
  auto m4 = parse("P(A,B) :- Q(B,C),R(A,D),S(A,D),T(B,C).");
  auto m2 = parse("P(A,B) :- Q(A,A),R(B,B).");
  auto m3 = parse("P(A,B) :- Q(A,C),R(B,C).");
  auto th = subsumes(m4, m2);
  ASSERT_TRUE(th);
  expect_witness(m4, m2, *th);
  auto th3 = subsumes(m4, m3);
  ASSERT_TRUE(th3);
  expect_witness(m4, m3, *th3);
  EXPECT_FALSE(subsumes_p(m2, m4));
}

TEST(Subsumes, Reflexive) {
  auto chain = parse("P(A,B) :- Q(A,C),R(C,B).");
  auto th = subsumes(chain, chain);
  ASSERT_TRUE(th);
  expect_witness(chain, chain, *th);
}

TEST(Subsumes, BindsFreeVariable) {
  auto c = parse("P(A,B) :- Q(A,C).");
  auto d = parse("P(A,B) :- Q(A,B).");
  auto th = subsumes(c, d);
  ASSERT_TRUE(th);
  EXPECT_EQ((*th)({2, Sort::FirstOrder}), (Variable{1, Sort::FirstOrder}));
  EXPECT_FALSE(subsumes_p(d, c));
}

TEST(Subsumes, ArityMismatch) {
  EXPECT_FALSE(subsumes_p(parse("P(A) :- Q(A)."), parse("P(A,B) :- Q(A,B).")));
  EXPECT_FALSE(subsumes_p(parse("P(A,B) :- Q(A)."), parse("P(A,B) :- Q(A,B).")));
}

TEST(Subsumes, MatchesBruteForceOnRandomPairs) {
  std::mt19937 rng(5);
  int yes = 0;
  for (int n = 0; n < 1500; ++n) {
    auto c = canonicalize(oracle::random_clause(rng, {1, 2}, 1 + n % 2, 3, 0.3));
    auto d = canonicalize(oracle::random_clause(rng, {1, 2}, 1 + n % 4, 3, 0.3));
    bool want = oracle::subsumes(c.clause(), d.clause());
    auto got = subsumes(c, d);
    ASSERT_EQ(got.has_value(), want) << c.text() << " / " << d.text();
    ASSERT_EQ(subsumes_p(c, d), want);
    if (got) expect_witness(c, d, *got);
    yes += want;
  }
  EXPECT_GT(yes, 50);
}

TEST(Subsumes, MatchesBruteForceOverSmallFragment) {
  auto frag = enumerate({{1, 2}, 2, Constraint::None});
  for (const auto& c : frag)
    for (const auto& d : frag)
      ASSERT_EQ(subsumes_p(c, d), oracle::subsumes(c.clause(), d.clause()))
          << c.text() << " / " << d.text();
}

TEST(Subsumes, Transitive) {
  auto frag = enumerate({{1, 2}, 2, Constraint::Connected});
  for (const auto& a : frag)
    for (const auto& b : frag) {
      if (!subsumes_p(a, b)) continue;
      for (const auto& c : frag)
        if (subsumes_p(b, c)) ASSERT_TRUE(subsumes_p(a, c));
    }
}

TEST(Tautology, Examples) {
  EXPECT_TRUE(is_tautology(parse("P(A) :- P(A).")));
  EXPECT_FALSE(is_tautology(parse("P(A,B) :- Q(A,C),R(C,B).")));
  EXPECT_FALSE(is_tautology(parse("P(A) :- P(B),Q(A,B).")));
}

TEST(Tautology, NoneInEnumeratedFragments) {
  for (auto k : {Constraint::None, Constraint::Connected})
    for (const auto& m : enumerate({{0, 1, 2}, 3, k})) ASSERT_FALSE(is_tautology(m));
}

TEST(InjectiveSubsumption, NeedsDistinctTargets) {
  auto two = parse("P(A,B) :- Q(B,C),R(B,C).");
  auto one = parse("P(A,B) :- Q(A,A),R(B,C).");
  EXPECT_TRUE(subsumes_p(two, one));
  EXPECT_FALSE(subsumes_injective_p(two, one));
  EXPECT_TRUE(subsumes_injective_p(parse("P(A,B) :- Q(A,B)."), parse("P(A,B) :- Q(A,B),R(A).")));
}

TEST(InjectiveSubsumption, ImpliesPlainSubsumption) {
  auto frag = enumerate({{1, 2}, 2, Constraint::Connected});
  for (const auto& a : frag)
    for (const auto& b : frag) {
      bool inj = subsumes_injective_p(a, b);
      if (inj) {
        ASSERT_TRUE(subsumes_p(a, b));
        ASSERT_LE(a.body_size(), b.body_size());
      }
      if (subsumes_p(a, b) && a.body_size() == 1) ASSERT_EQ(inj, true);
    }
}
