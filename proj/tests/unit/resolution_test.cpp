#include <gtest/gtest.h>

#include <random>

#include "metareduce/fragments.hpp"
#include "metareduce/resolution.hpp"
#include "metareduce/theory.hpp"
#include "oracles.hpp"

using namespace metareduce;

TEST(Resolve, ChainWithInverse) {
  auto c2 = parse("P(A,B) :- Q(A,C),R(C,B).");
  auto c1 = parse("P(A,B) :- Q(B,A).");
  auto r = resolve(c2, 0, c1);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->text(), parse("P(A,B) :- Q(C,A),R(C,B).").text());
}

TEST(Resolve, WorkedExampleFirstStep) {
  auto m2 = parse("P(A,B) :- Q(A,A),R(B,B).");
  auto m3 = parse("P(A,B) :- Q(A,C),R(B,C).");
  auto r = resolve(m2, 0, m3);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->text(), parse("P(A,B) :- Q1(A,C),R1(A,C),R(B,B).").text());
}

TEST(Resolve, IdentitySelfResolves) {
  auto id = parse("P(A,B) :- Q(A,B).");
  auto r = resolve(id, 0, id);
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(*r, id));
}

TEST(Resolve, ArityMismatchAndBadIndex) {
  auto a = parse("P(A,B) :- Q(A,B).");
  auto b = parse("P(A) :- Q(A).");
  EXPECT_FALSE(resolve(a, 0, b));
  EXPECT_THROW(resolve(a, 1, a), std::out_of_range);
}

TEST(Resolve, StepRecordsUnifier) {
  auto m2 = parse("P(A,B) :- Q(A,A),R(B,B).");
  auto m3 = parse("P(A,B) :- Q(A,C),R(B,C).");
  auto step = resolve_step(m2, 0, m3);
  ASSERT_TRUE(step);
  EXPECT_EQ(step->body_index, 0u);
  EXPECT_FALSE(step->unifier.empty());
  EXPECT_EQ(step->resolvent.text(), resolve(m2, 0, m3)->text());
}

TEST(Resolve, CollapseIsCounted) {
  auto left = parse("P(A) :- Q(A,A),Q(A,B).");
  auto right = parse("P(A,B) :- P(A,A).");
  std::size_t i = left.body()[0].args[0] == left.body()[0].args[1] ? 1 : 0;
  auto step = resolve_step(left, i, right);
  ASSERT_TRUE(step);
  EXPECT_EQ(step->resolvent.text(), "P(A) :- Q(A,A).");
  EXPECT_EQ(step->collapsed, 1u);
}

TEST(Resolve, MatchesReferenceOnRandomPairs) {
  std::mt19937 rng(9);
  for (int n = 0; n < 3000; ++n) {
    auto a = canonicalize(oracle::random_clause(rng, {1, 2}, 1 + n % 3, 4, 0.25));
    auto b = canonicalize(oracle::random_clause(rng, {1, 2}, 1 + n % 2, 4, 0.25));
    for (std::size_t i = 0; i < a.body_size(); ++i) {
      auto got = resolve(a, i, b);
      auto want = oracle::resolve(a, i, b);
      ASSERT_EQ(got.has_value(), want.has_value());
      if (got) ASSERT_EQ(got->text(), want->text()) << a.text() << " [" << i << "] " << b.text();
    }
  }
}

TEST(Closure, IdentityIsFixpoint) {
  auto id = parse("P(A,B) :- Q(A,B).");
  for (std::size_t k : {0u, 1u, 4u}) {
    auto cl = closure({id}, k, 2);
    ASSERT_EQ(cl.size(), 1u);
    EXPECT_EQ(cl[0].text(), id.text());
  }
}

TEST(Closure, MatchesReferenceOnSmallTheories) {
  auto frag = enumerate({{1, 2}, 2, Constraint::Connected});
  std::mt19937 rng(2);
  for (int n = 0; n < 25; ++n) {
    std::vector<Metarule> theory;
    std::sample(frag.begin(), frag.end(), std::back_inserter(theory), 4, rng);
    for (std::size_t depth : {1u, 2u, 3u})
      ASSERT_EQ(oracle::texts(closure(theory, depth, 4)),
                oracle::texts(oracle::closure(theory, depth, 4)));
  }
}

TEST(Closure, GuardThrows) {
  SearchOptions o;
  o.max_clauses = 10;
  EXPECT_THROW(closure(enumerate({{1, 2}, 2, Constraint::Connected}), 3, 4, o), GuardError);
}

TEST(Derives, OneStepExample) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(B,A)."), parse("P(A,B) :- Q(A,C),R(C,B).")};
  auto c3 = parse("P(A,B) :- Q(C,A),R(C,B).");
  auto trace = derives_k(t, c3, 1);
  ASSERT_TRUE(trace);
  EXPECT_EQ(trace->steps.size(), 1u);
  EXPECT_TRUE(replay(*trace, t, c3));
  EXPECT_FALSE(derives_k(t, c3, 0));
}

TEST(Derives, MemberNeedsNoSteps) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(B,A)."), parse("P(A,B) :- Q(A,C),R(C,B).")};
  for (const auto& c : t) {
    auto trace = derives_k(t, c, 3);
    ASSERT_TRUE(trace);
    EXPECT_TRUE(trace->steps.empty());
  }
}

TEST(Derives, SelfResolution) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(A,B)."), parse("P(A,B) :- Q(A,B),R(A)."),
                          parse("P(A,B) :- Q(A,B),R(A,B).")};
  auto m4 = parse("P(A,B) :- Q(A,B),R(A,B),S(A,B).");
  auto trace = derives_k(t, m4, 7);
  ASSERT_TRUE(trace);
  EXPECT_TRUE(replay(*trace, t, m4));
}

TEST(Derives, GoalDirectedMatchesClosure) {
  auto frag = enumerate({{1, 2}, 3, Constraint::Connected});
  auto small = enumerate({{1, 2}, 2, Constraint::Connected});
  std::mt19937 rng(4);
  int hits = 0;
  for (int n = 0; n < 40; ++n) {
    std::vector<Metarule> theory;
    std::sample(small.begin(), small.end(), std::back_inserter(theory), 6, rng);
    std::vector<Metarule> targets;
    std::sample(frag.begin(), frag.end(), std::back_inserter(targets), 30, rng);
    for (const auto& c : targets)
      for (std::size_t depth : {1u, 2u, 3u}) {
        auto fast = derives_k(theory, c, depth);
        bool want = oracle::derives(theory, c, depth);
        ASSERT_EQ(fast.has_value(), want) << c.text() << " depth " << depth;
        ASSERT_EQ(derives_k_closure(theory, c, depth).has_value(), want);
        if (fast) {
          ASSERT_TRUE(replay(*fast, theory, c));
          ASSERT_LE(fast->steps.size(), depth);
          ++hits;
        }
      }
  }
  EXPECT_GT(hits, 0);
}

TEST(Derives, ReplayRejectsWrongTarget) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(B,A)."), parse("P(A,B) :- Q(A,C),R(C,B).")};
  auto c3 = parse("P(A,B) :- Q(C,A),R(C,B).");
  auto trace = derives_k(t, c3, 1);
  ASSERT_TRUE(trace);
  EXPECT_FALSE(replay(*trace, t, t[1]));
  EXPECT_FALSE(replay(*trace, {t[1]}, c3));
}

TEST(Derives, EmptyTheory) {
  EXPECT_FALSE(derives_k({}, parse("P(A,B) :- Q(A,C),R(C,B)."), 7));
}

TEST(Entails, SubsumedLongerClause) {
  EXPECT_TRUE(entails_k({parse("P(A,B) :- Q(A,B).")}, parse("P(A,B) :- Q(A,B),R(A)."), 0));
}

TEST(Entails, TautologyFromNothing) {
  EXPECT_TRUE(entails_k({}, parse("P(A) :- P(A)."), 0));
}

TEST(Entails, TwoClausesEntailLongerOne) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(A,A),R(B,B)."), parse("P(A,B) :- Q(A,C),R(B,C).")};
  EXPECT_TRUE(entails_k(t, parse("P(A,B) :- Q(B,C),R(A,D),S(A,D),T(B,C)."), 2));
}

TEST(Entails, MatchesReferenceOnRandomTheories) {
  auto frag = enumerate({{1, 2}, 3, Constraint::Connected});
  auto small = enumerate({{1, 2}, 2, Constraint::Connected});
  std::mt19937 rng(6);
  int yes = 0, total = 0;
  for (int n = 0; n < 40; ++n) {
    std::vector<Metarule> theory;
    std::sample(small.begin(), small.end(), std::back_inserter(theory), 5, rng);
    std::vector<Metarule> targets;
    std::sample(frag.begin(), frag.end(), std::back_inserter(targets), 25, rng);
    for (const auto& c : targets)
      for (std::size_t depth : {0u, 1u, 3u}) {
        bool want = oracle::entails(theory, c, depth);
        ASSERT_EQ(entails_k(theory, c, depth), want) << c.text() << " depth " << depth;
        yes += want;
        ++total;
      }
  }
  EXPECT_GT(yes, 0);
  EXPECT_LT(yes, total);
}

TEST(Entails, DerivableImpliesEntailed) {
  auto frag = enumerate({{1, 2}, 3, Constraint::Connected});
  auto small = enumerate({{1, 2}, 2, Constraint::Connected});
  std::mt19937 rng(8);
  for (int n = 0; n < 20; ++n) {
    std::vector<Metarule> theory;
    std::sample(small.begin(), small.end(), std::back_inserter(theory), 6, rng);
    for (const auto& c : frag)
      if (derives_k(theory, c, 2)) ASSERT_TRUE(entails_k(theory, c, 2)) << c.text();
  }
}

TEST(Entails, MonotoneInDepth) {
  auto frag = enumerate({{1, 2}, 3, Constraint::Connected});
  std::vector<Metarule> theory{parse("P(A,B) :- Q(A,C),R(C,B)."), parse("P(A,B) :- Q(B,A).")};
  for (const auto& c : frag)
    for (std::size_t k = 0; k < 4; ++k)
      if (entails_k(theory, c, k)) ASSERT_TRUE(entails_k(theory, c, k + 1));
}

TEST(PredicateDistinct, Examples) {
  EXPECT_TRUE(is_predicate_distinct(parse("P(A,B) :- Q(A,C),R(C,B).")));
  EXPECT_FALSE(is_predicate_distinct(parse("P(A,B) :- Q(A,C),Q(C,B).")));
  EXPECT_FALSE(is_predicate_distinct(parse("P(A) :- P(A).")));
}
