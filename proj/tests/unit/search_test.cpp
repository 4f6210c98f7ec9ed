#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "metareduce/fragments.hpp"
#include "metareduce/search.hpp"
#include "metareduce/subsumption.hpp"
#include "oracles.hpp"

using namespace metareduce;

namespace {

std::vector<Metarule> without(const std::vector<Metarule>& t, const std::set<std::string>& gone) {
  std::vector<Metarule> out;
  for (const auto& m : t)
    if (!gone.count(m.text())) out.push_back(m);
  return out;
}

}  // namespace

TEST(DerivationSearch, RemoveRestoreMatchesFreshSearch) {
  auto theory = enumerate({{1, 2}, 2, Constraint::Connected});
  auto targets = enumerate({{1, 2}, 3, Constraint::Connected});
  std::mt19937 rng(12);
  DerivationSearch search(theory);
  std::set<std::string> gone;
  for (int round = 0; round < 30; ++round) {
    const auto& pick = theory[rng() % theory.size()];
    bool removing = !gone.count(pick.text());
    if (removing) {
      search.remove(pick.text());
      gone.insert(pick.text());
      if (rng() % 2) search.commit();
    } else {
      search.restore(pick.text());
      gone.erase(pick.text());
    }
    ASSERT_EQ(search.active_count(), theory.size() - gone.size());
    ASSERT_EQ(search.contains(pick.text()), !removing);
    auto current = without(theory, gone);
    auto reachable = oracle::texts(oracle::closure(current, 2, 3));
    std::vector<Metarule> sample;
    std::sample(targets.begin(), targets.end(), std::back_inserter(sample), 40, rng);
    for (const auto& c : sample) {
      auto got = search.derive(c, 2);
      ASSERT_EQ(got.has_value(), reachable.count(c.text()) > 0) << c.text();
      if (got) ASSERT_TRUE(replay(*got, current, c));
    }
  }
}

TEST(DerivationSearch, RestoreUndoesFailureMemo) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(B,A)."), parse("P(A,B) :- Q(A,C),R(C,B).")};
  auto c3 = parse("P(A,B) :- Q(C,A),R(C,B).");
  DerivationSearch s(t);
  s.remove(t[0].text());
  EXPECT_FALSE(s.derive(c3, 3));
  s.restore(t[0].text());
  EXPECT_TRUE(s.derive(c3, 3));
  EXPECT_GT(s.states_visited(), 0u);
}

TEST(DerivationSearch, TraceLengthWithinDepth) {
  auto theory = enumerate({{2}, 2, Constraint::Connected});
  DerivationSearch s(theory);
  for (const auto& c : enumerate({{2}, 4, Constraint::Connected}))
    for (std::size_t k = 1; k <= 3; ++k)
      if (auto t = s.derive(c, k)) {
        ASSERT_LE(t->steps.size(), k);
        ASSERT_TRUE(replay(*t, theory, c));
      }
}

TEST(DerivationSearch, DeadlineThrows) {
  auto theory = enumerate({{1, 2}, 2, Constraint::Connected});
  DerivationSearch s(theory);
  auto expired = Deadline::after(std::chrono::milliseconds(1));
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  EXPECT_THROW(s.derive(parse("P(A,B) :- Q(A,C),R(A,D),S(B,C),T(B,D),U(C,D)."), 8, expired),
               TimeoutError);
}

TEST(EntailmentSearch, ProofSizeMatchesThreshold) {
  std::vector<Metarule> t{parse("P(A,B) :- Q(A,C),R(C,B).")};
  EntailmentSearch s(t);
  // A chain of four needs three applications.
  auto c = parse("P(A,B) :- Q(A,C),R(C,D),S(D,E),T(E,B).");
  EXPECT_FALSE(s.entails(c, 1));
  EXPECT_TRUE(s.entails(c, 2));
  EXPECT_EQ(s.proof_size(c, 5), 3u);
  EXPECT_FALSE(s.proof_size(c, 1));
}

TEST(EntailmentSearch, AgreesWithReference) {
  auto theory = enumerate({{1, 2}, 2, Constraint::Datalog});
  auto targets = enumerate({{1, 2}, 3, Constraint::Connected});
  std::mt19937 rng(13);
  std::vector<Metarule> t;
  std::sample(theory.begin(), theory.end(), std::back_inserter(t), 6, rng);
  EntailmentSearch s(t);
  for (const auto& c : targets)
    ASSERT_EQ(s.entails(c, 2), oracle::entails(t, c, 2)) << c.text();
}

TEST(SubsumptionCore, CoversTheoryAndIsAntichain) {
  auto t = enumerate({{1, 2}, 3, Constraint::Connected});
  auto core = subsumption_core(t);
  EXPECT_LT(core.size(), t.size());
  for (const auto& c : t)
    ASSERT_TRUE(std::any_of(core.begin(), core.end(),
                            [&](const Metarule& k) { return subsumes_injective_p(k, c); }))
        << c.text();
  for (const auto& a : core)
    for (const auto& b : core)
      if (a.text() != b.text())
        ASSERT_FALSE(subsumes_injective_p(a, b)) << a.text() << " / " << b.text();
}

TEST(SubsumptionCore, PreservesEntailment) {
  auto t = enumerate({{1, 2}, 2, Constraint::Connected});
  auto core = subsumption_core(t);
  for (const auto& c : enumerate({{1, 2}, 3, Constraint::Connected}))
    for (std::size_t depth : {0u, 1u, 2u})
      ASSERT_EQ(oracle::entails(t, c, depth), oracle::entails(core, c, depth)) << c.text();
}
