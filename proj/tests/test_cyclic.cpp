#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace sqarray;
using namespace testing_support;

namespace {

std::vector<std::vector<int>> spacing_lists(const std::vector<SpacingSequence>& seqs) {
  std::vector<std::vector<int>> out;
  for (const auto& s : seqs) out.push_back(s.spacings());
  return out;
}

// x -> i x mod t applied to rows and columns of a square array at once.
SquareArrayDesign multiply(const SquareArrayDesign& sq, int i) {
  std::vector<int> m(sq.t());
  for (int x = 0; x < sq.t(); ++x) m[x] = x * i % sq.t();
  return permute(sq, Permutation(m), Permutation(m));
}

}  // namespace

TEST(Enumerate, TwelveThreeHasNineteen) {
  auto seqs = enumerate_cyclic(12, 3);
  EXPECT_EQ(seqs.size(), 19u);
  EXPECT_EQ(spacing_lists(seqs), brute_cyclic_sequences(12, 3));
}

TEST(Enumerate, MatchesSubsetOracle) {
  for (int t = 4; t <= 14; ++t)
    for (int k = 3; k < t && k <= 6; ++k)
      EXPECT_EQ(spacing_lists(enumerate_cyclic(t, k)), brute_cyclic_sequences(t, k))
          << "t=" << t << " k=" << k;
}

TEST(Enumerate, SmallestCase) {
  auto seqs = enumerate_cyclic(4, 3);
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0].spacings(), (std::vector<int>{1, 1, 2}));
}

TEST(Enumerate, LexicographicOrderAndCanonical) {
  auto seqs = enumerate_cyclic(16, 5);
  EXPECT_TRUE(std::is_sorted(seqs.begin(), seqs.end()));
  for (const auto& s : seqs) EXPECT_EQ(least_rotation(s.spacings()), s.spacings());
}

TEST(Connectedness, GcdMatchesRank) {
  for (int t = 4; t <= 12; ++t)
    for (int k = 3; k < t; ++k)
      for (const auto& seq : enumerate_cyclic(t, k)) {
        auto info = aux_information(cyclic_auxiliary(t, seq.initial_block()));
        EXPECT_EQ(is_connected(seq), info.rank() == t - 1) << seq.to_string();
      }
}

TEST(Connectedness, TwelveThreeDisconnectedSet) {
  std::set<std::string> disconnected;
  for (const auto& seq : enumerate_cyclic(12, 3))
    if (!is_connected(seq)) disconnected.insert(seq.to_string());
  EXPECT_EQ(disconnected, (std::set<std::string>{"C(2,2,8)", "C(2,4,6)", "C(2,6,4)", "C(3,3,6)",
                                                 "C(4,4,4)"}));
}

TEST(Multiplier, ImagesOfThreeFourFive) {
  SpacingSequence s(12, {3, 4, 5});
  EXPECT_EQ(multiplier_image(s, 5).to_string(), "C(1,3,8)");
  EXPECT_EQ(multiplier_image(s, 11).to_string(), "C(3,5,4)");
  EXPECT_EQ(multiplier_image(SpacingSequence(12, {1, 1, 10}), 11).to_string(), "C(1,1,10)");
  EXPECT_THROW(multiplier_image(s, 4), StructuralError);
}

TEST(Multiplier, SquareArrayLevelAgrees) {
  auto sq = to_square_array(cyclic_auxiliary(12, {0, 3, 7}));
  EXPECT_EQ(spacings_of(multiply(sq, 5)).to_string(), "C(1,3,8)");
  EXPECT_EQ(spacings_of(multiply(sq, 11)).to_string(), "C(3,5,4)");
}

TEST(Multiplier, OrbitMetricsConstant) {
  for (auto [t, k] : {std::pair{12, 3}, {13, 4}, {16, 4}, {15, 5}}) {
    const CyclicEvaluator eval(t);
    for (const auto& c : equivalence_classes(t, k)) {
      if (!c.connected) continue;
      double ref = *eval.a_abd(c.representative().spacings());
      for (const auto& m : c.members) EXPECT_NEAR(*eval.a_abd(m.spacings()), ref, 1e-10);
    }
  }
}

TEST(Classes, PartitionEveryCanonicalSequence) {
  for (auto [t, k] : {std::pair{12, 3}, {16, 6}, {25, 5}}) {
    std::size_t total = 0;
    std::set<std::vector<int>> seen;
    for (const auto& c : equivalence_classes(t, k)) {
      total += c.members.size();
      for (const auto& m : c.members) seen.insert(m.spacings());
    }
    EXPECT_EQ(total, enumerate_cyclic(t, k).size());
    EXPECT_EQ(seen.size(), total);
  }
}

TEST(Classes, TwelveThreeCounts) {
  auto classes = equivalence_classes(12, 3);
  auto counts = count_classes(classes);
  EXPECT_EQ(counts.multiplier_orbits, 9);
  EXPECT_EQ(counts.connected_orbits, 5);
  EXPECT_EQ(counts.metric_merged, 6);
}

TEST(Search, TwelveThreeBest) {
  auto r = min_metric_search(12, 3);
  EXPECT_EQ(r.examined, 19u);
  std::set<std::string> members;
  for (const auto& m : r.best.members) members.insert(m.to_string());
  EXPECT_TRUE(members.contains("C(3,4,5)"));
  EXPECT_NEAR(r.metrics.a_tt, 4.0341, 5e-4);
}

TEST(Search, MatchesBruteMinimum) {
  for (auto [t, k] : {std::pair{11, 3}, {14, 4}, {15, 4}}) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : brute_cyclic_sequences(t, k)) {
      SpacingSequence seq(t, s);
      if (!is_connected(seq)) continue;
      best = std::min(best, closed_form_metrics(cyclic_auxiliary(t, seq.initial_block())).a_tt);
    }
    EXPECT_NEAR(min_metric_search(t, k).metrics.a_tt, best, 1e-10);
  }
}

TEST(Search, IndependentOfThreadCount) {
  setenv("SQARRAY_THREADS", "1", 1);
  auto one = min_metric_search(20, 5);
  setenv("SQARRAY_THREADS", "4", 1);
  auto four = min_metric_search(20, 5);
  unsetenv("SQARRAY_THREADS");
  EXPECT_EQ(one.best.representative(), four.best.representative());
  EXPECT_EQ(one.metrics.a_tt, four.metrics.a_tt);
}

TEST(Search, GridKeepsControlFractionWindow) {
  auto grid = search_grid(10, 16, 3, 5);
  for (const auto& c : grid) {
    EXPECT_GE(c.control_fraction, 0.15 - 1e-12);
    EXPECT_LE(c.control_fraction, 0.30 + 1e-12);
  }
  EXPECT_FALSE(grid.empty());
}
