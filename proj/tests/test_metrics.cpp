#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace sqarray;
using namespace testing_support;

TEST(AuxInformation, PsdWithZeroRowSums) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int t = 4 + static_cast<int>(rng() % 12);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto info = aux_information(random_aux(t, k, rng));
    EXPECT_LT(info.max_abs_row_sum(), 1e-12);
    EXPECT_LT(info.asymmetry(), 1e-15);
    EXPECT_GT(info.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(SquareInformation, PsdWithZeroRowSums) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 4 + static_cast<int>(rng() % 8);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto info = square_information(random_square(t, k, rng));
    EXPECT_LT(info.max_abs_row_sum(), 1e-12);
    EXPECT_LT(info.asymmetry(), 1e-15);
    EXPECT_GT(info.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(AbdVariance, CirculantMatchesEigenSolver) {
  for (int t = 7; t <= 16; ++t)
    for (int k = 3; k <= 5 && k < t; ++k)
      for (const auto& seq : enumerate_cyclic(t, k)) {
        if (!is_connected(seq)) continue;
        double circ = abd_variance(seq);
        double dense = abd_variance(cyclic_auxiliary(t, seq.initial_block()));
        EXPECT_NEAR(circ, dense, 1e-10) << seq.to_string();
      }
}

TEST(AbdVariance, MatchesLuOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 5 + static_cast<int>(rng() % 8);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto sq = random_square(t, k, rng);
    auto oracle = oracle_square_metrics(sq);
    EXPECT_NEAR(abd_variance(from_square_array(sq)), oracle.a_abd, 1e-9);
  }
}

TEST(AbdVariance, DisconnectedThrows) {
  EXPECT_THROW(abd_variance(SpacingSequence(12, {4, 4, 4})), DisconnectedError);
  EXPECT_THROW(abd_variance(cyclic_auxiliary(12, {0, 4, 8})), DisconnectedError);
}

TEST(DirectMetrics, MatchesProjectionOracle) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 12; ++trial) {
    int t = 5 + static_cast<int>(rng() % 6);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto sq = random_square(t, k, rng);
    auto m = direct_metrics(sq);
    auto o = oracle_square_metrics(sq);
    ASSERT_TRUE(m.connected);
    EXPECT_NEAR(m.a_cc, o.a_cc, 1e-9);
    EXPECT_NEAR(m.a_ct, o.a_ct, 1e-9);
    EXPECT_NEAR(m.a_tt, o.a_tt, 1e-9);
  }
}

TEST(DirectMetrics, ControlPairsAlwaysTwoOverT) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 4 + static_cast<int>(rng() % 10);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto m = direct_metrics(random_square(t, k, rng));
    if (m.connected) {
      EXPECT_NEAR(m.a_cc, 2.0 / t, 1e-9);
    }
  }
}

TEST(DirectMetrics, CyclicTwelveThree) {
  auto m = direct_metrics(to_square_array(cyclic_auxiliary(12, {0, 3, 7})));
  EXPECT_TRUE(m.connected);
  EXPECT_EQ(m.error_df, 11);
  EXPECT_NEAR(m.a_abd, 0.9911, 5e-4);
  EXPECT_NEAR(m.a_cc, 0.1667, 5e-4);
  EXPECT_NEAR(m.a_ct, 2.0910, 5e-4);
  EXPECT_NEAR(m.a_tt, 4.0341, 5e-4);
  EXPECT_EQ(square_information(to_square_array(cyclic_auxiliary(12, {0, 3, 7}))).rank(), 110);
}

TEST(DirectMetrics, DisconnectedRankDeficient) {
  auto sq = to_square_array(cyclic_auxiliary(12, {0, 4, 8}));
  auto m = direct_metrics(sq);
  EXPECT_FALSE(m.connected);
  EXPECT_LT(square_information(sq).rank(), sq.treatment_count() - 1);
  EXPECT_TRUE(std::isnan(m.a_tt));
}

TEST(ClosedForm, AgreesWithDirect) {
  for (auto blk : std::vector<std::vector<int>>{{0, 1, 3}, {0, 1, 4}, {0, 2, 7}, {0, 1, 2, 6}})
    for (int t : {9, 11, 13}) {
      auto aux = cyclic_auxiliary(t, blk);
      auto d = direct_metrics(to_square_array(aux));
      auto c = closed_form_metrics(aux);
      EXPECT_NEAR(d.a_ct, c.a_ct, 1e-8);
      EXPECT_NEAR(d.a_tt, c.a_tt, 1e-8);
      EXPECT_NEAR(d.a_cc, c.a_cc, 1e-9);
    }
}

TEST(ClosedForm, CtTtRelation) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    int t = 5 + static_cast<int>(rng() % 7);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto m = direct_metrics(random_square(t, k, rng));
    EXPECT_TRUE(ct_tt_relation_holds(m, t, k));
  }
}

TEST(Youden, ClosedFormsMatchCyclicBibd) {
  // (7,3,1) difference set {1,2,4}; (13,4,1) difference set {0,1,3,9}.
  struct Row { int t, k, lambda; std::vector<int> block; };
  for (const auto& r : {Row{7, 3, 1, {1, 2, 4}}, Row{13, 4, 1, {0, 1, 3, 9}}}) {
    auto y = youden_metrics(r.t, r.k, r.lambda);
    auto c = closed_form_metrics(cyclic_auxiliary(r.t, r.block));
    EXPECT_NEAR(y.a_abd, c.a_abd, 1e-12);
    EXPECT_NEAR(y.a_ct, c.a_ct, 1e-12);
    EXPECT_NEAR(y.a_tt, c.a_tt, 1e-12);
  }
  EXPECT_THROW(youden_metrics(12, 3, 1), StructuralError);
}

TEST(Youden, SixteenSixDirect) {
  auto sq = to_square_array(load_aux("youden_16_6.json"));
  auto m = direct_metrics(sq);
  EXPECT_NEAR(m.a_ct, 1.4375, 5e-4);
  EXPECT_NEAR(m.a_tt, 2.7547, 5e-4);
  EXPECT_NEAR(m.a_abd, 0.375, 1e-9);
}

TEST(PseudoInverse, ReproducesMatrix) {
  auto info = square_information(to_square_array(cyclic_auxiliary(9, {0, 1, 3})));
  auto p = pseudo_inverse(info);
  const auto& c = info.entries();
  EXPECT_EQ(p.rank, info.dim() - 1);
  EXPECT_LT((c * p.inverse * c - c).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((p.inverse * c * p.inverse - p.inverse).cwiseAbs().maxCoeff(), 1e-10);
}
