#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace sqarray;
using namespace testing_support;

namespace {

// Brute phi_2: every unordered pair of control cells.
double brute_phi2(const SquareArrayDesign& sq) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < sq.t(); ++r)
    for (int c = 0; c < sq.t(); ++c)
      if (sq.at(r, c).is_control()) cells.push_back({r, c});
  double sum = 0;
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      double dr = cells[a].first - cells[b].first, dc = cells[a].second - cells[b].second;
      sum += 1.0 / (dr * dr + dc * dc);
    }
  return std::sqrt(sum);
}

SquareArrayDesign transpose(const SquareArrayDesign& sq) {
  std::vector<Cell> cells;
  for (int r = 0; r < sq.t(); ++r)
    for (int c = 0; c < sq.t(); ++c) cells.push_back(sq.at(c, r));
  return SquareArrayDesign(sq.t(), sq.k(), cells);
}

}  // namespace

TEST(Phi2, TwoByTwoToyGrid) {
  // Controls at (0,0), (0,1), (1,0): distances 1, 1, sqrt 2.
  std::vector<Cell> cells(16, Cell::test_line(0));
  int label = 1;
  for (auto& c : cells) c = Cell::test_line(label++);
  cells[0] = Cell::control(1);
  cells[1] = Cell::control(2);
  cells[4] = Cell::control(3);
  SquareArrayDesign toy(4, 3, cells);
  EXPECT_NEAR(phi2(toy), std::sqrt(2.5), 1e-12);
}

TEST(Phi2, TwoAdjacentPairsGiveRootFive) {
  // Four controls on a 2x2 block: four unit gaps and two diagonals.
  std::vector<Cell> cells(16);
  int label = 1;
  for (auto& c : cells) c = Cell::test_line(label++);
  cells[0] = Cell::control(1);
  cells[1] = Cell::control(2);
  cells[4] = Cell::control(3);
  cells[5] = Cell::control(1);
  SquareArrayDesign toy(4, 3, cells);
  EXPECT_NEAR(phi2(toy), std::sqrt(5.0), 1e-12);
}

TEST(Phi2, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 5 + static_cast<int>(rng() % 10);
    int k = 3 + static_cast<int>(rng() % (t - 3));
    auto sq = random_square(t, k, rng);
    EXPECT_NEAR(phi2(sq), brute_phi2(sq), 1e-10);
  }
}

TEST(Phi2, DihedralInvariance) {
  auto sq = to_square_array(cyclic_auxiliary(12, {0, 3, 7}));
  std::vector<int> rev(12);
  for (int x = 0; x < 12; ++x) rev[x] = 11 - x;
  auto id = Permutation::identity(12);
  const double base = phi2(sq);
  EXPECT_NEAR(phi2(permute(sq, Permutation(rev), id)), base, 1e-12);
  EXPECT_NEAR(phi2(permute(sq, id, Permutation(rev))), base, 1e-12);
  EXPECT_NEAR(phi2(transpose(sq)), base, 1e-12);
}

TEST(Summary, TypeSevenQuantiles) {
  std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.75), 3.25);
  auto s = summarize({4, 1, 3, 2, 10});
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.median, 3);
  EXPECT_DOUBLE_EQ(s.mean, 4);
  EXPECT_DOUBLE_EQ(s.max, 10);
}

TEST(Simulation, ExhaustiveMatchesPermutedDesigns) {
  auto g = standard_group(7);
  auto sq = to_square_array(cyclic_auxiliary(7, {1, 2, 4}));
  auto sim = simulate_phi2(sq, g);
  ASSERT_EQ(sim.values.size(), g.order() * g.order());
  for (std::size_t i = 0; i < sim.values.size(); i += 97) {
    auto d = permute(sq, g.element(i / g.order()), g.element(i % g.order()));
    EXPECT_NEAR(sim.values[i], brute_phi2(d), 1e-10);
  }
  EXPECT_NEAR(phi2(permute(sq, g.element(sim.argmin.first), g.element(sim.argmin.second))),
              sim.summary.min, 1e-12);
}

TEST(Simulation, SampleModeSeeded) {
  auto g = standard_group(7);
  auto sq = to_square_array(cyclic_auxiliary(7, {1, 2, 4}));
  SimulationOptions opt{SimulationMode::Sample, 500, 3, false};
  auto a = simulate_phi2(sq, g, opt), b = simulate_phi2(sq, g, opt);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values.size(), 500u);
}

TEST(Simulation, RefusesOversizedExhaustiveRun) {
  auto g = standard_group(25);  // 600^2 = 360,000 pairs: within the cap
  auto h = standard_group(37);  // 1332^2 > 1e6
  auto sq = to_square_array(cyclic_auxiliary(37, {0, 1, 3, 7, 12}));
  EXPECT_THROW(simulate_phi2(sq, h), RefusedError);
  EXPECT_LE(g.order() * g.order(), kExhaustivePairCap);
}
