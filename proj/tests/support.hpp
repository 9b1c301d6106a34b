#pragma once

// Shared helpers for the test suites: random designs and brute-force oracles
// that share no code with the library routines they check.

#include <Eigen/Dense>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sqarray/sqarray.hpp"

namespace testing_support {

using namespace sqarray;

inline std::string fixture(const std::string& name) {
  return (std::filesystem::path(SQARRAY_FIXTURE_DIR) / name).string();
}

inline AuxiliaryBlockDesign load_aux(const std::string& name) {
  return std::get<AuxiliaryBlockDesign>(load_design(fixture(name)));
}

/// k rows of a randomly isotoped cyclic Latin square: every row is a
/// permutation and every column has distinct entries.
inline AuxiliaryBlockDesign random_aux(int t, int k, std::mt19937_64& rng) {
  std::vector<int> rows(t), cols(t), syms(t);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::iota(syms.begin(), syms.end(), 1);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::shuffle(syms.begin(), syms.end(), rng);
  std::vector<std::vector<int>> rect(k, std::vector<int>(t));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < t; ++j) rect[i][j] = syms[(rows[i] + cols[j]) % t];
  return AuxiliaryBlockDesign(t, k, std::move(rect));
}

inline std::vector<int> random_permutation(int t, std::mt19937_64& rng) {
  std::vector<int> p(t);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Square array whose rows and columns are arbitrarily shuffled: generally
/// neither cyclic nor obtained from a group.
inline SquareArrayDesign random_square(int t, int k, std::mt19937_64& rng) {
  auto sq = to_square_array(random_aux(t, k, rng));
  return permute(sq, Permutation(random_permutation(t, rng)),
                 Permutation(random_permutation(t, rng)));
}

/// Brute-force structural check straight from the definition.
inline bool brute_valid_square(const SquareArrayDesign& sq) {
  const int t = sq.t(), k = sq.k();
  for (int x = 0; x < t; ++x)
    for (int c = 1; c <= k; ++c) {
      int in_row = 0, in_col = 0;
      for (int y = 0; y < t; ++y) {
        in_row += sq.at(x, y).is_control() && sq.at(x, y).label == c;
        in_col += sq.at(y, x).is_control() && sq.at(y, x).label == c;
      }
      if (in_row != 1 || in_col != 1) return false;
    }
  std::vector<int> tests;
  for (const auto& cell : sq.cells())
    if (!cell.is_control()) tests.push_back(cell.label);
  std::sort(tests.begin(), tests.end());
  for (std::size_t i = 0; i < tests.size(); ++i)
    if (tests[i] != static_cast<int>(i) + 1) return false;
  return true;
}

struct OracleMetrics {
  double a_abd = 0, a_cc = 0, a_ct = 0, a_tt = 0;
  int rank = 0;
};

/// Variance of every treatment difference via (C + J/v)^-1 with an LU
/// solve, where C = X' Q X and Q projects out rows and columns.
inline Eigen::MatrixXd oracle_inverse(const Eigen::MatrixXd& c, int* rank = nullptr) {
  const auto v = c.rows();
  if (rank) *rank = static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(c).rank());
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(v, v, 1.0 / static_cast<double>(v));
  return Eigen::FullPivLU<Eigen::MatrixXd>(c + j).inverse() - j;
}

inline double pair_variance(const Eigen::MatrixXd& g, int a, int b) {
  return g(a, a) + g(b, b) - 2.0 * g(a, b);
}

inline OracleMetrics oracle_square_metrics(const SquareArrayDesign& sq) {
  const int t = sq.t(), k = sq.k(), t1 = sq.test_line_count(), v = k + t1;
  const int n = t * t;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, v);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < t; ++c) {
      const Cell& cell = sq.at(r, c);
      x(r * t + c, cell.is_control() ? cell.label - 1 : k + cell.label - 1) = 1.0;
    }
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < n; ++s) {
      q(p, s) -= ((p / t == s / t) ? 1.0 / t : 0.0) + ((p % t == s % t) ? 1.0 / t : 0.0);
      q(p, s) += 1.0 / n;
    }
  Eigen::MatrixXd c = x.transpose() * q * x;
  OracleMetrics m;
  const Eigen::MatrixXd g = oracle_inverse(c, &m.rank);
  double cc = 0, ct = 0, tt = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) cc += pair_variance(g, a, b);
  for (int a = 0; a < k; ++a)
    for (int b = k; b < v; ++b) ct += pair_variance(g, a, b);
  for (int a = k; a < v; ++a)
    for (int b = a + 1; b < v; ++b) tt += pair_variance(g, a, b);
  m.a_cc = cc / (k * (k - 1) / 2.0);
  m.a_ct = ct / (static_cast<double>(k) * t1);
  m.a_tt = tt / (static_cast<double>(t1) * (t1 - 1) / 2.0);

  // Auxiliary block design: rows of the square are treatments, columns blocks.
  Eigen::MatrixXd n_inc = Eigen::MatrixXd::Zero(t, t);
  for (int r = 0; r < t; ++r)
    for (int col = 0; col < t; ++col)
      if (sq.at(r, col).is_control()) n_inc(col, r) += 1.0;
  Eigen::MatrixXd cb = k * Eigen::MatrixXd::Identity(t, t) - n_inc * n_inc.transpose() / k;
  const Eigen::MatrixXd gb = oracle_inverse(cb);
  double abd = 0;
  for (int a = 0; a < t; ++a)
    for (int b = a + 1; b < t; ++b) abd += pair_variance(gb, a, b);
  m.a_abd = abd / (t * (t - 1) / 2.0);
  return m;
}

/// Canonical cyclic sequences by listing every k-subset of Z_t containing 0.
inline std::vector<std::vector<int>> brute_cyclic_sequences(int t, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(t, 0);
  std::fill(pick.end() - (k - 1), pick.end(), 1);
  do {
    if (pick[0]) continue;
    std::vector<int> block{0};
    for (int x = 1; x < t; ++x)
      if (pick[x]) block.push_back(x);
    std::vector<int> s;
    for (int i = 0; i + 1 < k; ++i) s.push_back(block[i + 1] - block[i]);
    s.push_back(t - block.back());
    std::vector<int> best = s;
    for (int r = 1; r < k; ++r) {
      std::vector<int> rot(s.begin() + r, s.end());
      rot.insert(rot.end(), s.begin(), s.begin() + r);
      best = std::min(best, rot);
    }
    out.push_back(best);
  } while (std::next_permutation(pick.begin(), pick.end()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace testing_support
