#pragma once

// phi_2 space-filling criterion over the control cells of a square array,
// and its distribution under random row/column permutations from a group.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sqarray/core.hpp"
#include "sqarray/parallel.hpp"
#include "sqarray/randgroup.hpp"

namespace sqarray {

/// Square root of the sum of inverse squared Euclidean distances over all
/// unordered pairs of control cells (all control labels pooled).
inline double phi2(const SquareArrayDesign& sq) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < sq.t(); ++r)
    for (int c = 0; c < sq.t(); ++c)
      if (sq.at(r, c).is_control()) cells.emplace_back(r, c);
  double sum = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      int dr = cells[a].first - cells[b].first;
      int dc = cells[a].second - cells[b].second;
      sum += 1.0 / (dr * dr + dc * dc);
    }
  return std::sqrt(sum);
}

struct Phi2Summary {
  std::size_t n = 0;
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
};

/// Type-7 quantile (linear interpolation between order statistics) of
/// sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline Phi2Summary summarize(std::vector<double> values) {
  Phi2Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  double total = 0.0;
  for (double v : values) total += v;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  s.mean = std::clamp(total / static_cast<double>(values.size()), s.min, s.max);
  return s;
}

enum class SimulationMode { Exhaustive, Sample };

struct SimulationOptions {
  SimulationMode mode = SimulationMode::Exhaustive;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  /// Allow exhaustive runs with more than kExhaustivePairCap pairs.
  bool force = false;
};

inline constexpr std::size_t kExhaustivePairCap = 1'000'000;

struct Phi2Simulation {
  Phi2Summary summary;
  /// phi_2 per simulated design. Exhaustive order: row element index major,
  /// column element index minor.
  std::vector<double> values;
  /// Group element indices (rows, columns) of the extreme designs.
  std::pair<std::size_t, std::size_t> argmin{0, 0};
  std::pair<std::size_t, std::size_t> argmax{0, 0};
};

inline Phi2Simulation simulate_phi2(const SquareArrayDesign& sq, const PermutationGroup& g,
                                    const SimulationOptions& options = {}) {
  const int t = sq.t();
  if (g.degree() != t)
    throw StructuralError("group degree " + std::to_string(g.degree()) +
                          " does not match design size " + std::to_string(t));
  std::vector<int> rows, cols;
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < t; ++c)
      if (sq.at(r, c).is_control()) {
        rows.push_back(r);
        cols.push_back(c);
      }
  const std::size_t n = rows.size();
  const std::size_t pairs = n * (n - 1) / 2;
  const std::size_t order = g.order();

  // Squared coordinate gaps per group element and control pair, so a
  // simulated design costs one pass over the pairs.
  auto gaps = [&](const std::vector<int>& coord) {
    std::vector<std::uint16_t> out(order * pairs);
    for (std::size_t e = 0; e < order; ++e) {
      const auto& p = g.element(e);
      std::uint16_t* dst = out.data() + e * pairs;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          int d = p(coord[a]) - p(coord[b]);
          *dst++ = static_cast<std::uint16_t>(d * d);
        }
    }
    return out;
  };
  const auto row_gaps = gaps(rows);
  const auto col_gaps = gaps(cols);
  auto evaluate = [&](std::size_t pi, std::size_t sigma) {
    const std::uint16_t* dr = row_gaps.data() + pi * pairs;
    const std::uint16_t* dc = col_gaps.data() + sigma * pairs;
    double sum = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) sum += 1.0 / (dr[i] + dc[i]);
    return std::sqrt(sum);
  };

  Phi2Simulation sim;
  std::vector<std::pair<std::size_t, std::size_t>> draws;
  if (options.mode == SimulationMode::Exhaustive) {
    if (order * order > kExhaustivePairCap && !options.force)
      throw RefusedError("exhaustive simulation needs " + std::to_string(order * order) +
                         " designs (cap " + std::to_string(kExhaustivePairCap) +
                         "); use sample mode or --force");
    sim.values.resize(order * order);
    parallel_chunks(order, [&](std::size_t begin, std::size_t end, unsigned) {
      for (std::size_t pi = begin; pi < end; ++pi)
        for (std::size_t sigma = 0; sigma < order; ++sigma)
          sim.values[pi * order + sigma] = evaluate(pi, sigma);
    });
  } else {
    SeededRng rng(options.seed);
    draws.resize(options.samples);
    for (auto& d : draws) {
      d.first = rng.index(order);
      d.second = rng.index(order);
    }
    sim.values.resize(draws.size());
    parallel_chunks(draws.size(), [&](std::size_t begin, std::size_t end, unsigned) {
      for (std::size_t i = begin; i < end; ++i) sim.values[i] = evaluate(draws[i].first, draws[i].second);
    });
  }

  auto locate = [&](std::size_t i) {
    return draws.empty() ? std::pair{i / order, i % order} : draws[i];
  };
  if (!sim.values.empty()) {
    auto [lo, hi] = std::minmax_element(sim.values.begin(), sim.values.end());
    sim.argmin = locate(static_cast<std::size_t>(lo - sim.values.begin()));
    sim.argmax = locate(static_cast<std::size_t>(hi - sim.values.begin()));
  }
  sim.summary = summarize(sim.values);
  return sim;
}

}  // namespace sqarray
