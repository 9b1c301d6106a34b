#pragma once

// Cyclic designs as canonical spacing sequences: enumeration, connectedness,
// multiplier equivalence classes, and exhaustive minimum-metric search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "sqarray/core.hpp"
#include "sqarray/metrics.hpp"
#include "sqarray/parallel.hpp"

namespace sqarray {

namespace detail {

inline bool is_least_rotation(std::span<const int> s) {
  const std::size_t n = s.size();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      int a = s[(r + i) % n];
      if (a != s[i]) {
        if (a < s[i]) return false;
        break;
      }
    }
  }
  return true;
}

template <class Visit>
void compose(std::vector<int>& prefix, int remaining, int slots, int floor, Visit& visit) {
  if (slots == 1) {
    if (remaining < floor) return;
    prefix.push_back(remaining);
    if (is_least_rotation(prefix)) visit(prefix);
    prefix.pop_back();
    return;
  }
  for (int s = floor; remaining - s >= floor * (slots - 1); ++s) {
    prefix.push_back(s);
    compose(prefix, remaining - s, slots - 1, floor, visit);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Visits every canonical spacing sequence of t into k parts in
/// lexicographic order. A canonical sequence starts with its smallest part,
/// which bounds the search.
template <class Visit>
void for_each_canonical(int t, int k, Visit&& visit) {
  std::vector<int> prefix;
  prefix.reserve(k);
  for (int first = 1; first * k <= t; ++first) {
    prefix.assign(1, first);
    if (k == 1) {
      if (first == t) visit(prefix);
      continue;
    }
    detail::compose(prefix, t - first, k - 1, first, visit);
  }
}

inline std::vector<SpacingSequence> enumerate_cyclic(int t, int k) {
  AuxiliaryBlockDesign::check_parameters(t, k);
  std::vector<SpacingSequence> out;
  for_each_canonical(t, k, [&](const std::vector<int>& s) { out.emplace_back(t, s, false); });
  return out;
}

inline int spacing_gcd(std::span<const int> spacings) {
  int g = 0;
  for (int s : spacings) g = std::gcd(g, s);
  return g;
}

/// A cyclic square array is connected iff its spacings have gcd 1.
inline bool is_connected(const SpacingSequence& seq) { return spacing_gcd(seq.spacings()) == 1; }

/// Multipliers i in 1..t-1 with gcd(i, t) = 1.
inline std::vector<int> units_mod(int t) {
  std::vector<int> out;
  for (int i = 1; i < t; ++i)
    if (std::gcd(i, t) == 1) out.push_back(i);
  return out;
}

/// Image of a cyclic design under x -> i x mod t.
inline SpacingSequence multiplier_image(const SpacingSequence& seq, int i) {
  const int t = seq.t();
  if (std::gcd(((i % t) + t) % t, t) != 1)
    throw StructuralError("multiplier " + std::to_string(i) + " is not coprime to " +
                          std::to_string(t));
  std::vector<int> block = seq.initial_block();
  for (int& b : block) b = static_cast<int>((static_cast<long long>(b) * i % t + t) % t);
  return spacings_of(t, std::move(block));
}

/// Circulant-spectrum evaluation of A_abd with a cached cosine table, for
/// use inside large searches.
class CyclicEvaluator {
 public:
  explicit CyclicEvaluator(int t) : t_(t), cosine_(static_cast<std::size_t>(t) * t) {
    for (int j = 0; j < t; ++j)
      for (int d = 0; d < t; ++d)
        cosine_[static_cast<std::size_t>(j) * t + d] =
            std::cos(2.0 * std::numbers::pi * ((j * d) % t) / t);
  }

  int t() const { return t_; }

  /// A_abd for the spacings, or nullopt when the design is disconnected.
  std::optional<double> a_abd(std::span<const int> spacings) const {
    const int k = static_cast<int>(spacings.size());
    std::vector<int> block(k, 0);
    for (int i = 1; i < k; ++i) block[i] = block[i - 1] + spacings[i - 1];
    std::vector<double> concurrence(t_, 0.0);
    for (int a : block)
      for (int b : block) concurrence[((b - a) % t_ + t_) % t_] += 1.0;
    double sum = 0.0;
    for (int j = 1; j < t_; ++j) {
      const double* cj = cosine_.data() + static_cast<std::size_t>(j) * t_;
      double nn = 0.0;
      for (int d = 0; d < t_; ++d) nn += concurrence[d] * cj[d];
      double theta = k - nn / k;
      if (theta <= kRankTolerance * k) return std::nullopt;
      sum += 1.0 / theta;
    }
    return 2.0 * sum / (t_ - 1);
  }

 private:
  int t_;
  std::vector<double> cosine_;
};

struct EquivalenceClass {
  int id = 0;
  /// Canonical members in lexicographic order; the first is the representative.
  std::vector<SpacingSequence> members;
  bool connected = false;
  MetricsReport metrics;
  /// Another multiplier orbit has the same A_abd to 9 decimals.
  bool possibly_isomorphic = false;

  const SpacingSequence& representative() const { return members.front(); }
};

/// Class counts under three conventions: all multiplier orbits, connected
/// multiplier orbits, and connected orbits merged by equal A_abd (to 9
/// decimals) plus one pooled class for all disconnected designs.
struct ClassCounts {
  int multiplier_orbits = 0;
  int connected_orbits = 0;
  int metric_merged = 0;
};

/// Orbits whose A_abd rounds to the same 9-decimal value count as one
/// class. Rounding rather than a gap tolerance keeps the relation transitive.
inline constexpr int kMetricMergeDecimals = 9;

inline long long metric_key(double a_abd) { return std::llround(a_abd * 1e9); }

inline std::vector<SpacingSequence> multiplier_orbit(const SpacingSequence& seq) {
  std::vector<SpacingSequence> orbit;
  for (int i : units_mod(seq.t())) {
    auto img = multiplier_image(seq, i);
    if (std::find(orbit.begin(), orbit.end(), img) == orbit.end()) orbit.push_back(std::move(img));
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

/// Partition of all canonical cyclic designs into multiplier orbits, in
/// order of their representatives.
inline std::vector<EquivalenceClass> equivalence_classes(int t, int k) {
  const auto all = enumerate_cyclic(t, k);
  std::map<std::vector<int>, int> class_of;
  std::vector<EquivalenceClass> classes;
  const CyclicEvaluator eval(t);
  for (const auto& seq : all) {
    if (class_of.contains(seq.spacings())) continue;
    EquivalenceClass cls;
    cls.id = static_cast<int>(classes.size());
    cls.members = multiplier_orbit(seq);
    for (const auto& m : cls.members) class_of.emplace(m.spacings(), cls.id);
    cls.connected = is_connected(seq);
    if (cls.connected) {
      cls.metrics = closed_form_metrics(t, k, *eval.a_abd(seq.spacings()));
    } else {
      cls.metrics.method = Method::ClosedForm;
      cls.metrics.error_df = error_df(t, k);
      cls.metrics.a_cc = 2.0 / t;
    }
    classes.push_back(std::move(cls));
  }

  std::map<long long, int> per_key;
  for (const auto& c : classes)
    if (c.connected) ++per_key[metric_key(c.metrics.a_abd)];
  for (auto& c : classes)
    c.possibly_isomorphic = c.connected && per_key[metric_key(c.metrics.a_abd)] > 1;
  return classes;
}

inline ClassCounts count_classes(const std::vector<EquivalenceClass>& classes) {
  ClassCounts counts;
  counts.multiplier_orbits = static_cast<int>(classes.size());
  std::set<long long> keys;
  bool any_disconnected = false;
  for (const auto& c : classes) {
    if (c.connected) {
      ++counts.connected_orbits;
      keys.insert(metric_key(c.metrics.a_abd));
    } else {
      any_disconnected = true;
    }
  }
  counts.metric_merged = static_cast<int>(keys.size()) + (any_disconnected ? 1 : 0);
  return counts;
}

struct SearchResult {
  EquivalenceClass best;
  MetricsReport metrics;
  /// Number of canonical sequences examined.
  std::size_t examined = 0;
};

/// Exhaustive search for the connected cyclic design of minimum A_abd (hence
/// minimum A_tt and A_ct); ties go to the lexicographically least sequence.
inline SearchResult min_metric_search(int t, int k) {
  const auto all = enumerate_cyclic(t, k);
  const CyclicEvaluator eval(t);
  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    bool found = false;
  };
  // Sequences are in lexicographic order, so a strict improvement rule
  // keeps the least sequence among ties inside each chunk.
  constexpr double tie = 1e-10;
  const unsigned workers = thread_count();
  std::vector<Best> partial(workers);
  parallel_chunks(
      all.size(),
      [&](std::size_t begin, std::size_t end, unsigned w) {
        Best b;
        for (std::size_t i = begin; i < end; ++i) {
          auto a = eval.a_abd(all[i].spacings());
          if (a && (!b.found || *a < b.value - tie)) b = {*a, i, true};
        }
        partial[w] = b;
      },
      workers);
  Best best;
  for (const auto& b : partial)
    if (b.found && (!best.found || b.value < best.value - tie)) best = b;
  if (!best.found) throw DisconnectedError("no connected cyclic design for these parameters");

  SearchResult result;
  result.examined = all.size();
  const auto& seq = all[best.index];
  result.best.members = multiplier_orbit(seq);
  result.best.connected = true;
  result.metrics = closed_form_metrics(t, k, best.value);
  result.best.metrics = result.metrics;
  return result;
}

struct GridCell {
  int t = 0;
  int k = 0;
  double control_fraction = 0.0;
  /// Control fraction within the 20-25% rule-of-thumb window.
  bool in_kempton_window = false;
  SearchResult result;
};

/// Minimum-A_tt cyclic designs over a (t, k) grid, keeping cells whose
/// control fraction k/t lies in [min_fraction, max_fraction].
inline std::vector<GridCell> search_grid(int t_min, int t_max, int k_min, int k_max,
                                         double min_fraction = 0.15, double max_fraction = 0.30) {
  std::vector<GridCell> cells;
  constexpr double eps = 1e-12;
  for (int t = t_min; t <= t_max; ++t)
    for (int k = std::max(k_min, 3); k <= k_max && k < t; ++k) {
      double f = static_cast<double>(k) / t;
      if (f < min_fraction - eps || f > max_fraction + eps) continue;
      GridCell cell;
      cell.t = t;
      cell.k = k;
      cell.control_fraction = f;
      cell.in_kempton_window = f >= 0.20 - eps && f <= 0.25 + eps;
      cell.result = min_metric_search(t, k);
      cells.push_back(std::move(cell));
    }
  return cells;
}

}  // namespace sqarray
