#pragma once

// Design data model: auxiliary k x t block designs, t x t square array
// designs with k controls, spacing sequences of cyclic designs, and the
// rectangle <-> square array representation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sqarray/error.hpp"

namespace sqarray {

enum class CellKind : std::uint8_t { Control, TestLine };

/// A plot of a square array: control i (1..k) or test line m (1..t(t-k)).
struct Cell {
  CellKind kind = CellKind::TestLine;
  int label = 0;

  static constexpr Cell control(int i) { return {CellKind::Control, i}; }
  static constexpr Cell test_line(int m) { return {CellKind::TestLine, m}; }

  constexpr bool is_control() const { return kind == CellKind::Control; }

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

/// Control letter used by the text renderer: 1 -> 'A', 2 -> 'B', ...
inline char control_letter(int i) { return static_cast<char>('A' + (i - 1)); }

/// k x t rectangle of treatment labels 1..t; column j is block j and each
/// row is expected to be a permutation of the treatments.
class AuxiliaryBlockDesign {
 public:
  AuxiliaryBlockDesign(int t, int k, std::vector<std::vector<int>> rect) : t_(t), k_(k) {
    check_parameters(t, k);
    if (static_cast<int>(rect.size()) != k)
      throw StructuralError("rectangle has " + std::to_string(rect.size()) + " rows, expected k=" +
                            std::to_string(k));
    cells_.reserve(static_cast<std::size_t>(t) * k);
    for (std::size_t i = 0; i < rect.size(); ++i) {
      if (static_cast<int>(rect[i].size()) != t)
        throw StructuralError("rectangle row " + std::to_string(i + 1) + " has " +
                              std::to_string(rect[i].size()) + " entries, expected t=" +
                              std::to_string(t));
      cells_.insert(cells_.end(), rect[i].begin(), rect[i].end());
    }
  }

  int t() const { return t_; }
  int k() const { return k_; }

  /// Entry in row i (0-based replicate), column j (0-based block).
  int at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * t_ + j]; }

  std::span<const int> row(int i) const {
    return {cells_.data() + static_cast<std::size_t>(i) * t_, static_cast<std::size_t>(t_)};
  }

  std::vector<int> block(int j) const {
    std::vector<int> b(k_);
    for (int i = 0; i < k_; ++i) b[i] = at(i, j);
    return b;
  }

  std::vector<std::vector<int>> rect() const {
    std::vector<std::vector<int>> r(k_);
    for (int i = 0; i < k_; ++i) r[i].assign(row(i).begin(), row(i).end());
    return r;
  }

  friend bool operator==(const AuxiliaryBlockDesign&, const AuxiliaryBlockDesign&) = default;

  static void check_parameters(int t, int k) {
    if (t < 4) throw StructuralError("t must be at least 4, got " + std::to_string(t));
    if (k < 3 || k >= t)
      throw StructuralError("block size k must satisfy 3 <= k < t, got k=" + std::to_string(k) +
                            ", t=" + std::to_string(t));
  }

 private:
  int t_;
  int k_;
  std::vector<int> cells_;
};

/// t x t grid in which each of k controls sits once per row and once per
/// column; the remaining t(t-k) cells hold distinct test lines.
class SquareArrayDesign {
 public:
  SquareArrayDesign(int t, int k, std::vector<Cell> grid) : t_(t), k_(k), grid_(std::move(grid)) {
    AuxiliaryBlockDesign::check_parameters(t, k);
    if (grid_.size() != static_cast<std::size_t>(t) * t)
      throw StructuralError("grid has " + std::to_string(grid_.size()) + " cells, expected " +
                            std::to_string(t * t));
  }

  int t() const { return t_; }
  int k() const { return k_; }
  int test_line_count() const { return t_ * (t_ - k_); }
  /// Total number of treatments v = k + t(t-k).
  int treatment_count() const { return k_ + test_line_count(); }

  /// Cell at 0-based (row, column).
  const Cell& at(int r, int c) const { return grid_[static_cast<std::size_t>(r) * t_ + c]; }
  std::span<const Cell> cells() const { return grid_; }

  /// Treatment index in 0..v-1: controls first (0..k-1), then test lines.
  int treatment_index(int r, int c) const {
    const Cell& cell = at(r, c);
    return cell.is_control() ? cell.label - 1 : k_ + cell.label - 1;
  }

  friend bool operator==(const SquareArrayDesign&, const SquareArrayDesign&) = default;

 private:
  int t_;
  int k_;
  std::vector<Cell> grid_;
};

/// Violations point at the offending rectangle cell (row i = control,
/// column j = block), 1-based.
inline ValidationReport validate_auxiliary(const AuxiliaryBlockDesign& design) {
  ValidationReport report;
  const int t = design.t();
  const int k = design.k();
  auto in_range = [&](int s) { return s >= 1 && s <= t; };
  for (int i = 0; i < k; ++i) {
    std::vector<char> seen(t + 1, 0);
    for (int j = 0; j < t; ++j) {
      int s = design.at(i, j);
      if (!in_range(s)) {
        report.add("label " + std::to_string(s) + " out of range 1.." + std::to_string(t), i + 1,
                   j + 1);
      } else if (seen[s]++) {
        report.add(std::string("row ") + control_letter(i + 1) + " not a permutation: " +
                       std::to_string(s) + " repeated",
                   i + 1, j + 1);
      }
    }
  }
  for (int j = 0; j < t; ++j) {
    std::vector<char> seen(t + 1, 0);
    for (int i = 0; i < k; ++i) {
      int s = design.at(i, j);
      if (in_range(s) && seen[s]++)
        report.add("duplicate in block " + std::to_string(j + 1) + ": " + std::to_string(s),
                   i + 1, j + 1);
    }
  }
  return report;
}

inline ValidationReport validate_square(const SquareArrayDesign& design) {
  ValidationReport report;
  const int t = design.t();
  const int k = design.k();
  const int t1 = design.test_line_count();
  std::vector<int> row_count(static_cast<std::size_t>(t) * (k + 1), 0);
  std::vector<int> col_count(static_cast<std::size_t>(t) * (k + 1), 0);
  std::vector<int> test_seen(t1 + 1, 0);
  int controls = 0;
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < t; ++c) {
      const Cell& cell = design.at(r, c);
      if (cell.is_control()) {
        if (cell.label < 1 || cell.label > k) {
          report.add("control label " + std::to_string(cell.label) + " out of range", r + 1, c + 1);
          continue;
        }
        ++controls;
        ++row_count[static_cast<std::size_t>(r) * (k + 1) + cell.label];
        ++col_count[static_cast<std::size_t>(c) * (k + 1) + cell.label];
      } else {
        if (cell.label < 1 || cell.label > t1) {
          report.add("test line label " + std::to_string(cell.label) + " out of range", r + 1,
                     c + 1);
          continue;
        }
        if (++test_seen[cell.label] == 2)
          report.add("test line T" + std::to_string(cell.label) + " repeated", r + 1, c + 1);
      }
    }
  }
  for (int x = 0; x < t; ++x) {
    for (int i = 1; i <= k; ++i) {
      if (row_count[static_cast<std::size_t>(x) * (k + 1) + i] != 1)
        report.add(std::string("control ") + control_letter(i) + " not exactly once in row " +
                   std::to_string(x + 1));
      if (col_count[static_cast<std::size_t>(x) * (k + 1) + i] != 1)
        report.add(std::string("control ") + control_letter(i) + " not exactly once in column " +
                   std::to_string(x + 1));
    }
  }
  if (controls != t * k)
    report.add("expected " + std::to_string(t * k) + " control cells, found " +
               std::to_string(controls));
  return report;
}

inline void require_valid(const AuxiliaryBlockDesign& design) {
  auto report = validate_auxiliary(design);
  if (!report.ok()) throw ValidationError(std::move(report));
}

inline void require_valid(const SquareArrayDesign& design) {
  auto report = validate_square(design);
  if (!report.ok()) throw ValidationError(std::move(report));
}

/// Entry s in row i, column j of the rectangle puts control i in cell (j, s)
/// of the square array. Test lines fill the rest in row-major order.
inline SquareArrayDesign to_square_array(const AuxiliaryBlockDesign& aux) {
  require_valid(aux);
  const int t = aux.t();
  std::vector<Cell> grid(static_cast<std::size_t>(t) * t, Cell::test_line(0));
  for (int i = 0; i < aux.k(); ++i)
    for (int j = 0; j < t; ++j)
      grid[static_cast<std::size_t>(j) * t + (aux.at(i, j) - 1)] = Cell::control(i + 1);
  int next = 1;
  for (auto& cell : grid)
    if (!cell.is_control()) cell = Cell::test_line(next++);
  return SquareArrayDesign(t, aux.k(), std::move(grid));
}

inline AuxiliaryBlockDesign from_square_array(const SquareArrayDesign& sq) {
  require_valid(sq);
  const int t = sq.t();
  std::vector<std::vector<int>> rect(sq.k(), std::vector<int>(t, 0));
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < t; ++c)
      if (const Cell& cell = sq.at(r, c); cell.is_control()) rect[cell.label - 1][r] = c + 1;
  return AuxiliaryBlockDesign(t, sq.k(), std::move(rect));
}

/// Develops an initial block of residues mod t: block j holds b + j mod t
/// (labels are residue + 1). Rows follow the sorted initial block.
inline AuxiliaryBlockDesign cyclic_auxiliary(int t, std::vector<int> initial_block) {
  AuxiliaryBlockDesign::check_parameters(t, static_cast<int>(initial_block.size()));
  for (int& b : initial_block) b = ((b % t) + t) % t;
  std::sort(initial_block.begin(), initial_block.end());
  if (std::adjacent_find(initial_block.begin(), initial_block.end()) != initial_block.end())
    throw StructuralError("initial block has duplicate residues mod " + std::to_string(t));
  const int k = static_cast<int>(initial_block.size());
  std::vector<std::vector<int>> rect(k, std::vector<int>(t));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < t; ++j) rect[i][j] = (initial_block[i] + j) % t + 1;
  return AuxiliaryBlockDesign(t, k, std::move(rect));
}

/// Arranges an equireplicate design given as t blocks of size k into the
/// k x t rectangle form, each row a permutation of the treatments. Rows are
/// peeled off as perfect matchings of the k-regular treatment/block graph.
inline AuxiliaryBlockDesign arrange_blocks(int t, const std::vector<std::vector<int>>& blocks) {
  if (static_cast<int>(blocks.size()) != t)
    throw StructuralError("expected " + std::to_string(t) + " blocks, got " +
                          std::to_string(blocks.size()));
  const int k = blocks.empty() ? 0 : static_cast<int>(blocks.front().size());
  AuxiliaryBlockDesign::check_parameters(t, k);

  ValidationReport report;
  std::vector<int> replication(t + 1, 0);
  // remaining[j] holds treatments of block j not yet placed in a row.
  std::vector<std::vector<int>> remaining(t);
  for (int j = 0; j < t; ++j) {
    if (static_cast<int>(blocks[j].size()) != k)
      throw StructuralError("block " + std::to_string(j + 1) + " has size " +
                            std::to_string(blocks[j].size()) + ", expected " + std::to_string(k));
    std::vector<int> b = blocks[j];
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end())
      report.add("duplicate in block " + std::to_string(j + 1));
    for (int s : b) {
      if (s < 1 || s > t) {
        report.add("label " + std::to_string(s) + " out of range 1.." + std::to_string(t));
        continue;
      }
      ++replication[s];
    }
    remaining[j] = std::move(b);
  }
  for (int s = 1; s <= t; ++s)
    if (replication[s] != k)
      report.add("treatment " + std::to_string(s) + " has replication " +
                 std::to_string(replication[s]) + ", expected " + std::to_string(k));
  if (!report.ok()) throw ValidationError(std::move(report));

  std::vector<std::vector<int>> rect(k, std::vector<int>(t, 0));
  for (int i = 0; i < k; ++i) {
    // Kuhn's augmenting paths: blocks on the left, treatments on the right.
    std::vector<int> owner(t + 1, -1);
    std::vector<char> visited;
    auto augment = [&](auto&& self, int j) -> bool {
      for (int s : remaining[j]) {
        if (visited[s]) continue;
        visited[s] = 1;
        if (owner[s] < 0 || self(self, owner[s])) {
          owner[s] = j;
          return true;
        }
      }
      return false;
    };
    for (int j = 0; j < t; ++j) {
      visited.assign(t + 1, 0);
      if (!augment(augment, j)) throw Error("no perfect matching; design is not equireplicate");
    }
    for (int s = 1; s <= t; ++s) {
      int j = owner[s];
      rect[i][j] = s;
      auto& rem = remaining[j];
      rem.erase(std::find(rem.begin(), rem.end(), s));
    }
  }
  return AuxiliaryBlockDesign(t, k, std::move(rect));
}

/// Lexicographically least cyclic rotation.
inline std::vector<int> least_rotation(std::span<const int> seq) {
  const std::size_t n = seq.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      int a = seq[(r + i) % n];
      int b = seq[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = seq[(best + i) % n];
  return out;
}

/// Cyclic gaps (s_1, ..., s_k) between consecutive controls in a row of a
/// cyclic square array; a composition of t.
class SpacingSequence {
 public:
  SpacingSequence(int t, std::vector<int> spacings, bool canonicalize = true)
      : t_(t), spacings_(std::move(spacings)) {
    if (spacings_.empty()) throw StructuralError("empty spacing sequence");
    for (int s : spacings_)
      if (s < 1) throw StructuralError("spacings must be positive");
    if (std::accumulate(spacings_.begin(), spacings_.end(), 0) != t)
      throw StructuralError("spacings must sum to t=" + std::to_string(t));
    if (canonicalize) spacings_ = least_rotation(spacings_);
    canonical_ = spacings_ == least_rotation(spacings_);
  }

  int t() const { return t_; }
  int k() const { return static_cast<int>(spacings_.size()); }
  const std::vector<int>& spacings() const { return spacings_; }
  bool canonical() const { return canonical_; }

  /// Initial block {0, s_1, s_1 + s_2, ...} as residues mod t.
  std::vector<int> initial_block() const {
    std::vector<int> b(spacings_.size());
    for (std::size_t i = 1; i < spacings_.size(); ++i) b[i] = b[i - 1] + spacings_[i - 1];
    return b;
  }

  std::string to_string() const {
    std::string s = "C(";
    for (std::size_t i = 0; i < spacings_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(spacings_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const SpacingSequence& a, const SpacingSequence& b) {
    return a.t_ == b.t_ && a.spacings_ == b.spacings_;
  }
  friend bool operator<(const SpacingSequence& a, const SpacingSequence& b) {
    return a.t_ != b.t_ ? a.t_ < b.t_ : a.spacings_ < b.spacings_;
  }

 private:
  int t_;
  std::vector<int> spacings_;
  bool canonical_ = false;
};

/// Canonical spacings of control column coordinates (any base, any order).
inline SpacingSequence spacings_of(int t, std::vector<int> coordinates) {
  for (int& c : coordinates) c = ((c % t) + t) % t;
  std::sort(coordinates.begin(), coordinates.end());
  if (std::adjacent_find(coordinates.begin(), coordinates.end()) != coordinates.end())
    throw StructuralError("duplicate coordinates");
  const std::size_t k = coordinates.size();
  std::vector<int> s(k);
  for (std::size_t i = 0; i + 1 < k; ++i) s[i] = coordinates[i + 1] - coordinates[i];
  s[k - 1] = t - coordinates[k - 1] + coordinates[0];
  return SpacingSequence(t, std::move(s));
}

/// Spacings of a cyclic square array: every control must run down a single
/// left-to-right diagonal.
inline SpacingSequence spacings_of(const SquareArrayDesign& sq) {
  const int t = sq.t();
  std::vector<int> first(sq.k() + 1, -1);
  for (int c = 0; c < t; ++c)
    if (const Cell& cell = sq.at(0, c); cell.is_control() && cell.label <= sq.k())
      first[cell.label] = c;
  for (int i = 1; i <= sq.k(); ++i)
    if (first[i] < 0) throw StructuralError("not cyclic: control missing from the first row");
  for (int r = 1; r < t; ++r)
    for (int i = 1; i <= sq.k(); ++i) {
      const Cell& cell = sq.at(r, (first[i] + r) % t);
      if (!cell.is_control() || cell.label != i)
        throw StructuralError("not cyclic: control " + std::string(1, control_letter(i)) +
                    " leaves its diagonal in row " + std::to_string(r + 1));
    }
  return spacings_of(t, std::vector<int>(first.begin() + 1, first.end()));
}

inline SpacingSequence spacings_of(const AuxiliaryBlockDesign& aux) {
  return spacings_of(to_square_array(aux));
}

/// Residual degrees of freedom (t-1)(k-2) of the row-column model.
inline int error_df(int t, int k) {
  if (k < 3) throw StructuralError("zero or negative error df: k must be at least 3");
  if (k >= t) throw StructuralError("k must be less than t");
  return (t - 1) * (k - 2);
}

}  // namespace sqarray
