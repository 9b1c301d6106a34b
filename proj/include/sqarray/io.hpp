#pragma once

// Design and generator file formats (JSON), and figure-style text rendering.
//
//   {"kind":"auxiliary","t":12,"k":3,"rect":[[...], ...]}   k rows of t labels
//   {"kind":"square","t":12,"k":3,"grid":[["C1","T1",...], ...]}
//   {"kind":"cyclic","t":12,"initial_block":[0,3,7]}       residues mod t
//   {"kind":"blocks","t":25,"k":5,"blocks":[[...], ...]}     t blocks of size k
//
// Generator files are a JSON list of 0-based image arrays.

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sqarray/core.hpp"
#include "sqarray/metrics.hpp"
#include "sqarray/randgroup.hpp"

namespace sqarray {

using json = nlohmann::json;

class ParseError : public StructuralError {
 public:
  ParseError(const std::string& what, int line, int column)
      : StructuralError(what + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON", line, column);
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline std::string cell_code(const Cell& c) {
  return (c.is_control() ? "C" : "T") + std::to_string(c.label);
}

inline Cell parse_cell(const std::string& code) {
  if (code.size() < 2 || (code[0] != 'C' && code[0] != 'T'))
    throw StructuralError("bad cell code \"" + code + "\"");
  int label = 0;
  for (std::size_t i = 1; i < code.size(); ++i) {
    if (code[i] < '0' || code[i] > '9') throw StructuralError("bad cell code \"" + code + "\"");
    label = label * 10 + (code[i] - '0');
  }
  return code[0] == 'C' ? Cell::control(label) : Cell::test_line(label);
}

using Design = std::variant<AuxiliaryBlockDesign, SquareArrayDesign>;

namespace detail {
template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw StructuralError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw StructuralError(std::string("field \"") + key + "\" has the wrong type");
  }
}
}  // namespace detail

inline Design design_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("design file must hold a JSON object");
  const auto kind = detail::field<std::string>(j, "kind");
  if (kind == "auxiliary") {
    auto rect = detail::field<std::vector<std::vector<int>>>(j, "rect");
    int k = j.contains("k") ? detail::field<int>(j, "k") : static_cast<int>(rect.size());
    int t = j.contains("t") ? detail::field<int>(j, "t")
                            : (rect.empty() ? 0 : static_cast<int>(rect.front().size()));
    return AuxiliaryBlockDesign(t, k, std::move(rect));
  }
  if (kind == "square") {
    auto rows = detail::field<std::vector<std::vector<std::string>>>(j, "grid");
    int t = j.contains("t") ? detail::field<int>(j, "t") : static_cast<int>(rows.size());
    std::vector<Cell> grid;
    int max_control = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(rows[r].size()) != t)
        throw StructuralError("grid row " + std::to_string(r + 1) + " has " +
                              std::to_string(rows[r].size()) + " cells, expected " +
                              std::to_string(t));
      for (const auto& code : rows[r]) {
        grid.push_back(parse_cell(code));
        if (grid.back().is_control()) max_control = std::max(max_control, grid.back().label);
      }
    }
    int k = j.contains("k") ? detail::field<int>(j, "k") : max_control;
    return SquareArrayDesign(t, k, std::move(grid));
  }
  if (kind == "cyclic") {
    return cyclic_auxiliary(detail::field<int>(j, "t"),
                            detail::field<std::vector<int>>(j, "initial_block"));
  }
  if (kind == "blocks") {
    return arrange_blocks(detail::field<int>(j, "t"),
                          detail::field<std::vector<std::vector<int>>>(j, "blocks"));
  }
  throw StructuralError("unknown design kind \"" + kind + "\"");
}

inline Design load_design(const std::string& path) {
  return design_from_json(parse_json(read_text(path)));
}

inline json to_json(const AuxiliaryBlockDesign& aux) {
  return {{"kind", "auxiliary"}, {"t", aux.t()}, {"k", aux.k()}, {"rect", aux.rect()}};
}

inline json to_json(const SquareArrayDesign& sq) {
  json grid = json::array();
  for (int r = 0; r < sq.t(); ++r) {
    json row = json::array();
    for (int c = 0; c < sq.t(); ++c) row.push_back(cell_code(sq.at(r, c)));
    grid.push_back(std::move(row));
  }
  return {{"kind", "square"}, {"t", sq.t()}, {"k", sq.k()}, {"grid", std::move(grid)}};
}

/// Compact dump with one grid/rect row per line.
inline std::string dump_design(const json& j) {
  const char* rows_key = j.contains("grid") ? "grid" : "rect";
  std::ostringstream out;
  out << "{\"kind\": " << j.at("kind").dump() << ", \"t\": " << j.at("t") << ", \"k\": " << j.at("k")
      << ", \"" << rows_key << "\": [\n";
  const auto& rows = j.at(rows_key);
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << "  " << rows[i].dump() << (i + 1 < rows.size() ? ",\n" : "\n");
  out << "]}\n";
  return out.str();
}

inline std::vector<Permutation> generators_from_json(const json& j) {
  if (!j.is_array()) throw StructuralError("generator file must hold a JSON list of permutations");
  std::vector<Permutation> out;
  for (const auto& g : j) {
    try {
      out.emplace_back(g.get<std::vector<int>>());
    } catch (const json::exception&) {
      throw StructuralError("generator is not a list of integers");
    }
  }
  return out;
}

inline std::vector<Permutation> load_generators(const std::string& path) {
  return generators_from_json(parse_json(read_text(path)));
}

inline json to_json(const MetricsReport& m) {
  auto num = [&](double x) { return m.connected && std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"a_abd", num(m.a_abd)},       {"a_cc", num(m.a_cc)},
          {"a_ct", num(m.a_ct)},         {"a_tt", num(m.a_tt)},
          {"error_df", m.error_df},      {"connected", m.connected},
          {"method", to_string(m.method)}};
}

inline std::string render(const AuxiliaryBlockDesign& aux) {
  std::ostringstream out;
  const int w = aux.t() >= 10 ? 3 : 2;
  out << "  ";
  for (int j = 1; j <= aux.t(); ++j) out << std::setw(w) << j;
  out << '\n';
  for (int i = 0; i < aux.k(); ++i) {
    out << control_letter(i + 1) << ' ';
    for (int j = 0; j < aux.t(); ++j) out << std::setw(w) << aux.at(i, j);
    out << '\n';
  }
  return out.str();
}

/// Controls as letters, test lines as '.', unless `show_test_lines`.
inline std::string render(const SquareArrayDesign& sq, bool show_test_lines = false) {
  std::ostringstream out;
  int w = sq.t() >= 10 ? 3 : 2;
  if (show_test_lines) w = static_cast<int>(std::to_string(sq.test_line_count()).size()) + 2;
  out << "   ";
  for (int c = 1; c <= sq.t(); ++c) out << std::setw(w) << c;
  out << '\n';
  for (int r = 0; r < sq.t(); ++r) {
    out << std::setw(3) << r + 1;
    for (int c = 0; c < sq.t(); ++c) {
      const Cell& cell = sq.at(r, c);
      if (cell.is_control())
        out << std::setw(w) << control_letter(cell.label);
      else if (show_test_lines)
        out << std::setw(w) << cell.label;
      else
        out << std::setw(w) << '.';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sqarray
