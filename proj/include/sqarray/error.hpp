#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqarray {

/// One violated invariant, optionally pinned to a 1-based (row, column) cell.
struct Violation {
  std::string message;
  std::optional<int> row;
  std::optional<int> column;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  void add(std::string message, std::optional<int> row = std::nullopt,
           std::optional<int> column = std::nullopt) {
    violations.push_back({std::move(message), row, column});
  }

  std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.message;
      if (v.row && v.column)
        out += " at (" + std::to_string(*v.row) + "," + std::to_string(*v.column) + ")";
    }
    return out;
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or parameter problems that make a design impossible to inspect
/// (wrong dimensions, k outside 3..t-1, malformed cells).
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error("invalid design: " + report.summary()), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class DisconnectedError : public Error {
 public:
  using Error::Error;
};

/// A computation declined because it would exceed a size cap.
class RefusedError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqarray
