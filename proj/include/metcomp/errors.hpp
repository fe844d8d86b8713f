#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metcomp {

/// Malformed or inconsistent user input. `path` locates the offending
/// field (JSON-pointer style for documents, empty otherwise).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::string path = {})
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A distance or fiber evaluator returned an illegal value.
class EvaluatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string kind;
  std::string detail;
};

/// Outcome of a validator. Empty means valid.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::string detail) {
    violations.push_back({std::move(kind), std::move(detail)});
  }
  bool has_kind(const std::string& kind) const {
    for (const auto& v : violations) {
      if (v.kind == kind) return true;
    }
    return false;
  }
  /// First violation rendered as "kind: detail", or "ok".
  std::string summary() const {
    if (ok()) return "ok";
    std::string s = violations.front().kind + ": " + violations.front().detail;
    if (violations.size() > 1) s += " (+" + std::to_string(violations.size() - 1) + " more)";
    return s;
  }
};

}  // namespace metcomp
