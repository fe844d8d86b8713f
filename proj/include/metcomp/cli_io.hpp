#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metcomp/completion.hpp"
#include "metcomp/finite_oracle.hpp"
#include "metcomp/metric_mapping.hpp"

namespace metcomp {

/// A parsed instance document. `finite` is present when both carrier and
/// base are finite.
struct Instance {
  MappingPtr mapping;
  std::optional<FiniteInstance> finite;
};

/// Parses the JSON instance document. Rationals must be "p/q" or integer
/// text; unknown fields are rejected. Throws InputError carrying the
/// JSON-pointer path of the offending field.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Serializes a finite instance (table fiber map and distance matrix,
/// rationals as "p/q" in lowest terms).
std::string to_document(const FiniteInstance& m);

enum class PointKind { constant, newton_sqrt, table };

/// `const(<point>)`, `newton_sqrt(<rational>)` or
/// `table(<p1>,<p2>,...;tail=<point>)`, each with an optional
/// `@<basepoint>` tying target.
struct PointSpec {
  PointKind kind = PointKind::constant;
  std::vector<std::string> args;
  std::string tail;
  std::optional<std::string> target;
};

PointSpec parse_point_spec(const std::string& text);
CarrierPoint parse_carrier_point(const MetricMapping& m, const std::string& text);
BasePoint parse_base_point(const MetricMapping& m, const std::string& text);
/// Resolves a spec against a loaded mapping; InputError for unknown
/// points, non-rational arguments or untieable sequences.
CompletionPoint resolve_point(const PointSpec& spec, const MappingPtr& m);

/// `PROP <name> PASS|FAIL <detail>` lines closed by `SUMMARY <pass>/<total>`.
class Report {
 public:
  void add(const std::string& name, bool pass, const std::string& detail = {});
  bool all_pass() const { return passed_ == lines_.size(); }
  std::size_t passed() const { return passed_; }
  std::size_t total() const { return lines_.size(); }
  std::string render() const;

 private:
  std::vector<std::string> lines_;
  std::size_t passed_ = 0;
};

/// Runs one CLI invocation (args exclude the program name). Returns the
/// exit code: 0 all PASS, 1 any FAIL, 2 input error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metcomp
