#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "metcomp/cli_io.hpp"
#include "metcomp/completion.hpp"
#include "metcomp/finite_oracle.hpp"

namespace py = pybind11;
using namespace metcomp;

namespace {

FiniteInstance finite_of(const std::string& document) {
  auto inst = parse_instance(document);
  if (!inst.finite) throw InputError("document is not a finite instance");
  return *inst.finite;
}

std::optional<std::string> cert(const Verdict& v) {
  if (v.certificate) return v.certificate->str();
  return std::nullopt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact completion tools for metric mappings";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_command(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one command line invocation; returns (exit_code, stdout, stderr).");

  m.def(
      "validate",
      [](const std::string& document) {
        const auto inst = parse_instance(document);
        std::vector<std::string> problems;
        ValidationReport r;
        if (inst.finite) {
          r = inst.finite->validate();
        } else {
          r = validate_pseudometric(*inst.mapping, 64);
          for (auto& v : validate_fiberwise_metric(*inst.mapping, 64).violations) r.violations.push_back(v);
        }
        for (const auto& v : r.violations) problems.push_back(v.kind + ": " + v.detail);
        return problems;
      },
      py::arg("document"), "Axiom violations of an instance document (empty when valid).");

  m.def(
      "is_complete",
      [](const std::string& document) {
        const auto inst = finite_of(document);
        const auto f = is_complete_filter(inst);
        const auto n = is_complete_net(inst);
        return std::make_tuple(f.holds, n.holds, cert(f));
      },
      py::arg("document"), "(filter verdict, sequence verdict, certificate or None) for a finite document.");

  m.def(
      "dstar",
      [](const std::string& document, const std::string& p, const std::string& q, const std::string& eps) {
        const auto inst = parse_instance(document);
        const auto a = resolve_point(parse_point_spec(p), inst.mapping);
        const auto b = resolve_point(parse_point_spec(q), inst.mapping);
        return dstar_approx(a, b, Rational::parse(eps)).str();
      },
      py::arg("document"), py::arg("p"), py::arg("q"), py::arg("eps") = "1/1000000",
      "Completion distance between two point specs, as a 'p/q' string.");

  m.def(
      "complete",
      [](const std::string& document) { return to_document(finite_completion(finite_of(document)).completed); },
      py::arg("document"), "Document of the finite completion.");

  m.def(
      "completion_is_complete",
      [](const std::string& document) {
        const auto inst = finite_of(document);
        const auto c = finite_completion(inst);
        return is_complete_filter(c.completed).holds && embedding_is_isometric(inst, c) && embedding_is_dense(c);
      },
      py::arg("document"));

  m.def(
      "random_instance",
      [](std::uint64_t seed, std::size_t max_x, std::size_t max_y) {
        return to_document(random_instance(seed, max_x, max_y));
      },
      py::arg("seed"), py::arg("max_x") = 6, py::arg("max_y") = 3);

  m.def(
      "theorem3", [](const std::string& document) { return theorem3_crosscheck(finite_of(document)); },
      py::arg("document"), "Whether the filter and sequence completeness verdicts agree.");

  m.def(
      "lemma2", [](const std::string& document) { return lemma2_check(finite_of(document)).holds; },
      py::arg("document"));
}
