#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tfgen/analysis.hpp"
#include "tfgen/anf_lab.hpp"
#include "tfgen/error.hpp"
#include "tfgen/expr.hpp"
#include "tfgen/wreath.hpp"

namespace py = pybind11;
using namespace tfgen;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
GeneratorSpec spec_of(const std::string& text) { return spec_from_json(nlohmann::json::parse(text)); }

py::dict check_expression(const std::string& text, unsigned depth, std::uint64_t control) {
  const auto expr = parse(text);
  const auto f = to_mapping(expr, control);
  py::dict d;
  d["expression"] = expr.to_string();
  const auto compat = is_compatible(f, std::min(depth, 12U));
  d["compatible"] = compat.compatible;
  d["measure_preserving"] = compat.compatible && is_mp_to_depth(f, depth);
  d["ergodic"] = compat.compatible && is_ergodic_to_depth(f, depth);
  if (compat.compatible) d["anf_ergodic"] = ergodicity_via_anf(f, std::min(depth, 16U));
  return d;
}

std::string example_json(const std::string& kind, const std::string& params) {
  const auto b = build_example(kind, params.empty() ? nlohmann::json::object() : nlohmann::json::parse(params));
  return nlohmann::json{{"spec", spec_to_json(b.spec)}, {"validation", b.report.to_json()}, {"note", b.note}}.dump();
}

std::string analyze_json(const std::vector<std::uint64_t>& words, unsigned word_bits, bool full_period, bool lc,
                         unsigned kdist, bool q1) {
  AnalysisOptions o;
  o.word_bits = word_bits;
  o.full_period = full_period;
  o.lc = lc;
  o.kdist = kdist;
  o.q1 = q1;
  return analyze_words(words, o).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<Error>(m, "TfgenError", PyExc_ValueError);

  m.def("check_expression", &check_expression, py::arg("expr"), py::arg("depth") = 10, py::arg("control") = 0);
  m.def("count_transitive", &count_transitive, py::arg("n"));
  m.def("example_kinds", &example_kinds);
  m.def("example_json", &example_json, py::arg("kind"), py::arg("params") = "");
  m.def(
      "validate_json", [](const std::string& spec) { return validate_spec(spec_of(spec)).to_json().dump(); },
      py::arg("spec"));
  m.def(
      "generate",
      [](const std::string& spec, std::uint64_t count) {
        Generator g(spec_of(spec));
        return g.outputs(count);
      },
      py::arg("spec"), py::arg("count"));
  m.def(
      "states",
      [](const std::string& spec, std::uint64_t count) {
        Generator g(spec_of(spec));
        return g.states(count);
      },
      py::arg("spec"), py::arg("count"));
  m.def(
      "measure_period",
      [](const std::string& spec) {
        const auto p = measure_period(spec_of(spec));
        py::dict d;
        d["tail"] = p.tail;
        d["pair_period"] = p.pair_period;
        d["state_period"] = p.state_period;
        d["output_period"] = p.output_period;
        return d;
      },
      py::arg("spec"));
  m.def("analyze_json", &analyze_json, py::arg("words"), py::arg("word_bits"), py::arg("full_period") = false,
        py::arg("lc") = false, py::arg("kdist") = 0, py::arg("q1") = false);
  m.def(
      "q1_pass",
      [](const std::string& bits) {
        const auto r = q1_check(parse_bits(bits));
        py::dict rows;
        for (const auto& row : r.rows) rows[py::int_(row.k)] = row.pass;
        return py::make_tuple(r.pass, rows);
      },
      py::arg("bits"));
  m.def(
      "linear_complexity", [](const std::string& bits) { return berlekamp_massey(parse_bits(bits)).L; },
      py::arg("bits"));
  m.def(
      "pack_words", [](const std::vector<std::uint64_t>& w, unsigned k) {
        const auto b = pack_words(w, k);
        return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
      },
      py::arg("words"), py::arg("k"));
}
