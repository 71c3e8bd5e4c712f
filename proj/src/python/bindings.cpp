#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "acpkit/bisim.hpp"
#include "acpkit/errors.hpp"
#include "acpkit/hnf.hpp"
#include "acpkit/linearize.hpp"
#include "acpkit/sos.hpp"
#include "acpkit/syntax.hpp"
#include "acpkit/validate.hpp"

namespace py = pybind11;
using namespace acp;

namespace {

struct Loaded {
  SpecFile file;
  ValidatedSpec validated;
  std::string root;
};

Loaded load(const std::string& text, const std::optional<std::string>& root,
            std::size_t unfold_budget) {
  Loaded l;
  l.file = parse_spec_file(text);
  validate_comm(l.file.comm);
  l.validated = validate_spec(l.file.spec, unfold_budget);
  if (root) {
    if (!l.file.spec.defines(*root))
      throw ValidationError(ValidationError::Kind::UnknownRoot, "root " + *root + " has no proc equation");
    l.root = *root;
  } else if (l.file.root) {
    l.root = *l.file.root;
  } else if (!l.file.spec.empty()) {
    l.root = l.file.spec.equations().front().var;
  } else {
    throw ValidationError(ValidationError::Kind::UnknownRoot, "no proc equations");
  }
  return l;
}

Term root_term(const Loaded& l) { return Term::rec(l.root, l.validated.guarded); }

py::dict lts_dict(const Lts& lts) {
  py::dict d;
  d["num_states"] = lts.num_states;
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
  for (const auto& e : lts.edges) edges.emplace_back(e.src, e.action.name, e.dst);
  std::vector<std::pair<std::size_t, std::string>> terms;
  for (const auto& t : lts.terminations) terms.emplace_back(t.state, t.action.name);
  d["edges"] = edges;
  d["terminations"] = terms;
  d["truncated"] = lts.truncated;
  return d;
}

}  // namespace

PYBIND11_MODULE(_acpkit, m) {
  m.doc() = "ACP with guarded recursion: parsing, head normal forms, linearization, bisimilarity";

  auto error = py::register_exception<Error>(m, "AcpError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", error.ptr());

  py::class_<Term>(m, "Term")
      .def("__str__", [](const Term& t) { return pretty(t); })
      .def("__repr__", [](const Term& t) { return "Term(" + pretty(t) + ")"; })
      .def("__eq__", [](const Term& a, const Term& b) { return a == b; })
      .def("__hash__", [](const Term& t) { return t.hash(); })
      .def_property_readonly("size", &Term::size)
      .def_property_readonly("is_closed", [](const Term& t) { return is_closed(t); })
      .def_property_readonly("is_guarded", [](const Term& t) { return is_guarded(t); });

  m.def(
      "parse_term",
      [](const std::string& text, const std::vector<std::string>& actions, bool allow_free_vars) {
        ActionSet alphabet;
        for (const auto& a : actions) alphabet.insert(Action(a));
        return parse_term(text, alphabet, allow_free_vars);
      },
      py::arg("text"), py::arg("actions"), py::arg("allow_free_vars") = false,
      "Parse a term over the given action names.");

  m.def(
      "format_spec", [](const std::string& text) { return pretty(parse_spec_file(text)); },
      py::arg("text"), "Parse a specification file and print it in canonical form.");

  m.def(
      "check",
      [](const std::string& text, std::size_t unfold_budget) {
        load(text, std::nullopt, unfold_budget);
      },
      py::arg("text"), py::arg("unfold_budget") = kDefaultUnfoldBudget,
      "Validate a specification file; raises on the first problem.");

  m.def(
      "hnf",
      [](const std::string& text, std::optional<std::string> root, std::size_t fuel) {
        const Loaded l = load(text, root, kDefaultUnfoldBudget);
        HnfOptions o;
        o.fuel = fuel;
        const HnfResult r = head_normal_form(root_term(l), l.file.comm, o);
        std::vector<std::string> trace;
        for (const auto& s : r.trace) trace.push_back(render_step(s));
        py::dict d;
        d["term"] = pretty(hnf_to_term(r.hnf));
        d["trace"] = trace;
        d["steps"] = r.steps;
        return d;
      },
      py::arg("text"), py::arg("root") = py::none(), py::arg("fuel") = kDefaultHnfFuel,
      "Head normal form of the root with its axiom trace.");

  m.def(
      "linearize",
      [](const std::string& text, std::optional<std::string> root, std::size_t max_states,
         bool memoize) {
        const Loaded l = load(text, root, kDefaultUnfoldBudget);
        LinearizeOptions o;
        o.max_states = max_states;
        o.memoize = memoize;
        const LinearizationResult r = linearize(l.validated, l.root, l.file.comm, o);
        SpecFile out;
        out.comm = l.file.comm;
        out.spec = r.spec;
        out.root = r.root;
        py::dict stats;
        stats["stages"] = r.stats.stages;
        stats["equations"] = r.stats.equations;
        stats["memo_hits"] = r.stats.memo_hits;
        stats["duplicates_merged"] = r.stats.duplicates_merged;
        py::dict d;
        d["spec"] = pretty(out);
        d["root"] = r.root;
        d["stats"] = stats;
        return d;
      },
      py::arg("text"), py::arg("root") = py::none(), py::arg("max_states") = kDefaultMaxStates,
      py::arg("memoize") = true, "Linear recursive specification for the root, as .acp text.");

  m.def(
      "lts",
      [](const std::string& text, std::optional<std::string> root, std::size_t max_states) {
        const Loaded l = load(text, root, kDefaultUnfoldBudget);
        return lts_dict(generate_lts(root_term(l), l.file.comm, max_states));
      },
      py::arg("text"), py::arg("root") = py::none(), py::arg("max_states") = kDefaultMaxStates,
      "Labelled transition system of the root.");

  m.def(
      "to_aut",
      [](const std::string& text, std::optional<std::string> root, std::size_t max_states) {
        const Loaded l = load(text, root, kDefaultUnfoldBudget);
        return to_aut(generate_lts(root_term(l), l.file.comm, max_states));
      },
      py::arg("text"), py::arg("root") = py::none(), py::arg("max_states") = kDefaultMaxStates);

  m.def(
      "prove",
      [](const std::string& left, const std::string& right, std::optional<std::string> root1,
         std::optional<std::string> root2, std::size_t max_states) {
        const Loaded l = load(left, root1, kDefaultUnfoldBudget);
        const Loaded r = load(right, root2, kDefaultUnfoldBudget);
        py::dict d;
        Lts lts[2];
        const Loaded* in[2] = {&l, &r};
        for (int i = 0; i < 2; ++i) {
          LinearizeOptions o;
          o.max_states = max_states;
          try {
            const LinearizationResult lin = linearize(in[i]->validated, in[i]->root, in[i]->file.comm, o);
            lts[i] = generate_lts(Term::rec(lin.root, lin.spec), in[i]->file.comm, max_states);
          } catch (const BudgetError& e) {
            d["verdict"] = "Inconclusive";
            d["reason"] = std::string(e.what());
            return d;
          }
          if (lts[i].truncated) {
            d["verdict"] = "Inconclusive";
            d["reason"] = std::string("state budget reached");
            return d;
          }
        }
        const BisimResult res = bisimilar(lts[0], 0, lts[1], 0);
        d["verdict"] = res.bisimilar ? "Equal" : "NotEqual";
        d["witness"] = res.witness ? py::cast(render_formula(*res.witness)) : py::none();
        d["rounds"] = res.rounds;
        return d;
      },
      py::arg("left"), py::arg("right"), py::arg("root1") = py::none(),
      py::arg("root2") = py::none(), py::arg("max_states") = kDefaultMaxStates,
      "Decide equality of two roots by bisimilarity of their transition systems.");
}
