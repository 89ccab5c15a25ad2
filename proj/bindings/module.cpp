// Python bindings. Thin string-based surface: formulas travel as text,
// exact rationals as "n/d" strings (fractions.Fraction parses them).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poskb/det.hpp"
#include "poskb/errors.hpp"
#include "poskb/inference.hpp"
#include "poskb/skb.hpp"
#include "poskb/solver.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace poskb;

namespace {

std::string rat(const Rational& r) {
  return r.str();  // always "n" or "n/d", Fraction-friendly
}

std::vector<std::string> atom_names(const Vocabulary& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v.name(i));
  return out;
}

py::dict map_result_dict(const MapResult& r) {
  py::list base;
  for (const Clause& c : r.base.clauses())
    base.append(render_formula(clause_to_formula(c, r.base.vocab())));
  py::dict d;
  d["cutoff"] = rat(r.cutoff);
  d["entailed"] = r.entailed;
  d["sat_calls"] = r.sat_calls;
  d["base"] = base;
  return d;
}

py::dict level_dict(const TopThetaResult& l) {
  py::dict d;
  d["weight"] = rat(l.weight);
  d["theta"] = rat(l.theta);
  d["entailed"] = l.entailed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stratified possibilistic knowledge bases compiled from density trees";

  py::register_exception<Error>(m, "Error");

  py::class_<DensityTree>(m, "DensityTree")
      .def_property_readonly("leaf_count", &DensityTree::leaf_count)
      .def_property_readonly("depth", &DensityTree::depth)
      .def_property_readonly("atoms", [](const DensityTree& t) { return atom_names(t.vocab()); })
      .def("to_json", [](const DensityTree& t) { return tree_to_json(t); })
      .def_static("from_json", [](const std::string& text) { return tree_from_json(text); })
      .def("__repr__", [](const DensityTree& t) {
        return "<DensityTree atoms=" + std::to_string(t.vocab().size()) +
               " leaves=" + std::to_string(t.leaf_count()) + ">";
      });

  py::class_<StratifiedKB>(m, "KnowledgeBase")
      .def_property_readonly("size", &StratifiedKB::size)
      .def_property_readonly("is_probabilistic", &StratifiedKB::is_probabilistic)
      .def_property_readonly("atoms", [](const StratifiedKB& kb) { return atom_names(kb.vocab()); })
      .def_property_readonly("entries",
                             [](const StratifiedKB& kb) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const WeightedEntry& e : kb.entries())
                                 out.emplace_back(rat(e.weight), render_formula(e.formula));
                               return out;
                             })
      .def("possibility",
           [](const StratifiedKB& kb, std::uint64_t world_bits) {
             return rat(kb.possibility(World(kb.vocab(), world_bits)));
           },
           py::arg("world_bits"))
      .def("prune", [](const StratifiedKB& kb) { return kb.prune_exact(); })
      .def("merge_top_levels", &StratifiedKB::merge_top_levels, py::arg("target_levels"))
      .def("implications",
           [](const StratifiedKB& kb) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& [f, w] : kb.to_implications())
               out.emplace_back(rat(w), render_formula(f));
             return out;
           })
      .def("validate",
           [](const StratifiedKB& kb, std::size_t max_atoms) {
             return rat(kb.validate_spkb(max_atoms));
           },
           py::arg("max_atoms") = 20)
      .def("dump", [](const StratifiedKB& kb) { return kb_to_string(kb); })
      .def("__len__", &StratifiedKB::size)
      .def("__repr__", [](const StratifiedKB& kb) {
        return "<KnowledgeBase entries=" + std::to_string(kb.size()) +
               (kb.is_probabilistic() ? " probabilistic" : "") + ">";
      });

  m.def(
      "learn_csv",
      [](const std::string& csv_text, std::optional<unsigned> max_depth,
         std::size_t min_leaf_rows) {
        std::istringstream in(csv_text);
        DataSet data = load_csv(in);
        unsigned depth = max_depth.value_or(static_cast<unsigned>(data.vocab.size()));
        return learn_tree(data, depth, min_leaf_rows);
      },
      py::arg("csv_text"), py::arg("max_depth") = py::none(), py::arg("min_leaf_rows") = 1,
      "Learns a density estimation tree from CSV text (header row of atom names).");

  m.def("compile_tree", [](const DensityTree& t) { return tree_to_skb(t); }, py::arg("tree"),
        "Compiles a density tree into a stratified knowledge base.");

  m.def(
      "load_kb",
      [](const std::string& text) {
        std::istringstream in(text);
        return load_kb(in);
      },
      py::arg("text"), "Parses a knowledge base from its text form.");

  m.def(
      "equal_possibility",
      [](const StratifiedKB& a, const StratifiedKB& b, std::size_t max_atoms) {
        return equal_possibility(a, b, max_atoms);
      },
      py::arg("a"), py::arg("b"), py::arg("max_atoms") = 20,
      "True iff both bases induce the same possibility for every world.");

  m.def(
      "map_query",
      [](const StratifiedKB& kb, const std::string& evidence, const std::string& query) {
        MapResult r = map_entails(kb, parse_formula(evidence, kb.vocab()),
                                  parse_formula(query, kb.vocab()));
        return map_result_dict(r);
      },
      py::arg("kb"), py::arg("evidence"), py::arg("query"),
      "Map entailment under evidence: dict with cutoff, entailed, sat_calls, base.");

  m.def(
      "top_theta",
      [](const StratifiedKB& kb, const std::string& evidence,
         std::optional<std::string> query) -> py::object {
        Formula evid = parse_formula(evidence, kb.vocab());
        if (!query) {
          py::list out;
          for (const auto& level : top_theta_levels(kb, evid)) out.append(level_dict(level));
          return out;
        }
        auto hit = top_theta_entails(kb, evid, parse_formula(*query, kb.vocab()));
        if (!hit) return py::none();
        return level_dict(*hit);
      },
      py::arg("kb"), py::arg("evidence"), py::arg("query") = py::none(),
      "All top-theta levels under evidence, or the widest level entailing `query`.");

  m.def(
      "marginal",
      [](const StratifiedKB& kb, const std::string& query) {
        return rat(marginal(kb, parse_formula(query, kb.vocab())));
      },
      py::arg("kb"), py::arg("query"),
      "Exact probability of `query` under a probabilistic base, as an 'n/d' string.");
}
