#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dks/cli.hpp"
#include "dks/defaults.hpp"
#include "dks/errors.hpp"
#include "dks/nonmono.hpp"
#include "dks/represent.hpp"
#include "dks/structure_file.hpp"

namespace py = pybind11;
using namespace dks;

namespace {

using Names = std::vector<std::string>;

Names names_of(const TokenUniverse& u, TokenSet s)
{
    Names out;
    for (Token t : s) out.push_back(u.name(t));
    return out;
}

std::vector<Names> families(const TokenUniverse& u, const std::vector<TokenSet>& sets)
{
    std::vector<Names> out;
    for (TokenSet s : sets) out.push_back(names_of(u, s));
    return out;
}

py::dict report_dict(const CheckReport& r)
{
    py::dict d;
    d["name"] = r.name;
    d["passed"] = r.passed;
    d["cases"] = r.cases;
    if (r.witness) {
        d["witness"] = r.witness->parts;
        d["explanation"] = r.witness->explanation;
    } else {
        d["witness"] = py::none();
        d["explanation"] = py::none();
    }
    return d;
}

DefaultStructure structure_from_text(const std::string& text)
{
    return file_default_structure(parse_structure(text));
}

NmRelation relation_from_text(const std::string& text)
{
    const auto file = parse_structure(text);
    if (file.kind() == FileKind::abstract_system) return file_abstract_system(file);
    return derive_nm(file_default_structure(file));
}

} // namespace

PYBIND11_MODULE(_dks, m)
{
    m.doc() = "Default information structures: extensions, skeptical consequence, axioms and representation.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);
    py::register_exception<InvariantBreach>(m, "InvariantBreach", PyExc_RuntimeError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

    py::class_<DefaultStructure>(m, "DefaultStructure")
        .def_static("from_text", &structure_from_text, py::arg("text"))
        .def_property_readonly("tokens", [](const DefaultStructure& ds) { return ds.universe().names(); })
        .def_property_readonly("rules",
                               [](const DefaultStructure& ds) {
                                   std::vector<std::string> out;
                                   for (const auto& r : ds.rules()) out.push_back(ds.format_rule(r));
                                   return out;
                               })
        .def("states", [](const DefaultStructure& ds) { return families(ds.universe(), enumerate_states(ds.system())); })
        .def(
            "extensions",
            [](const DefaultStructure& ds, const Names& state) {
                const auto& u = ds.universe();
                std::vector<std::pair<Names, std::size_t>> out;
                for (const auto& e : enumerate_extensions(ds, u.set_of(state)).extensions) {
                    out.emplace_back(names_of(u, e.set), e.depth);
                }
                return out;
            },
            py::arg("state") = Names{}, "Extensions of a state as (tokens, depth) pairs, shortlex ordered.")
        .def(
            "oracle_extensions",
            [](const DefaultStructure& ds, const Names& state) {
                return families(ds.universe(), oracle_extensions(ds, ds.universe().set_of(state)));
            },
            py::arg("state") = Names{})
        .def(
            "skeptical",
            [](const DefaultStructure& ds, const Names& premise) {
                return names_of(ds.universe(), skeptical_consequences(ds, ds.universe().set_of(premise)));
            },
            py::arg("premise") = Names{})
        .def("relation", &derive_nm)
        .def("kripke_dot", [](const DefaultStructure& ds) { return kripke_graph(ds).to_dot(ds.universe()); })
        .def("check_extension_laws", [](const DefaultStructure& ds) { return report_dict(check_extension_laws(ds)); })
        .def("to_text", [](const DefaultStructure& ds) { return serialize(to_file(ds)); });

    py::class_<NmRelation>(m, "Relation")
        .def_static("from_text", &relation_from_text, py::arg("text"))
        .def_property_readonly("tokens", [](const NmRelation& nm) { return nm.universe().names(); })
        .def("premises", [](const NmRelation& nm) { return families(nm.universe(), nm.premises()); })
        .def(
            "tilde",
            [](const NmRelation& nm, const Names& premise) {
                return names_of(nm.universe(), tilde(nm, nm.universe().set_of(premise)));
            },
            py::arg("premise") = Names{})
        .def("axioms",
             [](const NmRelation& nm) {
                 std::vector<py::dict> out;
                 for (const auto& r : check_axioms(nm).axioms) out.push_back(report_dict(r));
                 return out;
             })
        .def("is_cumulative", [](const NmRelation& nm) { return check_axioms(nm).cumulative(); })
        .def(
            "represent",
            [](const NmRelation& nm, bool cumulative) { return cumulative ? build_cumulative(nm) : build_plain(nm); },
            py::arg("cumulative") = false)
        .def("to_text", [](const NmRelation& nm) { return serialize(to_file(nm)); })
        .def("__eq__", [](const NmRelation& a, const NmRelation& b) { return a == b; });

    py::class_<RepresentationResult>(m, "Representation")
        .def_property_readonly("mode", [](const RepresentationResult& r) { return std::string{to_string(r.mode())}; })
        .def_property_readonly("structure", &RepresentationResult::structure)
        .def_property_readonly("labels",
                               [](const RepresentationResult& r) {
                                   std::vector<std::string> out;
                                   for (const auto& l : r.labels()) out.push_back(l.name);
                                   return out;
                               })
        .def_property_readonly("stats",
                               [](const RepresentationResult& r) {
                                   py::dict d;
                                   d["tokens"] = r.stats().tokens;
                                   d["rules"] = r.stats().rules;
                                   d["max_depth"] = r.stats().max_depth;
                                   return d;
                               })
        .def(
            "verify",
            [](const RepresentationResult& r, const NmRelation& nm) {
                std::vector<py::dict> out{report_dict(verify_conservativity(nm, r))};
                out.push_back(report_dict(r.mode() == RepresentationMode::plain ? verify_extension_shape(nm, r)
                                                                                : verify_unique_extension(nm, r)));
                return out;
            },
            py::arg("source"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a dks subcommand; returns (exit code, stdout, stderr).");
}
