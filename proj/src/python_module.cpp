// Python bindings. Reports cross the boundary as JSON text; the package
// wrapper decodes them.

#include "emergence/battery.hpp"
#include "emergence/cli.hpp"
#include "emergence/report.hpp"
#include "emergence/workspace.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace emergence;

namespace {

struct PyEmergence {
    EmergenceRef ref;
};

struct PyFunctor {
    Functor functor;
};

const Emergence& get(const PyEmergence& e)
{
    return *e.ref;
}

std::vector<EmergenceRef> refs(const std::vector<PyEmergence>& es)
{
    std::vector<EmergenceRef> out;
    for (const auto& e : es)
        out.push_back(e.ref);
    return out;
}

std::vector<PyEmergence> wrap(const std::vector<EmergenceRef>& es)
{
    std::vector<PyEmergence> out;
    for (const auto& e : es)
        out.push_back({e});
    return out;
}

std::vector<PyFunctor> wrap(const std::vector<Functor>& fs)
{
    std::vector<PyFunctor> out;
    for (const auto& f : fs)
        out.push_back({f});
    return out;
}

HomMode hom_mode(const std::string& s)
{
    for (auto m : {HomMode::hom, HomMode::strong, HomMode::semi, HomMode::strong_semi})
        if (to_string(m) == s)
            return m;
    throw StructuralError("unknown homomorphism mode " + s);
}

IsoMode iso_mode(const std::string& s)
{
    for (auto m : {IsoMode::iso, IsoMode::strong_iso, IsoMode::semi_iso, IsoMode::strong_semi_iso,
                   IsoMode::equivalence, IsoMode::semi_equivalence})
        if (to_string(m) == s)
            return m;
    throw StructuralError("unknown isomorphism mode " + s);
}

std::uint64_t budget_or_default(std::optional<std::uint64_t> b)
{
    return b ? *b : default_budget();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Finite categories, emergences and block diagrams";

    auto base = py::register_exception<Error>(m, "EmergenceError");
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<WorkspaceError>(m, "WorkspaceError", base.ptr());
    py::register_exception<ModeMismatch>(m, "ModeMismatch", base.ptr());
    py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
    py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line; returns (exit code, stdout, stderr).");

    py::class_<PyFunctor>(m, "Functor")
        .def_property_readonly("object_map", [](const PyFunctor& f) { return f.functor.object_map; })
        .def_property_readonly("morphism_map", [](const PyFunctor& f) { return f.functor.morphism_map; })
        .def("compose", [](const PyFunctor& g, const PyFunctor& f) { return PyFunctor{compose(g.functor, f.functor)}; },
             py::arg("first"), "g.compose(f) is g after f.")
        .def("properties_json", [](const PyFunctor& f) { return to_json(functor_properties(f.functor).flags).dump(); })
        .def("to_json", [](const PyFunctor& f) { return to_json(f.functor).dump(); })
        .def("__eq__", [](const PyFunctor& a, const PyFunctor& b) { return a.functor == b.functor; });

    py::class_<PyEmergence>(m, "Emergence")
        .def_property_readonly("name", [](const PyEmergence& e) { return get(e).name; })
        .def_property_readonly("order", [](const PyEmergence& e) { return get(e).order(); })
        .def_property_readonly("semi", [](const PyEmergence& e) { return get(e).kind == EmergenceKind::semi; })
        .def_property_readonly("objects",
                               [](const PyEmergence& e) {
                                   const auto& c = *get(e).category();
                                   std::vector<std::string> out;
                                   for (Index x = 0; x < c.object_count(); ++x)
                                       out.push_back(c.object(x));
                                   return out;
                               })
        .def_property_readonly("morphism_count", [](const PyEmergence& e) { return get(e).category()->morphism_count(); })
        .def("summary_json", [](const PyEmergence& e) { return summary_json(get(e)).dump(); })
        .def("validate_json", [](const PyEmergence& e) { return to_json(validate_emergence(get(e))).dump(); })
        .def("identity", [](const PyEmergence& e) { return PyFunctor{identity_functor(get(e).category())}; })
        .def("__repr__", [](const PyEmergence& e) {
            return "<Emergence " + get(e).name + " order " + std::to_string(get(e).order()) + ">";
        });

    py::class_<Workspace>(m, "Workspace")
        .def_static("load", [](const std::vector<std::string>& paths) { return parse_workspace(paths); }, py::arg("paths"))
        .def_static("from_text", [](const std::string& text) { return parse_workspace_text(text); }, py::arg("text"))
        .def("serialize", [](const Workspace& ws) { return serialize(ws); })
        .def("emergence", [](const Workspace& ws, const std::string& n) { return PyEmergence{ws.emergence(n)}; })
        .def("functor", [](const Workspace& ws, const std::string& n) { return PyFunctor{ws.functor(n)}; })
        .def_property_readonly("emergences",
                               [](const Workspace& ws) {
                                   std::vector<std::string> out;
                                   for (const auto& [n, _] : ws.emergences)
                                       out.push_back(n);
                                   return out;
                               })
        .def_property_readonly("functors",
                               [](const Workspace& ws) {
                                   std::vector<std::string> out;
                                   for (const auto& [n, _] : ws.functors)
                                       out.push_back(n);
                                   return out;
                               })
        .def("internal_json",
             [](const Workspace& ws, const std::string& n, std::optional<std::uint64_t> budget) {
                 auto it = ws.constructs.find(n);
                 const Construct& c = it != ws.constructs.end() ? *it->second : *ws.emergence(n)->construct;
                 return to_json(internal_structure_report(c, budget_or_default(budget))).dump();
             },
             py::arg("name"), py::arg("budget") = py::none());

    m.def("standard_battery", [] { return wrap(standard_battery()); });
    m.def("emergence_battery", [] { return wrap(emergence_battery()); });
    m.def("singleton_battery", [] { return wrap(singleton_battery()); });
    m.def("terminal_example", [] { return PyEmergence{terminal_example()}; });

    m.def("homomorphisms",
          [](const PyEmergence& a, const PyEmergence& b, const std::string& mode) {
              return wrap(enumerate_homomorphisms(get(a), get(b), hom_mode(mode)));
          },
          py::arg("a"), py::arg("b"), py::arg("mode") = "hom");
    m.def("check_iso",
          [](const PyEmergence& a, const PyEmergence& b, const std::string& mode, std::optional<std::uint64_t> budget) {
              return to_json(check_iso(get(a), get(b), iso_mode(mode), budget_or_default(budget))).dump();
          },
          py::arg("a"), py::arg("b"), py::arg("mode") = "iso", py::arg("budget") = py::none());
    m.def("opposite", [](const PyEmergence& e) { return PyEmergence{opposite_emergence(get(e)).emergence}; });
    m.def("extremal_json",
          [](const PyEmergence& e, const std::vector<PyEmergence>& battery) {
              return to_json(extremal_status(get(e), refs(battery))).dump();
          },
          py::arg("e"), py::arg("battery"));

    m.def("product",
          [](const std::vector<PyEmergence>& es, std::optional<std::uint64_t> budget) {
              auto p = product_emergence(refs(es), budget_or_default(budget));
              return py::make_tuple(PyEmergence{p.emergence}, wrap(p.projections));
          },
          py::arg("factors"), py::arg("budget") = py::none());
    m.def("coproduct",
          [](const std::vector<PyEmergence>& es) {
              auto c = coproduct_emergence(refs(es));
              return py::make_tuple(PyEmergence{c.emergence}, wrap(c.injections));
          },
          py::arg("summands"));
    m.def("pullback",
          [](const PyEmergence& a, const PyEmergence& b, std::optional<std::uint64_t> budget) {
              auto p = pullback_emergence(get(a), get(b), budget_or_default(budget));
              return py::make_tuple(PyEmergence{p.emergence}, PyFunctor{p.to_a}, PyFunctor{p.to_b});
          },
          py::arg("a"), py::arg("b"), py::arg("budget") = py::none());
    m.def("equalizer",
          [](const PyEmergence& a, const std::vector<PyFunctor>& fs) {
              std::vector<Functor> plain;
              for (const auto& f : fs)
                  plain.push_back(f.functor);
              auto eq = equalizer_emergence(get(a), plain);
              return py::make_tuple(PyEmergence{eq.emergence}, PyFunctor{eq.inclusion});
          },
          py::arg("a"), py::arg("functors"));
    m.def("verify_equalizer_json",
          [](const PyFunctor& inclusion, const std::vector<PyFunctor>& fs) {
              std::vector<Functor> plain;
              for (const auto& f : fs)
                  plain.push_back(f.functor);
              return to_json(verify_universal(equalizer_candidate(inclusion.functor, plain), default_battery())).dump();
          },
          py::arg("inclusion"), py::arg("functors"));
    m.def("verify_product_json",
          [](const PyEmergence& apex, const std::vector<PyFunctor>& legs) {
              std::vector<Functor> plain;
              for (const auto& f : legs)
                  plain.push_back(f.functor);
              return to_json(verify_universal(product_candidate(get(apex).category(), plain), default_battery())).dump();
          },
          py::arg("apex"), py::arg("projections"));

    m.def("is_factorable",
          [](const std::vector<std::size_t>& radix, const std::vector<Index>& table) {
              return is_factorable(radix, table);
          },
          py::arg("radix"), py::arg("table"),
          "Coordinates the table depends on when that is a proper subset, else None.");
    m.def("support", &support, py::arg("radix"), py::arg("table"));
}
