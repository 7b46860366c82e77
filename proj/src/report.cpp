#include "emergence/report.hpp"

#include <sstream>

namespace emergence {

Json to_json(const ValidationReport& r)
{
    Json j = Json::object();
    j["valid"] = r.ok();
    Json vs = Json::array();
    for (const auto& v : r.violations) {
        Json x = {{"rule", v.rule}, {"witness", v.witness}};
        if (!v.detail.empty())
            x["detail"] = v.detail;
        vs.push_back(std::move(x));
    }
    j["violations"] = std::move(vs);
    return j;
}

Json to_json(const Functor& f)
{
    Json j = Json::object();
    j["source"] = f.source->name();
    j["target"] = f.target->name();
    Json objs = Json::object(), mors = Json::object();
    for (Index o = 0; o < f.object_map.size(); ++o)
        objs[f.source->object(o)] = f.target->object(f.object_map[o]);
    for (Index m = 0; m < f.morphism_map.size(); ++m)
        mors[f.source->morphism(m).name] = f.target->morphism(f.morphism_map[m]).name;
    j["objects"] = std::move(objs);
    j["morphisms"] = std::move(mors);
    return j;
}

Json to_json(const PropertyFlags& p)
{
    return {{"faithful", p.faithful},
            {"full", p.full},
            {"embedding", p.embedding},
            {"injective_on_objects", p.injective_on_objects},
            {"isomorphism_dense", p.isomorphism_dense},
            {"isomorphism", p.is_isomorphism}};
}

Json to_json(const MorphismVerdict& v)
{
    Json j = Json::object();
    j["holds"] = v.holds;
    if (!v.witness.empty())
        j["witness"] = v.witness;
    if (!v.detail.empty())
        j["detail"] = v.detail;
    if (v.functor)
        j["functor"] = to_json(*v.functor);
    return j;
}

Json to_json(const UniversalVerdict& v)
{
    Json j = Json::object();
    j["kind"] = v.kind;
    j["commutes"] = v.commutes;
    j["competitors"] = v.competitors;
    std::size_t unique = 0, missing = 0, ambiguous = 0;
    for (const auto& m : v.mediators) {
        if (m.count == 1)
            ++unique;
        else if (m.count == 0)
            ++missing;
        else
            ++ambiguous;
    }
    j["mediators"] = {{"unique", unique}, {"missing", missing}, {"ambiguous", ambiguous}};
    j["holds"] = v.overall;
    j["inconclusive"] = v.inconclusive;
    if (!v.witness.empty())
        j["witness"] = v.witness;
    j["note"] = v.note;
    return j;
}

Json to_json(const NaturalTransformation& t)
{
    Json j = Json::object();
    for (Index o = 0; o < t.components.size(); ++o)
        j[t.from.source->object(o)] = t.from.target->morphism(t.components[o]).name;
    return j;
}

Json to_json(const AbstractBlockDiagram& abd)
{
    Json j = Json::object();
    j["name"] = abd.name;
    Json ports = Json::object();
    for (const auto& p : abd.ports)
        ports[p.name] = p.set.to_string();
    j["ports"] = std::move(ports);
    Json comps = Json::array();
    for (const auto& c : abd.components) {
        Json x = {{"name", c.name}, {"inputs", c.inputs}, {"outputs", c.outputs}};
        x["mapping"] = component_function(abd, c).to_string();
        comps.push_back(std::move(x));
    }
    j["components"] = std::move(comps);
    Json links = Json::array();
    for (const auto& p : abd.components)
        for (const auto& out : p.outputs)
            for (const auto& c : abd.components)
                if (std::count(c.inputs.begin(), c.inputs.end(), out))
                    links.push_back(p.name + " -" + out + "-> " + c.name);
    j["wiring"] = std::move(links);
    j["external_inputs"] = abd.external_inputs();
    j["external_outputs"] = abd.external_outputs();
    return j;
}

Json to_json(const SetFunctorCheck& c)
{
    Json j = Json::object();
    j["regular"] = c.regular;
    if (!c.regular)
        j["regular_failure"] = {{"rule", c.regular_rule}, {"witness", c.regular_witness}};
    j["multiplicative"] = c.multiplicative;
    if (!c.multiplicative)
        j["multiplicative_witness"] = c.multiplicative_witness;
    j["inconclusive"] = c.inconclusive;
    j["note"] = c.note;
    return j;
}

Json to_json(const InternalReport& r)
{
    Json j = Json::object();
    j["thin"] = r.thin;
    j["terminal_objects"] = r.terminal_objects;
    j["binary_products"] = r.has_binary_products;
    Json ps = Json::array();
    for (const auto& p : r.products) {
        Json x = {{"left", p.left}, {"right", p.right}};
        x["apex"] = p.apex ? Json(*p.apex) : Json(nullptr);
        ps.push_back(std::move(x));
    }
    j["products"] = std::move(ps);
    j["equalizers"] = r.has_equalizers;
    j["finitely_complete"] = r.finitely_complete;
    if (r.lattice) {
        j["complete_lattice"] = r.lattice->complete;
        if (!r.lattice->complete)
            j["lattice_witness"] = {{"missing", r.lattice->missing}, {"subset", r.lattice->witness}};
        j["lattice_equivalence"] = r.lattice_equivalence;
    }
    return j;
}

Json to_json(const ExtremalStatus& s)
{
    Json j = Json::object();
    j["initial"] = to_json(s.initial);
    j["terminal"] = to_json(s.terminal);
    j["zero"] = to_json(s.zero);
    j["skipped"] = s.skipped;
    j["note"] = s.note;
    return j;
}

Json summary_json(const Emergence& e)
{
    const auto& c = *e.category();
    Json j = Json::object();
    j["name"] = e.name;
    j["kind"] = e.kind == EmergenceKind::semi ? "semi" : "standard";
    j["order"] = e.order();
    j["objects"] = c.objects();
    Json mors = Json::array();
    for (const auto& m : c.morphisms())
        mors.push_back(m.name + ": " + c.object(m.dom) + " -> " + c.object(m.cod));
    j["morphisms"] = std::move(mors);
    Json slots = Json::array();
    for (const auto& s : e.signature().slots)
        slots.push_back(s.name + " " + to_string(s.kind) + " " + to_string(s.tags));
    j["signature"] = std::move(slots);
    return j;
}

namespace {

std::string scalar(const Json& j)
{
    if (j.is_string())
        return j.get<std::string>();
    return j.dump();
}

bool simple(const Json& j)
{
    return !j.is_structured() || j.empty();
}

bool multiline(const Json& j)
{
    return j.is_string() && j.get<std::string>().find('\n') != std::string::npos;
}

void block(std::ostringstream& o, const std::string& text, const std::string& pad)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        o << (line.empty() ? "" : pad + "  " + line) << "\n";
}

void render(std::ostringstream& o, const Json& j, int indent)
{
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (multiline(v)) {
                o << pad << k << ": |\n";
                block(o, v.get<std::string>(), pad);
            } else if (simple(v)) {
                o << pad << k << ": " << (v.is_structured() ? (v.is_array() ? "[]" : "{}") : scalar(v)) << "\n";
            } else {
                o << pad << k << ":\n";
                render(o, v, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (simple(v)) {
                o << pad << "- " << (v.is_structured() ? (v.is_array() ? "[]" : "{}") : scalar(v)) << "\n";
            } else {
                o << pad << "-\n";
                render(o, v, indent + 2);
            }
        }
    } else {
        o << pad << scalar(j) << "\n";
    }
}

} // namespace

std::string render_text(const Json& j)
{
    std::ostringstream o;
    render(o, j, 0);
    return o.str();
}

} // namespace emergence
