#include "emergence/workspace.hpp"

#include <cctype>
#include <sstream>

namespace emergence {

namespace {

bool plain(const std::string& s)
{
    if (s.empty())
        return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.'/*+^$@!?~%&").find(c) != std::string_view::npos)
            continue;
        if (c == '-' && (i + 1 >= s.size() || s[i + 1] != '>'))
            continue;
        return false;
    }
    return true;
}

std::string q(const std::string& s)
{
    if (plain(s))
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string set_text(const FinSet& s)
{
    std::string out = "{";
    for (Index i = 0; i < s.size(); ++i)
        out += (i ? ", " : "") + q(s[i]);
    return out + "}";
}

std::string tags_text(const TagSet& tags)
{
    if (tags.empty())
        return "";
    std::string out = " [";
    bool first = true;
    for (const auto& t : tags) {
        out += (first ? "" : " ") + to_string(t.tag);
        if (t.tag == Tag::distributes_over)
            out += "(" + q(t.other) + ")";
        first = false;
    }
    return out + "]";
}

void slot_text(std::ostream& o, const OperationSlot& s)
{
    o << "  slot " << q(s.name) << " " << to_string(s.kind);
    if (s.kind == OpKind::external)
        o << " " << set_text(s.scalars);
    o << tags_text(s.tags) << ";\n";
}

void table_text(std::ostream& o, const std::string& object, const std::string& slot, const OperationTable& t)
{
    const std::size_t n = t.carrier.size();
    const std::size_t rows = t.kind == OpKind::internal ? n : t.scalars.size();
    o << "  table " << q(object) << " " << q(slot) << " {";
    for (Index r = 0; r < rows; ++r) {
        o << (r ? " |" : "");
        for (Index c = 0; c < n; ++c)
            o << " " << q(t.carrier[t.table[r * n + c]]);
    }
    o << " }\n";
}

void map_text(std::ostream& o, const std::string& name, const FinFunction& f)
{
    o << "  map " << q(name) << " {";
    for (Index i = 0; i < f.dom.size(); ++i)
        o << (i ? ", " : " ") << q(f.dom[i]) << " -> " << q(f.cod[f.table[i]]);
    o << " }\n";
}

bool has_unit_rows(const FinCategory& c)
{
    for (Index f = 0; f < c.morphism_count(); ++f) {
        const auto& m = c.morphism(f);
        if (c.compose(c.identity(m.cod), f) != f || c.compose(f, c.identity(m.dom)) != f)
            return false;
    }
    return true;
}

bool is_unit_row(const FinCategory& c, Index g, Index f, Index h)
{
    return (c.is_identity(g) && g == c.identity(c.morphism(f).cod) && h == f) ||
           (c.is_identity(f) && f == c.identity(c.morphism(g).dom) && h == g);
}

void category_text(std::ostream& o, const std::string& name, const FinCategory& c)
{
    o << "category " << q(name) << " {\n";
    if (c.object_count()) {
        o << "  objects";
        for (const auto& x : c.objects())
            o << " " << q(x);
        o << ";\n";
    }
    for (Index x = 0; x < c.object_count(); ++x)
        if (c.morphism(c.identity(x)).name != "id" + c.object(x))
            o << "  identity " << q(c.object(x)) << " " << q(c.morphism(c.identity(x)).name) << ";\n";
    for (Index m = 0; m < c.morphism_count(); ++m)
        if (!c.is_identity(m))
            o << "  mor " << q(c.morphism(m).name) << " " << q(c.object(c.morphism(m).dom)) << " "
              << q(c.object(c.morphism(m).cod)) << ";\n";
    const bool units = has_unit_rows(c);
    if (units)
        o << "  units;\n";
    for (Index g = 0; g < c.morphism_count(); ++g)
        for (Index f = 0; f < c.morphism_count(); ++f) {
            Index h = c.compose(g, f);
            if (h == npos || (units && is_unit_row(c, g, f, h)))
                continue;
            o << "  compose " << q(c.morphism(g).name) << " " << q(c.morphism(f).name) << " = "
              << q(c.morphism(h).name) << ";\n";
        }
    o << "}\n";
}

void construct_text(std::ostream& o, const std::string& name, const Construct& k)
{
    const auto& c = *k.category;
    o << "construct " << q(name) << " on " << q(c.name()) << " {\n";
    for (const auto& s : k.signature.slots)
        slot_text(o, s);
    for (Index x = 0; x < c.object_count(); ++x)
        o << "  carrier " << q(c.object(x)) << " " << set_text(k.carriers[x]) << "\n";
    for (Index x = 0; x < c.object_count(); ++x)
        for (Index s = 0; s < k.signature.size(); ++s)
            table_text(o, c.object(x), k.signature.slots[s].name, k.structure[x][s]);
    for (Index m = 0; m < c.morphism_count(); ++m)
        if (!c.is_identity(m) || k.underlying[m] != FinFunction::identity(k.carriers[c.morphism(m).dom]))
            map_text(o, c.morphism(m).name, k.underlying[m]);
    o << "}\n";
}

void emergence_text(std::ostream& o, const std::string& name, const EmergenceDecl& d)
{
    const auto& e = *d.emergence;
    const auto standard = standard_underlying(e.construct);
    const auto& c = *e.category();
    o << (e.kind == EmergenceKind::semi ? "semi-emergence " : "emergence ") << q(name) << " = " << q(d.construct);
    if (e.underlying.sets == standard.sets && e.underlying.functions == standard.functions) {
        o << ";\n";
        return;
    }
    o << " {\n";
    for (Index x = 0; x < c.object_count(); ++x)
        if (e.underlying.sets[x] != standard.sets[x])
            o << "  set " << q(c.object(x)) << " " << set_text(e.underlying.sets[x]) << "\n";
    for (Index m = 0; m < c.morphism_count(); ++m)
        if (e.underlying.functions[m] != standard.functions[m])
            map_text(o, c.morphism(m).name, e.underlying.functions[m]);
    o << "}\n";
}

void functor_text(std::ostream& o, const std::string& name, const FunctorDecl& d)
{
    const auto& f = d.functor;
    const auto& a = *f.source;
    const auto& b = *f.target;
    o << "functor " << q(name) << " : " << q(d.source) << " -> " << q(d.target) << " {\n";
    for (Index x = 0; x < a.object_count(); ++x)
        o << "  obj " << q(a.object(x)) << " -> " << q(b.object(f.object_map[x])) << ";\n";
    for (Index m = 0; m < a.morphism_count(); ++m)
        if (!a.is_identity(m) || f.morphism_map[m] != b.identity(f.object_map[a.morphism(m).dom]))
            o << "  mor " << q(a.morphism(m).name) << " -> " << q(b.morphism(f.morphism_map[m]).name) << ";\n";
    o << "}\n";
}

void rows_text(std::ostream& o, const std::string& indent, const std::vector<std::string>& xs,
               const std::vector<std::string>& ys)
{
    o << indent << "row";
    for (const auto& x : xs)
        o << " " << q(x);
    o << " ->";
    for (const auto& y : ys)
        o << " " << q(y);
    o << ";\n";
}

void abd_text(std::ostream& o, const std::string& name, const AbdDecl& d)
{
    o << "abd " << q(name) << " {\n";
    for (const auto& s : d.resolution.signals)
        o << "  signal " << q(s.name) << " " << set_text(s.set) << "\n";
    for (const auto& p : d.resolution.parts) {
        o << "  part " << q(p.name) << " {\n";
        auto ports = [&](const char* head, const std::vector<PortDecl>& ps) {
            if (ps.empty())
                return;
            o << "    " << head;
            for (const auto& x : ps) {
                o << " " << q(x.name);
                if (x.type)
                    o << ":" << set_text(*x.type);
            }
            o << ";\n";
        };
        ports("in", p.inputs);
        ports("out", p.outputs);
        for (const auto& [xs, ys] : p.rows)
            rows_text(o, "    ", xs, ys);
        o << "  }\n";
    }
    o << "}\n";
}

void hints_text(std::ostream& o, const std::string& name, const HintsDecl& d)
{
    o << "hints " << q(name) << " on " << q(d.abd) << " {\n";
    for (const auto& s : d.hints.signature.slots)
        slot_text(o, s);
    for (const auto& [port, tables] : d.hints.tables)
        for (Index s = 0; s < tables.size(); ++s)
            table_text(o, port, d.hints.signature.slots[s].name, tables[s]);
    o << "}\n";
}

} // namespace

std::string serialize_declaration(const Workspace& ws, DeclKind kind, const std::string& name)
{
    std::ostringstream o;
    switch (kind) {
    case DeclKind::category:
        category_text(o, name, *ws.categories.at(name));
        break;
    case DeclKind::construct:
        construct_text(o, name, *ws.constructs.at(name));
        break;
    case DeclKind::emergence:
        emergence_text(o, name, ws.emergences.at(name));
        break;
    case DeclKind::functor:
        functor_text(o, name, ws.functors.at(name));
        break;
    case DeclKind::natural: {
        const auto& d = ws.naturals.at(name);
        const auto& t = d.transformation;
        o << "natural " << q(name) << " : " << q(d.from) << " => " << q(d.to) << " {";
        for (Index x = 0; x < t.components.size(); ++x)
            o << (x ? ", " : " ") << q(t.from.source->object(x)) << " -> "
              << q(t.from.target->morphism(t.components[x]).name);
        o << " }\n";
        break;
    }
    case DeclKind::source:
    case DeclKind::sink: {
        const auto& d = (kind == DeclKind::source ? ws.sources : ws.sinks).at(name);
        o << to_string(kind) << " " << q(name) << (kind == DeclKind::source ? " from " : " into ") << q(d.apex)
          << " {\n";
        for (const auto& l : d.legs)
            o << "  leg " << q(l) << ";\n";
        o << "}\n";
        break;
    }
    case DeclKind::diagram: {
        const auto& d = ws.diagrams.at(name);
        const auto& s = *d.diagram.scheme;
        o << "diagram " << q(name) << " on " << q(s.name()) << " {\n";
        for (Index x = 0; x < s.object_count(); ++x)
            o << "  node " << q(s.object(x)) << " = " << q(d.nodes[x]) << ";\n";
        for (Index m = 0; m < s.morphism_count(); ++m)
            if (!d.edges[m].empty())
                o << "  edge " << q(s.morphism(m).name) << " = " << q(d.edges[m]) << ";\n";
        o << "}\n";
        break;
    }
    case DeclKind::abd:
        abd_text(o, name, ws.abds.at(name));
        break;
    case DeclKind::hints:
        hints_text(o, name, ws.hints.at(name));
        break;
    case DeclKind::setfunctor: {
        const auto& d = ws.setfunctors.at(name);
        o << "setfunctor " << q(name) << " on " << q(d.abd) << " " << to_string(d.action.rule);
        if (!d.action.relabel.empty()) {
            o << " {";
            bool first = true;
            for (const auto& [a, b] : d.action.relabel) {
                o << (first ? " " : ", ") << q(a) << " -> " << q(b);
                first = false;
            }
            o << " }";
        }
        o << ";\n";
        break;
    }
    case DeclKind::battery: {
        const auto& d = ws.batteries.at(name);
        o << "battery " << q(name) << " {\n";
        auto list = [&](const char* head, const std::vector<std::string>& xs) {
            if (xs.empty())
                return;
            o << "  " << head;
            for (const auto& x : xs)
                o << " " << q(x);
            o << ";\n";
        };
        list("categories", d.categories);
        list("emergences", d.emergences);
        o << "}\n";
        break;
    }
    }
    return o.str();
}

std::string serialize(const Workspace& ws)
{
    std::ostringstream o;
    const auto& s = ws.settings;
    bool first = true;
    if (s.budget || s.battery || s.format) {
        o << "settings {\n";
        if (s.budget)
            o << "  budget " << *s.budget << ";\n";
        if (s.battery)
            o << "  battery " << q(*s.battery) << ";\n";
        if (s.format)
            o << "  format " << *s.format << ";\n";
        o << "}\n";
        first = false;
    }
    for (const auto& d : ws.order) {
        o << (first ? "" : "\n") << serialize_declaration(ws, d.kind, d.name);
        first = false;
    }
    return o.str();
}

namespace {

bool same_construct(const Construct& a, const Construct& b)
{
    return a.name == b.name && *a.category == *b.category && a.signature == b.signature && a.carriers == b.carriers &&
           a.structure == b.structure && a.underlying == b.underlying;
}

template <class Map, class Eq>
bool same_map(const Map& a, const Map& b, Eq eq)
{
    if (a.size() != b.size())
        return false;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end() || !eq(v, it->second))
            return false;
    }
    return true;
}

} // namespace

bool equivalent(const Workspace& a, const Workspace& b)
{
    if (a.settings.budget != b.settings.budget || a.settings.battery != b.settings.battery ||
        a.settings.format != b.settings.format)
        return false;
    if (a.order.size() != b.order.size())
        return false;
    for (Index i = 0; i < a.order.size(); ++i)
        if (a.order[i].kind != b.order[i].kind || a.order[i].name != b.order[i].name)
            return false;
    auto cones = [](const ConeDecl& x, const ConeDecl& y) { return x.apex == y.apex && x.legs == y.legs; };
    return same_map(a.categories, b.categories, [](const CategoryRef& x, const CategoryRef& y) { return *x == *y; }) &&
           same_map(a.constructs, b.constructs,
                    [](const ConstructRef& x, const ConstructRef& y) { return same_construct(*x, *y); }) &&
           same_map(a.emergences, b.emergences,
                    [](const EmergenceDecl& x, const EmergenceDecl& y) {
                        const auto& ex = *x.emergence;
                        const auto& ey = *y.emergence;
                        return x.construct == y.construct && ex.kind == ey.kind &&
                               same_construct(*ex.construct, *ey.construct) &&
                               ex.underlying.sets == ey.underlying.sets &&
                               ex.underlying.functions == ey.underlying.functions;
                    }) &&
           same_map(a.functors, b.functors,
                    [](const FunctorDecl& x, const FunctorDecl& y) {
                        return x.source == y.source && x.target == y.target && x.functor == y.functor;
                    }) &&
           same_map(a.naturals, b.naturals,
                    [](const NaturalDecl& x, const NaturalDecl& y) {
                        return x.from == y.from && x.to == y.to &&
                               x.transformation.components == y.transformation.components;
                    }) &&
           same_map(a.sources, b.sources, cones) && same_map(a.sinks, b.sinks, cones) &&
           same_map(a.diagrams, b.diagrams,
                    [](const DiagramDecl& x, const DiagramDecl& y) {
                        return x.nodes == y.nodes && x.edges == y.edges && *x.diagram.scheme == *y.diagram.scheme;
                    }) &&
           same_map(a.abds, b.abds, [](const AbdDecl& x, const AbdDecl& y) { return x.abd == y.abd; }) &&
           same_map(a.hints, b.hints,
                    [](const HintsDecl& x, const HintsDecl& y) {
                        return x.abd == y.abd && x.hints.signature == y.hints.signature &&
                               x.hints.tables == y.hints.tables;
                    }) &&
           same_map(a.setfunctors, b.setfunctors,
                    [](const SetFunctorDecl& x, const SetFunctorDecl& y) {
                        return x.abd == y.abd && x.action.rule == y.action.rule &&
                               x.action.relabel == y.action.relabel;
                    }) &&
           same_map(a.batteries, b.batteries, [](const BatteryDecl& x, const BatteryDecl& y) {
               return x.categories == y.categories && x.emergences == y.emergences;
           });
}

} // namespace emergence
