#include "emergence/cli.hpp"

#include "emergence/battery.hpp"
#include "emergence/dot.hpp"
#include "emergence/report.hpp"
#include "emergence/workspace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>

namespace emergence {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::vector<std::string> workspaces;
    std::uint64_t budget = 0;
    bool budget_set = false;
    std::string battery;
    bool json = false;
    std::string emit_dot;
    bool timing = false;
    bool identities = false;
    bool verify = false;
    bool full = false;
    bool iso = false;
    std::string name;
    std::string functor;
    std::size_t limit = 10;
    std::string command;
    std::vector<std::string> args;
};

struct Context {
    Options opt;
    Workspace ws;
    std::uint64_t budget = kDefaultBudget;
    bool budget_hit = false;
    std::string dot;

    DotOptions dot_options() const { return {opt.identities}; }
};

const std::vector<std::string>& need(const Context& c, std::size_t n, const std::string& usage)
{
    if (c.opt.args.size() < n)
        throw UsageError("usage: " + usage);
    return c.opt.args;
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const std::string& kind)
{
    auto it = m.find(name);
    if (it == m.end())
        throw StructuralError("no " + kind + " named " + name);
    return it->second;
}

DeclKind parse_kind(const std::string& s)
{
    for (int k = 0; k <= static_cast<int>(DeclKind::battery); ++k)
        if (to_string(static_cast<DeclKind>(k)) == s)
            return static_cast<DeclKind>(k);
    throw UsageError("unknown kind " + s);
}

Battery category_battery(const Context& c)
{
    const auto& name = c.opt.battery.empty() ? c.ws.settings.battery.value_or("") : c.opt.battery;
    if (name == "standard" || name == "singleton") {
        Battery b{name, {}};
        for (const auto& e : c.ws.emergence_battery(name))
            b.categories.push_back(e->category());
        return b;
    }
    return c.ws.battery(name);
}

std::vector<EmergenceRef> emergences_for(const Context& c)
{
    const auto& name = c.opt.battery.empty() ? c.ws.settings.battery.value_or("") : c.opt.battery;
    return c.ws.emergence_battery(name);
}

Json verdict(Context& c, const UniversalVerdict& v)
{
    if (v.inconclusive)
        c.budget_hit = true;
    return to_json(v);
}

// Emergence declared as the source (or target) of a functor declaration.
EmergenceRef endpoint(const Context& c, const std::string& functor, bool source)
{
    const auto& d = lookup(c.ws.functors, functor, "functor");
    const auto& ref = source ? d.source : d.target;
    if (c.ws.emergences.count(ref))
        return c.ws.emergence(ref);
    const auto& cat = source ? d.functor.source : d.functor.target;
    for (const auto& decl : c.ws.order)
        if (decl.kind == DeclKind::emergence && same_category(c.ws.emergence(decl.name)->category(), cat))
            return c.ws.emergence(decl.name);
    throw StructuralError("no emergence over " + ref + " (" + (source ? "source" : "target") + " of " + functor +
                          ")");
}

std::vector<Functor> functors(const Context& c, const std::vector<std::string>& names)
{
    std::vector<Functor> out;
    for (const auto& n : names)
        out.push_back(c.ws.functor(n));
    return out;
}

std::vector<std::string> slice(const std::vector<std::string>& v, std::size_t from, std::size_t to = npos)
{
    return {v.begin() + std::min(from, v.size()), v.begin() + std::min(to, v.size())};
}

// Declarations added to the workspace by a construction.
class Added {
public:
    explicit Added(const Workspace& ws) : ws_(ws), mark_(ws.order.size()) {}

    Json text() const
    {
        std::string out;
        for (std::size_t i = mark_; i < ws_.order.size(); ++i)
            out += serialize_declaration(ws_, ws_.order[i].kind, ws_.order[i].name);
        return out;
    }

private:
    const Workspace& ws_;
    std::size_t mark_;
};

std::string category_name(const Workspace& ws, const CategoryRef& cat)
{
    for (const auto& d : ws.order)
        if (d.kind == DeclKind::emergence && ws.emergence(d.name)->category() == cat)
            return d.name;
    return cat->name();
}

void add_functor(Context& c, const std::string& name, const Functor& f)
{
    if (!c.ws.categories.count(f.target->name()) && !c.ws.emergences.count(f.target->name()) &&
        !c.ws.constructs.count(f.target->name()))
        c.ws.add_category(f.target->name(), f.target);
    c.ws.add_functor(name, {f, category_name(c.ws, f.source), category_name(c.ws, f.target)});
}

void add_cone(Context& c, bool source, const std::string& name, const std::string& apex,
              const std::vector<std::string>& legs)
{
    auto& m = source ? c.ws.sources : c.ws.sinks;
    if (!m.emplace(name, ConeDecl{apex, legs}).second)
        throw StructuralError("duplicate " + std::string(source ? "source " : "sink ") + name);
    c.ws.order.push_back({source ? DeclKind::source : DeclKind::sink, name, {}});
}

std::vector<std::string> names(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back(prefix + std::to_string(i));
    return out;
}

// ------------------------------------------------------------------ check

Json check_subject(Context& c, DeclKind kind, const std::string& name)
{
    const auto& ws = c.ws;
    Json j;
    switch (kind) {
    case DeclKind::category: {
        const auto& cat = lookup(ws.categories, name, "category");
        j = to_json(validate_category(*cat));
        j["objects"] = cat->object_count();
        j["morphisms"] = cat->morphism_count();
        j["thin"] = cat->thin();
        c.dot = dot_category(*cat, c.dot_options());
        break;
    }
    case DeclKind::construct: {
        const auto& k = lookup(ws.constructs, name, "construct");
        j = to_json(validate_construct(*k));
        j["order"] = k->signature.size();
        c.dot = dot_category(*k->category, c.dot_options());
        break;
    }
    case DeclKind::emergence: {
        const auto& e = lookup(ws.emergences, name, "emergence").emergence;
        j = to_json(validate_emergence(*e));
        j.update(summary_json(*e));
        c.dot = dot_category(*e->category(), c.dot_options());
        break;
    }
    case DeclKind::functor: {
        const auto& d = lookup(ws.functors, name, "functor");
        j = to_json(validate_functor(d.functor));
        if (j["valid"])
            j["properties"] = to_json(functor_properties(d.functor).flags);
        j["functor"] = to_json(d.functor);
        c.dot = dot_functor(name, d.functor, c.dot_options());
        break;
    }
    case DeclKind::natural: {
        const auto& d = lookup(ws.naturals, name, "natural transformation");
        j = to_json(check_natural(d.transformation));
        j["components"] = to_json(d.transformation);
        break;
    }
    case DeclKind::source:
    case DeclKind::sink: {
        const bool src = kind == DeclKind::source;
        const auto& d = lookup(src ? ws.sources : ws.sinks, name, src ? "source" : "sink");
        ValidationReport r;
        const auto apex = ws.category_of(d.apex);
        Json legs = Json::array();
        for (const auto& l : d.legs) {
            const auto& f = ws.functor(l);
            if (!same_category(src ? f.source : f.target, apex))
                r.add(src ? "leg-source" : "leg-target", {l, d.apex});
            r.merge(validate_functor(f), l);
            legs.push_back({{"leg", l}, {src ? "target" : "source", (src ? f.target : f.source)->name()}});
        }
        j = to_json(r);
        j["apex"] = d.apex;
        j["legs"] = std::move(legs);
        std::vector<DotCluster> clusters{{d.apex, apex}};
        std::vector<DotLeg> edges;
        for (const auto& l : d.legs) {
            const auto& f = ws.functor(l);
            clusters.push_back({(src ? f.target : f.source)->name(), src ? f.target : f.source});
            edges.push_back(src ? DotLeg{0, clusters.size() - 1, l} : DotLeg{clusters.size() - 1, 0, l});
        }
        c.dot = dot_clusters(name, clusters, edges, c.dot_options());
        break;
    }
    case DeclKind::diagram: {
        const auto& d = lookup(ws.diagrams, name, "diagram");
        j = to_json(validate_diagram(d.diagram));
        j["scheme"] = d.diagram.scheme->name();
        j["nodes"] = d.nodes;
        c.dot = dot_diagram(d.diagram, c.dot_options());
        break;
    }
    case DeclKind::abd: {
        const auto& d = lookup(ws.abds, name, "abd");
        j = to_json(validate_abd(d.abd));
        j["abd"] = to_json(d.abd);
        c.dot = dot_abd(d.abd);
        break;
    }
    case DeclKind::hints: {
        const auto& d = lookup(ws.hints, name, "hints");
        const auto& abd = lookup(ws.abds, d.abd, "abd").abd;
        ValidationReport r;
        for (const auto& p : abd.ports)
            if (!d.hints.tables.count(p.name))
                r.add("port-without-tables", {p.name});
        for (const auto& entry : d.hints.tables)
            for (const auto& t : entry.second)
                check_table_shape(t);
        j = to_json(r);
        j["abd"] = d.abd;
        j["order"] = d.hints.signature.size();
        break;
    }
    case DeclKind::setfunctor: {
        const auto& d = lookup(ws.setfunctors, name, "set-functor");
        j = to_json(validate_set_functor(d.table));
        j["abd"] = d.abd;
        j["rule"] = to_string(d.action.rule);
        j["lattice"] = d.table.lattice.size();
        break;
    }
    case DeclKind::battery: {
        const auto& d = lookup(ws.batteries, name, "battery");
        j = to_json(ValidationReport{});
        j["categories"] = d.categories;
        j["emergences"] = d.emergences;
        break;
    }
    }
    return j;
}

Json cmd_check(Context& c)
{
    const auto& a = need(c, 1, "check <kind> <name> | check workspace");
    if (a[0] == "workspace") {
        Json decls = Json::array();
        bool all = true;
        for (const auto& d : c.ws.order) {
            auto r = check_subject(c, d.kind, d.name);
            all = all && r["valid"].get<bool>();
            decls.push_back({{"kind", to_string(d.kind)}, {"name", d.name}, {"valid", r["valid"]}});
        }
        c.dot.clear();
        return {{"subject", "workspace"}, {"valid", all}, {"declarations", std::move(decls)}};
    }
    need(c, 2, "check <kind> <name>");
    Json j = {{"subject", a[0] + " " + a[1]}};
    j.update(check_subject(c, parse_kind(a[0]), a[1]));
    return j;
}

// -------------------------------------------------------------- construct

Json cmd_construct(Context& c)
{
    const auto& a = need(c, 2, "construct <equalizer|strong-equalizer|stabilizer|product|coproduct|pullback|limit> ...");
    const std::string what = a[0];
    const auto rest = slice(a, 1);
    Added added(c.ws);
    const auto battery = [&] { return category_battery(c); };
    Json j = {{"construction", what}};

    if (what == "equalizer" || what == "strong-equalizer") {
        need(c, 3, "construct " + what + " F G [H ...]");
        const auto e = endpoint(c, rest[0], true);
        const auto fs = functors(c, rest);
        EqualizerResult res;
        std::optional<EmergenceRef> b;
        if (what == "equalizer") {
            res = equalizer_emergence(*e, fs, c.opt.name);
        } else {
            if (fs.size() != 2)
                throw UsageError("usage: construct strong-equalizer F G");
            b = endpoint(c, rest[0], false);
            res = strong_equalizer_emergence(*e, **b, fs[0], fs[1], c.budget);
            if (!c.opt.name.empty())
                throw UsageError("--name is not supported for strong-equalizer");
        }
        register_emergence(c.ws, res.emergence);
        const auto incl = res.emergence->name + ".incl";
        add_functor(c, incl, res.inclusion);
        j["of"] = e->name;
        j["emergence"] = summary_json(*res.emergence);
        j["empty"] = res.empty;
        j["inclusion"] = incl;
        j["inclusion_properties"] = to_json(functor_properties(res.inclusion).flags);
        if (c.opt.verify) {
            if (b) {
                auto v = check_strong_equalizer(res.inclusion, fs[0], fs[1], *e, **b, battery(), c.budget);
                j["verdict"] = {{"plain", verdict(c, v.plain)},
                                {"strong", verdict(c, v.strong)},
                                {"u_embedding", v.u_embedding},
                                {"homomorphisms", v.homomorphisms},
                                {"isomorphism_required", v.isomorphism_required},
                                {"is_isomorphism", v.is_isomorphism},
                                {"holds", v.overall}};
            } else {
                j["verdict"] = verdict(c, verify_universal(equalizer_candidate(res.inclusion, fs), battery(), c.budget));
                j["mono"] = verdict(c, verify_universal(mono_source_candidate(res.inclusion.source, {res.inclusion}),
                                                        battery(), c.budget));
            }
        }
        std::vector<DotCluster> cl{{res.emergence->name, res.emergence->category()}, {e->name, e->category()},
                                   {fs[0].target->name(), fs[0].target}};
        std::vector<DotLeg> legs{{0, 1, incl}};
        for (const auto& n : rest)
            legs.push_back({1, 2, n});
        c.dot = dot_clusters(res.emergence->name, cl, legs, c.dot_options());
    } else if (what == "stabilizer") {
        need(c, 3, "construct stabilizer E E2");
        const auto e = c.ws.emergence(rest[0]);
        const auto e2 = c.ws.emergence(rest[1]);
        if (!same_category(e->category(), e2->category()))
            throw ModeMismatch("stabilizer needs two readings of one construct: " + e->name + ", " + e2->name);
        UnderlyingFunctor u2 = e2->underlying;
        u2.construct = e->construct;
        auto res = stabilizer(*e, e->underlying, u2, c.budget);
        register_emergence(c.ws, res.emergence);
        const auto incl = res.emergence->name + ".incl";
        add_functor(c, incl, res.inclusion);
        j["of"] = e->name;
        j["emergence"] = summary_json(*res.emergence);
        j["empty"] = res.empty;
        j["inclusion"] = incl;
        c.dot = dot_functor(incl, res.inclusion, c.dot_options());
    } else if (what == "product" || what == "coproduct") {
        std::vector<EmergenceRef> es;
        for (const auto& n : rest)
            es.push_back(c.ws.emergence(n));
        EmergenceRef p;
        std::vector<Functor> legs;
        if (what == "product") {
            auto res = product_emergence(es, c.budget, c.opt.name);
            p = res.emergence;
            legs = res.projections;
        } else {
            auto res = coproduct_emergence(es, c.opt.name);
            p = res.emergence;
            legs = res.injections;
            j["shared_signature"] = res.shared_signature;
        }
        if (es.size() == 1 && p == es[0]) {
            j["emergence"] = summary_json(*p);
            j["note"] = "single factor: the emergence itself";
            return j;
        }
        register_emergence(c.ws, p);
        const auto leg_names = names(p->name + (what == "product" ? ".p" : ".in"), legs.size());
        for (std::size_t i = 0; i < legs.size(); ++i)
            add_functor(c, leg_names[i], legs[i]);
        add_cone(c, what == "product", p->name + ".cone", p->name, leg_names);
        j["emergence"] = summary_json(*p);
        j[what == "product" ? "projections" : "injections"] = leg_names;
        if (c.opt.verify) {
            auto cand = what == "product" ? product_candidate(p->category(), legs) : coproduct_candidate(p->category(), legs);
            j["verdict"] = verdict(c, verify_universal(cand, battery(), c.budget));
        }
        std::vector<DotCluster> cl{{p->name, p->category()}};
        std::vector<DotLeg> dl;
        for (std::size_t i = 0; i < es.size(); ++i) {
            cl.push_back({es[i]->name, es[i]->category()});
            dl.push_back(what == "product" ? DotLeg{0, i + 1, leg_names[i]} : DotLeg{i + 1, 0, leg_names[i]});
        }
        c.dot = dot_clusters(p->name, cl, dl, c.dot_options());
    } else if (what == "pullback") {
        need(c, 3, "construct pullback A B");
        const auto ea = c.ws.emergence(rest[0]);
        const auto eb = c.ws.emergence(rest[1]);
        auto res = pullback_emergence(*ea, *eb, c.budget, c.opt.name);
        register_emergence(c.ws, res.emergence);
        const auto& p = res.emergence->name;
        const auto set = "Set(" + p + ")";
        c.ws.add_category(set, std::make_shared<const FinCategory>(
                                   set, res.fragment.category->objects(), res.fragment.category->morphisms(),
                                   res.fragment.category->identities(), res.fragment.category->compose_table()));
        auto retarget = [&](Functor f) {
            f.target = c.ws.categories.at(set);
            return f;
        };
        add_functor(c, p + ".pa", res.to_a);
        add_functor(c, p + ".pb", res.to_b);
        add_functor(c, p + ".ua", retarget(res.ua));
        add_functor(c, p + ".ub", retarget(res.ub));
        add_cone(c, true, p + ".cone", p, {p + ".pa", p + ".pb"});
        j["emergence"] = summary_json(*res.emergence);
        j["mode"] = res.mode;
        j["empty"] = res.empty;
        j["legs"] = {p + ".pa", p + ".pb"};
        if (c.opt.verify)
            j["verdict"] = verdict(c, verify_universal(pullback_candidate(res.to_a, res.to_b, res.ua, res.ub),
                                                       battery(), c.budget));
        c.dot = dot_clusters(p,
                             {{p, res.emergence->category()},
                              {ea->name, ea->category()},
                              {eb->name, eb->category()},
                              {set, res.fragment.category}},
                             {{0, 1, p + ".pa"}, {0, 2, p + ".pb"}, {1, 3, "U" + ea->name}, {2, 3, "U" + eb->name}},
                             c.dot_options());
    } else if (what == "limit") {
        const auto& d = lookup(c.ws.diagrams, rest[0], "diagram");
        auto res = limit_of_diagram(d.diagram, c.budget, c.opt.name);
        register_emergence(c.ws, res.apex);
        const auto leg_names = names(res.apex->name + ".l", res.legs.size());
        for (std::size_t i = 0; i < res.legs.size(); ++i)
            add_functor(c, leg_names[i], res.legs[i]);
        add_cone(c, true, res.apex->name + ".cone", res.apex->name, leg_names);
        j["emergence"] = summary_json(*res.apex);
        j["legs"] = leg_names;
        if (c.opt.verify) {
            UniversalCandidate cand{UniversalKind::limit, shape_of(d.diagram), res.apex->category(), res.legs};
            j["verdict"] = verdict(c, verify_universal(cand, battery(), c.budget));
            j["mono_source"] = verdict(c, verify_universal(mono_source_candidate(res.apex->category(), res.legs),
                                                           battery(), c.budget));
        }
        std::vector<DotCluster> cl{{res.apex->name, res.apex->category()}};
        std::vector<DotLeg> dl;
        const auto& s = *d.diagram.scheme;
        for (Index x = 0; x < s.object_count(); ++x) {
            cl.push_back({s.object(x) + " = " + d.nodes[x], d.diagram.nodes[x]->category()});
            dl.push_back({0, x + 1, leg_names[x]});
        }
        for (Index m = 0; m < s.morphism_count(); ++m)
            if (!s.is_identity(m))
                dl.push_back({s.morphism(m).dom + 1, s.morphism(m).cod + 1, d.edges[m]});
        c.dot = dot_clusters(res.apex->name, cl, dl, c.dot_options());
    } else {
        throw UsageError("unknown construction " + what);
    }
    j["declarations"] = added.text();
    return j;
}

// ----------------------------------------------------------------- verify

std::pair<CategoryRef, std::vector<Functor>> cone(const Context& c, const std::string& name, bool source)
{
    const auto& d = lookup(source ? c.ws.sources : c.ws.sinks, name, source ? "source" : "sink");
    return {c.ws.category_of(d.apex), functors(c, d.legs)};
}

Json cmd_verify(Context& c)
{
    const auto& a = need(c, 2, "verify <property> ...");
    const std::string what = a[0];
    const auto rest = slice(a, 1);
    const auto bat = category_battery(c);
    Json j = {{"property", what}, {"subject", rest}};
    auto run = [&](const UniversalCandidate& cand) { j["verdict"] = verdict(c, verify_universal(cand, bat, c.budget)); };
    auto at_least = [&](std::size_t n, const std::string& usage) {
        if (rest.size() < n)
            throw UsageError("usage: verify " + what + " " + usage);
    };

    if (what == "equalizer" || what == "coequalizer") {
        at_least(3, "E F G [H ...]");
        const auto fs = functors(c, slice(rest, 1));
        run(what == "equalizer" ? equalizer_candidate(c.ws.functor(rest[0]), fs)
                                : coequalizer_candidate(c.ws.functor(rest[0]), fs));
    } else if (what == "product" || what == "coproduct") {
        auto [apex, legs] = cone(c, rest[0], what == "product");
        run(what == "product" ? product_candidate(apex, legs) : coproduct_candidate(apex, legs));
    } else if (what == "pullback" || what == "pushout") {
        at_least(4, what == "pullback" ? "PA PB F G" : "IA IB F G");
        const auto fs = functors(c, rest);
        run(what == "pullback" ? pullback_candidate(fs[0], fs[1], fs[2], fs[3])
                               : pushout_candidate(fs[0], fs[1], fs[2], fs[3]));
    } else if (what == "limit" || what == "colimit") {
        at_least(2, what == "limit" ? "SOURCE DIAGRAM" : "SINK DIAGRAM");
        auto [apex, legs] = cone(c, rest[0], what == "limit");
        const auto& d = lookup(c.ws.diagrams, rest[1], "diagram");
        run({what == "limit" ? UniversalKind::limit : UniversalKind::colimit_candidate, shape_of(d.diagram), apex, legs});
    } else if (what == "mono-source") {
        auto [apex, legs] = cone(c, rest[0], true);
        run(mono_source_candidate(apex, legs));
    } else if (what == "mono") {
        const auto& f = c.ws.functor(rest[0]);
        run(mono_source_candidate(f.source, {f}));
    } else if (what == "epi") {
        j["verdict"] = verdict(c, verify_epi(c.ws.functor(rest[0]), bat, c.budget));
    } else if (what == "strong-equalizer") {
        at_least(3, "E F G");
        const auto a_ = endpoint(c, rest[1], true);
        const auto b_ = endpoint(c, rest[1], false);
        auto v = check_strong_equalizer(c.ws.functor(rest[0]), c.ws.functor(rest[1]), c.ws.functor(rest[2]), *a_, *b_,
                                        bat, c.budget);
        j["verdict"] = {{"plain", verdict(c, v.plain)},
                        {"strong", verdict(c, v.strong)},
                        {"u_embedding", v.u_embedding},
                        {"homomorphisms", v.homomorphisms},
                        {"isomorphism_required", v.isomorphism_required},
                        {"is_isomorphism", v.is_isomorphism},
                        {"holds", v.overall}};
    } else if (what == "natural") {
        const auto& d = lookup(c.ws.naturals, rest[0], "natural transformation");
        j["verdict"] = to_json(check_natural(d.transformation));
    } else if (what == "uniqueness") {
        at_least(2, "CONE1 CONE2");
        const bool src = c.ws.sources.count(rest[0]) > 0;
        if (src != (c.ws.sources.count(rest[1]) > 0))
            throw ModeMismatch("uniqueness compares two sources or two sinks");
        auto [a1, l1] = cone(c, rest[0], src);
        auto [a2, l2] = cone(c, rest[1], src);
        auto t = essential_uniqueness(a1, l1, a2, l2, src ? ConeVariance::limit : ConeVariance::colimit, c.budget);
        j["verdict"] = {{"holds", t.has_value()}};
        if (t)
            j["verdict"]["isomorphism"] = to_json(*t);
    } else {
        throw UsageError("unknown property " + what);
    }
    j["battery"] = bat.name.empty() ? "default" : bat.name;
    return j;
}

// ----------------------------------------------------------------- relate

const std::map<std::string, HomMode> hom_modes = {
    {"hom", HomMode::hom}, {"strong", HomMode::strong}, {"semi", HomMode::semi}, {"strong-semi", HomMode::strong_semi}};

const std::map<std::string, IsoMode> iso_modes = {{"iso", IsoMode::iso},
                                                  {"strong-iso", IsoMode::strong_iso},
                                                  {"semi-iso", IsoMode::semi_iso},
                                                  {"strong-semi-iso", IsoMode::strong_semi_iso},
                                                  {"equivalence", IsoMode::equivalence},
                                                  {"semi-equivalence", IsoMode::semi_equivalence}};

Json cmd_relate(Context& c)
{
    const auto& a = need(c, 3, "relate <relation> A B");
    const std::string what = a[0];
    Json j = {{"relation", what}};
    if (auto it = hom_modes.find(what); it != hom_modes.end()) {
        const auto ea = c.ws.emergence(a[1]);
        const auto eb = c.ws.emergence(a[2]);
        j["source"] = ea->name;
        j["target"] = eb->name;
        if (!c.opt.functor.empty()) {
            j["functor"] = c.opt.functor;
            j["verdict"] = to_json(check_morphism(c.ws.functor(c.opt.functor), *ea, *eb, it->second));
        } else {
            auto homs = enumerate_homomorphisms(*ea, *eb, it->second, c.budget);
            j["count"] = homs.size();
            j["holds"] = !homs.empty();
            Json list = Json::array();
            for (std::size_t i = 0; i < homs.size() && i < c.opt.limit; ++i)
                list.push_back(to_json(homs[i]));
            j["homomorphisms"] = std::move(list);
        }
    } else if (auto it = iso_modes.find(what); it != iso_modes.end()) {
        j["source"] = a[1];
        j["target"] = a[2];
        j["verdict"] = to_json(check_iso(*c.ws.emergence(a[1]), *c.ws.emergence(a[2]), it->second, c.budget));
    } else if (what == "sub" || what == "full-sub") {
        auto r = check_sub_emergence(*c.ws.emergence(a[1]), *c.ws.emergence(a[2]), what == "full-sub" || c.opt.full);
        j["sub"] = a[1];
        j["of"] = a[2];
        j["verdict"] = to_json(r.verdict);
        if (r.inclusion)
            j["inclusion"] = to_json(*r.inclusion);
    } else if (what == "induces") {
        j["source"] = a[1];
        j["target"] = a[2];
        j["verdict"] = to_json(check_induces(*c.ws.emergence(a[1]), *c.ws.emergence(a[2])));
    } else if (what == "graded") {
        need(c, 5, "relate graded partial|relative E0 F1 E1 [F2 E2 ...]");
        GradedKind kind;
        if (a[1] == "partial")
            kind = GradedKind::partial;
        else if (a[1] == "relative")
            kind = GradedKind::relative;
        else
            throw UsageError("graded kind must be partial or relative");
        if (a.size() % 2 != 1)
            throw UsageError("usage: relate graded partial|relative E0 F1 E1 [F2 E2 ...]");
        std::optional<GradedArrow> total;
        long sum = 0;
        Json arrows = Json::array();
        for (std::size_t i = 2; i + 2 < a.size(); i += 2) {
            auto g = graded_arrow(kind, c.ws.emergence(a[i]), c.ws.emergence(a[i + 2]), c.ws.functor(a[i + 1]));
            arrows.push_back({{"functor", a[i + 1]}, {"source", a[i]}, {"target", a[i + 2]}, {"degree", g.degree}});
            sum += g.degree;
            total = total ? compose_graded(*total, g) : g;
        }
        j["kind"] = a[1];
        j["arrows"] = std::move(arrows);
        j["degree"] = total->degree;
        j["additive"] = total->degree == sum;
    } else {
        throw UsageError("unknown relation " + what);
    }
    return j;
}

// ------------------------------------------------------- single emergences

Json cmd_classify(Context& c)
{
    const auto& a = need(c, 1, "classify E");
    const auto e = c.ws.emergence(a[0]);
    auto cl = classify(*e);
    auto op = opposite_emergence(*e);
    Json j = summary_json(*e);
    j["small"] = cl.small;
    j["thin"] = cl.thin;
    j["opposite"] = {{"order", op.emergence->order()}, {"underlying", op.underlying_rule}, {"functorial", op.functorial}};
    c.dot = dot_category(*e->category(), c.dot_options());
    return j;
}

Json cmd_represent(Context& c)
{
    const auto& a = need(c, 1, "represent E");
    const auto e = c.ws.emergence(a[0]);
    auto r = find_representation(*e, c.budget);
    Json j = {{"emergence", e->name}, {"representable", r.has_value()}};
    if (r) {
        j["object"] = e->category()->object(r->object);
        j["element"] = r->element;
        j["components"] = to_json(r->transformation);
        j["preserves_monos"] = r->preserves_monos;
        j["monos"] = r->monos;
    }
    return j;
}

Json cmd_extremal(Context& c)
{
    const auto& a = need(c, 1, "extremal E");
    const auto e = c.ws.emergence(a[0]);
    auto battery = emergences_for(c);
    Json names = Json::array();
    for (const auto& b : battery)
        names.push_back(b->name);
    Json j = {{"emergence", e->name}, {"battery", std::move(names)}};
    j.update(to_json(extremal_status(*e, battery, c.budget)));
    return j;
}

Json cmd_internal(Context& c)
{
    const auto& a = need(c, 1, "internal K");
    ConstructRef k;
    if (c.ws.emergences.count(a[0]))
        k = c.ws.emergence(a[0])->construct;
    else
        k = lookup(c.ws.constructs, a[0], "construct or emergence");
    Json j = {{"construct", a[0]}};
    j.update(to_json(internal_structure_report(*k, c.budget)));
    return j;
}

Json cmd_opposite(Context& c)
{
    const auto& a = need(c, 1, "opposite E");
    const auto e = c.ws.emergence(a[0]);
    auto op = opposite_emergence(*e);
    Json j = {{"emergence", e->name}, {"order", e->order()}};
    j["opposite"] = summary_json(*op.emergence);
    j["underlying"] = op.underlying_rule;
    j["functorial"] = op.functorial;
    j["order_preserved"] = op.emergence->order() == e->order();
    j["valid"] = validate_emergence(*op.emergence).ok();
    return j;
}

Json cmd_functors(Context& c)
{
    const auto& a = need(c, 2, "functors X Y");
    SearchOptions o;
    o.budget = c.budget;
    std::size_t count = 0;
    Json list = Json::array();
    search_functors(c.ws.category_of(a[0]), c.ws.category_of(a[1]), o, [&](const Functor& f) {
        if (count++ < c.opt.limit)
            list.push_back(to_json(f));
        return true;
    });
    return {{"source", a[0]}, {"target", a[1]}, {"count", count}, {"functors", std::move(list)}};
}

Json cmd_natural(Context& c)
{
    const auto& a = need(c, 2, "natural F G [--iso]");
    auto ts = find_natural(c.ws.functor(a[0]), c.ws.functor(a[1]), c.opt.iso ? NaturalMode::isomorphisms : NaturalMode::all,
                           c.budget);
    Json list = Json::array();
    for (std::size_t i = 0; i < ts.size() && i < c.opt.limit; ++i)
        list.push_back(to_json(ts[i]));
    return {{"from", a[0]}, {"to", a[1]}, {"mode", c.opt.iso ? "isomorphisms" : "all"}, {"count", ts.size()},
            {"transformations", std::move(list)}};
}

// -------------------------------------------------------------------- abd

void add_abd(Context& c, const AbstractBlockDiagram& abd)
{
    if (!c.ws.abds.emplace(abd.name, AbdDecl{resolution_of(abd), abd}).second)
        throw StructuralError("duplicate abd " + abd.name);
    c.ws.order.push_back({DeclKind::abd, abd.name, {}});
}

Json cmd_abd(Context& c)
{
    const auto& a = need(c, 2, "abd <build|canonical|refine|factorable|functor-check|apply|to-emergence> ...");
    const std::string what = a[0];
    Json j = {{"operation", what}};
    Added added(c.ws);
    if (what == "functor-check" || what == "apply") {
        const auto& d = lookup(c.ws.setfunctors, a[1], "set-functor");
        j["set_functor"] = a[1];
        j["rule"] = to_string(d.action.rule);
        j["validation"] = to_json(validate_set_functor(d.table));
        if (what == "functor-check") {
            j["check"] = to_json(check_set_functor(d.table));
        } else {
            const auto& abd = lookup(c.ws.abds, d.abd, "abd").abd;
            auto r = apply_set_functor(abd, d.table);
            j["check"] = to_json(r.check);
            j["valid"] = r.valid;
            j["verdict"] = r.verdict;
            if (!r.defect.empty())
                j["defect"] = r.defect;
            if (r.abd) {
                j["image"] = to_json(*r.abd);
                c.dot = dot_abd(*r.abd);
            }
        }
        return j;
    }
    const auto& abd = lookup(c.ws.abds, a[1], "abd").abd;
    j["abd"] = abd.name;
    if (what == "build") {
        j["validation"] = to_json(validate_abd(abd));
        j["diagram"] = to_json(abd);
        c.dot = dot_abd(abd);
    } else if (what == "canonical" || what == "refine") {
        std::size_t passes = 0;
        auto out = what == "canonical" ? canonical_form(abd, &passes) : refine_single_output(abd);
        out.name = c.opt.name.empty() ? abd.name + (what == "canonical" ? ".canonical" : ".refined") : c.opt.name;
        if (what == "canonical")
            j["passes"] = passes;
        j["changed"] = !(out.components == abd.components && out.ports == abd.ports);
        j["diagram"] = to_json(out);
        add_abd(c, out);
        j["declarations"] = added.text();
        c.dot = dot_abd(out);
    } else if (what == "factorable") {
        Json comps = Json::array();
        for (const auto& comp : abd.components) {
            if (a.size() > 2 && std::find(a.begin() + 2, a.end(), comp.name) == a.end())
                continue;
            auto f = is_factorable(abd, comp);
            std::vector<std::size_t> radix;
            for (const auto& i : comp.inputs)
                radix.push_back(abd.port(i).set.size());
            Json x = {{"component", comp.name}, {"inputs", comp.inputs}};
            const auto sup = support(radix, component_function(abd, comp).table);
            std::vector<std::string> sup_names;
            for (auto k : sup)
                sup_names.push_back(comp.inputs[k]);
            x["support"] = sup_names;
            x["factorable"] = f ? Json(true) : (comp.inputs.size() < 2 ? Json(nullptr) : Json(false));
            comps.push_back(std::move(x));
        }
        j["components"] = std::move(comps);
    } else if (what == "to-emergence") {
        need(c, 3, "abd to-emergence R HINTS");
        const auto& h = lookup(c.ws.hints, a[2], "hints");
        if (h.abd != abd.name)
            throw StructuralError("hints " + a[2] + " are declared on " + h.abd + ", not " + abd.name);
        auto r = abd_to_emergence(abd, h.hints, c.budget);
        j["canonicalized"] = r.canonicalized;
        j["notices"] = r.notices;
        j["emergence"] = summary_json(*r.emergence);
        j["valid"] = validate_emergence(*r.emergence).ok();
        c.dot = dot_category(*r.emergence->category(), c.dot_options());
    } else {
        throw UsageError("unknown abd operation " + what);
    }
    return j;
}

// ---------------------------------------------------------------- export

Json cmd_export(Context& c)
{
    const auto& a = need(c, 1, "export NAME [KIND]");
    const auto& ws = c.ws;
    const std::string name = a[0];
    std::string kind = a.size() > 1 ? a[1] : "";
    if (kind.empty()) {
        for (auto k : {DeclKind::category, DeclKind::functor, DeclKind::diagram, DeclKind::abd, DeclKind::source,
                       DeclKind::sink, DeclKind::emergence, DeclKind::construct})
            if (ws.contains(k, name)) {
                kind = to_string(k);
                break;
            }
        if (kind.empty())
            throw StructuralError("nothing to export named " + name);
    }
    const auto k = parse_kind(kind);
    switch (k) {
    case DeclKind::emergence:
    case DeclKind::construct:
        c.dot = dot_category(*ws.category_of(name), c.dot_options());
        break;
    case DeclKind::category:
    case DeclKind::functor:
    case DeclKind::diagram:
    case DeclKind::abd:
    case DeclKind::source:
    case DeclKind::sink:
        check_subject(c, k, name);
        break;
    default:
        throw UsageError("cannot export a " + kind);
    }
    return {{"subject", kind + " " + name}};
}

// ------------------------------------------------------------ workspaces

Json cmd_show(Context& c)
{
    Json j = {{"declarations", c.ws.order.size()}};
    j["text"] = serialize(c.ws);
    return j;
}

Json cmd_battery(Context& c)
{
    const auto& a = need(c, 1, "battery standard|singleton|terminal|internal");
    std::vector<EmergenceRef> es;
    if (a[0] == "standard")
        es = emergence_battery();
    else if (a[0] == "singleton")
        es = singleton_battery();
    else if (a[0] == "terminal")
        es = {terminal_example()};
    else if (a[0] == "internal")
        es = {make_emergence("Chain3", chain_construct(3)), make_emergence("Antichain2", antichain_construct(2))};
    else
        throw UsageError("unknown battery " + a[0]);
    return {{"battery", a[0]}, {"emergences", es.size()}, {"text", serialize(workspace_of(es))}};
}

using Handler = std::function<Json(Context&)>;

struct Command {
    std::string name;
    std::string help;
    Handler run;
};

const std::vector<Command>& commands()
{
    static const std::vector<Command> cmds = {
        {"check", "validate a declaration: check <kind> <name> | check workspace", cmd_check},
        {"construct", "build equalizer|strong-equalizer|stabilizer|product|coproduct|pullback|limit", cmd_construct},
        {"verify", "check a universal property, natural transformation or cone uniqueness", cmd_verify},
        {"relate", "hom|strong|semi|strong-semi|iso|...|equivalence|sub|full-sub|induces|graded", cmd_relate},
        {"classify", "order, size and thinness of an emergence", cmd_classify},
        {"represent", "search for a representing object of the underlying functor", cmd_represent},
        {"extremal", "initial/terminal/zero status against the selected battery", cmd_extremal},
        {"internal", "terminal objects, products, equalizers and lattice check of a construct", cmd_internal},
        {"abd", "build|canonical|refine|factorable|functor-check|apply|to-emergence", cmd_abd},
        {"export", "DOT export of a category, functor, diagram, source, sink or ABD", cmd_export},
        {"opposite", "opposite emergence and its order", cmd_opposite},
        {"functors", "enumerate functors between two categories", cmd_functors},
        {"natural", "enumerate natural transformations between two functors", cmd_natural},
        {"show", "print the workspace in canonical form", cmd_show},
        {"battery", "print a built-in battery as workspace text (standard|singleton|terminal|internal)", cmd_battery},
    };
    return cmds;
}

} // namespace

const std::vector<std::string>& cli_operations()
{
    static const std::vector<std::string> ops = {
        "check category", "check construct", "check emergence", "check functor", "check natural", "check source",
        "check sink", "check diagram", "check abd", "check hints", "check setfunctor", "check battery",
        "check workspace", "construct equalizer", "construct strong-equalizer", "construct stabilizer",
        "construct product", "construct coproduct", "construct pullback", "construct limit", "verify equalizer",
        "verify coequalizer", "verify product", "verify coproduct", "verify pullback", "verify pushout",
        "verify limit", "verify colimit", "verify mono-source", "verify mono", "verify epi",
        "verify strong-equalizer", "verify natural", "verify uniqueness", "relate hom", "relate strong",
        "relate semi", "relate strong-semi", "relate iso", "relate strong-iso", "relate semi-iso",
        "relate strong-semi-iso", "relate equivalence", "relate semi-equivalence", "relate sub", "relate full-sub",
        "relate induces", "relate graded", "classify", "represent", "extremal", "internal", "abd build",
        "abd canonical", "abd refine", "abd factorable", "abd functor-check", "abd apply", "abd to-emergence",
        "export", "opposite", "functors", "natural", "show", "battery"};
    return ops;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    Context c;
    auto& o = c.opt;
    CLI::App app{"Finite emergences: constructs, universal constructions and block diagrams.", "emergence"};
    app.add_option("-w,--workspace", o.workspaces, "workspace file; repeat to merge several")->allow_extra_args(false);
    app.add_option("--budget", o.budget,
                   "search budget in candidate object maps (default " + std::to_string(kDefaultBudget) +
                       ", or $EMERGENCE_BUDGET)");
    app.add_option("--battery", o.battery, "battery: default, standard, singleton or a declared battery");
    app.add_flag("--json", o.json, "structured JSON report");
    app.add_option("--emit-dot", o.emit_dot, "write a DOT graph of the subject to this file ('-' for stdout)");
    app.add_flag("--timing", o.timing, "add wall-clock time to the report");
    app.add_flag("--identities", o.identities, "draw identity arrows in DOT output");
    app.add_flag("--verify", o.verify, "construct: also check the universal property");
    app.add_flag("--full", o.full, "relate sub: require a full sub-emergence");
    app.add_flag("--iso", o.iso, "natural: only natural isomorphisms");
    app.add_option("--name", o.name, "name of a constructed declaration");
    app.add_option("--functor", o.functor, "relate: check this functor instead of enumerating");
    app.add_option("--limit", o.limit, "maximum number of listed witnesses (default 10)");
    app.require_subcommand(1, 1);
    for (const auto& cmd : commands()) {
        auto* s = app.add_subcommand(cmd.name, cmd.help);
        s->add_option("args", o.args, "subject names");
        s->fallthrough();
        s->callback([&o, name = cmd.name] { o.command = name; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_error;
    }
    o.budget_set = app.get_option("--budget")->count() > 0;

    std::string echo;
    for (const auto& a : args)
        echo += (echo.empty() ? "" : " ") + a;
    Json report = {{"command", echo}};
    int status = exit_ok;
    try {
        c.ws = o.workspaces.empty() ? Workspace{} : parse_workspace(o.workspaces);
        c.budget = o.budget_set ? o.budget : c.ws.settings.budget.value_or(default_budget());
        if (c.ws.settings.format && *c.ws.settings.format == "json")
            o.json = true;
        const auto& cmd = *std::find_if(commands().begin(), commands().end(),
                                        [&](const Command& x) { return x.name == o.command; });
        report.update(cmd.run(c));
        if (c.budget_hit) {
            report["budget"] = {{"limit", c.budget}, {"notice", "a search was cut off by the budget"}};
            status = exit_budget;
        }
    } catch (const BudgetExceeded& e) {
        report["budget"] = {{"limit", e.budget()}, {"estimate", e.estimate()}, {"notice", e.what()}};
        err << "budget exceeded: " << e.what() << "\n";
        status = exit_budget;
        c.dot.clear();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }

    if (!o.emit_dot.empty()) {
        if (c.dot.empty()) {
            report["dot"] = nullptr;
        } else if (o.emit_dot == "-") {
            report["dot"] = c.dot;
        } else {
            std::ofstream f(o.emit_dot, std::ios::binary);
            if (!(f << c.dot)) {
                err << "error: cannot write " << o.emit_dot << "\n";
                return exit_error;
            }
            report["dot"] = o.emit_dot;
        }
    } else if (o.command == "export") {
        out << c.dot;
        return status;
    }
    // workspace text is printed bare so it can be loaded again
    if ((o.command == "show" || o.command == "battery") && !o.json && report.contains("text")) {
        out << report["text"].get<std::string>();
        return status;
    }
    if (o.timing)
        report["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (o.json)
        out << report.dump(2) << "\n";
    else
        out << render_text(report);
    return status;
}

} // namespace emergence
