// Acceptance suite: one PASS/FAIL line per criterion.

#include "generators.hpp"
#include "oracles.hpp"

#include "emergence/cli.hpp"
#include "emergence/report.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace emergence;

namespace {

// Deterministic log of one suite; compared across reruns for AC11.
struct Suite {
    bool pass = true;
    std::string summary;
    std::ostringstream log;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                summary = "first failure: " + what;
            pass = false;
            log << "FAIL " << what << "\n";
        }
    }
};

std::string maps(const Functor& f)
{
    std::ostringstream o;
    o << "[";
    for (auto x : f.object_map)
        o << x << " ";
    o << "|";
    for (auto m : f.morphism_map)
        o << " " << m;
    return o.str() + "]";
}

bool all_unique(const UniversalVerdict& v)
{
    for (const auto& m : v.mediators)
        if (m.count != 1)
            return false;
    return v.overall && !v.inconclusive;
}

std::size_t competitors = 0;

// ------------------------------------------------------------------- AC1

void ac1(Suite& s)
{
    std::mt19937 rng(20240601);
    std::size_t pairs = 0, cones = 0, attempts = 0;
    while (pairs < 60 && attempts < 1000) {
        ++attempts;
        auto a = gen::random_emergence(rng, "A" + std::to_string(pairs));
        auto b = rng() % 3 == 0 ? a : gen::random_emergence(rng, "B" + std::to_string(pairs));
        auto fs = enumerate_functors(a->category(), b->category());
        if (fs.empty())
            continue;
        const auto& f = fs[rng() % fs.size()];
        const auto& g = fs[rng() % fs.size()];
        auto eq = equalizer_emergence(*a, {f, g});
        const bool equal = oracle::same_maps(oracle::after(f, eq.inclusion), oracle::after(g, eq.inclusion));
        auto v = verify_universal(equalizer_candidate(eq.inclusion, {f, g}), default_battery());
        s.log << "pair " << pairs << ": |A|=" << a->category()->object_count() << "/" << a->category()->morphism_count()
              << " F=" << maps(f) << " G=" << maps(g) << " E=" << eq.emergence->category()->object_count() << "/"
              << eq.emergence->category()->morphism_count() << " competitors=" << v.competitors << "\n";
        s.expect(equal, "F.E != G.E on pair " + std::to_string(pairs));
        s.expect(all_unique(v), "mediator not unique on pair " + std::to_string(pairs));
        cones += v.competitors;
        ++pairs;
    }
    s.expect(pairs >= 50, "fewer than 50 pairs generated");
    if (s.pass)
        s.summary = std::to_string(pairs) + " pairs, " + std::to_string(cones) + " competitor cones, all mediators unique";
    competitors += cones;
}

// ------------------------------------------------------------------- AC2

bool mono_by_pairs(const Functor& incl, const Battery& battery)
{
    for (const auto& x : battery.categories) {
        auto hs = enumerate_functors(x, incl.source);
        for (std::size_t i = 0; i < hs.size(); ++i)
            for (std::size_t j = i + 1; j < hs.size(); ++j)
                if (oracle::same_maps(oracle::after(incl, hs[i]), oracle::after(incl, hs[j])))
                    return false;
    }
    return true;
}

void ac2(Suite& s)
{
    std::mt19937 rng(77);
    const auto battery = default_battery();
    std::size_t equalizers = 0, subs = 0;
    while (equalizers < 30) {
        auto a = gen::random_emergence(rng, "A");
        auto fs = enumerate_functors(a->category(), a->category());
        const auto& f = fs[rng() % fs.size()];
        const auto& g = fs[rng() % fs.size()];
        auto eq = equalizer_emergence(*a, {f, g});
        const auto p = functor_properties(eq.inclusion).flags;
        auto mono = verify_universal(mono_source_candidate(eq.inclusion.source, {eq.inclusion}), battery);
        s.expect(p.embedding, "equalizer inclusion is not an embedding");
        s.expect(mono.overall, "equalizer inclusion is not mono (verifier)");
        s.expect(mono_by_pairs(eq.inclusion, battery), "equalizer inclusion is not mono (pairs)");
        s.log << "equalizer " << equalizers << " embedding=" << p.embedding << " mono=" << mono.overall << "\n";
        ++equalizers;
    }
    for (const auto& e : standard_battery()) {
        const auto& c = *e->category();
        const std::size_t n = c.object_count();
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<Index> objs, mors;
            for (Index x = 0; x < n; ++x)
                if (mask >> x & 1)
                    objs.push_back(x);
            for (Index m = 0; m < c.morphism_count(); ++m)
                if ((mask >> c.morphism(m).dom & 1) && (mask >> c.morphism(m).cod & 1))
                    mors.push_back(m);
            auto [sub, incl] = restrict_emergence(*e, objs, mors, e->name + "/" + std::to_string(mask));
            auto [f, g] = regular_mono_fixture(incl);
            auto v = verify_universal(equalizer_candidate(incl, {f, g}), battery);
            s.expect(all_unique(v), "full sub-construct " + sub->name + " is not the fixture equalizer");
            s.log << "full sub " << sub->name << " competitors=" << v.competitors << " holds=" << v.overall << "\n";
            ++subs;
        }
    }
    if (s.pass)
        s.summary = std::to_string(equalizers) + " equalizer inclusions embedding+mono, " + std::to_string(subs) +
                    " full sub-constructs equalize the fixture, 0 counterexamples";
}

// ------------------------------------------------------------------- AC3

void ac3(Suite& s)
{
    const auto bat = standard_battery();
    const auto battery = default_battery();
    std::size_t pairs = 0;
    for (const auto& a : bat)
        for (const auto& b : bat) {
            const std::string tag = a->name + "," + b->name;
            auto p = product_emergence({a, b});
            const auto& pc = *p.emergence->category();
            s.expect(pc.object_count() == a->category()->object_count() * b->category()->object_count(),
                     "product object count " + tag);
            s.expect(p.emergence->order() == a->order() + b->order(), "product order " + tag);
            s.expect(validate_emergence(*p.emergence).ok(), "product invalid " + tag);
            auto vp = verify_universal(product_candidate(p.emergence->category(), p.projections), battery);
            s.expect(all_unique(vp), "product mediator " + tag);

            auto c = coproduct_emergence({a, b});
            const auto& cc = *c.emergence->category();
            std::vector<char> obj_hit(cc.object_count(), 0), mor_hit(cc.morphism_count(), 0);
            std::vector<std::size_t> summand(cc.object_count(), 0);
            for (std::size_t k = 0; k < c.injections.size(); ++k) {
                for (auto x : c.injections[k].object_map) {
                    obj_hit[x] = 1;
                    summand[x] = k;
                }
                for (auto m : c.injections[k].morphism_map)
                    mor_hit[m] = 1;
            }
            s.expect(std::count(obj_hit.begin(), obj_hit.end(), 0) == 0 &&
                         std::count(mor_hit.begin(), mor_hit.end(), 0) == 0,
                     "coproduct injections not jointly surjective " + tag);
            bool cross = false;
            for (Index x = 0; x < cc.object_count(); ++x)
                for (Index y = 0; y < cc.object_count(); ++y)
                    if (summand[x] != summand[y] && !cc.hom(x, y).empty())
                        cross = true;
            s.expect(!cross, "coproduct cross hom " + tag);
            auto vc = verify_universal(coproduct_candidate(c.emergence->category(), c.injections), battery);
            s.expect(all_unique(vc), "coproduct mediator " + tag);
            s.log << tag << ": product " << pc.object_count() << " objects order " << p.emergence->order()
                  << " competitors " << vp.competitors << "; coproduct " << cc.object_count() << " objects competitors "
                  << vc.competitors << "\n";
            competitors += vp.competitors + vc.competitors;
            ++pairs;
        }
    if (s.pass)
        s.summary = std::to_string(pairs) + " ordered pairs: counts, orders, joint surjectivity, no cross homs, unique mediators";
}

// ------------------------------------------------------------------- AC4

void ac4(Suite& s)
{
    const auto bat = standard_battery();
    std::size_t pairs = 0, nonempty = 0;
    for (const auto& a : bat)
        for (const auto& b : bat) {
            const std::string tag = a->name + "," + b->name;
            auto p = pullback_emergence(*a, *b);
            const auto& pc = *p.emergence->category();
            std::set<std::pair<std::string, std::string>> got;
            for (Index x = 0; x < pc.object_count(); ++x)
                got.insert({a->category()->object(p.to_a.object_map[x]), b->category()->object(p.to_b.object_map[x])});
            const auto expected = oracle::pair_filter(*a, *b);
            s.expect(got == expected && got.size() == pc.object_count(), "pullback objects " + tag);
            bool square = true;
            for (Index x = 0; x < pc.object_count(); ++x)
                square = square && a->underlying.sets[p.to_a.object_map[x]] == b->underlying.sets[p.to_b.object_map[x]];
            for (Index m = 0; m < pc.morphism_count(); ++m)
                square = square && a->underlying.functions[p.to_a.morphism_map[m]] ==
                                       b->underlying.functions[p.to_b.morphism_map[m]];
            s.expect(square, "pullback square " + tag);
            auto v = verify_universal(pullback_candidate(p.to_a, p.to_b, p.ua, p.ub), default_battery());
            s.expect(all_unique(v), "pullback mediator " + tag);
            s.log << tag << ": " << got.size() << " pairs, mode " << p.mode << ", competitors " << v.competitors << "\n";
            nonempty += !got.empty();
            ++pairs;
        }
    if (s.pass)
        s.summary = std::to_string(pairs) + " pairs (" + std::to_string(nonempty) +
                    " non-empty): objects equal the pair filter, squares commute, mediators unique";
}

// ------------------------------------------------------------------- AC5

HomMode hom_mode(const Emergence& e)
{
    return e.kind == EmergenceKind::semi ? HomMode::semi : HomMode::hom;
}

IsoMode iso_mode(const Emergence& e)
{
    return e.kind == EmergenceKind::semi ? IsoMode::semi_iso : IsoMode::iso;
}

bool u_embedding(const Emergence& e)
{
    // distinct morphisms have distinct underlying functions
    std::set<std::tuple<FinSet, FinSet, std::vector<Index>>> seen;
    for (const auto& f : e.underlying.functions)
        if (!seen.insert({f.dom, f.cod, f.table}).second)
            return false;
    return true;
}

void ac5(Suite& s)
{
    const auto bat = emergence_battery();
    const std::size_t n = bat.size();
    std::vector<std::vector<std::vector<Functor>>> homs(n, std::vector<std::vector<Functor>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (bat[i]->kind == bat[j]->kind)
                homs[i][j] = enumerate_homomorphisms(*bat[i], *bat[j], hom_mode(*bat[i]));
    std::size_t checks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = *bat[i];
        auto id = identity_functor(a.category());
        s.expect(check_morphism(id, a, a, hom_mode(a)).holds, "hom not reflexive at " + a.name);
        auto self = check_iso(a, a, iso_mode(a));
        s.expect(self.holds && self.functor, "iso not reflexive at " + a.name);
        ++checks;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (const auto& f : homs[i][j])
                    for (const auto& g : homs[j][k]) {
                        s.expect(check_morphism(compose(g, f), *bat[i], *bat[k], hom_mode(*bat[i])).holds,
                                 "hom not transitive " + bat[i]->name + "," + bat[j]->name + "," + bat[k]->name);
                        ++checks;
                    }
    std::vector<std::vector<std::optional<Functor>>> iso(n, std::vector<std::optional<Functor>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (bat[i]->kind != bat[j]->kind)
                continue;
            auto v = check_iso(*bat[i], *bat[j], iso_mode(*bat[i]));
            if (v.holds)
                iso[i][j] = v.functor;
        }
    std::size_t iso_pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!iso[i][j])
                continue;
            ++iso_pairs;
            const auto& a = *bat[i];
            const auto& b = *bat[j];
            auto props = functor_properties(*iso[i][j]);
            s.expect(props.inverse.has_value(), "iso witness has no inverse " + a.name + "," + b.name);
            if (props.inverse)
                s.expect(check_morphism(*props.inverse, b, a, hom_mode(b)).holds,
                         "inverse witness is not a homomorphism " + b.name + "," + a.name);
            s.expect(iso[j][i].has_value(), "iso not symmetric " + a.name + "," + b.name);
            for (std::size_t k = 0; k < n; ++k)
                if (iso[j][k]) {
                    auto h = compose(*iso[j][k], *iso[i][j]);
                    s.expect(functor_properties(h).flags.is_isomorphism &&
                                 check_morphism(h, a, *bat[k], hom_mode(a)).holds,
                             "iso not transitive " + a.name + "," + b.name + "," + bat[k]->name);
                    ++checks;
                }
            const auto eq = a.kind == EmergenceKind::semi ? IsoMode::semi_equivalence : IsoMode::equivalence;
            s.expect(check_iso(a, b, eq).holds, "iso without equivalence " + a.name + "," + b.name);
            s.log << "iso " << a.name << " ~ " << b.name << " via " << maps(*iso[i][j]) << "\n";
        }
    std::size_t mutual = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool fwd = false, back = false;
            for (const auto& f : homs[i][j])
                fwd = fwd || functor_properties(f).flags.embedding;
            for (const auto& g : homs[j][i])
                back = back || functor_properties(g).flags.embedding;
            if (fwd && back) {
                ++mutual;
                s.expect(iso[i][j].has_value(), "mutual embeddings without iso " + bat[i]->name + "," + bat[j]->name);
            }
        }
    std::size_t embedded = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!u_embedding(*bat[j]))
            continue;
        ++embedded;
        for (std::size_t i = 0; i < n; ++i)
            s.expect(homs[i][j].size() <= 1, "more than one homomorphism into " + bat[j]->name);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s.log << bat[i]->name << "->" << bat[j]->name << " homs=" << homs[i][j].size() << "\n";
    if (s.pass)
        s.summary = std::to_string(n) + " emergences, " + std::to_string(checks) + " law checks, " +
                    std::to_string(iso_pairs) + " iso pairs with witnesses, " + std::to_string(mutual) +
                    " mutual-embedding pairs, " + std::to_string(embedded) + " embedded U; 0 violations";
}

// ------------------------------------------------------------------- AC6

EmergenceRef singleton(std::size_t order)
{
    StructureSignature sig;
    const FinSet star({"*"});
    std::vector<OperationTable> tables;
    for (std::size_t k = 1; k <= order; ++k) {
        sig.slots.push_back({"op" + std::to_string(k), OpKind::internal, group_tags(), {}});
        tables.push_back(cyclic_addition(star, group_tags()));
    }
    return concrete_emergence("N" + std::to_string(order), sig, {{"P", star, tables}}, {});
}

void ac6(Suite& s)
{
    std::vector<EmergenceRef> all = emergence_battery();
    for (const auto& e : singleton_battery())
        all.push_back(e);
    all.push_back(terminal_example());
    for (const auto& e : all) {
        auto op = opposite_emergence(*e);
        s.expect(op.emergence->order() == e->order(), "opposite order of " + e->name);
        s.log << e->name << " order " << e->order() << " opposite " << op.emergence->order() << " ("
              << op.underlying_rule << ")\n";
    }
    std::vector<EmergenceRef> graded;
    for (std::size_t k = 5; k >= 1; --k)
        graded.push_back(singleton(k));
    for (const auto& e : singleton_battery())
        graded.push_back(e);
    graded.push_back(terminal_example());

    std::size_t chains = 0;
    for (auto kind : {GradedKind::partial, GradedKind::relative}) {
        std::function<void(std::vector<GradedArrow>&)> extend = [&](std::vector<GradedArrow>& chain) {
            if (!chain.empty()) {
                GradedArrow total = chain[0];
                long sum = chain[0].degree;
                for (std::size_t i = 1; i < chain.size(); ++i) {
                    total = compose_graded(total, chain[i]);
                    sum += chain[i].degree;
                }
                const long expected =
                    static_cast<long>(chain.front().source->order()) - static_cast<long>(chain.back().target->order());
                s.expect(total.degree == sum && sum == expected, "degree not additive");
                ++chains;
            }
            if (chain.size() == 4)
                return;
            for (const auto& from : graded) {
                if (!chain.empty() && from != chain.back().target)
                    continue;
                for (const auto& to : graded) {
                    if (to->order() >= from->order())
                        continue;
                    for (const auto& f : enumerate_functors(from->category(), to->category())) {
                        chain.push_back(graded_arrow(kind, from, to, f));
                        extend(chain);
                        chain.pop_back();
                    }
                }
                if (!chain.empty())
                    break;
            }
        };
        std::vector<GradedArrow> chain;
        extend(chain);
    }
    s.log << "graded chains: " << chains << "\n";
    if (s.pass)
        s.summary = std::to_string(all.size()) + " opposites keep their order; " + std::to_string(chains) +
                    " composable graded chains (length <= 4) add degrees exactly";
}

// ------------------------------------------------------------------- AC7

void ac7(Suite& s)
{
    auto t = terminal_example();
    const auto singles = singleton_battery();
    auto st = extremal_status(*t, singles);
    s.expect(t->category()->object_count() == 1 && t->category()->morphism_count() == 1 && t->order() == 1,
             "terminal example shape");
    s.expect(st.terminal.holds, "terminal example is not terminal: " + st.terminal.detail);
    s.expect(!st.zero.holds, "terminal example is zero");
    s.log << "terminal: " << st.terminal.holds << " initial: " << st.initial.holds << " zero: " << st.zero.holds << "\n";

    std::vector<EmergenceRef> battery = emergence_battery();
    for (const auto& e : singles)
        battery.push_back(e);
    battery.push_back(t);
    std::size_t maximal = 0;
    for (const auto& e : battery)
        maximal = std::max(maximal, e->order());
    for (const auto& e : battery) {
        auto x = extremal_status(*e, battery);
        s.expect(!x.initial.holds, "initial holds for " + e->name);
        s.expect(!x.zero.holds, "zero holds for " + e->name);
        s.log << e->name << " initial=" << x.initial.holds << " terminal=" << x.terminal.holds
              << " zero=" << x.zero.holds << "\n";
    }
    if (s.pass)
        s.summary = "terminal example verified against " + std::to_string(singles.size()) +
                    " singleton members; initial fails and zero never holds for all " + std::to_string(battery.size()) +
                    " members (maximal order " + std::to_string(maximal) + ")";
}

// ------------------------------------------------------------------- AC8

EmergenceRef find(const std::string& name)
{
    for (const auto& e : emergence_battery())
        if (e->name == name)
            return e;
    throw std::runtime_error("no battery emergence " + name);
}

bool legs_commute(const std::vector<Functor>& legs1, const std::vector<Functor>& legs2, const Functor& t)
{
    for (std::size_t i = 0; i < legs1.size(); ++i)
        if (!oracle::same_maps(oracle::after(legs2[i], t), legs1[i]))
            return false;
    return true;
}

void ac8(Suite& s)
{
    const auto battery = default_battery();
    const std::vector<std::vector<std::string>> triples = {
        {"Z2", "Chain", "Pair"}, {"Point", "Z3", "Consts"}, {"Idem", "Idem", "Lattice3"}, {"Action", "Z2copy", "Point"}};
    auto three = discrete_category("Three", 3);
    for (const auto& names : triples) {
        std::vector<EmergenceRef> es;
        for (const auto& n : names)
            es.push_back(find(n));
        DiagramEmergence d{"D", three, es, {}};
        for (const auto& e : es)
            d.edges.push_back(identity_functor(e->category()));
        auto lim = limit_of_diagram(d);
        auto prod = product_emergence(es);
        auto t = essential_uniqueness(lim.apex->category(), lim.legs, prod.emergence->category(), prod.projections,
                                      ConeVariance::limit);
        const std::string tag = names[0] + "," + names[1] + "," + names[2];
        s.expect(t.has_value(), "discrete limit not isomorphic to product " + tag);
        if (t) {
            s.expect(functor_properties(*t).flags.is_isomorphism && legs_commute(lim.legs, prod.projections, *t),
                     "bad witness " + tag);
            s.log << "discrete " << tag << " witness " << maps(*t) << "\n";
        }
        auto mono = verify_universal(mono_source_candidate(lim.apex->category(), lim.legs), battery);
        s.expect(mono.overall, "limit legs not a mono-source " + tag);
    }

    CategoryBuilder pb("Par");
    pb.object("a");
    pb.object("b");
    pb.morphism("u", "a", "b");
    pb.morphism("v", "a", "b");
    auto par = pb.unit_laws().build();
    std::size_t parallel = 0;
    for (const auto& name : {"Z2", "Pair", "Chain", "Idem", "Z3"}) {
        auto e = find(name);
        auto fs = enumerate_functors(e->category(), e->category());
        for (const auto& f : fs)
            for (const auto& g : fs) {
                DiagramEmergence d{"P", par, {e, e}, {}};
                d.edges = {identity_functor(e->category()), identity_functor(e->category()), f, g};
                if (!validate_diagram(d).ok()) {
                    s.expect(false, "parallel diagram invalid");
                    continue;
                }
                auto lim = limit_of_diagram(d);
                auto eq = equalizer_emergence(*e, {f, g});
                std::vector<Functor> eq_legs{eq.inclusion, compose(f, eq.inclusion)};
                auto t = essential_uniqueness(lim.apex->category(), lim.legs, eq.emergence->category(), eq_legs,
                                              ConeVariance::limit);
                const std::string tag = std::string(name) + " " + maps(f) + " " + maps(g);
                s.expect(t.has_value(), "parallel limit not isomorphic to equalizer " + tag);
                if (t) {
                    s.expect(legs_commute(lim.legs, eq_legs, *t), "bad witness " + tag);
                    s.log << "parallel " << tag << " witness " << maps(*t) << "\n";
                }
                auto mono = verify_universal(mono_source_candidate(lim.apex->category(), lim.legs), battery);
                s.expect(mono.overall, "limit legs not a mono-source " + tag);
                ++parallel;
            }
    }
    if (s.pass)
        s.summary = std::to_string(triples.size()) + " discrete limits = ternary products, " + std::to_string(parallel) +
                    " parallel-pair limits = equalizers, explicit witnesses; all legs mono-sources";
}

// ------------------------------------------------------------------- AC9

void ac9(Suite& s)
{
    auto chain = internal_structure_report(*chain_construct(3));
    s.expect(!chain.terminal_objects.empty(), "3-chain has no terminal object");
    s.expect(chain.has_binary_products, "3-chain lacks binary products");
    s.expect(chain.lattice && chain.lattice->complete, "3-chain not a complete lattice");
    s.expect(chain.finitely_complete, "3-chain not finitely complete");
    s.expect(chain.lattice_equivalence, "3-chain equivalence");
    auto anti = internal_structure_report(*antichain_construct(2));
    s.expect(anti.terminal_objects.empty(), "2-antichain has a terminal object");
    s.expect(!anti.has_binary_products, "2-antichain has binary products");
    s.expect(anti.lattice && !anti.lattice->complete, "2-antichain is a complete lattice");
    s.expect(!anti.finitely_complete, "2-antichain finitely complete");
    s.expect(anti.lattice_equivalence, "2-antichain equivalence");
    s.log << to_json(chain).dump() << "\n" << to_json(anti).dump() << "\n";
    if (s.pass)
        s.summary = "3-chain: terminal, products, complete lattice <=> finitely complete; 2-antichain: all false";
}

// ------------------------------------------------------------------ AC10

void ac10(Suite& s)
{
    AbstractBlockDiagram base;
    base.name = "Bool";
    base.ports = {{"x", numbered_set(2)}, {"y", numbered_set(2)}, {"z", numbered_set(2)}};
    std::size_t factorable = 0;
    for (unsigned bits = 0; bits < 16; ++bits) {
        std::vector<Index> table{bits & 1u, (bits >> 1) & 1u, (bits >> 2) & 1u, (bits >> 3) & 1u};
        auto abd = base;
        abd.components = {{"f", {"x", "y"}, {"z"}, table}};
        const bool got = is_factorable(abd, abd.components[0]).has_value();
        s.expect(got == oracle::factorable({2, 2}, table), "factorability of function " + std::to_string(bits));
        factorable += got;
        s.log << "f" << bits << " factorable=" << got << "\n";
    }
    s.expect(factorable == 6, "expected 6 factorable functions, got " + std::to_string(factorable));

    std::mt19937 rng(1234);
    std::size_t rows = 0;
    for (int i = 0; i < 20; ++i) {
        auto abd = gen::random_abd(rng, "R" + std::to_string(i), 256);
        s.expect(validate_abd(abd).ok(), "random diagram invalid");
        for (const auto& c : abd.components)
            rows = std::max(rows, c.table.size());
        auto c = canonical_form(abd);
        s.expect(canonical_form(c) == c, "canonical form not idempotent on " + abd.name);
        s.expect(oracle::same_behaviour(abd, c), "canonical form changed behaviour of " + abd.name);
        auto r = refine_single_output(abd);
        bool exact = true;
        for (const auto& comp : abd.components) {
            const auto radix = abd.input_radix(comp);
            for (std::size_t t = 0; t < tuple_count(radix); ++t) {
                auto in = decode_tuple(t, radix);
                auto whole = evaluate(abd, comp, in);
                for (std::size_t k = 0; k < comp.outputs.size(); ++k) {
                    const auto name = comp.outputs.size() == 1 ? comp.name : comp.name + "/" + comp.outputs[k];
                    const auto at = r.find_component(name);
                    exact = exact && at != npos && evaluate(r, r.components[at], in).at(0) == whole[k];
                }
            }
        }
        s.expect(exact, "refinement does not recompose on " + abd.name);
        s.log << abd.name << ": " << abd.components.size() << " components, canonical " << c.components.size() << "/"
              << c.ports.size() << "\n";
    }
    s.expect(rows <= 256, "table larger than 256 rows");

    auto abd = base;
    abd.components = {{"f", {"x", "y"}, {"z"}, {0, 1, 1, 0}}};
    auto id = check_set_functor(set_functor_for(abd, {SetFunctorRule::identity, {}}));
    s.expect(id.regular && id.multiplicative, "identity set-functor fails");
    auto empty = check_set_functor(set_functor_for(abd, {SetFunctorRule::empty, {}}));
    s.expect(!empty.regular, "empty collapse passes regularity");
    s.log << "identity regular=" << id.regular << " multiplicative=" << id.multiplicative
          << "; empty regular=" << empty.regular << "\n";
    if (s.pass)
        s.summary = "16 boolean functions, " + std::to_string(factorable) +
                    " factorable (oracle agrees); 20 random diagrams canonical+refine exact; set-functor obligations met";
}

// ------------------------------------------------------------------ AC11

struct Entry {
    int id;
    std::string title;
    std::function<void(Suite&)> run;
    double limit_s; // 0 = no runtime bound
};

std::string cli_reports()
{
    const std::string ws = std::string(TEST_DATA_DIR) + "/cli.emg";
    std::string all;
    for (const auto& cmd : std::vector<std::vector<std::string>>{
             {"construct", "equalizer", "IdG", "Flat", "--verify"},
             {"construct", "product", "E", "G", "--verify", "--json"},
             {"construct", "pullback", "E", "E2", "--verify", "--emit-dot", "-"},
             {"relate", "graded", "partial", "E3", "D32", "E2", "D21", "E"},
             {"internal", "K", "--json"},
             {"abd", "canonical", "Q", "--emit-dot", "-"},
             {"export", "D"}}) {
        std::vector<std::string> args{"-w", ws};
        args.insert(args.end(), cmd.begin(), cmd.end());
        std::ostringstream out, err;
        run_cli(args, out, err);
        all += out.str() + err.str();
    }
    return all;
}

} // namespace

int main()
{
    const std::vector<Entry> entries = {
        {1, "equalizer suite", ac1, 120},        {2, "regular monos", ac2, 0},
        {3, "product/coproduct suites", ac3, 120}, {4, "pullbacks", ac4, 0},
        {5, "relation algebra", ac5, 0},         {6, "orders and degrees", ac6, 0},
        {7, "extremal emergences", ac7, 0},      {8, "limits", ac8, 0},
        {9, "internal structures", ac9, 0},      {10, "ABD suite", ac10, 60},
    };
    bool all = true;
    std::vector<std::string> logs;
    for (const auto& e : entries) {
        Suite s;
        const auto start = std::chrono::steady_clock::now();
        try {
            e.run(s);
        } catch (const std::exception& ex) {
            s.expect(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (e.limit_s > 0 && secs > e.limit_s)
            s.expect(false, "runtime " + std::to_string(secs) + " s over " + std::to_string(e.limit_s) + " s");
        logs.push_back(s.log.str());
        all = all && s.pass;
        std::ostringstream t;
        t.precision(2);
        t << std::fixed << secs;
        std::cout << (s.pass ? "[PASS] " : "[FAIL] ") << "AC" << e.id << " " << e.title << ": " << s.summary << " ("
                  << t.str() << " s)" << std::endl;
    }

    Suite det;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Suite again;
        try {
            entries[i].run(again);
        } catch (const std::exception& ex) {
            again.log << "exception: " << ex.what();
        }
        det.expect(again.log.str() == logs[i], "AC" + std::to_string(entries[i].id) + " log differs on rerun");
    }
    det.expect(cli_reports() == cli_reports(), "CLI reports differ on rerun");
    if (det.pass)
        det.summary = "all 10 suite logs and 7 CLI reports byte-identical on rerun";
    all = all && det.pass;
    std::cout << (det.pass ? "[PASS] " : "[FAIL] ") << "AC11 determinism: " << det.summary << std::endl;
    return all ? 0 : 1;
}
