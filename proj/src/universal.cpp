#include "emergence/universal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace emergence {

std::string to_string(UniversalKind k)
{
    switch (k) {
    case UniversalKind::equalizer:
        return "equalizer";
    case UniversalKind::n_equalizer:
        return "n_equalizer";
    case UniversalKind::product:
        return "product";
    case UniversalKind::coproduct:
        return "coproduct";
    case UniversalKind::pullback:
        return "pullback";
    case UniversalKind::limit:
        return "limit";
    case UniversalKind::coequalizer_candidate:
        return "coequalizer_candidate";
    case UniversalKind::colimit_candidate:
        return "colimit_candidate";
    case UniversalKind::pushout_candidate:
        return "pushout_candidate";
    case UniversalKind::mono_source:
        return "mono_source";
    }
    return "?";
}

bool is_colimit_kind(UniversalKind k)
{
    return k == UniversalKind::coproduct || k == UniversalKind::coequalizer_candidate ||
           k == UniversalKind::colimit_candidate || k == UniversalKind::pushout_candidate;
}

Battery default_battery()
{
    Battery b{"default", {}};
    b.categories.push_back(CategoryBuilder("0").build());
    {
        CategoryBuilder c("1");
        c.object("o");
        b.categories.push_back(c.unit_laws().build());
    }
    {
        CategoryBuilder c("2");
        c.object("a");
        c.object("b");
        c.morphism("f", "a", "b");
        b.categories.push_back(c.unit_laws().build());
    }
    {
        CategoryBuilder c("par");
        c.object("a");
        c.object("b");
        c.morphism("f", "a", "b");
        c.morphism("g", "a", "b");
        b.categories.push_back(c.unit_laws().build());
    }
    {
        CategoryBuilder c("3");
        c.object("x0");
        c.object("x1");
        c.object("x2");
        c.morphism("f", "x0", "x1");
        c.morphism("g", "x1", "x2");
        c.morphism("gf", "x0", "x2");
        c.compose("g", "f", "gf");
        b.categories.push_back(c.unit_laws().build());
    }
    return b;
}

namespace {

using Key = std::vector<Index>;

struct Plan {
    std::vector<Index> free;
    std::vector<std::pair<Index, Index>> derive; // (node, edge)
};

Plan make_plan(const DiagramShape& d, bool colimit)
{
    const std::size_t n = d.nodes.size();
    std::vector<char> determined(n, 0);
    Plan p;
    for (Index i = 0; i < n; ++i) {
        bool has_source = false;
        for (const auto& e : d.edges) {
            Index defined = colimit ? e.from : e.to;
            Index by = colimit ? e.to : e.from;
            if (defined == i && by != i)
                has_source = true;
        }
        if (!has_source) {
            p.free.push_back(i);
            determined[i] = 1;
        }
    }
    for (;;) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (Index k = 0; k < d.edges.size(); ++k) {
                const auto& e = d.edges[k];
                Index defined = colimit ? e.from : e.to;
                Index by = colimit ? e.to : e.from;
                if (determined[by] && !determined[defined]) {
                    determined[defined] = 1;
                    p.derive.push_back({defined, k});
                    progress = true;
                }
            }
        }
        auto it = std::find(determined.begin(), determined.end(), 0);
        if (it == determined.end())
            break;
        Index i = static_cast<Index>(it - determined.begin());
        determined[i] = 1;
        p.free.push_back(i);
    }
    std::sort(p.free.begin(), p.free.end());
    return p;
}

bool edges_hold(const DiagramShape& d, const std::vector<Functor>& s, bool colimit)
{
    for (const auto& e : d.edges) {
        if (colimit) {
            if (!(compose(s[e.to], e.functor) == s[e.from]))
                return false;
        } else if (!(compose(e.functor, s[e.from]) == s[e.to])) {
            return false;
        }
    }
    return true;
}

bool legs_valid(const UniversalCandidate& c, bool colimit, std::vector<std::string>& witness)
{
    if (c.legs.size() != c.diagram.nodes.size()) {
        witness = {"legs", std::to_string(c.legs.size()), std::to_string(c.diagram.nodes.size())};
        return false;
    }
    for (Index i = 0; i < c.legs.size(); ++i) {
        const auto& l = c.legs[i];
        const auto& from = colimit ? c.diagram.nodes[i] : c.apex;
        const auto& to = colimit ? c.apex : c.diagram.nodes[i];
        if (!same_category(l.source, from) || !same_category(l.target, to) || !validate_functor(l).ok()) {
            witness = {"leg", std::to_string(i + 1)};
            return false;
        }
    }
    return true;
}

std::string competitor_label(const FinCategory& x, std::size_t k)
{
    return x.name() + "#" + std::to_string(k);
}

void enumerate_tuples(const std::vector<std::vector<Functor>>& lists, const std::vector<Index>& free,
                      std::vector<Functor>& s, std::size_t depth, const std::function<void()>& done)
{
    if (depth == free.size()) {
        done();
        return;
    }
    for (const auto& f : lists[depth]) {
        s[free[depth]] = f;
        enumerate_tuples(lists, free, s, depth + 1, done);
    }
}

void verify_cones(const UniversalCandidate& c, const Battery& battery, std::uint64_t budget, UniversalVerdict& v)
{
    const bool colimit = is_colimit_kind(c.kind);
    const auto& d = c.diagram;
    const auto& apex = *c.apex;
    Plan plan = make_plan(d, colimit);

    // Lookup of apex objects and morphisms by their leg images (limits).
    std::map<Key, std::vector<Index>> obj_by_key, mor_by_key;
    // Constraints on mediator values induced by legs (colimits).
    std::vector<std::vector<std::pair<Index, Index>>> obj_sources(apex.object_count()),
        mor_sources(apex.morphism_count());
    if (!colimit) {
        for (Index p = 0; p < apex.object_count(); ++p) {
            Key k;
            for (const auto& l : c.legs)
                k.push_back(l.object_map[p]);
            obj_by_key[k].push_back(p);
        }
        for (Index m = 0; m < apex.morphism_count(); ++m) {
            Key k;
            for (const auto& l : c.legs)
                k.push_back(l.morphism_map[m]);
            mor_by_key[k].push_back(m);
        }
    } else {
        for (Index i = 0; i < c.legs.size(); ++i) {
            for (Index a = 0; a < c.legs[i].object_map.size(); ++a)
                obj_sources[c.legs[i].object_map[a]].push_back({i, a});
            for (Index a = 0; a < c.legs[i].morphism_map.size(); ++a)
                mor_sources[c.legs[i].morphism_map[a]].push_back({i, a});
        }
    }

    std::uint64_t work = 0;
    for (const auto& x : battery.categories) {
        std::vector<std::vector<Functor>> lists;
        std::uint64_t tuples = 1;
        for (Index i : plan.free) {
            lists.push_back(colimit ? enumerate_functors(d.nodes[i], x, budget) : enumerate_functors(x, d.nodes[i], budget));
            tuples = sat_mul(tuples, lists.back().size());
        }
        work = sat_add(work, tuples);
        if (work > budget)
            throw BudgetExceeded("competitor cones for " + to_string(c.kind), work, budget);

        std::vector<Functor> s(d.nodes.size());
        std::size_t k = 0;
        enumerate_tuples(lists, plan.free, s, 0, [&] {
            for (const auto& [node, edge] : plan.derive) {
                const auto& e = d.edges[edge];
                s[node] = colimit ? compose(s[e.to], e.functor) : compose(e.functor, s[e.from]);
            }
            if (!edges_hold(d, s, colimit))
                return;
            ++v.competitors;
            SearchOptions options;
            options.budget = budget;
            const auto& xc = *x;
            if (!colimit) {
                options.object_domain.resize(xc.object_count());
                options.morphism_domain.resize(xc.morphism_count());
                Key key(s.size());
                for (Index o = 0; o < xc.object_count(); ++o) {
                    for (Index i = 0; i < s.size(); ++i)
                        key[i] = s[i].object_map[o];
                    auto it = obj_by_key.find(key);
                    if (it != obj_by_key.end())
                        options.object_domain[o] = it->second;
                }
                for (Index m = 0; m < xc.morphism_count(); ++m) {
                    for (Index i = 0; i < s.size(); ++i)
                        key[i] = s[i].morphism_map[m];
                    auto it = mor_by_key.find(key);
                    if (it != mor_by_key.end())
                        options.morphism_domain[m] = it->second;
                }
            } else {
                options.object_domain.resize(apex.object_count());
                options.morphism_domain.resize(apex.morphism_count());
                for (Index p = 0; p < apex.object_count(); ++p) {
                    std::set<Index> values;
                    for (const auto& [i, a] : obj_sources[p])
                        values.insert(s[i].object_map[a]);
                    if (obj_sources[p].empty())
                        for (Index y = 0; y < xc.object_count(); ++y)
                            values.insert(y);
                    if (values.size() == 1 || obj_sources[p].empty())
                        options.object_domain[p].assign(values.begin(), values.end());
                }
                for (Index m = 0; m < apex.morphism_count(); ++m) {
                    std::set<Index> values;
                    for (const auto& [i, a] : mor_sources[m])
                        values.insert(s[i].morphism_map[a]);
                    if (mor_sources[m].empty())
                        for (Index y = 0; y < xc.morphism_count(); ++y)
                            values.insert(y);
                    if (values.size() == 1 || mor_sources[m].empty())
                        options.morphism_domain[m].assign(values.begin(), values.end());
                }
            }
            MediatorRecord r;
            r.competitor = competitor_label(xc, k++);
            auto visit = [&](const Functor& t) {
                ++r.count;
                if (r.count == 1)
                    r.witness = t;
                else
                    r.second = t;
                return r.count < 2;
            };
            if (colimit)
                search_functors(c.apex, x, options, visit);
            else
                search_functors(x, c.apex, options, visit);
            if (r.count != 1 && v.witness.empty())
                v.witness = {r.competitor, r.count == 0 ? "no mediator" : "mediator not unique"};
            v.mediators.push_back(std::move(r));
        });
    }
}

void verify_mono(const UniversalCandidate& c, const Battery& battery, std::uint64_t budget, UniversalVerdict& v)
{
    for (const auto& l : c.legs)
        if (!same_category(l.source, c.apex) || !validate_functor(l).ok()) {
            v.commutes = false;
            v.witness = {"leg does not start at the apex"};
            return;
        }
    for (const auto& x : battery.categories) {
        std::map<Key, Functor> seen;
        std::size_t k = 0;
        search_functors(x, c.apex, [&] {
            SearchOptions o;
            o.budget = budget;
            return o;
        }(), [&](const Functor& r) {
            ++v.competitors;
            Key key;
            for (const auto& l : c.legs) {
                auto lr = compose(l, r);
                key.insert(key.end(), lr.object_map.begin(), lr.object_map.end());
                key.push_back(npos);
                key.insert(key.end(), lr.morphism_map.begin(), lr.morphism_map.end());
                key.push_back(npos);
            }
            auto [it, inserted] = seen.emplace(key, r);
            if (!inserted) {
                MediatorRecord rec{competitor_label(*x, k), 2, it->second, r};
                if (v.witness.empty())
                    v.witness = {rec.competitor, "distinct functors agree after every leg"};
                v.mediators.push_back(std::move(rec));
            }
            ++k;
            return true;
        });
    }
}

} // namespace

UniversalVerdict verify_universal(const UniversalCandidate& candidate, const Battery& battery, std::uint64_t budget)
{
    UniversalVerdict v;
    v.kind = to_string(candidate.kind);
    v.note = "relative to battery " + battery.name;
    try {
        if (candidate.kind == UniversalKind::mono_source) {
            v.commutes = true;
            verify_mono(candidate, battery, budget, v);
            v.overall = v.commutes && v.witness.empty();
            return v;
        }
        const bool colimit = is_colimit_kind(candidate.kind);
        if (!legs_valid(candidate, colimit, v.witness))
            return v;
        v.commutes = edges_hold(candidate.diagram, candidate.legs, colimit);
        if (!v.commutes) {
            v.witness = {"cone does not commute with the diagram"};
            return v;
        }
        verify_cones(candidate, battery, budget, v);
        v.overall = v.witness.empty();
    } catch (const BudgetExceeded& e) {
        v.inconclusive = true;
        v.overall = false;
        v.note = std::string("inconclusive: ") + e.what();
    }
    return v;
}

UniversalVerdict verify_epi(const Functor& f, const Battery& battery, std::uint64_t budget)
{
    UniversalVerdict v;
    v.kind = "epi";
    v.commutes = true;
    v.note = "epi (battery-relative), right cancellation over battery " + battery.name;
    try {
        for (const auto& x : battery.categories) {
            std::map<Key, Functor> seen;
            std::size_t k = 0;
            SearchOptions o;
            o.budget = budget;
            search_functors(f.target, x, o, [&](const Functor& h) {
                ++v.competitors;
                auto hf = compose(h, f);
                Key key = hf.object_map;
                key.push_back(npos);
                key.insert(key.end(), hf.morphism_map.begin(), hf.morphism_map.end());
                auto [it, inserted] = seen.emplace(key, h);
                if (!inserted) {
                    MediatorRecord rec{competitor_label(*x, k), 2, it->second, h};
                    if (v.witness.empty())
                        v.witness = {rec.competitor, "distinct functors agree after precomposition"};
                    v.mediators.push_back(std::move(rec));
                }
                ++k;
                return true;
            });
        }
        v.overall = v.witness.empty();
    } catch (const BudgetExceeded& e) {
        v.inconclusive = true;
        v.note = std::string("inconclusive: ") + e.what();
    }
    return v;
}

UniversalCandidate equalizer_candidate(const Functor& inclusion, const std::vector<Functor>& fs)
{
    if (fs.empty())
        throw StructuralError("equalizer needs at least one functor");
    UniversalCandidate c{fs.size() > 2 ? UniversalKind::n_equalizer : UniversalKind::equalizer, {}, inclusion.source, {}};
    c.diagram.nodes = {fs[0].source, fs[0].target};
    for (const auto& f : fs)
        c.diagram.edges.push_back({0, 1, f});
    c.legs = {inclusion, compose(fs[0], inclusion)};
    return c;
}

UniversalCandidate coequalizer_candidate(const Functor& quotient, const std::vector<Functor>& fs)
{
    if (fs.empty())
        throw StructuralError("co-equalizer needs at least one functor");
    UniversalCandidate c{UniversalKind::coequalizer_candidate, {}, quotient.target, {}};
    c.diagram.nodes = {fs[0].source, fs[0].target};
    for (const auto& f : fs)
        c.diagram.edges.push_back({0, 1, f});
    c.legs = {compose(quotient, fs[0]), quotient};
    return c;
}

UniversalCandidate product_candidate(const CategoryRef& apex, const std::vector<Functor>& projections)
{
    UniversalCandidate c{UniversalKind::product, {}, apex, projections};
    for (const auto& p : projections)
        c.diagram.nodes.push_back(p.target);
    return c;
}

UniversalCandidate coproduct_candidate(const CategoryRef& apex, const std::vector<Functor>& injections)
{
    UniversalCandidate c{UniversalKind::coproduct, {}, apex, injections};
    for (const auto& p : injections)
        c.diagram.nodes.push_back(p.source);
    return c;
}

UniversalCandidate pullback_candidate(const Functor& to_a, const Functor& to_b, const Functor& f, const Functor& g)
{
    UniversalCandidate c{UniversalKind::pullback, {}, to_a.source, {}};
    c.diagram.nodes = {f.source, g.source, f.target};
    c.diagram.edges = {{0, 2, f}, {1, 2, g}};
    c.legs = {to_a, to_b, compose(f, to_a)};
    return c;
}

UniversalCandidate pushout_candidate(const Functor& from_a, const Functor& from_b, const Functor& f, const Functor& g)
{
    UniversalCandidate c{UniversalKind::pushout_candidate, {}, from_a.target, {}};
    c.diagram.nodes = {f.source, f.target, g.target};
    c.diagram.edges = {{0, 1, f}, {0, 2, g}};
    c.legs = {compose(from_a, f), from_a, from_b};
    return c;
}

UniversalCandidate mono_source_candidate(const CategoryRef& apex, const std::vector<Functor>& legs)
{
    return {UniversalKind::mono_source, {}, apex, legs};
}

EqualizerResult equalizer_emergence(const Emergence& a, const std::vector<Functor>& fs, const std::string& name)
{
    if (fs.size() < 2)
        throw ConstructionError("equalizer needs at least two functors");
    for (const auto& f : fs) {
        if (!same_category(f.source, a.category()) || !same_category(f.target, fs[0].target))
            throw ConstructionError("equalizer functors are not parallel out of " + a.name);
        if (!validate_functor(f).ok())
            throw ConstructionError("equalizer input is not a functor");
    }
    const auto& c = *a.category();
    std::vector<Index> objs, mors;
    for (Index o = 0; o < c.object_count(); ++o)
        if (std::all_of(fs.begin(), fs.end(), [&](const Functor& f) { return f.object_map[o] == fs[0].object_map[o]; }))
            objs.push_back(o);
    for (Index m = 0; m < c.morphism_count(); ++m)
        if (std::all_of(fs.begin(), fs.end(), [&](const Functor& f) { return f.morphism_map[m] == fs[0].morphism_map[m]; }))
            mors.push_back(m);
    auto [e, inclusion] = restrict_emergence(a, objs, mors, name.empty() ? "Eq(" + a.name + ")" : name);
    return {e, inclusion, objs.empty()};
}

EqualizerResult stabilizer(const Emergence& e, const UnderlyingFunctor& u1, const UnderlyingFunctor& u2,
                           std::uint64_t budget)
{
    auto r1 = validate_set_assignment(u1.assignment());
    auto r2 = validate_set_assignment(u2.assignment());
    if (!r1.ok() || !r2.ok())
        throw ConstructionError("stabilizer inputs are not functors into sets");
    auto realized = realize({u1.assignment(), u2.assignment()}, {}, budget);
    return equalizer_emergence(e, realized.functors, "Stab(" + e.name + ")");
}

namespace {

RealizedFunctors realize_composites(const Emergence& b, const Functor& f, const Functor& g, std::uint64_t budget)
{
    auto through = [&](const Functor& h) {
        SetAssignment s{h.source, {}, {}};
        for (Index o : h.object_map)
            s.sets.push_back(b.underlying.sets[o]);
        for (Index m : h.morphism_map)
            s.functions.push_back(b.underlying.functions[m]);
        return s;
    };
    return realize({through(f), through(g), b.underlying.assignment()}, {}, budget);
}

} // namespace

EqualizerResult strong_equalizer_emergence(const Emergence& a, const Emergence& b, const Functor& f, const Functor& g,
                                           std::uint64_t budget)
{
    auto r = realize_composites(b, f, g, budget);
    return equalizer_emergence(a, {r.functors[0], r.functors[1]}, "SEq(" + a.name + ")");
}

StrongEqualizerVerdict check_strong_equalizer(const Functor& inclusion, const Functor& f, const Functor& g,
                                              const Emergence& a, const Emergence& b, const Battery& battery,
                                              std::uint64_t budget)
{
    StrongEqualizerVerdict out;
    out.plain = verify_universal(equalizer_candidate(inclusion, {f, g}), battery, budget);
    auto r = realize_composites(b, f, g, budget);
    out.strong = verify_universal(equalizer_candidate(inclusion, {r.functors[0], r.functors[1]}), battery, budget);
    out.u_embedding = functor_properties(r.functors[2]).flags.embedding;
    out.homomorphisms = check_morphism(f, a, b, HomMode::hom).holds && check_morphism(g, a, b, HomMode::hom).holds;
    out.isomorphism_required = out.u_embedding && out.homomorphisms;
    out.is_isomorphism = functor_properties(inclusion).flags.is_isomorphism;
    out.overall = out.strong.overall && (!out.isomorphism_required || out.is_isomorphism);
    return out;
}

namespace {

TagSet drop_distributes(const TagSet& tags)
{
    TagSet out;
    for (const auto& t : tags)
        if (t.tag != Tag::distributes_over)
            out.insert(t);
    return out;
}

TagSet rename_distributes(const TagSet& tags, const std::string& prefix)
{
    TagSet out;
    for (auto t : tags) {
        if (t.tag == Tag::distributes_over)
            t.other = prefix + t.other;
        out.insert(t);
    }
    return out;
}

void require_valid(const Construct& c, const std::string& what)
{
    auto report = validate_construct(c);
    if (!report.ok())
        throw ConstructionError(what + " does not yield a construct: " + report.summary());
}

} // namespace

ProductResult product_emergence(const std::vector<EmergenceRef>& es, std::uint64_t budget, const std::string& name)
{
    if (es.empty())
        throw ConstructionError("product of an empty family");
    for (const auto& e : es)
        if (e->kind != EmergenceKind::standard)
            throw ModeMismatch("product construction requires standard emergences; " + e->name + " is semi");
    ProductResult out;
    out.factors = es;
    if (es.size() == 1) {
        out.emergence = es[0];
        out.projections = {identity_functor(es[0]->category())};
        return out;
    }
    std::vector<CategoryRef> cats;
    std::string label;
    for (Index i = 0; i < es.size(); ++i) {
        cats.push_back(es[i]->category());
        label += (i ? "x" : "") + es[i]->name;
    }
    auto pc = product_category(cats, budget);
    const auto& cat = *pc.category;
    const std::size_t n = es.size();

    Construct c;
    c.name = name.empty() ? "(" + label + ")" : name;
    c.category = pc.category;
    for (Index i = 0; i < n; ++i)
        for (const auto& s : es[i]->signature().slots)
            c.signature.slots.push_back(
                {std::to_string(i + 1) + "." + s.name, s.kind, drop_distributes(s.tags), s.scalars});

    // Carrier of a tuple object, with the position of every coordinate tuple.
    struct TupleCarrier {
        FinSet set;
        std::vector<Index> position; // mixed radix over factor carrier positions
        std::vector<std::size_t> radix;
    };
    auto tuple_carrier = [&](const std::vector<Index>& coords) {
        TupleCarrier t;
        std::size_t total = 1;
        for (Index i = 0; i < n; ++i) {
            t.radix.push_back(es[i]->construct->carriers[coords[i]].size());
            total *= t.radix.back();
        }
        std::vector<std::string> labels;
        std::vector<Index> digits(n);
        for (std::size_t k = 0; k < total; ++k) {
            std::size_t r = k;
            for (std::size_t i = n; i-- > 0;) {
                digits[i] = r % t.radix[i];
                r /= t.radix[i];
            }
            std::vector<std::string> parts;
            for (Index i = 0; i < n; ++i)
                parts.push_back(es[i]->construct->carriers[coords[i]][digits[i]]);
            labels.push_back(tuple_label(parts));
        }
        t.set = FinSet(labels);
        if (t.set.size() != total)
            throw ConstructionError("product carrier labels collide; element labels contain tuple syntax");
        for (const auto& l : labels)
            t.position.push_back(t.set.index_of(l));
        return t;
    };
    auto split = [](std::size_t k, const std::vector<std::size_t>& radix) {
        std::vector<Index> d(radix.size());
        for (std::size_t i = radix.size(); i-- > 0;) {
            d[i] = k % radix[i];
            k /= radix[i];
        }
        return d;
    };
    auto join = [](const std::vector<Index>& d, const std::vector<std::size_t>& radix) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < radix.size(); ++i)
            k = k * radix[i] + d[i];
        return k;
    };

    std::vector<TupleCarrier> tcs;
    for (Index o = 0; o < cat.object_count(); ++o) {
        auto coords = pc.object_coords(o);
        auto tc = tuple_carrier(coords);
        c.carriers.push_back(tc.set);
        std::vector<OperationTable> tables;
        const std::size_t size = tc.set.size();
        for (Index i = 0; i < n; ++i) {
            const auto& fc = *es[i]->construct;
            for (Index s = 0; s < fc.signature.size(); ++s) {
                const auto& ft = fc.structure[coords[i]][s];
                const auto& slot = fc.signature.slots[s];
                OperationTable t{slot.kind, tc.set, slot.scalars, {}, drop_distributes(slot.tags)};
                if (slot.kind == OpKind::internal) {
                    t.table.assign(size * size, 0);
                    for (std::size_t x = 0; x < size; ++x)
                        for (std::size_t y = 0; y < size; ++y) {
                            auto dx = split(x, tc.radix), dy = split(y, tc.radix), dz = dx;
                            for (Index j = 0; j < n; ++j)
                                dz[j] = j == i ? ft.apply(dx[j], dy[j]) : (dx[j] + dy[j]) % tc.radix[j];
                            t.table[tc.position[x] * size + tc.position[y]] = tc.position[join(dz, tc.radix)];
                        }
                } else {
                    t.table.assign(slot.scalars.size() * size, 0);
                    for (std::size_t k = 0; k < slot.scalars.size(); ++k)
                        for (std::size_t x = 0; x < size; ++x) {
                            auto dx = split(x, tc.radix);
                            dx[i] = ft.apply(k, dx[i]);
                            t.table[k * size + tc.position[x]] = tc.position[join(dx, tc.radix)];
                        }
                }
                tables.push_back(std::move(t));
            }
        }
        c.structure.push_back(std::move(tables));
        tcs.push_back(std::move(tc));
    }

    UnderlyingFunctor u;
    u.sets = c.carriers;
    for (Index m = 0; m < cat.morphism_count(); ++m) {
        auto coords = pc.morphism_coords(m);
        const auto& mm = cat.morphism(m);
        const auto& src = tcs[mm.dom];
        const auto& dst = tcs[mm.cod];
        FinFunction standard{src.set, dst.set, std::vector<Index>(src.set.size())};
        FinFunction gu = standard;
        for (std::size_t x = 0; x < src.set.size(); ++x) {
            auto d = split(x, src.radix), ds = d, dg = d;
            for (Index i = 0; i < n; ++i) {
                ds[i] = es[i]->construct->underlying[coords[i]].table[d[i]];
                dg[i] = es[i]->underlying.functions[coords[i]].table[d[i]];
            }
            standard.table[src.position[x]] = dst.position[join(ds, dst.radix)];
            gu.table[src.position[x]] = dst.position[join(dg, dst.radix)];
        }
        c.underlying.push_back(std::move(standard));
        u.functions.push_back(std::move(gu));
    }
    auto construct = make_construct(std::move(c));
    require_valid(*construct, "product");
    out.emergence = make_emergence(construct->name, construct, std::move(u));
    out.projections = pc.projections;
    for (auto& p : out.projections)
        p.source = construct->category;
    return out;
}

CoproductResult coproduct_emergence(const std::vector<EmergenceRef>& es, const std::string& name)
{
    if (es.empty())
        throw ConstructionError("coproduct of an empty family");
    CoproductResult out;
    if (es.size() == 1) {
        out.emergence = es[0];
        out.injections = {identity_functor(es[0]->category())};
        return out;
    }
    bool semi = false;
    std::string label;
    for (Index i = 0; i < es.size(); ++i) {
        semi = semi || es[i]->kind == EmergenceKind::semi;
        label += (i ? "+" : "") + es[i]->name;
        if (!(es[i]->signature() == es[0]->signature()))
            out.shared_signature = false;
    }
    const std::string cname = name.empty() ? "(" + label + ")" : name;

    std::vector<std::string> objects;
    std::vector<Morphism> mors;
    std::vector<Index> ids;
    std::vector<Index> obase, mbase;
    for (Index i = 0; i < es.size(); ++i) {
        const auto& c = *es[i]->category();
        obase.push_back(objects.size());
        mbase.push_back(mors.size());
        const std::string tag = std::to_string(i + 1);
        for (Index o = 0; o < c.object_count(); ++o)
            objects.push_back(tuple_label({c.object(o), tag}));
        for (Index m = 0; m < c.morphism_count(); ++m)
            mors.push_back({tuple_label({c.morphism(m).name, tag}), obase[i] + c.morphism(m).dom,
                            obase[i] + c.morphism(m).cod});
        for (Index o = 0; o < c.object_count(); ++o)
            ids.push_back(mbase[i] + c.identity(o));
    }
    const std::size_t mtotal = mors.size();
    std::vector<Index> table(mtotal * mtotal, npos);
    for (Index i = 0; i < es.size(); ++i) {
        const auto& c = *es[i]->category();
        for (Index g = 0; g < c.morphism_count(); ++g)
            for (Index f = 0; f < c.morphism_count(); ++f) {
                Index h = c.compose(g, f);
                if (h != npos)
                    table[(mbase[i] + g) * mtotal + mbase[i] + f] = mbase[i] + h;
            }
    }
    auto cat = std::make_shared<const FinCategory>(cname, std::move(objects), std::move(mors), std::move(ids),
                                                   std::move(table));

    Construct c;
    c.name = cname;
    c.category = cat;
    if (out.shared_signature) {
        c.signature = es[0]->signature();
    } else {
        for (Index i = 0; i < es.size(); ++i)
            for (const auto& s : es[i]->signature().slots)
                c.signature.slots.push_back(
                    {std::to_string(i + 1) + "." + s.name, s.kind, drop_distributes(s.tags), s.scalars});
    }
    UnderlyingFunctor u;
    for (Index i = 0; i < es.size(); ++i) {
        const auto& fc = *es[i]->construct;
        for (Index o = 0; o < fc.category->object_count(); ++o) {
            c.carriers.push_back(fc.carriers[o]);
            u.sets.push_back(es[i]->underlying.sets[o]);
            if (out.shared_signature) {
                c.structure.push_back(fc.structure[o]);
                continue;
            }
            std::vector<OperationTable> tables;
            for (Index j = 0; j < es.size(); ++j) {
                for (Index s = 0; s < es[j]->signature().size(); ++s) {
                    const auto& slot = es[j]->signature().slots[s];
                    if (j == i) {
                        auto t = fc.structure[o][s];
                        t.tags = drop_distributes(t.tags);
                        tables.push_back(std::move(t));
                    } else if (slot.kind == OpKind::internal) {
                        tables.push_back(cyclic_addition(fc.carriers[o], drop_distributes(slot.tags)));
                    } else {
                        tables.push_back(trivial_action(fc.carriers[o], slot.scalars, drop_distributes(slot.tags)));
                    }
                }
            }
            c.structure.push_back(std::move(tables));
        }
        for (Index m = 0; m < fc.category->morphism_count(); ++m) {
            c.underlying.push_back(fc.underlying[m]);
            u.functions.push_back(es[i]->underlying.functions[m]);
        }
    }
    auto construct = make_construct(std::move(c));
    require_valid(*construct, "coproduct");
    out.emergence = make_emergence(cname, construct, std::move(u), semi ? EmergenceKind::semi : EmergenceKind::standard);
    for (Index i = 0; i < es.size(); ++i) {
        const auto& fc = *es[i]->category();
        Functor inj{es[i]->category(), cat, {}, {}};
        for (Index o = 0; o < fc.object_count(); ++o)
            inj.object_map.push_back(obase[i] + o);
        for (Index m = 0; m < fc.morphism_count(); ++m)
            inj.morphism_map.push_back(mbase[i] + m);
        out.injections.push_back(std::move(inj));
    }
    return out;
}

PullbackResult pullback_emergence(const Emergence& a, const Emergence& b, std::uint64_t budget, const std::string& name)
{
    const auto& ca = *a.category();
    const auto& cb = *b.category();
    const bool shared = a.kind == EmergenceKind::standard && b.kind == EmergenceKind::standard;
    const std::string pname = name.empty() ? "P(" + a.name + "," + b.name + ")" : name;

    std::vector<std::pair<Index, Index>> objs, mors;
    for (Index x = 0; x < ca.object_count(); ++x)
        for (Index y = 0; y < cb.object_count(); ++y)
            if (a.underlying.sets[x] == b.underlying.sets[y])
                objs.push_back({x, y});
    for (Index f = 0; f < ca.morphism_count(); ++f)
        for (Index g = 0; g < cb.morphism_count(); ++g)
            if (a.underlying.functions[f] == b.underlying.functions[g])
                mors.push_back({f, g});
    std::map<std::pair<Index, Index>, Index> oindex, mindex;
    for (Index i = 0; i < objs.size(); ++i)
        oindex[objs[i]] = i;
    for (Index i = 0; i < mors.size(); ++i)
        mindex[mors[i]] = i;

    std::vector<std::string> onames;
    std::vector<Morphism> ms;
    std::vector<Index> ids;
    for (const auto& [x, y] : objs) {
        onames.push_back(tuple_label({ca.object(x), cb.object(y)}));
        ids.push_back(mindex.at({ca.identity(x), cb.identity(y)}));
    }
    for (const auto& [f, g] : mors)
        ms.push_back({tuple_label({ca.morphism(f).name, cb.morphism(g).name}),
                      oindex.at({ca.morphism(f).dom, cb.morphism(g).dom}),
                      oindex.at({ca.morphism(f).cod, cb.morphism(g).cod})});
    const std::size_t m = mors.size();
    std::vector<Index> table(m * m, npos);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            Index f = ca.compose(mors[i].first, mors[j].first);
            Index g = cb.compose(mors[i].second, mors[j].second);
            if (f != npos && g != npos)
                table[i * m + j] = mindex.at({f, g});
        }
    auto cat = std::make_shared<const FinCategory>(pname, std::move(onames), std::move(ms), std::move(ids), std::move(table));

    Construct c;
    c.name = pname;
    c.category = cat;
    const auto& sa = a.construct->signature;
    const auto& sb = b.construct->signature;
    for (const auto& s : sa.slots)
        c.signature.slots.push_back({"1." + s.name, s.kind, rename_distributes(s.tags, "1."), s.scalars});
    if (shared)
        for (const auto& s : sb.slots)
            c.signature.slots.push_back({"2." + s.name, s.kind, rename_distributes(s.tags, "2."), s.scalars});
    UnderlyingFunctor u;
    for (const auto& [x, y] : objs) {
        c.carriers.push_back(a.construct->carriers[x]);
        std::vector<OperationTable> tables;
        for (auto t : a.construct->structure[x]) {
            t.tags = rename_distributes(t.tags, "1.");
            tables.push_back(std::move(t));
        }
        if (shared)
            for (auto t : b.construct->structure[y]) {
                t.tags = rename_distributes(t.tags, "2.");
                tables.push_back(std::move(t));
            }
        c.structure.push_back(std::move(tables));
        u.sets.push_back(a.underlying.sets[x]);
    }
    for (const auto& [f, g] : mors) {
        c.underlying.push_back(shared ? a.underlying.functions[f] : a.construct->underlying[f]);
        u.functions.push_back(a.underlying.functions[f]);
    }
    auto construct = make_construct(std::move(c));
    if (shared)
        require_valid(*construct, "pullback");

    PullbackResult out;
    out.mode = shared ? "shared-carrier" : "left-structure";
    out.empty = objs.empty();
    out.emergence = shared ? make_emergence(pname, construct)
                           : make_emergence(pname, construct, std::move(u), EmergenceKind::semi);
    out.to_a = Functor{cat, a.category(), {}, {}};
    out.to_b = Functor{cat, b.category(), {}, {}};
    for (const auto& [x, y] : objs) {
        out.to_a.object_map.push_back(x);
        out.to_b.object_map.push_back(y);
    }
    for (const auto& [f, g] : mors) {
        out.to_a.morphism_map.push_back(f);
        out.to_b.morphism_map.push_back(g);
    }
    auto r = realize({a.underlying.assignment(), b.underlying.assignment()}, {}, budget);
    out.fragment = std::move(r.fragment);
    out.ua = std::move(r.functors[0]);
    out.ub = std::move(r.functors[1]);
    return out;
}

ValidationReport validate_diagram(const DiagramEmergence& d)
{
    const auto& s = *d.scheme;
    if (d.nodes.size() != s.object_count() || d.edges.size() != s.morphism_count())
        throw StructuralError("diagram " + d.name + " does not assign every scheme object and morphism");
    ValidationReport report;
    for (Index m = 0; m < s.morphism_count(); ++m) {
        const auto& mm = s.morphism(m);
        const auto& f = d.edges[m];
        if (!same_category(f.source, d.nodes[mm.dom]->category()) || !same_category(f.target, d.nodes[mm.cod]->category())) {
            report.add("edge-endpoints", {mm.name});
            continue;
        }
        auto fr = validate_functor(f);
        if (!fr.ok())
            report.merge(fr, "edge." + mm.name);
    }
    if (!report.ok())
        return report;
    for (Index o = 0; o < s.object_count(); ++o)
        if (!(d.edges[s.identity(o)] == identity_functor(d.nodes[o]->category())))
            report.add("identity", {s.object(o)}, "identity arrow not sent to the identity functor");
    for (Index g = 0; g < s.morphism_count(); ++g)
        for (Index f = 0; f < s.morphism_count(); ++f) {
            Index h = s.compose(g, f);
            if (h != npos && !(compose(d.edges[g], d.edges[f]) == d.edges[h]))
                report.add("composition", {s.morphism(g).name, s.morphism(f).name});
        }
    return report;
}

DiagramShape shape_of(const DiagramEmergence& d)
{
    DiagramShape shape;
    for (const auto& n : d.nodes)
        shape.nodes.push_back(n->category());
    const auto& s = *d.scheme;
    for (Index m = 0; m < s.morphism_count(); ++m)
        if (!s.is_identity(m))
            shape.edges.push_back({s.morphism(m).dom, s.morphism(m).cod, d.edges[m]});
    return shape;
}

SourceEmergence limit_of_diagram(const DiagramEmergence& d, std::uint64_t budget, const std::string& name)
{
    auto report = validate_diagram(d);
    if (!report.ok())
        throw ConstructionError("diagram " + d.name + " is not a quasi-functor: " + report.summary());
    if (d.nodes.empty())
        throw ConstructionError("limit of an empty diagram");
    auto product = product_emergence(d.nodes, budget);
    const auto& pcat = *product.emergence->category();
    auto shape = shape_of(d);
    std::vector<Index> objs, mors;
    for (Index o = 0; o < pcat.object_count(); ++o) {
        bool ok = true;
        for (const auto& e : shape.edges)
            ok = ok && e.functor.object_map[product.projections[e.from].object_map[o]] ==
                           product.projections[e.to].object_map[o];
        if (ok)
            objs.push_back(o);
    }
    for (Index m = 0; m < pcat.morphism_count(); ++m) {
        bool ok = true;
        for (const auto& e : shape.edges)
            ok = ok && e.functor.morphism_map[product.projections[e.from].morphism_map[m]] ==
                           product.projections[e.to].morphism_map[m];
        if (ok)
            mors.push_back(m);
    }
    auto [apex, inclusion] =
        restrict_emergence(*product.emergence, objs, mors, name.empty() ? "Lim(" + d.name + ")" : name);
    SourceEmergence out;
    out.apex = apex;
    out.targets = d.nodes;
    for (const auto& p : product.projections)
        out.legs.push_back(compose(p, inclusion));
    return out;
}

std::optional<Functor> essential_uniqueness(const CategoryRef& apex1, const std::vector<Functor>& legs1,
                                            const CategoryRef& apex2, const std::vector<Functor>& legs2,
                                            ConeVariance variance, std::uint64_t budget)
{
    if (legs1.size() != legs2.size())
        throw StructuralError("essential uniqueness needs the same number of legs");
    SearchOptions options;
    options.budget = budget;
    options.bijective = true;
    const auto& a1 = *apex1;
    const auto& a2 = *apex2;
    options.object_domain.resize(a1.object_count());
    options.morphism_domain.resize(a1.morphism_count());
    if (variance == ConeVariance::limit) {
        for (Index p = 0; p < a1.object_count(); ++p)
            for (Index q = 0; q < a2.object_count(); ++q) {
                bool ok = true;
                for (Index i = 0; i < legs1.size() && ok; ++i)
                    ok = legs2[i].object_map[q] == legs1[i].object_map[p];
                if (ok)
                    options.object_domain[p].push_back(q);
            }
        for (Index p = 0; p < a1.morphism_count(); ++p)
            for (Index q = 0; q < a2.morphism_count(); ++q) {
                bool ok = true;
                for (Index i = 0; i < legs1.size() && ok; ++i)
                    ok = legs2[i].morphism_map[q] == legs1[i].morphism_map[p];
                if (ok)
                    options.morphism_domain[p].push_back(q);
            }
    } else {
        std::vector<std::set<Index>> ov(a1.object_count()), mv(a1.morphism_count());
        std::vector<char> oc(a1.object_count(), 0), mc(a1.morphism_count(), 0);
        for (Index i = 0; i < legs1.size(); ++i) {
            for (Index x = 0; x < legs1[i].object_map.size(); ++x) {
                ov[legs1[i].object_map[x]].insert(legs2[i].object_map[x]);
                oc[legs1[i].object_map[x]] = 1;
            }
            for (Index x = 0; x < legs1[i].morphism_map.size(); ++x) {
                mv[legs1[i].morphism_map[x]].insert(legs2[i].morphism_map[x]);
                mc[legs1[i].morphism_map[x]] = 1;
            }
        }
        for (Index p = 0; p < a1.object_count(); ++p) {
            if (!oc[p])
                for (Index q = 0; q < a2.object_count(); ++q)
                    options.object_domain[p].push_back(q);
            else if (ov[p].size() == 1)
                options.object_domain[p].push_back(*ov[p].begin());
        }
        for (Index p = 0; p < a1.morphism_count(); ++p) {
            if (!mc[p])
                for (Index q = 0; q < a2.morphism_count(); ++q)
                    options.morphism_domain[p].push_back(q);
            else if (mv[p].size() == 1)
                options.morphism_domain[p].push_back(*mv[p].begin());
        }
    }
    std::optional<Functor> found;
    search_functors(apex1, apex2, options, [&](const Functor& t) {
        found = t;
        return false;
    });
    return found;
}

InternalReport internal_structure_report(const Construct& construct, std::uint64_t budget)
{
    const auto& c = *construct.category;
    const std::size_t n = c.object_count();
    InternalReport r;
    r.thin = c.thin();
    std::uint64_t work = 0;
    auto spend = [&](std::uint64_t units) {
        work = sat_add(work, units);
        if (work > budget)
            throw BudgetExceeded("internal structure report", work, budget);
    };

    for (Index t = 0; t < n; ++t) {
        bool terminal = true;
        for (Index x = 0; x < n && terminal; ++x)
            terminal = c.hom(x, t).size() == 1;
        if (terminal)
            r.terminal_objects.push_back(c.object(t));
    }

    r.has_binary_products = true;
    for (Index a = 0; a < n; ++a)
        for (Index b = a; b < n; ++b) {
            InternalProduct ip{c.object(a), c.object(b), std::nullopt, {}, {}};
            for (Index p = 0; p < n && !ip.apex; ++p)
                for (Index p1 : c.hom(p, a)) {
                    for (Index p2 : c.hom(p, b)) {
                        bool universal = true;
                        for (Index x = 0; x < n && universal; ++x) {
                            spend(c.hom(x, a).size() * c.hom(x, b).size() * (c.hom(x, p).size() + 1));
                            for (Index f : c.hom(x, a))
                                for (Index g : c.hom(x, b)) {
                                    std::size_t count = 0;
                                    for (Index u : c.hom(x, p))
                                        if (c.compose(p1, u) == f && c.compose(p2, u) == g)
                                            ++count;
                                    if (count != 1)
                                        universal = false;
                                }
                        }
                        if (universal) {
                            ip.apex = c.object(p);
                            ip.first = c.morphism(p1).name;
                            ip.second = c.morphism(p2).name;
                            break;
                        }
                    }
                    if (ip.apex)
                        break;
                }
            if (!ip.apex)
                r.has_binary_products = false;
            r.products.push_back(std::move(ip));
        }

    r.has_equalizers = true;
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
            const auto& h = c.hom(a, b);
            for (std::size_t i = 0; i < h.size(); ++i)
                for (std::size_t j = i; j < h.size(); ++j) {
                    Index f = h[i], g = h[j];
                    InternalEqualizer ie{c.morphism(f).name, c.morphism(g).name, std::nullopt, {}};
                    for (Index e = 0; e < n && !ie.object; ++e)
                        for (Index em : c.hom(e, a)) {
                            if (c.compose(f, em) != c.compose(g, em))
                                continue;
                            bool universal = true;
                            for (Index x = 0; x < n && universal; ++x) {
                                spend(c.hom(x, a).size() * (c.hom(x, e).size() + 1));
                                for (Index k : c.hom(x, a)) {
                                    if (c.compose(f, k) != c.compose(g, k))
                                        continue;
                                    std::size_t count = 0;
                                    for (Index u : c.hom(x, e))
                                        if (c.compose(em, u) == k)
                                            ++count;
                                    if (count != 1)
                                        universal = false;
                                }
                            }
                            if (universal) {
                                ie.object = c.object(e);
                                ie.inclusion = c.morphism(em).name;
                                break;
                            }
                        }
                    if (!ie.object)
                        r.has_equalizers = false;
                    r.equalizers.push_back(std::move(ie));
                }
        }
    r.finitely_complete = !r.terminal_objects.empty() && r.has_binary_products && r.has_equalizers;

    if (r.thin) {
        LatticeCheck lc;
        lc.complete = true;
        if (n >= 63 || (std::uint64_t{1} << n) > budget)
            throw BudgetExceeded("complete-lattice check over all subsets", n >= 63 ? budget + 1 : std::uint64_t{1} << n,
                                 budget);
        auto le = [&](Index x, Index y) { return !c.hom(x, y).empty(); };
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && lc.complete; ++mask) {
            spend(n * n);
            std::vector<Index> s;
            for (Index i = 0; i < n; ++i)
                if (mask >> i & 1)
                    s.push_back(i);
            std::vector<Index> lower, upper;
            for (Index x = 0; x < n; ++x) {
                if (std::all_of(s.begin(), s.end(), [&](Index y) { return le(x, y); }))
                    lower.push_back(x);
                if (std::all_of(s.begin(), s.end(), [&](Index y) { return le(y, x); }))
                    upper.push_back(x);
            }
            bool meet = std::any_of(lower.begin(), lower.end(), [&](Index m) {
                return std::all_of(lower.begin(), lower.end(), [&](Index l) { return le(l, m); });
            });
            bool join = std::any_of(upper.begin(), upper.end(), [&](Index j) {
                return std::all_of(upper.begin(), upper.end(), [&](Index u) { return le(j, u); });
            });
            if (!meet || !join) {
                lc.complete = false;
                lc.missing = !meet ? "meet" : "join";
                for (Index i : s)
                    lc.witness.push_back(c.object(i));
            }
        }
        r.lattice_equivalence = lc.complete == r.finitely_complete;
        r.lattice = std::move(lc);
    }
    return r;
}

} // namespace emergence
