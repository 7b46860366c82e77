#include "emergence/emergence.hpp"

#include <algorithm>
#include <set>

namespace emergence {

namespace {

void require_standard(const Emergence& e, const std::string& what)
{
    if (e.kind != EmergenceKind::standard)
        throw ModeMismatch(what + " requires standard emergences; " + e.name + " is a semi-emergence");
}

void require_endpoints(const Functor& f, const Emergence& a, const Emergence& b)
{
    if (!same_category(f.source, a.category()) || !same_category(f.target, b.category()))
        throw StructuralError("functor does not run from " + a.name + " to " + b.name);
}

// First place where U_b∘F differs from U_a, empty when they agree.
std::vector<std::string> compatibility_witness(const Functor& f, const Emergence& a, const Emergence& b)
{
    const auto& ca = *a.category();
    const auto& cb = *b.category();
    for (Index o = 0; o < ca.object_count(); ++o)
        if (!(b.underlying.sets[f.object_map[o]] == a.underlying.sets[o]))
            return {"object", ca.object(o), cb.object(f.object_map[o])};
    for (Index m = 0; m < ca.morphism_count(); ++m)
        if (!(b.underlying.functions[f.morphism_map[m]] == a.underlying.functions[m]))
            return {"morphism", ca.morphism(m).name, cb.morphism(f.morphism_map[m]).name};
    return {};
}

bool is_semi(HomMode m)
{
    return m == HomMode::semi || m == HomMode::strong_semi;
}

bool is_strong(HomMode m)
{
    return m == HomMode::strong || m == HomMode::strong_semi;
}

std::string toggle_op(const std::string& name)
{
    const std::string suffix = "^op";
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        return name.substr(0, name.size() - suffix.size());
    return name + suffix;
}

} // namespace

std::string to_string(HomMode m)
{
    switch (m) {
    case HomMode::hom:
        return "hom";
    case HomMode::strong:
        return "strong";
    case HomMode::semi:
        return "semi";
    case HomMode::strong_semi:
        return "strong_semi";
    }
    return "?";
}

std::string to_string(IsoMode m)
{
    switch (m) {
    case IsoMode::iso:
        return "iso";
    case IsoMode::strong_iso:
        return "strong_iso";
    case IsoMode::semi_iso:
        return "semi_iso";
    case IsoMode::strong_semi_iso:
        return "strong_semi_iso";
    case IsoMode::equivalence:
        return "equivalence";
    case IsoMode::semi_equivalence:
        return "semi_equivalence";
    }
    return "?";
}

EmergenceRef make_emergence(std::string name, const ConstructRef& c)
{
    return make_emergence(std::move(name), c, standard_underlying(c), EmergenceKind::standard);
}

EmergenceRef make_emergence(std::string name, const ConstructRef& c, UnderlyingFunctor u, EmergenceKind kind)
{
    if (u.construct != c)
        u.construct = c;
    const auto& cat = *c->category;
    if (u.sets.size() != cat.object_count() || u.functions.size() != cat.morphism_count())
        throw StructuralError("emergence " + name + ": underlying functor is not total");
    auto e = std::make_shared<Emergence>();
    e->name = std::move(name);
    e->construct = c;
    e->underlying = std::move(u);
    e->kind = kind;
    return e;
}

ValidationReport validate_emergence(const Emergence& e)
{
    ValidationReport report;
    report.merge(validate_construct(*e.construct), "construct");
    if (e.order() == 0)
        report.add("zero-slot", {e.name}, "a signature without operations carries no structure");
    bool structural = true;
    for (const auto& v : report.violations)
        if (v.rule.rfind("construct.category", 0) == 0 || v.rule.rfind("construct.underlying", 0) == 0)
            structural = false;
    if (structural)
        report.merge(validate_gu(e.underlying, e.kind == EmergenceKind::standard ? UnderlyingMode::gu
                                                                                 : UnderlyingMode::gsu),
                     e.kind == EmergenceKind::standard ? "gu" : "gsu");
    return report;
}

MorphismVerdict check_morphism(const Functor& f, const Emergence& a, const Emergence& b, HomMode mode)
{
    if (!is_semi(mode)) {
        require_standard(a, to_string(mode) + " homomorphism");
        require_standard(b, to_string(mode) + " homomorphism");
    }
    require_endpoints(f, a, b);
    MorphismVerdict v;
    v.functor = f;
    auto report = validate_functor(f);
    if (!report.ok()) {
        v.witness = report.violations.front().witness;
        v.detail = "not a functor: " + report.summary();
        return v;
    }
    v.witness = compatibility_witness(f, a, b);
    if (!v.witness.empty()) {
        v.detail = "underlying assignments differ at " + v.witness[0] + " " + v.witness[1];
        return v;
    }
    if (is_strong(mode) && a.order() != b.order()) {
        v.witness = {"order", std::to_string(a.order()), std::to_string(b.order())};
        v.detail = "orders differ";
        return v;
    }
    v.holds = true;
    return v;
}

SearchOptions compatibility_filter(const Emergence& a, const Emergence& b, std::uint64_t budget)
{
    const auto& ca = *a.category();
    const auto& cb = *b.category();
    SearchOptions options;
    options.budget = budget;
    options.object_domain.resize(ca.object_count());
    options.morphism_domain.resize(ca.morphism_count());
    for (Index o = 0; o < ca.object_count(); ++o)
        for (Index p = 0; p < cb.object_count(); ++p)
            if (b.underlying.sets[p] == a.underlying.sets[o])
                options.object_domain[o].push_back(p);
    for (Index m = 0; m < ca.morphism_count(); ++m)
        for (Index n = 0; n < cb.morphism_count(); ++n)
            if (b.underlying.functions[n] == a.underlying.functions[m])
                options.morphism_domain[m].push_back(n);
    return options;
}

std::vector<Functor> enumerate_homomorphisms(const Emergence& a, const Emergence& b, HomMode mode,
                                             std::uint64_t budget)
{
    if (!is_semi(mode)) {
        require_standard(a, to_string(mode) + " homomorphism");
        require_standard(b, to_string(mode) + " homomorphism");
    }
    if (is_strong(mode) && a.order() != b.order())
        return {};
    return enumerate_functors(a.category(), b.category(), compatibility_filter(a, b, budget));
}

MorphismVerdict check_iso(const Emergence& a, const Emergence& b, IsoMode mode, std::uint64_t budget)
{
    const bool semi = mode == IsoMode::semi_iso || mode == IsoMode::strong_semi_iso || mode == IsoMode::semi_equivalence;
    if (!semi) {
        require_standard(a, to_string(mode));
        require_standard(b, to_string(mode));
    }
    MorphismVerdict v;
    if ((mode == IsoMode::strong_iso || mode == IsoMode::strong_semi_iso) && a.order() != b.order()) {
        v.witness = {"order", std::to_string(a.order()), std::to_string(b.order())};
        v.detail = "orders differ";
        return v;
    }
    SearchOptions options = compatibility_filter(a, b, budget);
    if (mode == IsoMode::equivalence || mode == IsoMode::semi_equivalence) {
        search_functors(a.category(), b.category(), options, [&](const Functor& f) {
            auto p = functor_properties(f).flags;
            if (p.full && p.faithful && p.isomorphism_dense) {
                v.holds = true;
                v.functor = f;
                return false;
            }
            return true;
        });
        if (!v.holds) {
            v.witness = {"no full, faithful, isomorphism-dense homomorphism"};
            v.detail = "exhausted all homomorphisms " + a.name + " -> " + b.name;
        }
        return v;
    }
    options.bijective = true;
    search_functors(a.category(), b.category(), options, [&](const Functor& f) {
        v.holds = true;
        v.functor = f;
        return false;
    });
    if (!v.holds) {
        v.witness = {"no isomorphism compatible with the underlying functors"};
        v.detail = "exhausted all bijective functors " + a.name + " -> " + b.name;
    }
    return v;
}

OppositeEmergence opposite_emergence(const Emergence& e, const std::vector<FinFunction>* reversal)
{
    const auto& c = *e.construct;
    const auto& cat = *c.category;
    Construct op;
    op.name = toggle_op(c.name);
    op.category = opposite(cat);
    op.signature = c.signature;
    op.carriers = c.carriers;
    op.structure = c.structure;
    OppositeEmergence out;
    if (reversal != nullptr) {
        if (reversal->size() != cat.morphism_count())
            throw StructuralError("reversal functions do not cover every morphism");
        op.underlying = *reversal;
        out.underlying_rule = "supplied";
    } else if (std::all_of(c.underlying.begin(), c.underlying.end(), [](const FinFunction& f) { return f.bijective(); })) {
        for (const auto& f : c.underlying)
            op.underlying.push_back(f.inverse());
        out.underlying_rule = "inverse";
    } else {
        op.underlying = c.underlying;
        out.underlying_rule = "reindexed";
    }
    auto construct = make_construct(std::move(op));
    out.functorial = validate_construct(*construct).ok();
    out.emergence = make_emergence(toggle_op(e.name), construct);
    return out;
}

Classification classify(const Emergence& e)
{
    return {true, e.category()->thin()};
}

SubEmergenceCheck check_sub_emergence(const Emergence& b, const Emergence& a, bool full)
{
    const auto& cb = *b.category();
    const auto& ca = *a.category();
    SubEmergenceCheck out;
    auto& v = out.verdict;
    auto fail = [&](std::string cond, std::vector<std::string> witness, std::string detail) {
        witness.insert(witness.begin(), std::move(cond));
        v.witness = std::move(witness);
        v.detail = std::move(detail);
        return out;
    };
    Functor e{b.category(), a.category(), {}, {}};
    for (Index o = 0; o < cb.object_count(); ++o) {
        Index p = ca.find_object(cb.object(o));
        if (p == npos)
            return fail("(i)", {cb.object(o)}, "object missing from " + a.name);
        e.object_map.push_back(p);
    }
    for (Index m = 0; m < cb.morphism_count(); ++m) {
        const auto& mm = cb.morphism(m);
        Index n = ca.find_morphism(mm.name);
        if (n == npos || ca.morphism(n).dom != e.object_map[mm.dom] || ca.morphism(n).cod != e.object_map[mm.cod])
            return fail("(ii)", {mm.name}, "morphism is not in the corresponding hom-set of " + a.name);
        e.morphism_map.push_back(n);
    }
    out.inclusion = e;
    for (Index o = 0; o < cb.object_count(); ++o)
        if (e.morphism_map[cb.identity(o)] != ca.identity(e.object_map[o]))
            return fail("(iii)", {cb.object(o)}, "identity differs from the identity in " + a.name);
    for (Index g = 0; g < cb.morphism_count(); ++g)
        for (Index f = 0; f < cb.morphism_count(); ++f) {
            Index h = cb.compose(g, f);
            if (h == npos)
                continue;
            if (e.morphism_map[h] != ca.compose(e.morphism_map[g], e.morphism_map[f]))
                return fail("(iv)", {cb.morphism(g).name, cb.morphism(f).name}, "composite differs");
        }
    auto w = compatibility_witness(e, b, a);
    if (!w.empty())
        return fail("(v)", w, "U_B differs from U_A composed with the inclusion");
    if (!(b.signature() == a.signature()))
        return fail("signature", {b.name, a.name}, "structure signatures differ");
    if (full)
        for (Index x = 0; x < cb.object_count(); ++x)
            for (Index y = 0; y < cb.object_count(); ++y)
                if (cb.hom(x, y).size() != ca.hom(e.object_map[x], e.object_map[y]).size())
                    return fail("full", {cb.object(x), cb.object(y)}, "hom-set is a proper subset");
    v.holds = true;
    v.functor = e;
    return out;
}

MorphismVerdict check_induces(const Emergence& a, const Emergence& b)
{
    const auto& ca = *a.construct;
    const auto& cb = *b.construct;
    MorphismVerdict v;
    for (Index o = 0; o < cb.category->object_count(); ++o) {
        bool found = false;
        for (Index p = 0; p < ca.category->object_count() && !found; ++p) {
            if (!(ca.carriers[p] == cb.carriers[o]))
                continue;
            found = std::all_of(cb.structure[o].begin(), cb.structure[o].end(), [&](const OperationTable& t) {
                return std::any_of(ca.structure[p].begin(), ca.structure[p].end(), [&](const OperationTable& u) {
                    return u.kind == t.kind && u.scalars == t.scalars && u.table == t.table &&
                           std::includes(u.tags.begin(), u.tags.end(), t.tags.begin(), t.tags.end());
                });
            });
        }
        if (!found) {
            v.witness = {cb.category->object(o)};
            v.detail = "no object of " + a.name + " with the same carrier carries all of its operations";
            return v;
        }
    }
    v.holds = true;
    v.detail = "operations compared by kind and table; claimed tags must be among those of the inducing slot";
    return v;
}

std::vector<Index> monomorphisms(const FinCategory& c)
{
    std::vector<Index> out;
    for (Index m = 0; m < c.morphism_count(); ++m) {
        Index d = c.morphism(m).dom;
        bool mono = true;
        for (Index x = 0; x < c.object_count() && mono; ++x) {
            const auto& h = c.hom(x, d);
            for (std::size_t i = 0; i < h.size() && mono; ++i)
                for (std::size_t j = i + 1; j < h.size() && mono; ++j)
                    if (c.compose(m, h[i]) == c.compose(m, h[j]))
                        mono = false;
        }
        if (mono)
            out.push_back(m);
    }
    return out;
}

std::optional<Representation> find_representation(const Emergence& e, std::uint64_t budget)
{
    const auto& cat = e.category();
    const auto& c = *cat;
    const auto& u = e.underlying;
    for (Index a = 0; a < c.object_count(); ++a) {
        bool sizes = true;
        for (Index x = 0; x < c.object_count() && sizes; ++x)
            sizes = c.hom(a, x).size() == u.sets[x].size();
        if (!sizes)
            continue;
        for (Index xi = 0; xi < u.sets[a].size(); ++xi) {
            const std::string& elem = u.sets[a][xi];
            SetAssignment hom{cat, {}, {}};
            for (Index x = 0; x < c.object_count(); ++x) {
                std::vector<std::string> names;
                for (Index g : c.hom(a, x))
                    names.push_back(c.morphism(g).name);
                hom.sets.push_back(FinSet(std::move(names)));
            }
            std::vector<FinFunction> tau;
            bool bijective = true;
            for (Index x = 0; x < c.object_count() && bijective; ++x) {
                std::vector<std::pair<std::string, std::string>> pairs;
                for (Index g : c.hom(a, x))
                    pairs.push_back({c.morphism(g).name, u.functions[g](elem)});
                tau.push_back(FinFunction::from_pairs(hom.sets[x], u.sets[x], pairs));
                bijective = tau.back().bijective();
            }
            if (!bijective)
                continue;
            for (Index f = 0; f < c.morphism_count(); ++f) {
                const auto& mf = c.morphism(f);
                std::vector<std::pair<std::string, std::string>> pairs;
                for (Index g : c.hom(a, mf.dom))
                    pairs.push_back({c.morphism(g).name, c.morphism(c.compose(f, g)).name});
                hom.functions.push_back(FinFunction::from_pairs(hom.sets[mf.dom], hom.sets[mf.cod], pairs));
            }
            auto realized = realize({hom, u.assignment()}, tau, budget);
            Representation r;
            r.object = a;
            r.element = elem;
            r.fragment = realized.fragment;
            r.transformation.from = realized.functors[0];
            r.transformation.to = realized.functors[1];
            for (const auto& t : tau)
                r.transformation.components.push_back(r.fragment.morphism_of(t));
            if (!check_natural(r.transformation).ok())
                throw InternalError("representation of " + e.name + " is not natural");
            r.preserves_monos = true;
            for (Index m : monomorphisms(c)) {
                r.monos.push_back(c.morphism(m).name);
                if (!u.functions[m].injective())
                    r.preserves_monos = false;
            }
            return r;
        }
    }
    return std::nullopt;
}

GradedArrow graded_arrow(GradedKind kind, const EmergenceRef& a, const EmergenceRef& b, const Functor& f)
{
    require_endpoints(f, *a, *b);
    auto report = validate_functor(f);
    if (!report.ok())
        throw ConstructionError("graded arrow: not a functor: " + report.summary());
    long degree = static_cast<long>(a->order()) - static_cast<long>(b->order());
    if (degree <= 0)
        throw ConstructionError("graded arrow " + a->name + " -> " + b->name + " has non-positive degree " +
                                std::to_string(degree));
    if (kind == GradedKind::partial) {
        auto w = compatibility_witness(f, *a, *b);
        if (!w.empty())
            throw ConstructionError("partial emergence: underlying triangle fails at " + w[0] + " " + w[1]);
    }
    return {kind, a, b, f, degree};
}

GradedArrow compose_graded(const GradedArrow& first, const GradedArrow& second)
{
    if (first.kind != second.kind)
        throw ModeMismatch("cannot compose a partial and a relative emergence");
    if (first.target != second.source &&
        (first.target->name != second.source->name || !same_category(first.target->category(), second.source->category())))
        throw StructuralError("graded arrows are not composable: " + first.target->name + " vs " + second.source->name);
    GradedArrow out{first.kind, first.source, second.target, compose(second.functor, first.functor),
                    first.degree + second.degree};
    if (out.kind == GradedKind::partial && !compatibility_witness(out.functor, *out.source, *out.target).empty())
        throw InternalError("composite partial emergence breaks the underlying triangle");
    return out;
}

ExtremalStatus extremal_status(const Emergence& e, const std::vector<EmergenceRef>& battery, std::uint64_t budget)
{
    ExtremalStatus s;
    auto count = [&](const Emergence& x, const Emergence& y) {
        return count_functors(x.category(), y.category(), compatibility_filter(x, y, budget), 2);
    };

    s.initial.holds = true;
    for (const auto& b : battery) {
        if (b.get() == &e)
            continue;
        if (e.order() <= b->order()) {
            s.initial.holds = false;
            s.initial.witness = {b->name};
            s.initial.detail = "order " + std::to_string(b->order()) + " of " + b->name + " is not below order " +
                               std::to_string(e.order());
            break;
        }
        std::size_t n = count(e, *b);
        if (n != 1) {
            s.initial.holds = false;
            s.initial.witness = {b->name};
            s.initial.detail = n == 0 ? "no homomorphism into " + b->name : "more than one homomorphism into " + b->name;
            break;
        }
    }

    s.terminal.holds = true;
    for (const auto& b : battery) {
        if (b.get() == &e)
            continue;
        if (b->order() < 2) {
            s.skipped.push_back(b->name);
            continue;
        }
        if (b->order() <= e.order()) {
            s.terminal.holds = false;
            s.terminal.witness = {b->name};
            s.terminal.detail = "order " + std::to_string(b->order()) + " of " + b->name +
                                " does not exceed order " + std::to_string(e.order());
            break;
        }
        std::size_t n = count(*b, e);
        if (n != 1) {
            s.terminal.holds = false;
            s.terminal.witness = {b->name};
            s.terminal.detail = n == 0 ? "no homomorphism from " + b->name : "more than one homomorphism from " + b->name;
            break;
        }
    }
    s.zero.holds = s.initial.holds && s.terminal.holds;
    if (!s.zero.holds) {
        s.zero.witness = !s.initial.holds ? std::vector<std::string>{"initial"} : std::vector<std::string>{"terminal"};
        s.zero.detail = "zero requires both initial and terminal status";
    }
    s.note = "relative to a battery of " + std::to_string(battery.size()) +
             " emergences; terminal status looks for a unique functor from each member into the candidate";
    return s;
}

std::pair<EmergenceRef, Functor> restrict_emergence(const Emergence& a, const std::vector<Index>& objects,
                                                    const std::vector<Index>& morphisms, const std::string& name)
{
    const auto& ca = *a.category();
    const auto& c = *a.construct;
    std::vector<Index> objs = objects, mors = morphisms;
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    std::sort(mors.begin(), mors.end());
    mors.erase(std::unique(mors.begin(), mors.end()), mors.end());
    std::vector<Index> onew(ca.object_count(), npos), mnew(ca.morphism_count(), npos);
    for (Index i = 0; i < objs.size(); ++i)
        onew[objs[i]] = i;
    for (Index i = 0; i < mors.size(); ++i)
        mnew[mors[i]] = i;

    std::vector<std::string> names;
    for (Index o : objs)
        names.push_back(ca.object(o));
    std::vector<Morphism> ms;
    for (Index m : mors) {
        const auto& mm = ca.morphism(m);
        if (onew[mm.dom] == npos || onew[mm.cod] == npos)
            throw ConstructionError("restriction keeps " + mm.name + " but drops one of its endpoints");
        ms.push_back({mm.name, onew[mm.dom], onew[mm.cod]});
    }
    std::vector<Index> ids;
    for (Index o : objs) {
        if (mnew[ca.identity(o)] == npos)
            throw ConstructionError("restriction drops the identity of " + ca.object(o));
        ids.push_back(mnew[ca.identity(o)]);
    }
    const std::size_t m = mors.size();
    std::vector<Index> table(m * m, npos);
    for (Index g = 0; g < m; ++g)
        for (Index f = 0; f < m; ++f) {
            Index h = ca.compose(mors[g], mors[f]);
            if (h == npos)
                continue;
            if (mnew[h] == npos)
                throw ConstructionError("restriction is not closed under composition at " + ca.morphism(mors[g]).name +
                                        " " + ca.morphism(mors[f]).name);
            table[g * m + f] = mnew[h];
        }
    auto cat = std::make_shared<const FinCategory>(name, std::move(names), std::move(ms), std::move(ids), std::move(table));

    Construct sub;
    sub.name = name;
    sub.category = cat;
    sub.signature = c.signature;
    UnderlyingFunctor u;
    for (Index o : objs) {
        sub.carriers.push_back(c.carriers[o]);
        sub.structure.push_back(c.structure[o]);
        u.sets.push_back(a.underlying.sets[o]);
    }
    for (Index mm : mors) {
        sub.underlying.push_back(c.underlying[mm]);
        u.functions.push_back(a.underlying.functions[mm]);
    }
    auto construct = make_construct(std::move(sub));
    auto e = make_emergence(name, construct, std::move(u), a.kind);
    Functor inclusion{cat, a.category(), objs, mors};
    return {e, inclusion};
}

} // namespace emergence
