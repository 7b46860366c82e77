#include "emergence/construct.hpp"

#include <algorithm>

namespace emergence {

std::string to_string(OpKind k)
{
    return k == OpKind::internal ? "internal" : "external";
}

std::string to_string(Tag t)
{
    switch (t) {
    case Tag::associative:
        return "associative";
    case Tag::commutative:
        return "commutative";
    case Tag::has_identity:
        return "has_identity";
    case Tag::has_inverses:
        return "has_inverses";
    case Tag::distributes_over:
        return "distributes_over";
    }
    return "?";
}

std::string to_string(const TagClaim& c)
{
    if (c.tag == Tag::distributes_over)
        return "distributes_over(" + c.other + ")";
    return to_string(c.tag);
}

std::string to_string(const TagSet& tags)
{
    std::string out = "{";
    bool first = true;
    for (const auto& t : tags) {
        if (!first)
            out += ",";
        first = false;
        out += to_string(t);
    }
    return out + "}";
}

Index StructureSignature::find(const std::string& name) const
{
    for (Index i = 0; i < slots.size(); ++i)
        if (slots[i].name == name)
            return i;
    return npos;
}

void check_table_shape(const OperationTable& t)
{
    const std::size_t n = t.carrier.size();
    const std::size_t rows = t.kind == OpKind::internal ? n : t.scalars.size();
    if (t.table.size() != rows * n)
        throw StructuralError("operation table has " + std::to_string(t.table.size()) + " entries, expected " +
                              std::to_string(rows * n));
    for (Index v : t.table)
        if (v >= n)
            throw StructuralError("operation table value outside the carrier " + t.carrier.to_string());
    if (t.kind == OpKind::internal && !t.scalars.empty())
        throw StructuralError("internal operation table carries scalars");
}

namespace {

Index find_identity(const OperationTable& t)
{
    const std::size_t n = t.carrier.size();
    if (t.kind == OpKind::external) {
        for (Index k = 0; k < t.scalars.size(); ++k) {
            bool ok = true;
            for (Index x = 0; x < n && ok; ++x)
                ok = t.apply(k, x) == x;
            if (ok)
                return k;
        }
        return npos;
    }
    for (Index e = 0; e < n; ++e) {
        bool ok = true;
        for (Index x = 0; x < n && ok; ++x)
            ok = t.apply(e, x) == x && t.apply(x, e) == x;
        if (ok)
            return e;
    }
    return npos;
}

} // namespace

std::vector<std::string> refute_claim(const OperationTable& t, const TagClaim& claim, const OperationTable* other)
{
    const auto& c = t.carrier;
    const std::size_t n = c.size();
    const bool internal = t.kind == OpKind::internal;
    switch (claim.tag) {
    case Tag::associative:
        if (!internal)
            return {"external operation"};
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                for (Index z = 0; z < n; ++z)
                    if (t.apply(t.apply(x, y), z) != t.apply(x, t.apply(y, z)))
                        return {c[x], c[y], c[z]};
        return {};
    case Tag::commutative:
        if (!internal)
            return {"external operation"};
        for (Index x = 0; x < n; ++x)
            for (Index y = x + 1; y < n; ++y)
                if (t.apply(x, y) != t.apply(y, x))
                    return {c[x], c[y]};
        return {};
    case Tag::has_identity:
        if (find_identity(t) == npos)
            return {"no identity element"};
        return {};
    case Tag::has_inverses: {
        if (!internal)
            return {"external operation"};
        Index e = find_identity(t);
        if (e == npos)
            return {"no identity element"};
        for (Index x = 0; x < n; ++x) {
            bool found = false;
            for (Index y = 0; y < n && !found; ++y)
                found = t.apply(x, y) == e && t.apply(y, x) == e;
            if (!found)
                return {c[x]};
        }
        return {};
    }
    case Tag::distributes_over: {
        if (other == nullptr)
            return {"unknown slot " + claim.other};
        if (other->kind != OpKind::internal || !(other->carrier == t.carrier))
            return {"slot " + claim.other + " is not an internal operation on the same carrier"};
        const auto& o = *other;
        const std::size_t rows = internal ? n : t.scalars.size();
        for (Index x = 0; x < rows; ++x)
            for (Index y = 0; y < n; ++y)
                for (Index z = 0; z < n; ++z) {
                    const std::string& xl = internal ? c[x] : t.scalars[x];
                    if (t.apply(x, o.apply(y, z)) != o.apply(t.apply(x, y), t.apply(x, z)))
                        return {xl, c[y], c[z]};
                    if (internal && t.apply(o.apply(y, z), x) != o.apply(t.apply(y, x), t.apply(z, x)))
                        return {c[y], c[z], xl};
                }
        return {};
    }
    }
    return {"unknown tag"};
}

TagSet check_operation_properties(const OperationTable& t)
{
    check_table_shape(t);
    TagSet out;
    for (Tag tag : {Tag::associative, Tag::commutative, Tag::has_identity, Tag::has_inverses})
        if (refute_claim(t, {tag, {}}, nullptr).empty())
            out.insert({tag, {}});
    return out;
}

TagSet check_operation_properties(const std::vector<OperationTable>& structure, const StructureSignature& signature,
                                  Index slot)
{
    TagSet out = check_operation_properties(structure.at(slot));
    for (Index j = 0; j < structure.size(); ++j) {
        if (j == slot || structure[j].kind != OpKind::internal)
            continue;
        TagClaim claim{Tag::distributes_over, signature.slots[j].name};
        if (refute_claim(structure[slot], claim, &structure[j]).empty())
            out.insert(claim);
    }
    return out;
}

ConstructRef make_construct(Construct c)
{
    const auto& cat = *c.category;
    const std::size_t n = cat.object_count();
    if (c.carriers.size() != n)
        throw StructuralError("construct " + c.name + ": carriers do not cover every object");
    if (c.structure.size() != n)
        throw StructuralError("construct " + c.name + ": structure does not cover every object");
    if (c.underlying.size() != cat.morphism_count())
        throw StructuralError("construct " + c.name + ": underlying functions do not cover every morphism");
    std::set<std::string> names;
    for (const auto& s : c.signature.slots)
        if (!names.insert(s.name).second)
            throw StructuralError("construct " + c.name + ": duplicate slot " + s.name);
    for (Index o = 0; o < n; ++o) {
        if (c.structure[o].size() != c.signature.size())
            throw StructuralError("construct " + c.name + ": object " + cat.object(o) + " has " +
                                  std::to_string(c.structure[o].size()) + " operations, signature has " +
                                  std::to_string(c.signature.size()));
        for (const auto& t : c.structure[o]) {
            if (!(t.carrier == c.carriers[o]))
                throw StructuralError("construct " + c.name + ": a table of " + cat.object(o) +
                                      " is over a set other than its carrier");
            check_table_shape(t);
        }
    }
    for (Index m = 0; m < cat.morphism_count(); ++m)
        if (!c.underlying[m].valid())
            throw StructuralError("construct " + c.name + ": underlying function of " + cat.morphism(m).name +
                                  " is not total");
    return std::make_shared<const Construct>(std::move(c));
}

ValidationReport validate_construct(const Construct& c)
{
    ValidationReport report;
    const auto& cat = *c.category;
    report.merge(validate_category(cat), "category");
    for (const auto& slot : c.signature.slots)
        for (const auto& t : slot.tags)
            if (t.tag == Tag::distributes_over && c.signature.find(t.other) == npos)
                report.add("signature", {slot.name}, "distributes over unknown slot " + t.other);

    for (Index o = 0; o < cat.object_count(); ++o) {
        const auto& tables = c.structure[o];
        for (Index s = 0; s < c.signature.size(); ++s) {
            const auto& slot = c.signature.slots[s];
            const auto& t = tables[s];
            std::vector<std::string> where{cat.object(o), slot.name};
            if (t.kind != slot.kind) {
                report.add("slot-kind", where, "table is " + to_string(t.kind) + ", slot is " + to_string(slot.kind));
                continue;
            }
            if (slot.kind == OpKind::external && !(t.scalars == slot.scalars))
                report.add("slot-scalars", where, "scalar set " + t.scalars.to_string() + " differs from " +
                                                      slot.scalars.to_string());
            if (t.tags != slot.tags)
                report.add("slot-tags", where, "claims " + to_string(t.tags) + ", signature requires " +
                                                   to_string(slot.tags));
            for (const auto& claim : t.tags) {
                const OperationTable* other = nullptr;
                if (claim.tag == Tag::distributes_over) {
                    Index j = c.signature.find(claim.other);
                    if (j != npos)
                        other = &tables[j];
                }
                auto w = refute_claim(t, claim, other);
                if (!w.empty()) {
                    auto witness = where;
                    witness.insert(witness.end(), w.begin(), w.end());
                    report.add("tag-" + to_string(claim.tag), witness);
                }
            }
        }
    }
    for (Index m = 0; m < cat.morphism_count(); ++m) {
        const auto& mm = cat.morphism(m);
        const auto& f = c.underlying[m];
        if (!(f.dom == c.carriers[mm.dom]) || !(f.cod == c.carriers[mm.cod]))
            report.add("underlying-endpoints", {mm.name},
                       "function runs " + f.dom.to_string() + "->" + f.cod.to_string());
    }
    if (report.ok())
        report.merge(validate_set_assignment({c.category, c.carriers, c.underlying}), "underlying");
    return report;
}

UnderlyingFunctor standard_underlying(const ConstructRef& c)
{
    return {c, c->carriers, c->underlying};
}

ValidationReport validate_gu(const UnderlyingFunctor& u, UnderlyingMode mode)
{
    const auto& c = *u.construct;
    const auto& cat = *c.category;
    if (u.sets.size() != cat.object_count() || u.functions.size() != cat.morphism_count())
        throw StructuralError("underlying functor is not total on " + cat.name());
    ValidationReport report;
    if (mode == UnderlyingMode::gu) {
        for (Index o = 0; o < cat.object_count(); ++o)
            if (!(u.sets[o] == c.carriers[o]))
                report.add("gu-carrier", {cat.object(o)},
                           "assigned " + u.sets[o].to_string() + ", carrier is " + c.carriers[o].to_string());
    } else {
        std::set<FinSet> image(u.sets.begin(), u.sets.end());
        std::set<FinSet> standard(c.carriers.begin(), c.carriers.end());
        std::vector<std::string> diff;
        for (const auto& s : image)
            if (!standard.count(s))
                diff.push_back("+" + s.to_string());
        for (const auto& s : standard)
            if (!image.count(s))
                diff.push_back("-" + s.to_string());
        if (!diff.empty())
            report.add("gsu-image", diff, "object images differ from the carriers as a set of sets");
    }
    report.merge(validate_set_assignment(u.assignment()), "functor");
    return report;
}

ConcreteCategory close_under_composition(const std::string& name, const std::vector<std::string>& objects,
                                         const std::vector<FinSet>& carriers,
                                         const std::vector<ConcreteArrow>& generators, std::uint64_t budget)
{
    if (objects.size() != carriers.size())
        throw StructuralError("concrete category " + name + " needs one carrier per object");
    std::vector<ConcreteArrow> arrows;
    ConcreteCategory out;
    for (Index o = 0; o < objects.size(); ++o)
        arrows.push_back({"id" + objects[o], o, o, FinFunction::identity(carriers[o])});
    auto find = [&](Index dom, Index cod, const FinFunction& fn) -> Index {
        for (Index i = 0; i < arrows.size(); ++i)
            if (arrows[i].dom == dom && arrows[i].cod == cod && arrows[i].function == fn)
                return i;
        return npos;
    };
    for (const auto& g : generators) {
        if (g.dom >= objects.size() || g.cod >= objects.size() || g.function.dom != carriers[g.dom] ||
            g.function.cod != carriers[g.cod] || !g.function.valid())
            throw StructuralError("generator " + g.name + " does not fit its endpoints in " + name);
        Index same = find(g.dom, g.cod, g.function);
        if (same != npos) {
            out.merged.push_back(g.name + "=" + arrows[same].name);
            continue;
        }
        arrows.push_back(g);
    }
    for (bool grew = true; grew;) {
        grew = false;
        const std::size_t m = arrows.size();
        if (sat_mul(m, m) > budget)
            throw BudgetExceeded("composition closure of " + name, sat_mul(m, m), budget);
        for (Index g = 0; g < m; ++g)
            for (Index f = 0; f < m; ++f) {
                if (arrows[f].cod != arrows[g].dom)
                    continue;
                auto h = compose(arrows[g].function, arrows[f].function);
                if (find(arrows[f].dom, arrows[g].cod, h) != npos)
                    continue;
                arrows.push_back({arrows[g].name + "." + arrows[f].name, arrows[f].dom, arrows[g].cod, std::move(h)});
                grew = true;
            }
    }
    const std::size_t m = arrows.size();
    std::vector<Morphism> mors;
    std::vector<Index> ids(objects.size());
    std::vector<Index> table(m * m, npos);
    for (const auto& a : arrows)
        mors.push_back({a.name, a.dom, a.cod});
    for (Index o = 0; o < objects.size(); ++o)
        ids[o] = o;
    for (Index g = 0; g < m; ++g)
        for (Index f = 0; f < m; ++f)
            if (arrows[f].cod == arrows[g].dom)
                table[g * m + f] = find(arrows[f].dom, arrows[g].cod, compose(arrows[g].function, arrows[f].function));
    out.category = std::make_shared<const FinCategory>(name, objects, std::move(mors), std::move(ids), std::move(table));
    for (auto& a : arrows)
        out.functions.push_back(std::move(a.function));
    return out;
}

OperationTable cyclic_addition(const FinSet& carrier, TagSet claims)
{
    OperationTable t{OpKind::internal, carrier, {}, {}, std::move(claims)};
    const std::size_t n = carrier.size();
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
            t.table.push_back((x + y) % n);
    return t;
}

OperationTable trivial_action(const FinSet& carrier, const FinSet& scalars, TagSet claims)
{
    OperationTable t{OpKind::external, carrier, scalars, {}, std::move(claims)};
    for (Index k = 0; k < scalars.size(); ++k)
        for (Index x = 0; x < carrier.size(); ++x)
            t.table.push_back(x);
    return t;
}

} // namespace emergence
