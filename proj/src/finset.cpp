#include "emergence/finset.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace emergence {

FinSet::FinSet(std::vector<std::string> labels) : elements_(std::move(labels))
{
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

Index FinSet::index_of(const std::string& label) const
{
    auto it = std::lower_bound(elements_.begin(), elements_.end(), label);
    if (it == elements_.end() || *it != label)
        return npos;
    return static_cast<Index>(it - elements_.begin());
}

bool FinSet::subset_of(const FinSet& other) const
{
    return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

std::string FinSet::to_string() const
{
    std::string out = "{";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i)
            out += ",";
        out += elements_[i];
    }
    return out + "}";
}

std::string pair_label(const std::string& a, const std::string& b)
{
    return "(" + a + "," + b + ")";
}

FinSet pair_product(const FinSet& a, const FinSet& b)
{
    std::vector<std::string> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b)
            out.push_back(pair_label(x, y));
    return FinSet(std::move(out));
}

FinSet bracketed_product(const std::vector<FinSet>& sets)
{
    if (sets.empty())
        return FinSet({"()"});
    FinSet acc = sets[0];
    for (std::size_t i = 1; i < sets.size(); ++i)
        acc = pair_product(acc, sets[i]);
    return acc;
}

std::string bracketed_label(const std::vector<std::string>& parts)
{
    if (parts.empty())
        return "()";
    std::string acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = pair_label(acc, parts[i]);
    return acc;
}

FinFunction FinFunction::identity(const FinSet& s)
{
    FinFunction f{s, s, {}};
    for (Index i = 0; i < s.size(); ++i)
        f.table.push_back(i);
    return f;
}

FinFunction FinFunction::from_pairs(const FinSet& dom, const FinSet& cod,
                                    const std::vector<std::pair<std::string, std::string>>& pairs)
{
    FinFunction f{dom, cod, std::vector<Index>(dom.size(), npos)};
    for (const auto& [x, y] : pairs) {
        Index i = dom.index_of(x);
        Index j = cod.index_of(y);
        if (i == npos)
            throw StructuralError("function argument " + x + " is not in " + dom.to_string());
        if (j == npos)
            throw StructuralError("function value " + y + " is not in " + cod.to_string());
        if (f.table[i] != npos && f.table[i] != j)
            throw StructuralError("function assigns two values to " + x);
        f.table[i] = j;
    }
    for (Index i = 0; i < dom.size(); ++i)
        if (f.table[i] == npos)
            throw StructuralError("function is not total: no value for " + dom[i]);
    return f;
}

const std::string& FinFunction::operator()(const std::string& x) const
{
    Index i = dom.index_of(x);
    if (i == npos)
        throw StructuralError("function applied outside its domain: " + x);
    return cod[table[i]];
}

bool FinFunction::valid() const
{
    if (table.size() != dom.size())
        return false;
    return std::all_of(table.begin(), table.end(), [&](Index v) { return v < cod.size(); });
}

bool FinFunction::injective() const
{
    std::set<Index> seen(table.begin(), table.end());
    return seen.size() == table.size();
}

bool FinFunction::surjective() const
{
    std::set<Index> seen(table.begin(), table.end());
    return seen.size() == cod.size();
}

FinFunction FinFunction::inverse() const
{
    if (!bijective())
        throw StructuralError("inverse of a non-bijective function");
    FinFunction inv{cod, dom, std::vector<Index>(cod.size())};
    for (Index i = 0; i < table.size(); ++i)
        inv.table[table[i]] = i;
    return inv;
}

std::string FinFunction::to_string() const
{
    std::string out = dom.to_string() + "->" + cod.to_string() + ":[";
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i)
            out += ",";
        out += cod[table[i]];
    }
    return out + "]";
}

FinFunction compose(const FinFunction& g, const FinFunction& f)
{
    if (!(f.cod == g.dom))
        throw StructuralError("cannot compose functions " + g.to_string() + " and " + f.to_string());
    FinFunction h{f.dom, g.cod, std::vector<Index>(f.table.size())};
    for (Index i = 0; i < f.table.size(); ++i)
        h.table[i] = g.table[f.table[i]];
    return h;
}

Index FinSetFragment::object_of(const FinSet& s) const
{
    for (Index i = 0; i < sets.size(); ++i)
        if (sets[i] == s)
            return i;
    return npos;
}

Index FinSetFragment::morphism_of(const FinFunction& f) const
{
    Index d = object_of(f.dom);
    Index c = object_of(f.cod);
    if (d == npos || c == npos)
        return npos;
    for (Index m : category->hom(d, c))
        if (functions[m].table == f.table)
            return m;
    return npos;
}

namespace {

struct FragmentBuilder {
    std::vector<FinSet> sets;
    std::vector<FinFunction> functions;
    std::vector<std::pair<Index, Index>> endpoints;
    std::map<std::tuple<Index, Index, std::vector<Index>>, Index> index;

    Index set_index(const FinSet& s) const
    {
        for (Index i = 0; i < sets.size(); ++i)
            if (sets[i] == s)
                return i;
        return npos;
    }

    // Returns (index, inserted).
    std::pair<Index, bool> add(const FinFunction& f)
    {
        Index d = set_index(f.dom), c = set_index(f.cod);
        if (d == npos || c == npos)
            throw StructuralError("function " + f.to_string() + " leaves the fragment's sets");
        auto key = std::make_tuple(d, c, f.table);
        auto it = index.find(key);
        if (it != index.end())
            return {it->second, false};
        Index i = functions.size();
        index.emplace(std::move(key), i);
        functions.push_back(f);
        endpoints.push_back({d, c});
        return {i, true};
    }

    FinSetFragment finish() const
    {
        std::vector<std::string> objects;
        for (const auto& s : sets)
            objects.push_back(s.to_string());
        std::vector<Morphism> mors;
        for (Index i = 0; i < functions.size(); ++i)
            mors.push_back({functions[i].to_string(), endpoints[i].first, endpoints[i].second});
        std::vector<Index> identity;
        for (const auto& s : sets) {
            Index d = set_index(s);
            identity.push_back(index.at(std::make_tuple(d, d, FinFunction::identity(s).table)));
        }
        const std::size_t m = functions.size();
        std::vector<Index> table(m * m, npos);
        for (Index g = 0; g < m; ++g)
            for (Index f = 0; f < m; ++f) {
                if (endpoints[f].second != endpoints[g].first)
                    continue;
                auto h = compose(functions[g], functions[f]);
                auto it = index.find(std::make_tuple(endpoints[f].first, endpoints[g].second, h.table));
                if (it == index.end())
                    throw InternalError("fragment is not closed under composition");
                table[g * m + f] = it->second;
            }
        FinSetFragment out;
        out.sets = sets;
        out.functions = functions;
        out.category = std::make_shared<const FinCategory>("Set", std::move(objects), std::move(mors),
                                                           std::move(identity), std::move(table));
        return out;
    }
};

} // namespace

FinSetFragment materialize_finset(const std::vector<FinSet>& sets, FragmentMode mode,
                                  const std::vector<FinFunction>& seeds, std::uint64_t budget)
{
    FragmentBuilder b;
    for (const auto& s : sets)
        if (b.set_index(s) == npos)
            b.sets.push_back(s);
    for (const auto& f : seeds) {
        if (b.set_index(f.dom) == npos)
            b.sets.push_back(f.dom);
        if (b.set_index(f.cod) == npos)
            b.sets.push_back(f.cod);
    }

    if (mode == FragmentMode::full) {
        std::uint64_t total = 0;
        for (const auto& d : b.sets)
            for (const auto& c : b.sets)
                total = sat_add(total, sat_pow(c.size(), d.size()));
        if (sat_mul(total, total) > budget)
            throw BudgetExceeded("full set fragment (use generated mode)", sat_mul(total, total), budget);
        for (const auto& d : b.sets)
            for (const auto& c : b.sets) {
                std::uint64_t count = sat_pow(c.size(), d.size());
                for (std::uint64_t k = 0; k < count; ++k) {
                    FinFunction f{d, c, std::vector<Index>(d.size())};
                    std::uint64_t r = k;
                    for (std::size_t i = d.size(); i-- > 0;) {
                        f.table[i] = r % c.size();
                        r /= c.size();
                    }
                    b.add(f);
                }
            }
        return b.finish();
    }

    for (const auto& s : b.sets)
        b.add(FinFunction::identity(s));
    for (const auto& f : seeds) {
        if (!f.valid())
            throw StructuralError("seed function " + f.to_string() + " is not total");
        b.add(f);
    }
    for (Index next = 0; next < b.functions.size(); ++next) {
        for (Index other = 0; other <= next; ++other) {
            for (int side = 0; side < 2; ++side) {
                Index g = side ? next : other;
                Index f = side ? other : next;
                if (b.endpoints[f].second != b.endpoints[g].first)
                    continue;
                b.add(compose(b.functions[g], b.functions[f]));
            }
        }
        if (sat_mul(b.functions.size(), b.functions.size()) > budget)
            throw BudgetExceeded("generated set fragment", sat_mul(b.functions.size(), b.functions.size()), budget);
    }
    return b.finish();
}

ValidationReport validate_set_assignment(const SetAssignment& s)
{
    const auto& c = *s.category;
    if (s.sets.size() != c.object_count() || s.functions.size() != c.morphism_count())
        throw StructuralError("set assignment is not total on " + c.name());
    ValidationReport report;
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const auto& mm = c.morphism(m);
        const auto& f = s.functions[m];
        if (!f.valid())
            throw StructuralError("function assigned to " + mm.name + " is not total");
        if (!(f.dom == s.sets[mm.dom]) || !(f.cod == s.sets[mm.cod]))
            report.add("endpoints", {mm.name}, "assigned function runs " + f.dom.to_string() + "->" + f.cod.to_string());
    }
    for (Index o = 0; o < c.object_count(); ++o)
        if (!(s.functions[c.identity(o)] == FinFunction::identity(s.sets[o])))
            report.add("identity", {c.object(o)}, "identity not sent to an identity function");
    if (!report.ok())
        return report;
    for (Index g = 0; g < c.morphism_count(); ++g)
        for (Index f = 0; f < c.morphism_count(); ++f) {
            Index h = c.compose(g, f);
            if (h == npos)
                continue;
            if (!(compose(s.functions[g], s.functions[f]) == s.functions[h]))
                report.add("composition", {c.morphism(g).name, c.morphism(f).name});
        }
    return report;
}

RealizedFunctors realize(const std::vector<SetAssignment>& assignments, const std::vector<FinFunction>& extra,
                         std::uint64_t budget)
{
    std::vector<FinSet> sets;
    std::vector<FinFunction> seeds;
    for (const auto& a : assignments) {
        sets.insert(sets.end(), a.sets.begin(), a.sets.end());
        seeds.insert(seeds.end(), a.functions.begin(), a.functions.end());
    }
    seeds.insert(seeds.end(), extra.begin(), extra.end());
    RealizedFunctors out;
    out.fragment = materialize_finset(sets, FragmentMode::generated, seeds, budget);
    for (const auto& a : assignments) {
        Functor f{a.category, out.fragment.category, {}, {}};
        for (const auto& s : a.sets)
            f.object_map.push_back(out.fragment.object_of(s));
        for (const auto& fn : a.functions)
            f.morphism_map.push_back(out.fragment.morphism_of(fn));
        out.functors.push_back(std::move(f));
    }
    return out;
}

HomFunctor hom_functor(const CategoryRef& c, Index a, std::uint64_t budget)
{
    if (a >= c->object_count())
        throw StructuralError("hom functor at an undeclared object");
    SetAssignment s{c, {}, {}};
    for (Index x = 0; x < c->object_count(); ++x) {
        std::vector<std::string> names;
        for (Index g : c->hom(a, x))
            names.push_back(c->morphism(g).name);
        s.sets.push_back(FinSet(std::move(names)));
    }
    for (Index f = 0; f < c->morphism_count(); ++f) {
        const auto& mf = c->morphism(f);
        std::vector<std::pair<std::string, std::string>> pairs;
        for (Index g : c->hom(a, mf.dom)) {
            Index fg = c->compose(f, g);
            if (fg == npos)
                throw StructuralError("hom functor: composition table of " + c->name() + " is not total");
            pairs.push_back({c->morphism(g).name, c->morphism(fg).name});
        }
        s.functions.push_back(FinFunction::from_pairs(s.sets[mf.dom], s.sets[mf.cod], pairs));
    }
    auto r = realize({s}, {}, budget);
    return {std::move(s), std::move(r.fragment), std::move(r.functors.front())};
}

} // namespace emergence
