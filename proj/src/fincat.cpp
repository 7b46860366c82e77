#include "emergence/fincat.hpp"

#include <algorithm>
#include <set>

namespace emergence {

namespace {

std::string join_names(const std::vector<std::string>& parts, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

std::string tuple_label(const std::vector<std::string>& parts)
{
    return "(" + join_names(parts, ",") + ")";
}

FinCategory::FinCategory(std::string name, std::vector<std::string> objects, std::vector<Morphism> morphisms,
                         std::vector<Index> identity, std::vector<Index> compose)
    : name_(std::move(name)), objects_(std::move(objects)), morphisms_(std::move(morphisms)),
      identity_(std::move(identity)), compose_(std::move(compose))
{
    const std::size_t n = objects_.size();
    const std::size_t m = morphisms_.size();
    for (Index i = 0; i < n; ++i)
        if (!object_index_.emplace(objects_[i], i).second)
            throw StructuralError("category " + name_ + ": duplicate object " + objects_[i]);
    for (Index i = 0; i < m; ++i) {
        const auto& mor = morphisms_[i];
        if (!morphism_index_.emplace(mor.name, i).second)
            throw StructuralError("category " + name_ + ": duplicate morphism " + mor.name);
        if (mor.dom >= n || mor.cod >= n)
            throw StructuralError("category " + name_ + ": morphism " + mor.name + " has an undeclared endpoint");
    }
    if (identity_.size() != n)
        throw StructuralError("category " + name_ + ": identity assignment does not cover every object");
    for (Index a = 0; a < n; ++a) {
        Index id = identity_[a];
        if (id >= m)
            throw StructuralError("category " + name_ + ": identity of " + objects_[a] + " is undeclared");
        if (morphisms_[id].dom != a || morphisms_[id].cod != a)
            throw StructuralError("category " + name_ + ": identity " + morphisms_[id].name + " is not an endomorphism of " +
                                  objects_[a]);
    }
    if (compose_.empty() && m > 0)
        compose_.assign(m * m, npos);
    if (compose_.size() != m * m)
        throw StructuralError("category " + name_ + ": composition table has wrong size");
    for (Index v : compose_)
        if (v != npos && v >= m)
            throw StructuralError("category " + name_ + ": composition table refers to an undeclared morphism");
    index();
}

void FinCategory::index()
{
    const std::size_t n = objects_.size();
    const std::size_t m = morphisms_.size();
    hom_.assign(n * n, {});
    for (Index i = 0; i < m; ++i)
        hom_[morphisms_[i].dom * n + morphisms_[i].cod].push_back(i);

    inverse_.assign(m, npos);
    for (Index f = 0; f < m; ++f) {
        const auto& mf = morphisms_[f];
        for (Index g : hom(mf.cod, mf.dom)) {
            if (compose(g, f) == identity_[mf.dom] && compose(f, g) == identity_[mf.cod]) {
                inverse_[f] = g;
                break;
            }
        }
    }
    iso_class_.resize(n);
    for (Index a = 0; a < n; ++a) {
        iso_class_[a] = a;
        for (Index b = 0; b < a; ++b) {
            bool iso = false;
            for (Index f : hom(b, a))
                if (inverse_[f] != npos) {
                    iso = true;
                    break;
                }
            if (iso) {
                iso_class_[a] = iso_class_[b];
                break;
            }
        }
    }
}

Index FinCategory::find_object(const std::string& name) const
{
    auto it = object_index_.find(name);
    return it == object_index_.end() ? npos : it->second;
}

Index FinCategory::find_morphism(const std::string& name) const
{
    auto it = morphism_index_.find(name);
    return it == morphism_index_.end() ? npos : it->second;
}

bool FinCategory::thin() const
{
    return std::all_of(hom_.begin(), hom_.end(), [](const auto& h) { return h.size() <= 1; });
}

bool FinCategory::operator==(const FinCategory& other) const
{
    return name_ == other.name_ && objects_ == other.objects_ && morphisms_ == other.morphisms_ &&
           identity_ == other.identity_ && compose_ == other.compose_;
}

Index CategoryBuilder::object(const std::string& name, const std::string& identity)
{
    if (find_object(name) != npos)
        throw StructuralError("category " + name_ + ": duplicate object " + name);
    Index idx = objects_.size();
    objects_.push_back(name);
    Index id = morphism(identity.empty() ? "id" + name : identity, idx, idx);
    identity_.push_back(id);
    return idx;
}

Index CategoryBuilder::morphism(const std::string& name, const std::string& dom, const std::string& cod)
{
    Index d = find_object(dom);
    Index c = find_object(cod);
    if (d == npos || c == npos)
        throw StructuralError("category " + name_ + ": morphism " + name + " refers to an undeclared object");
    return morphism(name, d, c);
}

Index CategoryBuilder::morphism(const std::string& name, Index dom, Index cod)
{
    if (find_morphism(name) != npos)
        throw StructuralError("category " + name_ + ": duplicate morphism " + name);
    if (dom >= objects_.size() || cod >= objects_.size())
        throw StructuralError("category " + name_ + ": morphism " + name + " refers to an undeclared object");
    morphisms_.push_back({name, dom, cod});
    return morphisms_.size() - 1;
}

CategoryBuilder& CategoryBuilder::compose(const std::string& g, const std::string& f, const std::string& h)
{
    Index gi = find_morphism(g), fi = find_morphism(f), hi = find_morphism(h);
    if (gi == npos || fi == npos || hi == npos)
        throw StructuralError("category " + name_ + ": composition row " + g + " " + f + " = " + h +
                              " refers to an undeclared morphism");
    return compose(gi, fi, hi);
}

CategoryBuilder& CategoryBuilder::compose(Index g, Index f, Index h)
{
    auto [it, inserted] = compose_.emplace(std::make_pair(g, f), h);
    if (!inserted && it->second != h)
        throw StructuralError("category " + name_ + ": conflicting composition rows for " + morphisms_[g].name + " " +
                              morphisms_[f].name);
    return *this;
}

CategoryBuilder& CategoryBuilder::unit_laws()
{
    for (Index f = 0; f < morphisms_.size(); ++f) {
        const auto& m = morphisms_[f];
        compose_.emplace(std::make_pair(identity_[m.cod], f), f);
        compose_.emplace(std::make_pair(f, identity_[m.dom]), f);
    }
    return *this;
}

Index CategoryBuilder::find_object(const std::string& name) const
{
    auto it = std::find(objects_.begin(), objects_.end(), name);
    return it == objects_.end() ? npos : static_cast<Index>(it - objects_.begin());
}

Index CategoryBuilder::find_morphism(const std::string& name) const
{
    for (Index i = 0; i < morphisms_.size(); ++i)
        if (morphisms_[i].name == name)
            return i;
    return npos;
}

CategoryRef CategoryBuilder::build() const
{
    const std::size_t m = morphisms_.size();
    std::vector<Index> table(m * m, npos);
    for (const auto& [key, h] : compose_)
        table[key.first * m + key.second] = h;
    return std::make_shared<const FinCategory>(name_, objects_, morphisms_, identity_, std::move(table));
}

ValidationReport validate_category(const FinCategory& c)
{
    ValidationReport report;
    const std::size_t m = c.morphism_count();
    auto nm = [&](Index i) { return c.morphism(i).name; };
    for (Index g = 0; g < m; ++g) {
        for (Index f = 0; f < m; ++f) {
            Index h = c.compose(g, f);
            bool composable = c.morphism(f).cod == c.morphism(g).dom;
            if (!composable) {
                if (h != npos)
                    report.add("composition-domain", {nm(g), nm(f)}, "defined on a non-composable pair");
                continue;
            }
            if (h == npos) {
                report.add("composition-total", {nm(g), nm(f)}, "composable pair has no composite");
                continue;
            }
            if (c.morphism(h).dom != c.morphism(f).dom || c.morphism(h).cod != c.morphism(g).cod)
                report.add("composition-endpoints", {nm(g), nm(f)}, "composite " + nm(h) + " has wrong endpoints");
        }
    }
    for (Index f = 0; f < m; ++f) {
        const auto& mf = c.morphism(f);
        Index idc = c.identity(mf.cod), idd = c.identity(mf.dom);
        if (c.compose(idc, f) != f)
            report.add("identity-left", {nm(idc), nm(f)});
        if (c.compose(f, idd) != f)
            report.add("identity-right", {nm(f), nm(idd)});
    }
    // Associativity over all composable triples h∘g∘f.
    for (Index f = 0; f < m; ++f) {
        for (Index g = 0; g < m; ++g) {
            if (c.morphism(g).dom != c.morphism(f).cod)
                continue;
            Index gf = c.compose(g, f);
            for (Index h = 0; h < m; ++h) {
                if (c.morphism(h).dom != c.morphism(g).cod)
                    continue;
                Index hg = c.compose(h, g);
                if (gf == npos || hg == npos)
                    continue;
                Index left = c.compose(h, gf);
                Index right = c.compose(hg, f);
                if (left != right)
                    report.add("associativity", {nm(h), nm(g), nm(f)});
            }
        }
    }
    return report;
}

CategoryRef opposite(const FinCategory& c)
{
    const std::string suffix = "^op";
    std::string name = c.name();
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        name.erase(name.size() - suffix.size());
    else
        name += suffix;
    std::vector<Morphism> mors;
    mors.reserve(c.morphism_count());
    for (const auto& m : c.morphisms())
        mors.push_back({m.name, m.cod, m.dom});
    const std::size_t m = c.morphism_count();
    std::vector<Index> table(m * m, npos);
    for (Index g = 0; g < m; ++g)
        for (Index f = 0; f < m; ++f)
            table[g * m + f] = c.compose(f, g);
    return std::make_shared<const FinCategory>(name, c.objects(), std::move(mors), c.identities(), std::move(table));
}

bool same_category(const CategoryRef& a, const CategoryRef& b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

bool operator==(const Functor& a, const Functor& b)
{
    return a.object_map == b.object_map && a.morphism_map == b.morphism_map && same_category(a.source, b.source) &&
           same_category(a.target, b.target);
}

Functor identity_functor(const CategoryRef& c)
{
    Functor f{c, c, {}, {}};
    for (Index i = 0; i < c->object_count(); ++i)
        f.object_map.push_back(i);
    for (Index i = 0; i < c->morphism_count(); ++i)
        f.morphism_map.push_back(i);
    return f;
}

Functor compose(const Functor& g, const Functor& f)
{
    if (!same_category(f.target, g.source))
        throw StructuralError("cannot compose functors: target of the first is not the source of the second");
    Functor h{f.source, g.target, {}, {}};
    h.object_map.reserve(f.object_map.size());
    for (Index o : f.object_map)
        h.object_map.push_back(g.object_map.at(o));
    for (Index m : f.morphism_map)
        h.morphism_map.push_back(g.morphism_map.at(m));
    return h;
}

ValidationReport validate_functor(const Functor& f)
{
    if (!f.source || !f.target)
        throw StructuralError("functor has no source or target");
    const auto& a = *f.source;
    const auto& b = *f.target;
    if (f.object_map.size() != a.object_count() || f.morphism_map.size() != a.morphism_count())
        throw StructuralError("functor maps are not total on " + a.name());
    for (Index o : f.object_map)
        if (o >= b.object_count())
            throw StructuralError("functor object map leaves " + b.name());
    for (Index m : f.morphism_map)
        if (m >= b.morphism_count())
            throw StructuralError("functor morphism map leaves " + b.name());

    ValidationReport report;
    for (Index m = 0; m < a.morphism_count(); ++m) {
        const auto& src = a.morphism(m);
        const auto& img = b.morphism(f.morphism_map[m]);
        if (img.dom != f.object_map[src.dom] || img.cod != f.object_map[src.cod])
            report.add("endpoints", {src.name, img.name},
                       "image runs " + b.object(img.dom) + "->" + b.object(img.cod) + ", expected " +
                           b.object(f.object_map[src.dom]) + "->" + b.object(f.object_map[src.cod]));
    }
    for (Index o = 0; o < a.object_count(); ++o)
        if (f.morphism_map[a.identity(o)] != b.identity(f.object_map[o]))
            report.add("identity", {a.object(o)}, "identity not sent to an identity");
    if (!report.ok())
        return report;
    for (Index g = 0; g < a.morphism_count(); ++g)
        for (Index h = 0; h < a.morphism_count(); ++h) {
            Index gh = a.compose(g, h);
            if (gh == npos)
                continue;
            if (f.morphism_map[gh] != b.compose(f.morphism_map[g], f.morphism_map[h]))
                report.add("composition", {a.morphism(g).name, a.morphism(h).name});
        }
    return report;
}

FunctorProperties functor_properties(const Functor& f)
{
    const auto& a = *f.source;
    const auto& b = *f.target;
    FunctorProperties out;
    auto& flags = out.flags;

    flags.faithful = true;
    flags.full = true;
    for (Index x = 0; x < a.object_count(); ++x)
        for (Index y = 0; y < a.object_count(); ++y) {
            std::set<Index> images;
            for (Index m : a.hom(x, y))
                images.insert(f.morphism_map[m]);
            if (images.size() != a.hom(x, y).size())
                flags.faithful = false;
            if (images.size() != b.hom(f.object_map[x], f.object_map[y]).size())
                flags.full = false;
        }
    std::set<Index> mor_images(f.morphism_map.begin(), f.morphism_map.end());
    std::set<Index> obj_images(f.object_map.begin(), f.object_map.end());
    flags.embedding = mor_images.size() == f.morphism_map.size();
    flags.injective_on_objects = obj_images.size() == f.object_map.size();

    std::set<Index> classes;
    for (Index o : f.object_map)
        classes.insert(b.iso_class(o));
    flags.isomorphism_dense = true;
    for (Index y = 0; y < b.object_count(); ++y)
        if (!classes.count(b.iso_class(y)))
            flags.isomorphism_dense = false;

    flags.is_isomorphism = flags.embedding && flags.injective_on_objects && obj_images.size() == b.object_count() &&
                           mor_images.size() == b.morphism_count();
    if (flags.is_isomorphism) {
        Functor inv{f.target, f.source, std::vector<Index>(b.object_count()), std::vector<Index>(b.morphism_count())};
        for (Index o = 0; o < a.object_count(); ++o)
            inv.object_map[f.object_map[o]] = o;
        for (Index m = 0; m < a.morphism_count(); ++m)
            inv.morphism_map[f.morphism_map[m]] = m;
        out.inverse = std::move(inv);
    }
    return out;
}

ValidationReport check_natural(const NaturalTransformation& t)
{
    const auto& F = t.from;
    const auto& G = t.to;
    if (!same_category(F.source, G.source) || !same_category(F.target, G.target))
        throw ModeMismatch("natural transformation between non-parallel functors");
    const auto& a = *F.source;
    const auto& b = *F.target;
    if (t.components.size() != a.object_count())
        throw StructuralError("natural transformation does not have one component per object");
    ValidationReport report;
    for (Index o = 0; o < a.object_count(); ++o) {
        Index c = t.components[o];
        if (c >= b.morphism_count() || b.morphism(c).dom != F.object_map[o] || b.morphism(c).cod != G.object_map[o])
            report.add("component", {a.object(o)}, "component is not a morphism F(A) -> G(A)");
    }
    if (!report.ok())
        return report;
    for (Index m = 0; m < a.morphism_count(); ++m) {
        const auto& mm = a.morphism(m);
        Index left = b.compose(G.morphism_map[m], t.components[mm.dom]);
        Index right = b.compose(t.components[mm.cod], F.morphism_map[m]);
        if (left != right)
            report.add("naturality", {mm.name});
    }
    return report;
}

std::vector<NaturalTransformation> find_natural(const Functor& f, const Functor& g, NaturalMode mode,
                                                std::uint64_t budget)
{
    if (!same_category(f.source, g.source) || !same_category(f.target, g.target))
        throw ModeMismatch("natural transformation search between non-parallel functors");
    const auto& a = *f.source;
    const auto& b = *f.target;
    const std::size_t n = a.object_count();
    std::vector<std::vector<Index>> options(n);
    std::uint64_t estimate = 1;
    for (Index o = 0; o < n; ++o) {
        for (Index m : b.hom(f.object_map[o], g.object_map[o]))
            if (mode == NaturalMode::all || b.inverse(m) != npos)
                options[o].push_back(m);
        estimate = sat_mul(estimate, options[o].size());
    }
    if (estimate > budget)
        throw BudgetExceeded("natural transformation search", estimate, budget);

    // Naturality squares grouped by the later of the two endpoints.
    std::vector<std::vector<Index>> checks(n);
    for (Index m = 0; m < a.morphism_count(); ++m) {
        const auto& mm = a.morphism(m);
        checks[std::max(mm.dom, mm.cod)].push_back(m);
    }
    std::vector<NaturalTransformation> out;
    std::vector<Index> comp(n, npos);
    auto rec = [&](auto&& self, Index o) -> void {
        if (o == n) {
            out.push_back({f, g, comp});
            return;
        }
        for (Index c : options[o]) {
            comp[o] = c;
            bool ok = true;
            for (Index m : checks[o]) {
                const auto& mm = a.morphism(m);
                if (b.compose(g.morphism_map[m], comp[mm.dom]) != b.compose(comp[mm.cod], f.morphism_map[m])) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                self(self, o + 1);
        }
        comp[o] = npos;
    };
    rec(rec, 0);
    return out;
}

Index ProductCategory::object_of(const std::vector<Index>& coords) const
{
    Index idx = 0;
    for (std::size_t i = 0; i < factors.size(); ++i)
        idx = idx * factors[i]->object_count() + coords[i];
    return idx;
}

Index ProductCategory::morphism_of(const std::vector<Index>& coords) const
{
    Index idx = 0;
    for (std::size_t i = 0; i < factors.size(); ++i)
        idx = idx * factors[i]->morphism_count() + coords[i];
    return idx;
}

std::vector<Index> ProductCategory::object_coords(Index object) const
{
    std::vector<Index> c(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
        c[i] = object % factors[i]->object_count();
        object /= factors[i]->object_count();
    }
    return c;
}

std::vector<Index> ProductCategory::morphism_coords(Index morphism) const
{
    std::vector<Index> c(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
        c[i] = morphism % factors[i]->morphism_count();
        morphism /= factors[i]->morphism_count();
    }
    return c;
}

ProductCategory product_category(const std::vector<CategoryRef>& cs, std::uint64_t budget)
{
    std::uint64_t nobj = 1, nmor = 1;
    std::vector<std::string> names;
    for (const auto& c : cs) {
        nobj = sat_mul(nobj, c->object_count());
        nmor = sat_mul(nmor, c->morphism_count());
        names.push_back(c->name());
    }
    std::uint64_t estimate = sat_mul(nmor, nmor);
    if (estimate > budget)
        throw BudgetExceeded("product category", estimate, budget);

    ProductCategory p;
    p.factors = cs;
    std::vector<std::string> objects;
    std::vector<Morphism> mors;
    std::vector<Index> identity;
    objects.reserve(nobj);
    for (Index o = 0; o < nobj; ++o) {
        auto coords = p.object_coords(o);
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < cs.size(); ++i)
            parts.push_back(cs[i]->object(coords[i]));
        objects.push_back(tuple_label(parts));
    }
    for (Index m = 0; m < nmor; ++m) {
        auto coords = p.morphism_coords(m);
        std::vector<std::string> parts;
        std::vector<Index> dom(cs.size()), cod(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const auto& mi = cs[i]->morphism(coords[i]);
            parts.push_back(mi.name);
            dom[i] = mi.dom;
            cod[i] = mi.cod;
        }
        mors.push_back({tuple_label(parts), p.object_of(dom), p.object_of(cod)});
    }
    for (Index o = 0; o < nobj; ++o) {
        auto coords = p.object_coords(o);
        std::vector<Index> ids(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i)
            ids[i] = cs[i]->identity(coords[i]);
        identity.push_back(p.morphism_of(ids));
    }
    std::vector<Index> table(nmor * nmor, npos);
    std::vector<std::vector<Index>> coords(nmor);
    for (Index m = 0; m < nmor; ++m)
        coords[m] = p.morphism_coords(m);
    std::vector<Index> h(cs.size());
    for (Index g = 0; g < nmor; ++g)
        for (Index f = 0; f < nmor; ++f) {
            bool ok = true;
            for (std::size_t i = 0; i < cs.size() && ok; ++i) {
                h[i] = cs[i]->compose(coords[g][i], coords[f][i]);
                ok = h[i] != npos;
            }
            if (ok)
                table[g * nmor + f] = p.morphism_of(h);
        }
    std::string name = cs.empty() ? std::string("1") : "(" + join_names(names, "x") + ")";
    p.category = std::make_shared<const FinCategory>(name, std::move(objects), std::move(mors), std::move(identity),
                                                     std::move(table));
    for (std::size_t i = 0; i < cs.size(); ++i) {
        Functor pi{p.category, cs[i], {}, {}};
        for (Index o = 0; o < nobj; ++o)
            pi.object_map.push_back(p.object_coords(o)[i]);
        for (Index m = 0; m < nmor; ++m)
            pi.morphism_map.push_back(coords[m][i]);
        p.projections.push_back(std::move(pi));
    }
    return p;
}

Functor product_functor(const ProductCategory& from, const ProductCategory& to, const std::vector<Functor>& fs)
{
    if (fs.size() != from.factors.size() || fs.size() != to.factors.size())
        throw StructuralError("componentwise functor needs one functor per factor");
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (!same_category(fs[i].source, from.factors[i]) || !same_category(fs[i].target, to.factors[i]))
            throw StructuralError("componentwise functor: factor " + std::to_string(i + 1) + " has wrong endpoints");
    Functor out{from.category, to.category, {}, {}};
    for (Index o = 0; o < from.category->object_count(); ++o) {
        auto c = from.object_coords(o);
        for (std::size_t i = 0; i < fs.size(); ++i)
            c[i] = fs[i].object_map[c[i]];
        out.object_map.push_back(to.object_of(c));
    }
    for (Index m = 0; m < from.category->morphism_count(); ++m) {
        auto c = from.morphism_coords(m);
        for (std::size_t i = 0; i < fs.size(); ++i)
            c[i] = fs[i].morphism_map[c[i]];
        out.morphism_map.push_back(to.morphism_of(c));
    }
    return out;
}

Functor pairing(const CategoryRef& x, const ProductCategory& to, const std::vector<Functor>& fs)
{
    if (fs.size() != to.factors.size())
        throw StructuralError("pairing needs one functor per factor");
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (!same_category(fs[i].source, x) || !same_category(fs[i].target, to.factors[i]))
            throw StructuralError("pairing: functor " + std::to_string(i + 1) + " has wrong endpoints");
    Functor out{x, to.category, {}, {}};
    std::vector<Index> c(fs.size());
    for (Index o = 0; o < x->object_count(); ++o) {
        for (std::size_t i = 0; i < fs.size(); ++i)
            c[i] = fs[i].object_map[o];
        out.object_map.push_back(to.object_of(c));
    }
    for (Index m = 0; m < x->morphism_count(); ++m) {
        for (std::size_t i = 0; i < fs.size(); ++i)
            c[i] = fs[i].morphism_map[m];
        out.morphism_map.push_back(to.morphism_of(c));
    }
    return out;
}

} // namespace emergence
