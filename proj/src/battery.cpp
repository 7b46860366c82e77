#include "emergence/battery.hpp"

namespace emergence {

CategoryRef discrete_category(const std::string& name, std::size_t n)
{
    CategoryBuilder b(name);
    for (Index i = 0; i < n; ++i)
        b.object("x" + std::to_string(i));
    return b.unit_laws().build();
}

CategoryRef chain_category(const std::string& name, std::size_t n)
{
    CategoryBuilder b(name);
    for (Index i = 0; i < n; ++i)
        b.object("x" + std::to_string(i));
    auto arrow = [&](Index i, Index j) {
        return i == j ? "idx" + std::to_string(i) : "l" + std::to_string(i) + std::to_string(j);
    };
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            b.morphism(arrow(i, j), i, j);
    b.unit_laws();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            for (Index k = j + 1; k < n; ++k)
                b.compose(arrow(j, k), arrow(i, j), arrow(i, k));
    return b.build();
}

CategoryRef codiscrete_pair()
{
    CategoryBuilder b("X2");
    b.object("X");
    b.object("Y");
    b.morphism("h", "X", "Y");
    b.morphism("k", "Y", "X");
    b.unit_laws();
    b.compose("k", "h", "idX");
    b.compose("h", "k", "idY");
    return b.build();
}

std::pair<Functor, Functor> regular_mono_fixture(const Functor& inclusion)
{
    static const CategoryRef x = codiscrete_pair();
    const auto& a = *inclusion.target;
    std::vector<char> inside(a.object_count(), 0);
    for (Index o : inclusion.object_map)
        inside[o] = 1;
    Functor f{inclusion.target, x, {}, {}};
    Functor g{inclusion.target, x, {}, {}};
    const Index ox = x->find_object("X");
    const Index oy = x->find_object("Y");
    for (Index o = 0; o < a.object_count(); ++o) {
        f.object_map.push_back(inside[o] ? ox : oy);
        g.object_map.push_back(ox);
    }
    auto between = [&](Index s, Index t) { return x->hom(s, t).front(); };
    for (Index m = 0; m < a.morphism_count(); ++m) {
        const auto& mm = a.morphism(m);
        f.morphism_map.push_back(between(f.object_map[mm.dom], f.object_map[mm.cod]));
        g.morphism_map.push_back(between(ox, ox));
    }
    return {f, g};
}

FinSet numbered_set(std::size_t n)
{
    std::vector<std::string> labels;
    for (Index i = 0; i < n; ++i)
        labels.push_back(std::to_string(i));
    return FinSet(labels);
}

OperationTable table_from(const FinSet& carrier, const std::function<Index(Index, Index)>& op, TagSet claims)
{
    OperationTable t{OpKind::internal, carrier, {}, {}, std::move(claims)};
    for (Index x = 0; x < carrier.size(); ++x)
        for (Index y = 0; y < carrier.size(); ++y)
            t.table.push_back(op(x, y));
    return t;
}

OperationTable action_from(const FinSet& carrier, const FinSet& scalars, const std::function<Index(Index, Index)>& act,
                           TagSet claims)
{
    OperationTable t{OpKind::external, carrier, scalars, {}, std::move(claims)};
    for (Index k = 0; k < scalars.size(); ++k)
        for (Index x = 0; x < carrier.size(); ++x)
            t.table.push_back(act(k, x));
    return t;
}

TagSet group_tags()
{
    return {{Tag::associative, {}}, {Tag::commutative, {}}, {Tag::has_identity, {}}, {Tag::has_inverses, {}}};
}

TagSet monoid_tags()
{
    return {{Tag::associative, {}}, {Tag::commutative, {}}, {Tag::has_identity, {}}};
}

TagSet semigroup_tags()
{
    return {{Tag::associative, {}}, {Tag::commutative, {}}};
}

EmergenceRef concrete_emergence(const std::string& name, const StructureSignature& signature,
                                const std::vector<ConcreteObject>& objects,
                                const std::vector<ConcreteGenerator>& generators, std::uint64_t budget)
{
    std::vector<std::string> names;
    std::vector<FinSet> carriers;
    for (const auto& o : objects) {
        names.push_back(o.name);
        carriers.push_back(o.carrier);
    }
    auto index = [&](const std::string& n) {
        for (Index i = 0; i < names.size(); ++i)
            if (names[i] == n)
                return i;
        throw StructuralError("unknown object " + n + " in " + name);
    };
    std::vector<ConcreteArrow> arrows;
    for (const auto& g : generators) {
        Index d = index(g.dom), c = index(g.cod);
        arrows.push_back({g.name, d, c, FinFunction{carriers[d], carriers[c], g.table}});
    }
    auto closed = close_under_composition(name, names, carriers, arrows, budget);
    Construct k;
    k.name = name;
    k.category = closed.category;
    k.signature = signature;
    k.carriers = carriers;
    for (const auto& o : objects)
        k.structure.push_back(o.structure);
    k.underlying = std::move(closed.functions);
    auto c = make_construct(std::move(k));
    auto report = validate_construct(*c);
    if (!report.ok())
        throw ConstructionError(name + ": " + report.summary());
    return make_emergence(name, c);
}

namespace {

OperationSlot slot(const std::string& name, TagSet tags)
{
    return {name, OpKind::internal, std::move(tags), {}};
}

OperationTable zn(std::size_t n)
{
    return table_from(numbered_set(n), [n](Index x, Index y) { return (x + y) % n; }, group_tags());
}

OperationTable max_table(std::size_t n, TagSet tags)
{
    return table_from(numbered_set(n), [](Index x, Index y) { return std::max(x, y); }, std::move(tags));
}

OperationTable min_table(std::size_t n, TagSet tags)
{
    return table_from(numbered_set(n), [](Index x, Index y) { return std::min(x, y); }, std::move(tags));
}

StructureSignature group_signature()
{
    return {{slot("add", group_tags())}};
}

} // namespace

std::vector<EmergenceRef> standard_battery()
{
    std::vector<EmergenceRef> out;
    const auto sig = group_signature();

    out.push_back(concrete_emergence("Z2", sig, {{"A", numbered_set(2), {zn(2)}}}, {{"s", "A", "A", {1, 0}}}));
    out.push_back(concrete_emergence("Z2copy", sig, {{"B", numbered_set(2), {zn(2)}}}, {{"t", "B", "B", {1, 0}}}));
    out.push_back(concrete_emergence("Z3", sig, {{"A", numbered_set(3), {zn(3)}}}, {{"r", "A", "A", {1, 2, 0}}}));
    out.push_back(concrete_emergence("Pair", sig, {{"A", numbered_set(2), {zn(2)}}, {"B", numbered_set(2), {zn(2)}}},
                                     {{"f", "A", "B", {0, 1}}, {"g", "B", "A", {0, 1}}}));
    out.push_back(concrete_emergence("Point", sig, {{"P", numbered_set(1), {zn(1)}}}, {}));

    const StructureSignature max_sig{{slot("max", monoid_tags())}};
    out.push_back(concrete_emergence(
        "Chain", max_sig, {{"A", numbered_set(2), {max_table(2, monoid_tags())}}, {"B", numbered_set(3), {max_table(3, monoid_tags())}}},
        {{"i", "A", "B", {0, 1}}}));
    out.push_back(concrete_emergence("Consts", max_sig,
                                     {{"A", numbered_set(1), {max_table(1, monoid_tags())}},
                                      {"B", numbered_set(2), {max_table(2, monoid_tags())}}},
                                     {{"c0", "A", "B", {0}}, {"c1", "A", "B", {1}}}));
    out.push_back(concrete_emergence("Idem", max_sig, {{"A", numbered_set(3), {max_table(3, monoid_tags())}}},
                                     {{"c", "A", "A", {0, 0, 0}}}));

    TagSet max_tags = monoid_tags();
    max_tags.insert({Tag::distributes_over, "min"});
    TagSet min_tags = monoid_tags();
    min_tags.insert({Tag::distributes_over, "max"});
    const StructureSignature lattice_sig{{slot("max", max_tags), slot("min", min_tags)}};
    out.push_back(concrete_emergence("Lattice3", lattice_sig,
                                     {{"L", numbered_set(3), {max_table(3, max_tags), min_table(3, min_tags)}}},
                                     {{"top", "L", "L", {2, 2, 2}}}));

    const FinSet scalars({"e", "s"});
    const TagSet act_tags{{Tag::has_identity, {}}};
    const StructureSignature module_sig{{slot("add", group_tags()), {"act", OpKind::external, act_tags, scalars}}};
    auto act = action_from(numbered_set(2), scalars, [](Index k, Index x) { return k == 0 ? x : 1 - x; }, act_tags);
    out.push_back(concrete_emergence("Action", module_sig, {{"A", numbered_set(2), {zn(2), act}}},
                                     {{"s", "A", "A", {1, 0}}}));
    return out;
}

std::vector<EmergenceRef> emergence_battery()
{
    auto out = standard_battery();
    const auto& z2 = *out.front();
    UnderlyingFunctor u = z2.underlying;
    // Send the swap to the identity: same image sets, different functions.
    const auto& cat = *z2.category();
    for (Index m = 0; m < cat.morphism_count(); ++m)
        u.functions[m] = FinFunction::identity(u.sets[cat.morphism(m).dom]);
    out.push_back(make_emergence("Z2semi", z2.construct, std::move(u), EmergenceKind::semi));
    return out;
}

EmergenceRef terminal_example()
{
    const FinSet star({"*"});
    return concrete_emergence("T", group_signature(),
                              {{"P", star, {table_from(star, [](Index, Index) { return 0; }, group_tags())}}}, {});
}

std::vector<EmergenceRef> singleton_battery()
{
    const FinSet star({"*"});
    auto unit = [&](const std::string&) { return table_from(star, [](Index, Index) { return 0; }, group_tags()); };
    std::vector<EmergenceRef> out;
    const StructureSignature two{{slot("a", group_tags()), slot("b", group_tags())}};
    const StructureSignature three{{slot("a", group_tags()), slot("b", group_tags()), slot("c", group_tags())}};
    out.push_back(concrete_emergence("S2", two, {{"P", star, {unit("a"), unit("b")}}}, {}));
    out.push_back(concrete_emergence("S3", three, {{"P", star, {unit("a"), unit("b"), unit("c")}}}, {}));
    out.push_back(concrete_emergence("S2arrow", two,
                                     {{"P", star, {unit("a"), unit("b")}}, {"Q", star, {unit("a"), unit("b")}}},
                                     {{"u", "P", "Q", {0}}}));
    return out;
}

namespace {

ConstructRef thin_construct(const CategoryRef& cat)
{
    Construct k;
    k.name = cat->name();
    k.category = cat;
    k.signature = group_signature();
    const FinSet star({"*"});
    for (Index o = 0; o < cat->object_count(); ++o) {
        k.carriers.push_back(star);
        k.structure.push_back({zn(1)});
        k.structure.back()[0].carrier = star;
    }
    for (Index m = 0; m < cat->morphism_count(); ++m)
        k.underlying.push_back(FinFunction::identity(star));
    return make_construct(std::move(k));
}

} // namespace

ConstructRef chain_construct(std::size_t n)
{
    return thin_construct(chain_category("Chain" + std::to_string(n), n));
}

ConstructRef antichain_construct(std::size_t n)
{
    return thin_construct(discrete_category("Antichain" + std::to_string(n), n));
}

} // namespace emergence
