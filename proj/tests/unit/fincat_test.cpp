#include "../oracles.hpp"

#include "emergence/battery.hpp"

#include <doctest.h>

#include <algorithm>

using namespace emergence;

namespace {

CategoryRef arrow()
{
    CategoryBuilder b("Arrow");
    b.object("A");
    b.object("B");
    b.morphism("f", "A", "B");
    return b.unit_laws().build();
}

std::vector<CategoryRef> small_categories()
{
    auto cs = default_battery().categories;
    cs.push_back(codiscrete_pair());
    cs.push_back(chain_category("C2", 2));
    cs.push_back(discrete_category("D2", 2));
    for (const auto& e : standard_battery())
        if (e->category()->morphism_count() <= 4)
            cs.push_back(e->category());
    return cs;
}

bool lex_less(const Functor& a, const Functor& b)
{
    return std::tie(a.object_map, a.morphism_map) < std::tie(b.object_map, b.morphism_map);
}

} // namespace

TEST_CASE("arrow category is valid and thin")
{
    auto c = arrow();
    CHECK(validate_category(*c).ok());
    CHECK(c->object_count() == 2);
    CHECK(c->morphism_count() == 3);
    CHECK(c->thin());
    CHECK(c->hom(0, 1).size() == 1);
    CHECK(c->hom(1, 0).empty());
}

TEST_CASE("missing composition row is reported")
{
    CategoryBuilder b("Loop");
    b.object("A");
    b.morphism("s", "A", "A");
    b.unit_laws();
    auto c = b.build();
    auto r = validate_category(*c);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].witness == std::vector<std::string>{"s", "s"});
}

TEST_CASE("non-associative table is rejected")
{
    // s∘s = t, t∘s = s, s∘t = idA, t∘t = s: (s∘s)∘s = s but s∘(s∘s) = idA
    CategoryBuilder b("Bad");
    b.object("A");
    b.morphism("s", "A", "A");
    b.morphism("t", "A", "A");
    b.unit_laws();
    b.compose("s", "s", "t").compose("t", "s", "s").compose("s", "t", "idA").compose("t", "t", "s");
    auto r = validate_category(*b.build());
    CHECK_FALSE(r.ok());
    bool assoc = false;
    for (const auto& v : r.violations)
        assoc = assoc || v.rule.find("assoc") != std::string::npos;
    CHECK(assoc);
}

TEST_CASE("duplicate names are structural errors")
{
    CategoryBuilder b("Dup");
    b.object("A");
    CHECK_THROWS_AS(b.object("A"), StructuralError);
}

TEST_CASE("opposite is an involution")
{
    for (const auto& c : small_categories()) {
        auto op = opposite(*c);
        CHECK(validate_category(*op).ok());
        auto back = opposite(*op);
        CHECK(back->objects() == c->objects());
        CHECK(back->compose_table() == c->compose_table());
        for (Index m = 0; m < c->morphism_count(); ++m) {
            CHECK(op->morphism(m).dom == c->morphism(m).cod);
            CHECK(op->morphism(m).cod == c->morphism(m).dom);
        }
    }
}

TEST_CASE("functor search agrees with brute force")
{
    const auto cs = small_categories();
    for (const auto& a : cs)
        for (const auto& b : cs) {
            auto found = enumerate_functors(a, b);
            auto expected = oracle::all_functors(a, b);
            std::sort(expected.begin(), expected.end(), lex_less);
            INFO(a->name() << " -> " << b->name());
            REQUIRE(found.size() == expected.size());
            for (std::size_t i = 0; i < found.size(); ++i)
                CHECK(oracle::same_maps(found[i], expected[i]));
            CHECK(std::is_sorted(found.begin(), found.end(), lex_less));
        }
}

TEST_CASE("injective search is the injective part of the full search")
{
    const auto cs = small_categories();
    for (const auto& a : cs)
        for (const auto& b : cs) {
            SearchOptions o;
            o.injective = true;
            auto inj = enumerate_functors(a, b, o);
            std::size_t expected = 0;
            for (const auto& f : oracle::all_functors(a, b)) {
                std::set<Index> os(f.object_map.begin(), f.object_map.end());
                std::set<Index> ms(f.morphism_map.begin(), f.morphism_map.end());
                expected += os.size() == f.object_map.size() && ms.size() == f.morphism_map.size();
            }
            CHECK(inj.size() == expected);
        }
}

TEST_CASE("budget refuses instead of truncating")
{
    auto c = chain_category("C4", 4);
    SearchOptions o;
    o.budget = 10;
    CHECK_THROWS_AS(enumerate_functors(c, c, o), BudgetExceeded);
    CHECK(object_map_estimate(*c, *c, SearchOptions{}) == 256);
}

TEST_CASE("isomorphism search finds renamings only")
{
    CategoryBuilder b("Renamed");
    b.object("X");
    b.object("Y");
    b.morphism("u", "X", "Y");
    auto r = b.unit_laws().build();
    auto iso = find_isomorphism(arrow(), r);
    REQUIRE(iso);
    CHECK(functor_properties(*iso).flags.is_isomorphism);
    CHECK_FALSE(find_isomorphism(arrow(), discrete_category("D2", 2)));
}

TEST_CASE("functor composition is associative and unital")
{
    auto a = arrow();
    auto c = codiscrete_pair();
    auto fs = enumerate_functors(a, c);
    auto gs = enumerate_functors(c, c);
    REQUIRE_FALSE(fs.empty());
    for (const auto& f : fs) {
        CHECK(compose(identity_functor(c), f) == f);
        CHECK(compose(f, identity_functor(a)) == f);
        for (const auto& g : gs) {
            CHECK(oracle::same_maps(compose(g, f), oracle::after(g, f)));
            for (const auto& h : gs)
                CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
        }
    }
}

TEST_CASE("functor properties of an inclusion")
{
    auto a = discrete_category("D2", 2);
    auto b = arrow();
    Functor incl{a, b, {0, 1}, {0, 1}};
    REQUIRE(validate_functor(incl).ok());
    auto p = functor_properties(incl).flags;
    CHECK(p.faithful);
    CHECK_FALSE(p.full);
    CHECK(p.injective_on_objects);
    CHECK(p.embedding); // injective on morphisms
    CHECK_FALSE(p.is_isomorphism);
}

TEST_CASE("natural transformations between constant functors")
{
    auto a = arrow();
    auto one = default_battery().categories[1];
    // functors Arrow -> Arrow: constants at A, B and the identity
    auto fs = enumerate_functors(a, a);
    CHECK(fs.size() == 3);
    std::size_t total = 0;
    for (const auto& f : fs)
        for (const auto& g : fs) {
            auto ts = find_natural(f, g, NaturalMode::all);
            for (const auto& t : ts)
                CHECK(check_natural(t).ok());
            total += ts.size();
        }
    // the preorder on {cA, id, cB}: cA <= id <= cB pointwise
    CHECK(total == 6);
    auto isos = find_natural(fs[1], fs[1], NaturalMode::isomorphisms);
    CHECK(isos.size() == 1);
    (void)one;
}

TEST_CASE("non-parallel functors are a mode mismatch")
{
    auto a = arrow();
    auto f = identity_functor(a);
    auto g = identity_functor(codiscrete_pair());
    CHECK_THROWS_AS(find_natural(f, g, NaturalMode::all), ModeMismatch);
}

TEST_CASE("product category sizes and projections")
{
    auto a = arrow();
    auto c = codiscrete_pair();
    auto p = product_category({a, c});
    CHECK(p.category->object_count() == 4);
    CHECK(p.category->morphism_count() == 3 * 4);
    CHECK(validate_category(*p.category).ok());
    for (const auto& pr : p.projections)
        CHECK(validate_functor(pr).ok());
    auto id = pairing(p.category, p, p.projections);
    CHECK(id == identity_functor(p.category));
}
