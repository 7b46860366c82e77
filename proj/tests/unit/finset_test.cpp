#include "emergence/finset.hpp"

#include <doctest.h>

using namespace emergence;

TEST_CASE("finite sets are sorted and duplicate-free")
{
    FinSet s({"b", "a", "b"});
    CHECK(s.size() == 2);
    CHECK(s[0] == "a");
    CHECK(s.index_of("b") == 1);
    CHECK(s.index_of("z") == npos);
    CHECK(FinSet({"a"}).subset_of(s));
    CHECK(s.to_string() == "{a,b}");
}

TEST_CASE("pair labels bracket to the left")
{
    CHECK(pair_label("a", "b") == "(a,b)");
    CHECK(bracketed_label({"a", "b", "c"}) == "((a,b),c)");
    CHECK(bracketed_product({}).size() == 1);
    FinSet two({"0", "1"});
    auto p = bracketed_product({two, two, two});
    CHECK(p.size() == 8);
    CHECK(p.contains("((0,1),1)"));
    CHECK(pair_product(two, FinSet({"x"})).elements() == std::vector<std::string>{"(0,x)", "(1,x)"});
}

TEST_CASE("functions compose and invert")
{
    FinSet a({"0", "1", "2"}), b({"x", "y", "z"});
    auto f = FinFunction::from_pairs(a, b, {{"0", "y"}, {"1", "z"}, {"2", "x"}});
    REQUIRE(f.valid());
    CHECK(f.bijective());
    auto g = f.inverse();
    CHECK(compose(g, f) == FinFunction::identity(a));
    CHECK(compose(f, g) == FinFunction::identity(b));
    CHECK(f("1") == "z");
    CHECK_THROWS_AS(compose(f, f), StructuralError);
}

TEST_CASE("full fragment holds every function")
{
    FinSet one({"*"}), two({"0", "1"});
    auto frag = materialize_finset({one, two}, FragmentMode::full);
    // 1 + 2 + 1 + 4 functions between the two sets
    CHECK(frag.category->morphism_count() == 8);
    CHECK(validate_category(*frag.category).ok());
    CHECK(frag.object_of(two) == 1);
}

TEST_CASE("generated fragment closes seeds under composition")
{
    FinSet three({"0", "1", "2"});
    auto r = FinFunction::from_pairs(three, three, {{"0", "1"}, {"1", "2"}, {"2", "0"}});
    auto frag = materialize_finset({three}, FragmentMode::generated, {r});
    CHECK(frag.category->morphism_count() == 3);
    CHECK(validate_category(*frag.category).ok());
}

TEST_CASE("budget applies to full fragments")
{
    std::vector<FinSet> sets;
    for (int i = 0; i < 3; ++i)
        sets.push_back(FinSet({"a" + std::to_string(i), "b", "c", "d", "e", "f"}));
    CHECK_THROWS_AS(materialize_finset(sets, FragmentMode::full, {}, 1000), BudgetExceeded);
}
