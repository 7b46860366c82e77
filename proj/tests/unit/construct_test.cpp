#include "emergence/battery.hpp"

#include <doctest.h>

using namespace emergence;

namespace {

TagSet all_four()
{
    return group_tags();
}

OperationTable max_table(std::size_t n)
{
    return table_from(numbered_set(n), [](Index a, Index b) { return std::max(a, b); }, {});
}

} // namespace

TEST_CASE("cyclic addition is an abelian group")
{
    for (std::size_t n = 1; n <= 5; ++n)
        CHECK(check_operation_properties(cyclic_addition(numbered_set(n), {})) == all_four());
}

TEST_CASE("max is a commutative monoid without inverses")
{
    CHECK(check_operation_properties(max_table(3)) == monoid_tags());
    auto t = max_table(3);
    auto w = refute_claim(t, {Tag::has_inverses, {}}, nullptr);
    CHECK_FALSE(w.empty());
    CHECK(refute_claim(t, {Tag::associative, {}}, nullptr).empty());
}

TEST_CASE("subtraction refutes associativity and commutativity")
{
    auto t = table_from(numbered_set(3), [](Index a, Index b) { return (a + 3 - b) % 3; }, {});
    auto tags = check_operation_properties(t);
    CHECK_FALSE(tags.count({Tag::associative, {}}));
    CHECK_FALSE(tags.count({Tag::commutative, {}}));
    CHECK(refute_claim(t, {Tag::commutative, {}}, nullptr).size() == 2);
}

TEST_CASE("min distributes over max")
{
    auto mx = max_table(3);
    auto mn = table_from(numbered_set(3), [](Index a, Index b) { return std::min(a, b); }, {});
    StructureSignature sig{{{"max", OpKind::internal, {}, {}}, {"min", OpKind::internal, {}, {}}}};
    auto tags = check_operation_properties({mx, mn}, sig, 1);
    CHECK(tags.count({Tag::distributes_over, "max"}));
    CHECK(refute_claim(mn, {Tag::distributes_over, "max"}, &mx).empty());
    auto add = cyclic_addition(numbered_set(3), {});
    CHECK_FALSE(refute_claim(add, {Tag::distributes_over, "max"}, &mx).empty());
}

TEST_CASE("construct validation catches a false tag claim")
{
    StructureSignature sig{{{"max", OpKind::internal, group_tags(), {}}}};
    auto c = numbered_set(2);
    EmergenceRef e;
    CHECK_THROWS_AS(concrete_emergence("Bad", sig, {{"A", c, {max_table(2)}}}, {}), ConstructionError);
}

TEST_CASE("table shape mismatches are structural errors")
{
    auto t = max_table(3);
    t.table.pop_back();
    CHECK_THROWS_AS(check_table_shape(t), StructuralError);
}

TEST_CASE("composition closure names composites and merges duplicates")
{
    auto s = numbered_set(3);
    FinFunction r{s, s, {1, 2, 0}};
    FinFunction r2{s, s, {1, 2, 0}};
    auto closed = close_under_composition("Z3", {"A"}, {s}, {{"r", 0, 0, r}, {"q", 0, 0, r2}});
    CHECK(closed.category->morphism_count() == 3);
    CHECK(closed.category->find_morphism("r.r") != npos);
    CHECK(closed.merged.size() == 1);
    CHECK(validate_category(*closed.category).ok());
}

TEST_CASE("standard underlying functor of every battery construct")
{
    for (const auto& e : standard_battery()) {
        auto u = standard_underlying(e->construct);
        CHECK(validate_gu(u, UnderlyingMode::gu).ok());
        CHECK(validate_construct(*e->construct).ok());
    }
}

TEST_CASE("internal structure of thin constructs")
{
    auto chain = internal_structure_report(*chain_construct(3));
    CHECK(chain.thin);
    CHECK(chain.terminal_objects.size() == 1);
    CHECK(chain.has_binary_products);
    CHECK(chain.has_equalizers);
    CHECK(chain.finitely_complete);
    REQUIRE(chain.lattice);
    CHECK(chain.lattice->complete);
    CHECK(chain.lattice_equivalence);

    auto anti = internal_structure_report(*antichain_construct(2));
    CHECK(anti.terminal_objects.empty());
    CHECK_FALSE(anti.has_binary_products);
    CHECK_FALSE(anti.finitely_complete);
    REQUIRE(anti.lattice);
    CHECK_FALSE(anti.lattice->complete);
    // both sides false, so the equivalence itself holds
    CHECK(anti.lattice_equivalence);
}

TEST_CASE("a chain has a meet for every subset")
{
    for (std::size_t n = 1; n <= 5; ++n) {
        auto r = internal_structure_report(*chain_construct(n));
        REQUIRE(r.lattice);
        CHECK(r.lattice->complete);
        CHECK(r.finitely_complete);
    }
}
