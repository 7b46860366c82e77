#include "../generators.hpp"
#include "../oracles.hpp"

#include <doctest.h>

using namespace emergence;

namespace {

AbstractBlockDiagram two_input(std::vector<Index> table)
{
    AbstractBlockDiagram abd;
    abd.name = "F";
    abd.ports = {{"x", numbered_set(2)}, {"y", numbered_set(2)}, {"z", numbered_set(2)}};
    abd.components = {{"f", {"x", "y"}, {"z"}, std::move(table)}};
    return abd;
}

} // namespace

TEST_CASE("tuple encoding puts the first coordinate slowest")
{
    std::vector<std::size_t> radix{2, 3};
    CHECK(tuple_count(radix) == 6);
    CHECK(decode_tuple(4, radix) == std::vector<Index>{1, 1});
    for (Index k = 0; k < 6; ++k)
        CHECK(encode_tuple(decode_tuple(k, radix), radix) == k);
}

TEST_CASE("factorability of all binary boolean functions")
{
    std::size_t factorable = 0;
    for (unsigned bits = 0; bits < 16; ++bits) {
        std::vector<Index> table{bits & 1u, (bits >> 1) & 1u, (bits >> 2) & 1u, (bits >> 3) & 1u};
        const bool expected = oracle::factorable({2, 2}, table);
        CHECK(is_factorable({2, 2}, table).has_value() == expected);
        auto abd = two_input(table);
        CHECK(validate_abd(abd).ok());
        CHECK(is_factorable(abd, abd.components[0]).has_value() == expected);
        factorable += expected;
    }
    CHECK(factorable == 6);
}

TEST_CASE("support of random tables matches coordinate dependence")
{
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::size_t> radix;
        for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k)
            radix.push_back(1 + rng() % 3);
        auto table = gen::random_table(rng, tuple_count(radix), 2);
        std::vector<Index> expected;
        for (Index k = 0; k < radix.size(); ++k)
            if (oracle::depends_on(radix, table, k))
                expected.push_back(k);
        CHECK(support(radix, table) == expected);
    }
}

TEST_CASE("single-input mappings are never factorable")
{
    CHECK_FALSE(is_factorable({3}, {0, 0, 0}));
    CHECK(is_factorable({2, 2}, {1, 1, 1, 1}) == std::vector<Index>{});
}

TEST_CASE("validation rules")
{
    auto abd = two_input({0, 1, 1, 0});
    abd.components.push_back({"g", {"x"}, {"z"}, {0, 1}});
    auto r = validate_abd(abd);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].rule == "multiple-producers");

    auto bad = two_input({0, 1, 1});
    CHECK(validate_abd(bad).violations.at(0).rule == "table-size");
    auto range = two_input({0, 1, 1, 5});
    CHECK(validate_abd(range).violations.at(0).rule == "table-range");
    auto unknown = two_input({0, 1, 1, 0});
    unknown.components[0].inputs[1] = "w";
    CHECK(validate_abd(unknown).violations.at(0).rule == "unknown-port");
}

TEST_CASE("canonical form is idempotent and keeps behaviour")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 20; ++i) {
        auto abd = gen::random_abd(rng, "R" + std::to_string(i));
        REQUIRE(validate_abd(abd).ok());
        auto c = canonical_form(abd);
        CHECK(validate_abd(c).ok());
        CHECK(canonical_form(c) == c);
        CHECK(oracle::same_behaviour(abd, c));
        for (const auto& comp : c.components)
            CHECK_FALSE(is_factorable(c, comp));
    }
}

TEST_CASE("refinement recomposes to the original mapping")
{
    std::mt19937 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto abd = gen::random_abd(rng, "R");
        auto r = refine_single_output(abd);
        CHECK(validate_abd(r).ok());
        for (const auto& c : abd.components) {
            const auto radix = abd.input_radix(c);
            for (std::size_t t = 0; t < tuple_count(radix); ++t) {
                auto in = decode_tuple(t, radix);
                auto whole = evaluate(abd, c, in);
                for (std::size_t k = 0; k < c.outputs.size(); ++k) {
                    const auto name = c.outputs.size() == 1 ? c.name : c.name + "/" + c.outputs[k];
                    const auto& part = r.components.at(r.find_component(name));
                    CHECK(part.outputs.size() == 1);
                    CHECK(evaluate(r, part, in).at(0) == whole[k]);
                }
            }
        }
    }
}

TEST_CASE("resolution round trip")
{
    std::mt19937 rng(2);
    for (int i = 0; i < 10; ++i) {
        auto abd = gen::random_abd(rng, "R");
        CHECK(resolve_to_abd(resolution_of(abd)) == abd);
    }
}

TEST_CASE("conflicting rows are rejected")
{
    auto res = resolution_of(two_input({0, 1, 1, 0}));
    res.parts[0].rows.push_back({{"0", "0"}, {"1"}});
    CHECK_THROWS_WITH_AS(resolve_to_abd(res), doctest::Contains("two outputs"), Error);
}

TEST_CASE("identity set-functor is regular and multiplicative")
{
    auto abd = two_input({0, 1, 1, 0});
    auto t = set_functor_for(abd, {SetFunctorRule::identity, {}});
    CHECK(validate_set_functor(t).ok());
    auto c = check_set_functor(t);
    CHECK(c.regular);
    CHECK(c.multiplicative);
    auto app = apply_set_functor(abd, t);
    CHECK(app.valid);
    CHECK(app.verdict == "no defect found");
    REQUIRE(app.abd);
    CHECK(app.abd->components == abd.components);
}

TEST_CASE("empty-collapse fails regularity")
{
    auto abd = two_input({0, 1, 1, 0});
    auto t = set_functor_for(abd, {SetFunctorRule::empty, {}});
    auto c = check_set_functor(t);
    CHECK_FALSE(c.regular);
    CHECK(c.regular_rule == "nonempty");
    auto app = apply_set_functor(abd, t);
    // the image is a well-formed but degenerate diagram
    CHECK(app.verdict == "defect");
    REQUIRE_FALSE(app.defect.empty());
    CHECK(app.defect[0] == "port");
}

TEST_CASE("squaring is regular but not multiplicative")
{
    AbstractBlockDiagram abd;
    abd.name = "M";
    abd.ports = {{"x", numbered_set(2)}, {"y", FinSet({"a", "b", "c"})}, {"z", numbered_set(2)}};
    abd.components = {{"f", {"x", "y"}, {"z"}, {0, 1, 0, 1, 1, 0}}};
    auto c = check_set_functor(set_functor_for(abd, {SetFunctorRule::square, {}}));
    CHECK(c.regular);
    CHECK_FALSE(c.multiplicative);
    // with equal factor sets the two products have the same labels
    auto same = check_set_functor(set_functor_for(two_input({0, 1, 1, 0}), {SetFunctorRule::square, {}}));
    CHECK(same.multiplicative);
}

TEST_CASE("relabelling transports the diagram")
{
    auto abd = two_input({0, 1, 1, 0});
    SetFunctorAction a{SetFunctorRule::relabel, {{"0", "a"}, {"1", "b"}}};
    auto app = apply_set_functor(abd, set_functor_for(abd, a));
    CHECK(app.valid);
    REQUIRE(app.abd);
    CHECK(app.abd->port("x").set == FinSet({"a", "b"}));
    CHECK(app.abd->components[0].table == abd.components[0].table);
}

TEST_CASE("diagram to emergence")
{
    auto abd = two_input({0, 1, 1, 0});
    SignatureHints h;
    h.signature.slots = {{"xor", OpKind::internal, group_tags(), {}}};
    for (const auto& p : {"x", "y", "z"})
        h.tables[p] = {cyclic_addition(numbered_set(2), group_tags())};
    auto r = abd_to_emergence(abd, h);
    CHECK_FALSE(r.canonicalized);
    CHECK(validate_emergence(*r.emergence).ok());
    const auto& cat = *r.emergence->category();
    CHECK(cat.find_object("x*y") != npos);
    CHECK(cat.find_morphism("f") != npos);

    SignatureHints partial = h;
    partial.tables.erase("z");
    CHECK_THROWS_AS(abd_to_emergence(abd, partial), ConstructionError);
}
