#include "emergence/battery.hpp"
#include "emergence/workspace.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace emergence;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<WorkspaceIssue> issues_of(const std::string& text)
{
    try {
        parse_workspace_text(text, "t.emg");
    } catch (const WorkspaceError& e) {
        return e.issues();
    }
    return {};
}

} // namespace

TEST_CASE("minimal workspace")
{
    auto ws = parse_workspace_text("category C { objects A; }");
    CHECK(ws.order.size() == 1);
    CHECK(ws.categories.at("C")->morphism_count() == 1);
}

TEST_CASE("sample workspaces round-trip")
{
    for (const auto& file : {"basic.emg", "cli.emg"}) {
        auto ws = parse_workspace({std::string(TEST_DATA_DIR) + "/" + file});
        const auto text = serialize(ws);
        auto again = parse_workspace_text(text);
        CHECK(equivalent(ws, again));
        CHECK(serialize(again) == text);
    }
}

TEST_CASE("battery workspaces round-trip")
{
    std::vector<std::vector<EmergenceRef>> batteries = {emergence_battery(), singleton_battery(), {terminal_example()}};
    for (const auto& b : batteries) {
        auto ws = workspace_of(b);
        const auto text = serialize(ws);
        auto again = parse_workspace_text(text);
        CHECK(equivalent(ws, again));
        for (const auto& e : b)
            CHECK(again.emergence(e->name)->order() == e->order());
    }
}

TEST_CASE("undeclared reference is one located error")
{
    auto issues = issues_of("category C { objects A; }\nfunctor F : C -> Nope { obj A -> A; }\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].where.line == 2);
    CHECK(issues[0].message.find("Nope") != std::string::npos);
}

TEST_CASE("duplicates, cycles and unknown kinds")
{
    auto dup = issues_of("category C { objects A; }\ncategory C { objects B; }\n");
    REQUIRE(dup.size() == 1);
    CHECK(dup[0].where.line == 2);
    CHECK(dup[0].message.find("duplicate") != std::string::npos);

    auto unknown = issues_of("widget W { }\n");
    REQUIRE(unknown.size() == 1);
    CHECK(unknown[0].where.column == 1);

    auto cycle = issues_of("construct K on E { slot a internal []; }\nemergence E = K;\n");
    REQUIRE_FALSE(cycle.empty());
    bool named = false;
    for (const auto& i : cycle)
        named = named || i.message.find("cycle") != std::string::npos;
    CHECK(named);
}

TEST_CASE("forward references across files resolve in file order")
{
    auto ws = parse_workspace_sources({{"b.emg", "functor F : C -> C { obj A -> A; }\n"},
                                       {"a.emg", "category C { objects A; }\n"}});
    REQUIRE(ws.order.size() == 2);
    CHECK(ws.order[0].kind == DeclKind::functor);
    CHECK(ws.order[0].where.file == "b.emg");
    CHECK(ws.order[1].where.file == "a.emg");
}

TEST_CASE("composition rows are not inferred")
{
    auto ws = parse_workspace_text("category C { objects A; mor s A A; units; }\n");
    auto r = validate_category(*ws.categories.at("C"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].witness == std::vector<std::string>{"s", "s"});
}

TEST_CASE("settings are read")
{
    auto ws = parse_workspace_text("settings { budget 42; battery B; format json; }\n");
    CHECK(ws.settings.budget == 42u);
    CHECK(ws.settings.battery == "B");
    CHECK(ws.settings.format == "json");
}

TEST_CASE("equivalence notices a changed table")
{
    const auto text = slurp(std::string(TEST_DATA_DIR) + "/basic.emg");
    auto a = parse_workspace_text(text);
    auto changed = text;
    changed.replace(changed.find("{ 0 1 | 1 0 }"), 13, "{ 0 1 | 1 1 }");
    // no longer a group, so the tags must go as well
    changed.replace(changed.find("slot add internal [associative commutative has_identity has_inverses]"), 69,
                    "slot add internal [associative commutative has_identity]");
    auto b = parse_workspace_text(changed);
    CHECK_FALSE(equivalent(a, b));
}
