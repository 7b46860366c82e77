#include "emergence/cli.hpp"
#include "emergence/workspace.hpp"

#include <json.hpp>

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace emergence;

namespace {

const std::string data = TEST_DATA_DIR;

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args, const std::string& file = "cli.emg")
{
    if (!file.empty())
        args.insert(args.begin(), {"-w", data + "/" + file});
    std::ostringstream out, err;
    int s = run_cli(args, out, err);
    return {s, out.str(), err.str()};
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string x; in >> x;)
        w.push_back(x);
    return w;
}

std::size_t count(const std::string& s, const std::string& what)
{
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1))
        ++n;
    return n;
}

// Library operation -> a command reaching it.
const std::vector<std::pair<std::string, std::string>> coverage = {
    {"validate_category", "check category C"},
    {"validate_construct", "check construct K"},
    {"check_operation_properties", "check construct K3"},
    {"validate_emergence", "check emergence E"},
    {"validate_functor functor_properties", "check functor Flat"},
    {"check_natural", "check natural N"},
    {"source legs", "check source L"},
    {"sink legs", "check sink Lk"},
    {"check_table_shape", "check hints H"},
    {"battery", "check battery B"},
    {"validate_diagram", "check diagram D"},
    {"validate_abd", "check abd R"},
    {"validate_set_functor", "check setfunctor T"},
    {"parse_workspace", "check workspace"},
    {"equalizer_emergence restrict_emergence", "construct equalizer IdG Flat --verify"},
    {"strong_equalizer_emergence check_strong_equalizer", "construct strong-equalizer IdG Flat --verify"},
    {"stabilizer", "construct stabilizer G Gs"},
    {"product_emergence product_category", "construct product E G --verify"},
    {"coproduct_emergence", "construct coproduct E G --verify"},
    {"pullback_emergence realize", "construct pullback E E2 --verify"},
    {"limit_of_diagram", "construct limit D --verify"},
    {"verify_universal equalizer", "verify equalizer Id Id Id"},
    {"verify_universal coequalizer", "verify coequalizer Id Id Id"},
    {"verify_universal product", "verify product S"},
    {"verify_universal coproduct", "verify coproduct Sk"},
    {"verify_universal pullback", "verify pullback Id Id Id Id"},
    {"verify_universal pushout", "verify pushout Id Id Id Id"},
    {"verify_universal limit", "verify limit L D"},
    {"verify_universal colimit", "verify colimit Lk D"},
    {"verify_universal mono_source", "verify mono-source L"},
    {"verify_universal mono", "verify mono Id"},
    {"verify_epi", "verify epi Id"},
    {"check_strong_equalizer", "verify strong-equalizer IdG IdG IdG"},
    {"check_natural", "verify natural N"},
    {"essential_uniqueness", "verify uniqueness S S2"},
    {"enumerate_homomorphisms", "relate hom E E"},
    {"check_morphism", "relate strong E E --functor Id"},
    {"enumerate_homomorphisms semi", "relate semi Gs Gs"},
    {"enumerate_homomorphisms strong-semi", "relate strong-semi Gs Gs"},
    {"check_iso", "relate iso G G"},
    {"check_iso strong", "relate strong-iso G G"},
    {"check_iso semi", "relate semi-iso Gs Gs"},
    {"check_iso strong-semi", "relate strong-semi-iso Gs Gs"},
    {"check_iso equivalence", "relate equivalence E E"},
    {"check_iso semi-equivalence", "relate semi-equivalence Gs Gs"},
    {"check_sub_emergence", "relate sub E E"},
    {"check_sub_emergence full", "relate full-sub E E"},
    {"check_induces", "relate induces E2 E"},
    {"graded_arrow compose_graded", "relate graded partial E3 D32 E2 D21 E"},
    {"classify opposite_emergence", "classify E"},
    {"find_representation hom_functor", "represent G"},
    {"extremal_status", "extremal G"},
    {"internal_structure_report", "internal K"},
    {"resolve_to_abd", "abd build R"},
    {"canonical_form", "abd canonical Q"},
    {"refine_single_output", "abd refine R"},
    {"is_factorable support", "abd factorable Q"},
    {"check_set_functor", "abd functor-check T"},
    {"apply_set_functor set_functor_for", "abd apply Te"},
    {"abd_to_emergence close_under_composition", "abd to-emergence R H"},
    {"dot export", "export D"},
    {"opposite", "opposite G"},
    {"enumerate_functors search_functors", "functors C Two"},
    {"find_natural", "natural Id Id --iso"},
    {"serialize", "show"},
    {"workspace_of", "battery standard"},
};

} // namespace

TEST_CASE("every operation is reachable from a command")
{
    std::set<std::string> reached;
    for (const auto& [op, cmd] : coverage) {
        INFO(op << ": " << cmd);
        auto r = cli(words(cmd));
        CHECK(r.status == exit_ok);
        CHECK(r.err.empty());
        auto w = words(cmd);
        reached.insert(w[0]);
        if (w.size() > 1)
            reached.insert(w[0] + " " + w[1]);
    }
    for (const auto& op : cli_operations()) {
        INFO(op);
        CHECK(reached.count(op));
    }
}

TEST_CASE("verdicts in the coverage run hold")
{
    for (const auto& cmd : {"construct equalizer IdG Flat --verify", "construct product E G --verify",
                            "construct coproduct E G --verify", "construct pullback E E2 --verify",
                            "construct limit D --verify", "verify limit L D", "verify colimit Lk D",
                            "verify uniqueness S S2", "verify pullback Id Id Id Id"}) {
        INFO(cmd);
        auto r = cli(words(std::string(cmd) + " --json"));
        CHECK(r.out.find("\"holds\": false") == std::string::npos);
        CHECK(r.out.find("\"holds\": true") != std::string::npos);
    }
}

TEST_CASE("reports are byte-identical across runs")
{
    for (const auto& [op, cmd] : coverage) {
        auto a = cli(words(cmd));
        auto b = cli(words(cmd));
        CHECK(a.out == b.out);
        auto ja = cli(words(cmd + " --json"));
        auto jb = cli(words(cmd + " --json"));
        CHECK(ja.out == jb.out);
    }
}

TEST_CASE("text and json carry the same fields")
{
    auto t = cli({"relate", "iso", "G", "G"});
    auto j = cli({"relate", "iso", "G", "G", "--json"});
    for (const auto& key : {"relation", "source", "target", "verdict", "holds", "functor"}) {
        CHECK(t.out.find(std::string(key) + ":") != std::string::npos);
        CHECK(j.out.find("\"" + std::string(key) + "\"") != std::string::npos);
    }
}

TEST_CASE("constructions are emitted as declarations")
{
    auto r = cli({"construct", "equalizer", "IdG", "Flat", "--name", "EqG"});
    REQUIRE(r.status == exit_ok);
    CHECK(r.out.find("emergence EqG = EqG;") != std::string::npos);
    CHECK(r.out.find("functor EqG.incl : EqG -> G") != std::string::npos);
}

TEST_CASE("exit statuses")
{
    CHECK(cli({"check", "category", "Nope"}).status == exit_error);
    CHECK(cli({"check", "widget", "C"}).status == exit_error);
    CHECK(cli({"frobnicate"}).status == exit_error);
    CHECK(cli({"check", "category", "C"}, "missing.emg").status == exit_error);
    auto b = cli({"--budget", "2", "functors", "C", "C"});
    CHECK(b.status == exit_budget);
    CHECK(b.out.find("budget:") != std::string::npos);
    // a failing verdict is still a successful run
    auto f = cli({"relate", "iso", "E", "G"});
    CHECK(f.status == exit_ok);
    CHECK(f.out.find("holds: false") != std::string::npos);
}

TEST_CASE("located workspace errors")
{
    std::ostringstream out, err;
    const auto path = data + "/broken.emg";
    {
        std::ofstream f(path);
        f << "category C { objects A; }\nfunctor F : C -> Missing { obj A -> A; }\n";
    }
    int s = run_cli({"-w", path, "show"}, out, err);
    CHECK(s == exit_error);
    CHECK(err.str().find("broken.emg:2:") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("show and battery print loadable workspace text")
{
    for (const auto& which : {"standard", "singleton", "terminal", "internal"}) {
        std::ostringstream out, err;
        REQUIRE(run_cli({"battery", which}, out, err) == exit_ok);
        auto ws = parse_workspace_text(out.str());
        CHECK(serialize(ws) == out.str());
    }
    auto r = cli({"show"});
    REQUIRE(r.status == exit_ok);
    CHECK(equivalent(parse_workspace_text(r.out), parse_workspace({data + "/cli.emg"})));
}

TEST_CASE("DOT export of an arrow category")
{
    auto r = cli({"export", "Two"});
    CHECK(r.status == exit_ok);
    CHECK(r.out.rfind("digraph", 0) == 0);
    CHECK(count(r.out, "[label=") == 3); // two nodes and one edge
    CHECK(count(r.out, " -> ") == 1);
    auto with = cli({"export", "Two", "--identities"});
    CHECK(count(with.out, " -> ") == 3);
}

TEST_CASE("DOT export of a pullback square")
{
    auto r = cli({"construct", "pullback", "E", "E2", "--emit-dot", "-", "--json"});
    REQUIRE(r.status == exit_ok);
    CHECK(count(r.out, "subgraph") == 4);
    CHECK(count(r.out, "lhead") == 4);
}

TEST_CASE("DOT export of a block diagram")
{
    auto r = cli({"export", "R"});
    CHECK(count(r.out, "shape=box") == 1);
    CHECK(count(r.out, "shape=ellipse") == 3);
    CHECK(count(r.out, " -> ") == 3);
}

TEST_CASE("abd canonical writes a DOT file")
{
    const auto path = data + "/canonical.dot";
    auto r = cli({"abd", "canonical", "Q", "--emit-dot", path});
    CHECK(r.status == exit_ok);
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    CHECK(s.str().find("shape=box") != std::string::npos);
    CHECK(s.str().find("port:y") == std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("functor export has two clusters")
{
    auto r = cli({"export", "Flat"});
    CHECK(count(r.out, "subgraph") == 2);
    CHECK(count(r.out, "style=dashed") == 1);
}

TEST_CASE("emitted declarations parse back")
{
    auto r = cli({"construct", "product", "E", "G", "--name", "EG", "--json"});
    REQUIRE(r.status == exit_ok);
    const auto text = nlohmann::json::parse(r.out).at("declarations").get<std::string>();
    std::ifstream in(data + "/cli.emg");
    std::stringstream s;
    s << in.rdbuf();
    auto ws = parse_workspace_text(s.str() + text);
    CHECK(ws.emergence("EG")->order() == 2);
    CHECK(validate_emergence(*ws.emergence("EG")).ok());
    CHECK(ws.functors.count("EG.p1"));
}
