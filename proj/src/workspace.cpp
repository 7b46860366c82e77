#include "emergence/workspace.hpp"

#include "emergence/battery.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace emergence {

std::string to_string(DeclKind k)
{
    switch (k) {
    case DeclKind::category:
        return "category";
    case DeclKind::construct:
        return "construct";
    case DeclKind::emergence:
        return "emergence";
    case DeclKind::functor:
        return "functor";
    case DeclKind::natural:
        return "natural";
    case DeclKind::source:
        return "source";
    case DeclKind::sink:
        return "sink";
    case DeclKind::diagram:
        return "diagram";
    case DeclKind::abd:
        return "abd";
    case DeclKind::hints:
        return "hints";
    case DeclKind::setfunctor:
        return "setfunctor";
    case DeclKind::battery:
        return "battery";
    }
    return "?";
}

namespace {

std::string where_text(const Location& l)
{
    return l.file + ":" + std::to_string(l.line) + ":" + std::to_string(l.column);
}

std::string issues_text(const std::vector<WorkspaceIssue>& issues)
{
    std::string out;
    for (const auto& i : issues)
        out += (out.empty() ? "" : "\n") + where_text(i.where) + ": " + i.message;
    return out;
}

} // namespace

WorkspaceError::WorkspaceError(std::vector<WorkspaceIssue> issues)
    : Error(issues_text(issues)), issues_(std::move(issues))
{
}

bool Workspace::contains(DeclKind kind, const std::string& name) const
{
    switch (kind) {
    case DeclKind::category:
        return categories.count(name);
    case DeclKind::construct:
        return constructs.count(name);
    case DeclKind::emergence:
        return emergences.count(name);
    case DeclKind::functor:
        return functors.count(name);
    case DeclKind::natural:
        return naturals.count(name);
    case DeclKind::source:
        return sources.count(name);
    case DeclKind::sink:
        return sinks.count(name);
    case DeclKind::diagram:
        return diagrams.count(name);
    case DeclKind::abd:
        return abds.count(name);
    case DeclKind::hints:
        return hints.count(name);
    case DeclKind::setfunctor:
        return setfunctors.count(name);
    case DeclKind::battery:
        return batteries.count(name);
    }
    return false;
}

CategoryRef Workspace::category_of(const std::string& name) const
{
    if (auto it = emergences.find(name); it != emergences.end())
        return it->second.emergence->category();
    if (auto it = constructs.find(name); it != constructs.end())
        return it->second->category;
    if (auto it = categories.find(name); it != categories.end())
        return it->second;
    throw StructuralError("no category, construct or emergence named " + name);
}

EmergenceRef Workspace::emergence(const std::string& name) const
{
    auto it = emergences.find(name);
    if (it == emergences.end())
        throw StructuralError("no emergence named " + name);
    return it->second.emergence;
}

const Functor& Workspace::functor(const std::string& name) const
{
    auto it = functors.find(name);
    if (it == functors.end())
        throw StructuralError("no functor named " + name);
    return it->second.functor;
}

Battery Workspace::battery(const std::string& name) const
{
    if (name.empty() || name == "default")
        return default_battery();
    auto it = batteries.find(name);
    if (it == batteries.end())
        throw StructuralError("no battery named " + name);
    Battery b{name, {}};
    for (const auto& c : it->second.categories)
        b.categories.push_back(category_of(c));
    for (const auto& e : it->second.emergences)
        b.categories.push_back(emergences.at(e).emergence->category());
    return b;
}

std::vector<EmergenceRef> Workspace::emergence_battery(const std::string& name) const
{
    if (name == "standard")
        return emergence::emergence_battery();
    if (name == "singleton")
        return singleton_battery();
    std::vector<EmergenceRef> out;
    if (name.empty() || name == "default") {
        for (const auto& d : order)
            if (d.kind == DeclKind::emergence)
                out.push_back(emergences.at(d.name).emergence);
        return out;
    }
    auto it = batteries.find(name);
    if (it == batteries.end())
        throw StructuralError("no battery named " + name);
    for (const auto& e : it->second.emergences)
        out.push_back(emergence(e));
    return out;
}

void Workspace::add_category(const std::string& name, CategoryRef c, Location where)
{
    if (!categories.emplace(name, std::move(c)).second)
        throw StructuralError("duplicate category " + name);
    order.push_back({DeclKind::category, name, std::move(where)});
}

void Workspace::add_construct(const std::string& name, ConstructRef c, Location where)
{
    if (!constructs.emplace(name, std::move(c)).second)
        throw StructuralError("duplicate construct " + name);
    order.push_back({DeclKind::construct, name, std::move(where)});
}

void Workspace::add_emergence(const std::string& name, EmergenceDecl e, Location where)
{
    if (!emergences.emplace(name, std::move(e)).second)
        throw StructuralError("duplicate emergence " + name);
    order.push_back({DeclKind::emergence, name, std::move(where)});
}

void Workspace::add_functor(const std::string& name, FunctorDecl f, Location where)
{
    if (!functors.emplace(name, std::move(f)).second)
        throw StructuralError("duplicate functor " + name);
    order.push_back({DeclKind::functor, name, std::move(where)});
}

void register_emergence(Workspace& ws, const EmergenceRef& e)
{
    const auto& cat = e->category();
    if (auto it = ws.categories.find(cat->name()); it == ws.categories.end())
        ws.add_category(cat->name(), cat);
    else if (!same_category(it->second, cat))
        throw StructuralError("a different category named " + cat->name() + " is already declared");
    if (auto it = ws.constructs.find(e->construct->name); it == ws.constructs.end())
        ws.add_construct(e->construct->name, e->construct);
    else if (it->second != e->construct &&
             !(same_category(it->second->category, cat) && it->second->signature == e->construct->signature &&
               it->second->carriers == e->construct->carriers && it->second->structure == e->construct->structure &&
               it->second->underlying == e->construct->underlying))
        throw StructuralError("a different construct named " + e->construct->name + " is already declared");
    ws.add_emergence(e->name, {e, e->construct->name});
}

Workspace workspace_of(const std::vector<EmergenceRef>& es)
{
    Workspace ws;
    for (const auto& e : es)
        register_emergence(ws, e);
    return ws;
}

namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum Type { word, string, punct, end } type = end;
    std::string text;
    Location where;
};

bool word_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.'/*+^$@!?~%&").find(c) != std::string_view::npos;
}

struct Located : Error {
    Location where;
    Located(Location w, const std::string& m) : Error(m), where(std::move(w)) {}
};

std::vector<Token> lex(const std::string& text, const std::string& file)
{
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.where = {file, line, col};
        if (c == '"') {
            advance(1);
            t.type = Token::string;
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < text.size())
                    advance(1);
                if (text[i] == '\n')
                    throw Located(t.where, "unterminated string");
                t.text += text[i];
                advance(1);
            }
            if (i >= text.size())
                throw Located(t.where, "unterminated string");
            advance(1);
        } else if ((c == '-' || c == '=') && i + 1 < text.size() && text[i + 1] == '>') {
            t.type = Token::punct;
            t.text = std::string{c, '>'};
            advance(2);
        } else if (std::string_view("{}[]();:,|=").find(c) != std::string_view::npos) {
            t.type = Token::punct;
            t.text = std::string{c};
            advance(1);
        } else if (word_char(c) || c == '-') {
            t.type = Token::word;
            while (i < text.size() && (word_char(text[i]) || (text[i] == '-' && (i + 1 >= text.size() || text[i + 1] != '>')))) {
                t.text += text[i];
                advance(1);
            }
        } else {
            throw Located(t.where, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    out.push_back({Token::end, "", {file, line, col}});
    return out;
}

// ---------------------------------------------------------------- syntax

struct Name {
    std::string text;
    Location where;
};

using Names = std::vector<Name>;
using NamePairs = std::vector<std::pair<Name, Name>>;

struct TagSyntax {
    Name tag;
    std::optional<Name> other;
};

struct SlotSyntax {
    Name name;
    OpKind kind = OpKind::internal;
    Names scalars;
    std::vector<TagSyntax> tags;
};

struct TableSyntax {
    Name object;
    Name slot;
    std::vector<Names> rows;
};

struct MapSyntax {
    Name morphism;
    NamePairs pairs;
};

struct CategorySyntax {
    Names objects;
    NamePairs identities;
    std::vector<std::array<Name, 3>> morphisms;
    std::vector<std::array<Name, 3>> composes;
    bool units = false;
};

struct ConstructSyntax {
    Name category;
    std::vector<SlotSyntax> slots;
    std::vector<std::pair<Name, Names>> carriers;
    std::vector<TableSyntax> tables;
    std::vector<MapSyntax> maps;
};

struct EmergenceSyntax {
    Name construct;
    bool semi = false;
    std::vector<std::pair<Name, Names>> sets;
    std::vector<MapSyntax> maps;
};

struct FunctorSyntax {
    Name source, target;
    NamePairs objects, morphisms;
};

struct NaturalSyntax {
    Name from, to;
    NamePairs components;
};

struct ConeSyntax {
    Name apex;
    Names legs;
};

struct DiagramSyntax {
    Name scheme;
    NamePairs nodes, edges;
};

struct PortSyntax {
    Name name;
    std::optional<Names> type;
};

struct PartSyntax {
    Name name;
    std::vector<PortSyntax> inputs, outputs;
    std::vector<std::pair<Names, Names>> rows;
};

struct AbdSyntax {
    std::vector<std::pair<Name, Names>> signals;
    std::vector<PartSyntax> parts;
};

struct HintsSyntax {
    Name abd;
    std::vector<SlotSyntax> slots;
    std::vector<TableSyntax> tables;
};

struct SetFunctorSyntax {
    Name abd;
    Name rule;
    NamePairs relabel;
};

struct BatterySyntax {
    Names categories, emergences;
};

struct Ref {
    std::vector<DeclKind> kinds;
    Name name;
};

struct Pending {
    DeclKind kind;
    Name name;
    std::vector<Ref> deps;
    std::function<void(Workspace&)> build;
};

const std::vector<DeclKind> kCategoryLike{DeclKind::emergence, DeclKind::construct, DeclKind::category};
// A construct is built on a category first, so that a category, construct
// and emergence may share one name.
const std::vector<DeclKind> kConstructBase{DeclKind::category, DeclKind::construct, DeclKind::emergence};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Pending>& out, Settings& settings)
        : t_(std::move(tokens)), out_(out), settings_(settings)
    {
    }

    void parse()
    {
        while (peek().type != Token::end)
            declaration();
    }

private:
    const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
    const Token& next() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw Located(t.where, msg); }

    bool is(const char* punct) const { return peek().type == Token::punct && peek().text == punct; }
    bool is_word(const char* w) const { return peek().type == Token::word && peek().text == w; }

    bool accept(const char* punct)
    {
        if (!is(punct))
            return false;
        next();
        return true;
    }

    void expect(const char* punct)
    {
        if (!accept(punct))
            fail(peek(), std::string("expected '") + punct + "', found " + describe(peek()));
    }

    void keyword(const char* w)
    {
        if (!is_word(w))
            fail(peek(), std::string("expected '") + w + "', found " + describe(peek()));
        next();
    }

    static std::string describe(const Token& t)
    {
        if (t.type == Token::end)
            return "end of input";
        return "'" + t.text + "'";
    }

    Name name()
    {
        const auto& t = peek();
        if (t.type != Token::word && t.type != Token::string)
            fail(t, "expected a name, found " + describe(t));
        next();
        return {t.text, t.where};
    }

    // Names up to (not including) one of the stop punctuations.
    Names names_until(std::initializer_list<const char*> stops)
    {
        Names out;
        for (;;) {
            for (auto s : stops)
                if (is(s))
                    return out;
            if (accept(","))
                continue;
            out.push_back(name());
        }
    }

    Names label_set()
    {
        expect("{");
        auto out = names_until({"}"});
        expect("}");
        return out;
    }

    NamePairs pair_block()
    {
        expect("{");
        NamePairs out;
        while (!accept("}")) {
            if (accept(",") || accept(";"))
                continue;
            Name a = name();
            expect("->");
            out.push_back({a, name()});
        }
        return out;
    }

    std::vector<Names> rows_block()
    {
        expect("{");
        std::vector<Names> rows(1);
        while (!accept("}")) {
            if (accept("|")) {
                rows.emplace_back();
                continue;
            }
            if (accept(","))
                continue;
            rows.back().push_back(name());
        }
        if (rows.size() == 1 && rows[0].empty())
            rows.clear();
        return rows;
    }

    void end_statement() { expect(";"); }

    void end_block()
    {
        expect("}");
        accept(";");
    }

    std::vector<TagSyntax> tags()
    {
        std::vector<TagSyntax> out;
        if (!accept("["))
            return out;
        while (!accept("]")) {
            if (accept(","))
                continue;
            TagSyntax t{name(), std::nullopt};
            if (accept("(")) {
                t.other = name();
                expect(")");
            }
            out.push_back(std::move(t));
        }
        return out;
    }

    SlotSyntax slot()
    {
        SlotSyntax s;
        s.name = name();
        Name kind = name();
        if (kind.text == "internal") {
            s.kind = OpKind::internal;
        } else if (kind.text == "external") {
            s.kind = OpKind::external;
            s.scalars = label_set();
        } else {
            throw Located(kind.where, "slot kind must be internal or external, found '" + kind.text + "'");
        }
        s.tags = tags();
        end_statement();
        return s;
    }

    TableSyntax table()
    {
        TableSyntax t;
        t.object = name();
        t.slot = name();
        t.rows = rows_block();
        accept(";");
        return t;
    }

    MapSyntax map()
    {
        MapSyntax m;
        m.morphism = name();
        m.pairs = pair_block();
        accept(";");
        return m;
    }

    void push(DeclKind kind, Name n, std::vector<Ref> deps, std::function<void(Workspace&)> build)
    {
        out_.push_back({kind, std::move(n), std::move(deps), std::move(build)});
    }

    void declaration()
    {
        const Token& head = peek();
        if (head.type != Token::word)
            fail(head, "expected a declaration, found " + describe(head));
        const std::string kind = head.text;
        next();
        if (kind == "category")
            category();
        else if (kind == "construct")
            construct();
        else if (kind == "emergence" || kind == "semi-emergence")
            emergence(kind == "semi-emergence");
        else if (kind == "functor")
            functor();
        else if (kind == "natural")
            natural();
        else if (kind == "source" || kind == "sink")
            cone(kind == "sink");
        else if (kind == "diagram")
            diagram();
        else if (kind == "abd")
            abd();
        else if (kind == "hints")
            hints();
        else if (kind == "setfunctor")
            setfunctor();
        else if (kind == "battery")
            battery();
        else if (kind == "settings")
            settings();
        else
            fail(head, "unknown declaration kind '" + kind + "'");
    }

    void category()
    {
        Name n = name();
        CategorySyntax s;
        expect("{");
        while (!accept("}")) {
            Name st = name();
            if (st.text == "objects") {
                auto objs = names_until({";"});
                s.objects.insert(s.objects.end(), objs.begin(), objs.end());
            } else if (st.text == "mor") {
                Name f = name(), a = name(), b = name();
                s.morphisms.push_back({f, a, b});
            } else if (st.text == "identity") {
                Name o = name();
                s.identities.push_back({o, name()});
            } else if (st.text == "compose") {
                Name g = name(), f = name();
                expect("=");
                s.composes.push_back({g, f, name()});
            } else if (st.text == "units") {
                s.units = true;
            } else {
                throw Located(st.where, "unknown category statement '" + st.text + "'");
            }
            end_statement();
        }
        accept(";");
        push(DeclKind::category, n, {}, [n, s](Workspace& ws) {
            CategoryBuilder b(n.text);
            for (const auto& o : s.objects) {
                std::string id;
                for (const auto& [obj, idname] : s.identities)
                    if (obj.text == o.text)
                        id = idname.text;
                try {
                    b.object(o.text, id);
                } catch (const StructuralError& e) {
                    throw Located(o.where, e.what());
                }
            }
            for (const auto& [obj, idname] : s.identities)
                if (b.find_object(obj.text) == npos)
                    throw Located(obj.where, "identity for undeclared object " + obj.text);
            for (const auto& [f, a, c] : s.morphisms) {
                try {
                    b.morphism(f.text, a.text, c.text);
                } catch (const StructuralError& e) {
                    throw Located(f.where, e.what());
                }
            }
            for (const auto& [g, f, h] : s.composes) {
                try {
                    b.compose(g.text, f.text, h.text);
                } catch (const StructuralError& e) {
                    throw Located(g.where, e.what());
                }
            }
            if (s.units)
                b.unit_laws();
            ws.add_category(n.text, b.build(), n.where);
        });
    }

    void construct()
    {
        Name n = name();
        ConstructSyntax s;
        keyword("on");
        s.category = name();
        expect("{");
        while (!accept("}")) {
            Name st = name();
            if (st.text == "slot") {
                s.slots.push_back(slot());
            } else if (st.text == "carrier") {
                Name o = name();
                s.carriers.push_back({o, label_set()});
                accept(";");
            } else if (st.text == "table") {
                s.tables.push_back(table());
            } else if (st.text == "map") {
                s.maps.push_back(map());
            } else {
                throw Located(st.where, "unknown construct statement '" + st.text + "'");
            }
        }
        accept(";");
        push(DeclKind::construct, n, {{kConstructBase, s.category}}, [n, s](Workspace& ws) { build_construct(ws, n, s); });
    }

    void emergence(bool semi)
    {
        Name n = name();
        EmergenceSyntax s;
        s.semi = semi;
        expect("=");
        s.construct = name();
        if (accept("{")) {
            while (!accept("}")) {
                Name st = name();
                if (st.text == "set") {
                    Name o = name();
                    s.sets.push_back({o, label_set()});
                    accept(";");
                } else if (st.text == "map") {
                    s.maps.push_back(map());
                } else {
                    throw Located(st.where, "unknown emergence statement '" + st.text + "'");
                }
            }
            accept(";");
        } else {
            end_statement();
        }
        push(DeclKind::emergence, n, {{{DeclKind::construct}, s.construct}},
             [n, s](Workspace& ws) { build_emergence(ws, n, s); });
    }

    void functor()
    {
        Name n = name();
        FunctorSyntax s;
        expect(":");
        s.source = name();
        expect("->");
        s.target = name();
        expect("{");
        while (!accept("}")) {
            Name st = name();
            Name a = name();
            expect("->");
            Name b = name();
            if (st.text == "obj")
                s.objects.push_back({a, b});
            else if (st.text == "mor")
                s.morphisms.push_back({a, b});
            else
                throw Located(st.where, "unknown functor statement '" + st.text + "'");
            end_statement();
        }
        accept(";");
        push(DeclKind::functor, n, {{kCategoryLike, s.source}, {kCategoryLike, s.target}},
             [n, s](Workspace& ws) { build_functor(ws, n, s); });
    }

    void natural()
    {
        Name n = name();
        NaturalSyntax s;
        expect(":");
        s.from = name();
        expect("=>");
        s.to = name();
        s.components = pair_block();
        accept(";");
        push(DeclKind::natural, n, {{{DeclKind::functor}, s.from}, {{DeclKind::functor}, s.to}},
             [n, s](Workspace& ws) {
                 const auto& f = ws.functor(s.from.text);
                 const auto& g = ws.functor(s.to.text);
                 NaturalTransformation t{f, g, std::vector<Index>(f.source->object_count(), npos)};
                 for (const auto& [o, m] : s.components) {
                     Index oi = f.source->find_object(o.text);
                     if (oi == npos)
                         throw Located(o.where, "unknown object " + o.text);
                     Index mi = f.target->find_morphism(m.text);
                     if (mi == npos)
                         throw Located(m.where, "unknown morphism " + m.text);
                     t.components[oi] = mi;
                 }
                 for (Index o = 0; o < t.components.size(); ++o)
                     if (t.components[o] == npos)
                         throw Located(n.where, "missing component at " + f.source->object(o));
                 ws.naturals.emplace(n.text, NaturalDecl{t, s.from.text, s.to.text});
                 ws.order.push_back({DeclKind::natural, n.text, n.where});
             });
    }

    void cone(bool sink)
    {
        Name n = name();
        ConeSyntax s;
        keyword(sink ? "into" : "from");
        s.apex = name();
        expect("{");
        while (!accept("}")) {
            Name st = name();
            if (st.text != "leg")
                throw Located(st.where, "expected 'leg'");
            s.legs.push_back(name());
            end_statement();
        }
        accept(";");
        std::vector<Ref> deps{{kCategoryLike, s.apex}};
        for (const auto& l : s.legs)
            deps.push_back({{DeclKind::functor}, l});
        push(sink ? DeclKind::sink : DeclKind::source, n, deps, [n, s, sink](Workspace& ws) {
            auto apex = ws.category_of(s.apex.text);
            ConeDecl d{s.apex.text, {}};
            for (const auto& l : s.legs) {
                const auto& f = ws.functor(l.text);
                if (!same_category(sink ? f.target : f.source, apex))
                    throw Located(l.where, "leg " + l.text + (sink ? " does not end at " : " does not start at ") +
                                               s.apex.text);
                d.legs.push_back(l.text);
            }
            (sink ? ws.sinks : ws.sources).emplace(n.text, d);
            ws.order.push_back({sink ? DeclKind::sink : DeclKind::source, n.text, n.where});
        });
    }

    void diagram()
    {
        Name n = name();
        DiagramSyntax s;
        keyword("on");
        s.scheme = name();
        expect("{");
        while (!accept("}")) {
            Name st = name();
            Name a = name();
            expect("=");
            Name b = name();
            if (st.text == "node")
                s.nodes.push_back({a, b});
            else if (st.text == "edge")
                s.edges.push_back({a, b});
            else
                throw Located(st.where, "unknown diagram statement '" + st.text + "'");
            end_statement();
        }
        accept(";");
        std::vector<Ref> deps{{kCategoryLike, s.scheme}};
        for (const auto& [a, e] : s.nodes)
            deps.push_back({{DeclKind::emergence}, e});
        for (const auto& [a, f] : s.edges)
            deps.push_back({{DeclKind::functor}, f});
        push(DeclKind::diagram, n, deps, [n, s](Workspace& ws) {
            auto scheme = ws.category_of(s.scheme.text);
            DiagramDecl d;
            d.diagram.name = n.text;
            d.diagram.scheme = scheme;
            d.nodes.assign(scheme->object_count(), {});
            d.edges.assign(scheme->morphism_count(), {});
            d.diagram.nodes.assign(scheme->object_count(), nullptr);
            d.diagram.edges.assign(scheme->morphism_count(), {});
            for (const auto& [o, e] : s.nodes) {
                Index oi = scheme->find_object(o.text);
                if (oi == npos)
                    throw Located(o.where, "unknown scheme object " + o.text);
                d.nodes[oi] = e.text;
                d.diagram.nodes[oi] = ws.emergence(e.text);
            }
            for (Index o = 0; o < scheme->object_count(); ++o)
                if (!d.diagram.nodes[o])
                    throw Located(n.where, "no node for scheme object " + scheme->object(o));
            std::vector<char> set(scheme->morphism_count(), 0);
            for (const auto& [m, f] : s.edges) {
                Index mi = scheme->find_morphism(m.text);
                if (mi == npos)
                    throw Located(m.where, "unknown scheme morphism " + m.text);
                d.edges[mi] = f.text;
                d.diagram.edges[mi] = ws.functor(f.text);
                set[mi] = 1;
            }
            for (Index m = 0; m < scheme->morphism_count(); ++m) {
                if (set[m])
                    continue;
                if (!scheme->is_identity(m))
                    throw Located(n.where, "no edge for scheme morphism " + scheme->morphism(m).name);
                d.diagram.edges[m] = identity_functor(d.diagram.nodes[scheme->morphism(m).dom]->category());
            }
            ws.diagrams.emplace(n.text, std::move(d));
            ws.order.push_back({DeclKind::diagram, n.text, n.where});
        });
    }

    std::vector<PortSyntax> ports_until_semicolon()
    {
        std::vector<PortSyntax> out;
        while (!accept(";")) {
            if (accept(","))
                continue;
            PortSyntax p{name(), std::nullopt};
            if (accept(":"))
                p.type = label_set();
            out.push_back(std::move(p));
        }
        return out;
    }

    void abd()
    {
        Name n = name();
        AbdSyntax s;
        expect("{");
        while (!accept("}")) {
            Name st = name();
            if (st.text == "signal") {
                Name sig = name();
                s.signals.push_back({sig, label_set()});
                accept(";");
            } else if (st.text == "part") {
                PartSyntax p;
                p.name = name();
                expect("{");
                while (!accept("}")) {
                    Name ps = name();
                    if (ps.text == "in") {
                        auto ports = ports_until_semicolon();
                        p.inputs.insert(p.inputs.end(), ports.begin(), ports.end());
                    } else if (ps.text == "out") {
                        auto ports = ports_until_semicolon();
                        p.outputs.insert(p.outputs.end(), ports.begin(), ports.end());
                    } else if (ps.text == "row") {
                        Names xs = names_until({"->"});
                        expect("->");
                        Names ys = names_until({";"});
                        end_statement();
                        p.rows.push_back({xs, ys});
                    } else {
                        throw Located(ps.where, "unknown part statement '" + ps.text + "'");
                    }
                }
                accept(";");
                s.parts.push_back(std::move(p));
            } else {
                throw Located(st.where, "unknown abd statement '" + st.text + "'");
            }
        }
        accept(";");
        push(DeclKind::abd, n, {}, [n, s](Workspace& ws) {
            AbdDecl d;
            d.resolution.system = n.text;
            for (const auto& [sig, labels] : s.signals)
                d.resolution.signals.push_back({sig.text, to_set(labels)});
            for (const auto& p : s.parts) {
                Part part;
                part.name = p.name.text;
                auto port = [](const PortSyntax& ps) {
                    return PortDecl{ps.name.text, ps.type ? std::optional<FinSet>(to_set(*ps.type)) : std::nullopt};
                };
                for (const auto& i : p.inputs)
                    part.inputs.push_back(port(i));
                for (const auto& o : p.outputs)
                    part.outputs.push_back(port(o));
                for (const auto& [xs, ys] : p.rows)
                    part.rows.push_back({texts(xs), texts(ys)});
                d.resolution.parts.push_back(std::move(part));
            }
            try {
                d.abd = resolve_to_abd(d.resolution);
            } catch (const StructuralError& e) {
                throw Located(n.where, e.what());
            }
            ws.abds.emplace(n.text, std::move(d));
            ws.order.push_back({DeclKind::abd, n.text, n.where});
        });
    }

    void hints()
    {
        Name n = name();
        HintsSyntax s;
        keyword("on");
        s.abd = name();
        expect("{");
        while (!accept("}")) {
            Name st = name();
            if (st.text == "slot")
                s.slots.push_back(slot());
            else if (st.text == "table")
                s.tables.push_back(table());
            else
                throw Located(st.where, "unknown hints statement '" + st.text + "'");
        }
        accept(";");
        push(DeclKind::hints, n, {{{DeclKind::abd}, s.abd}}, [n, s](Workspace& ws) {
            const auto& abd = ws.abds.at(s.abd.text).abd;
            HintsDecl d{s.abd.text, {}};
            d.hints.signature = signature_of(s.slots);
            std::map<std::string, std::vector<std::optional<OperationTable>>> tables;
            for (const auto& t : s.tables) {
                Index port = abd.find_port(t.object.text);
                if (port == npos)
                    throw Located(t.object.where, "unknown port " + t.object.text);
                const auto& carrier = abd.ports[port].set;
                auto& row = tables[t.object.text];
                row.resize(d.hints.signature.size());
                Index slot = d.hints.signature.find(t.slot.text);
                if (slot == npos)
                    throw Located(t.slot.where, "unknown slot " + t.slot.text);
                row[slot] = table_of(t, d.hints.signature.slots[slot], carrier, declared_order(carrier));
            }
            for (auto& [port, row] : tables) {
                std::vector<OperationTable> out;
                for (Index i = 0; i < row.size(); ++i) {
                    if (!row[i])
                        throw Located(n.where, "port " + port + " lacks a table for slot " +
                                                   d.hints.signature.slots[i].name);
                    out.push_back(*row[i]);
                }
                d.hints.tables.emplace(port, std::move(out));
            }
            ws.hints.emplace(n.text, std::move(d));
            ws.order.push_back({DeclKind::hints, n.text, n.where});
        });
    }

    void setfunctor()
    {
        Name n = name();
        SetFunctorSyntax s;
        keyword("on");
        s.abd = name();
        s.rule = name();
        if (is("{"))
            s.relabel = pair_block();
        accept(";");
        push(DeclKind::setfunctor, n, {{{DeclKind::abd}, s.abd}}, [n, s](Workspace& ws) {
            SetFunctorDecl d;
            d.abd = s.abd.text;
            const std::map<std::string, SetFunctorRule> rules{{"identity", SetFunctorRule::identity},
                                                              {"empty", SetFunctorRule::empty},
                                                              {"square", SetFunctorRule::square},
                                                              {"relabel", SetFunctorRule::relabel}};
            auto it = rules.find(s.rule.text);
            if (it == rules.end())
                throw Located(s.rule.where, "unknown set-functor rule " + s.rule.text);
            d.action.rule = it->second;
            for (const auto& [a, b] : s.relabel)
                d.action.relabel[a.text] = b.text;
            try {
                d.table = set_functor_for(ws.abds.at(s.abd.text).abd, d.action, n.text);
            } catch (const StructuralError& e) {
                throw Located(n.where, e.what());
            }
            ws.setfunctors.emplace(n.text, std::move(d));
            ws.order.push_back({DeclKind::setfunctor, n.text, n.where});
        });
    }

    void battery()
    {
        Name n = name();
        BatterySyntax s;
        expect("{");
        while (!accept("}")) {
            Name st = name();
            auto items = names_until({";"});
            if (st.text == "categories")
                s.categories.insert(s.categories.end(), items.begin(), items.end());
            else if (st.text == "emergences")
                s.emergences.insert(s.emergences.end(), items.begin(), items.end());
            else
                throw Located(st.where, "unknown battery statement '" + st.text + "'");
            end_statement();
        }
        accept(";");
        std::vector<Ref> deps;
        for (const auto& c : s.categories)
            deps.push_back({kCategoryLike, c});
        for (const auto& e : s.emergences)
            deps.push_back({{DeclKind::emergence}, e});
        push(DeclKind::battery, n, deps, [n, s](Workspace& ws) {
            ws.batteries.emplace(n.text, BatteryDecl{texts(s.categories), texts(s.emergences)});
            ws.order.push_back({DeclKind::battery, n.text, n.where});
        });
    }

    void settings()
    {
        expect("{");
        while (!accept("}")) {
            Name st = name();
            Name v = name();
            if (st.text == "budget") {
                try {
                    std::size_t used = 0;
                    settings_.budget = std::stoull(v.text, &used);
                    if (used != v.text.size())
                        throw std::invalid_argument(v.text);
                } catch (const std::exception&) {
                    throw Located(v.where, "budget must be a non-negative integer");
                }
            } else if (st.text == "battery") {
                settings_.battery = v.text;
            } else if (st.text == "format") {
                if (v.text != "text" && v.text != "json")
                    throw Located(v.where, "format must be text or json");
                settings_.format = v.text;
            } else {
                throw Located(st.where, "unknown setting '" + st.text + "'");
            }
            end_statement();
        }
        accept(";");
    }

    // ------------------------------------------------------------ builders

    static std::vector<std::string> texts(const Names& ns)
    {
        std::vector<std::string> out;
        for (const auto& n : ns)
            out.push_back(n.text);
        return out;
    }

    static FinSet to_set(const Names& ns)
    {
        FinSet s(texts(ns));
        if (s.size() != ns.size())
            throw Located(ns.front().where, "duplicate element in set");
        return s;
    }

    static std::vector<Index> declared_order(const FinSet& s)
    {
        std::vector<Index> out;
        for (Index i = 0; i < s.size(); ++i)
            out.push_back(i);
        return out;
    }

    static TagSet tags_of(const std::vector<TagSyntax>& ts)
    {
        TagSet out;
        for (const auto& t : ts) {
            static const std::map<std::string, Tag> names{{"associative", Tag::associative},
                                                          {"commutative", Tag::commutative},
                                                          {"has_identity", Tag::has_identity},
                                                          {"has_inverses", Tag::has_inverses},
                                                          {"distributes_over", Tag::distributes_over}};
            auto it = names.find(t.tag.text);
            if (it == names.end())
                throw Located(t.tag.where, "unknown tag " + t.tag.text);
            if ((it->second == Tag::distributes_over) != t.other.has_value())
                throw Located(t.tag.where, "distributes_over takes exactly one slot argument");
            out.insert({it->second, t.other ? t.other->text : std::string{}});
        }
        return out;
    }

    static StructureSignature signature_of(const std::vector<SlotSyntax>& slots)
    {
        StructureSignature sig;
        for (const auto& s : slots) {
            if (sig.find(s.name.text) != npos)
                throw Located(s.name.where, "duplicate slot " + s.name.text);
            sig.slots.push_back({s.name.text, s.kind, tags_of(s.tags), s.kind == OpKind::external ? to_set(s.scalars) : FinSet{}});
        }
        return sig;
    }

    // Rows and columns follow `order` (positions in the carrier as the
    // carrier was written); external rows follow the sorted scalars.
    static OperationTable table_of(const TableSyntax& t, const OperationSlot& slot, const FinSet& carrier,
                                   const std::vector<Index>& order)
    {
        const std::size_t n = carrier.size();
        OperationTable out{slot.kind, carrier, slot.scalars, {}, slot.tags};
        const std::size_t rows = slot.kind == OpKind::internal ? n : slot.scalars.size();
        if (t.rows.size() != rows)
            throw Located(t.object.where, "table " + t.slot.text + " on " + t.object.text + " needs " +
                                              std::to_string(rows) + " rows, found " + std::to_string(t.rows.size()));
        out.table.assign(rows * n, 0);
        for (Index r = 0; r < rows; ++r) {
            if (t.rows[r].size() != n)
                throw Located(t.object.where, "row " + std::to_string(r + 1) + " of table " + t.slot.text + " on " +
                                                  t.object.text + " needs " + std::to_string(n) + " entries");
            for (Index c = 0; c < n; ++c) {
                Index v = carrier.index_of(t.rows[r][c].text);
                if (v == npos)
                    throw Located(t.rows[r][c].where, t.rows[r][c].text + " is not in the carrier of " + t.object.text);
                out.table[(slot.kind == OpKind::internal ? order[r] : r) * n + order[c]] = v;
            }
        }
        return out;
    }

    static FinFunction function_of(const MapSyntax& m, const FinSet& dom, const FinSet& cod)
    {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [a, b] : m.pairs)
            pairs.push_back({a.text, b.text});
        try {
            return FinFunction::from_pairs(dom, cod, pairs);
        } catch (const StructuralError& e) {
            throw Located(m.morphism.where, "map " + m.morphism.text + ": " + e.what());
        }
    }

    static void build_construct(Workspace& ws, const Name& n, const ConstructSyntax& s)
    {
        Construct c;
        c.name = n.text;
        if (auto it = ws.categories.find(s.category.text); it != ws.categories.end())
            c.category = it->second;
        else
            c.category = ws.category_of(s.category.text);
        const auto& cat = *c.category;
        c.signature = signature_of(s.slots);
        c.carriers.assign(cat.object_count(), {});
        std::vector<std::vector<Index>> orders(cat.object_count());
        std::vector<char> seen(cat.object_count(), 0);
        for (const auto& [o, labels] : s.carriers) {
            Index oi = cat.find_object(o.text);
            if (oi == npos)
                throw Located(o.where, "unknown object " + o.text + " in " + cat.name());
            c.carriers[oi] = to_set(labels);
            for (const auto& l : labels)
                orders[oi].push_back(c.carriers[oi].index_of(l.text));
            seen[oi] = 1;
        }
        for (Index o = 0; o < cat.object_count(); ++o)
            if (!seen[o])
                throw Located(n.where, "no carrier for object " + cat.object(o));
        std::vector<std::vector<std::optional<OperationTable>>> tables(
            cat.object_count(), std::vector<std::optional<OperationTable>>(c.signature.size()));
        for (const auto& t : s.tables) {
            Index oi = cat.find_object(t.object.text);
            if (oi == npos)
                throw Located(t.object.where, "unknown object " + t.object.text);
            Index si = c.signature.find(t.slot.text);
            if (si == npos)
                throw Located(t.slot.where, "unknown slot " + t.slot.text);
            tables[oi][si] = table_of(t, c.signature.slots[si], c.carriers[oi], orders[oi]);
        }
        for (Index o = 0; o < cat.object_count(); ++o) {
            c.structure.emplace_back();
            for (Index si = 0; si < c.signature.size(); ++si) {
                if (!tables[o][si])
                    throw Located(n.where, "object " + cat.object(o) + " lacks a table for slot " +
                                               c.signature.slots[si].name);
                c.structure.back().push_back(*tables[o][si]);
            }
        }
        std::vector<std::optional<FinFunction>> maps(cat.morphism_count());
        for (const auto& m : s.maps) {
            Index mi = cat.find_morphism(m.morphism.text);
            if (mi == npos)
                throw Located(m.morphism.where, "unknown morphism " + m.morphism.text);
            const auto& mm = cat.morphism(mi);
            maps[mi] = function_of(m, c.carriers[mm.dom], c.carriers[mm.cod]);
        }
        for (Index m = 0; m < cat.morphism_count(); ++m) {
            if (maps[m]) {
                c.underlying.push_back(*maps[m]);
            } else if (cat.is_identity(m)) {
                c.underlying.push_back(FinFunction::identity(c.carriers[cat.morphism(m).dom]));
            } else {
                throw Located(n.where, "no map for morphism " + cat.morphism(m).name);
            }
        }
        ConstructRef ref;
        try {
            ref = make_construct(std::move(c));
        } catch (const StructuralError& e) {
            throw Located(n.where, e.what());
        }
        ws.add_construct(n.text, ref, n.where);
    }

    static void build_emergence(Workspace& ws, const Name& n, const EmergenceSyntax& s)
    {
        auto k = ws.constructs.at(s.construct.text);
        const auto& cat = *k->category;
        UnderlyingFunctor u = standard_underlying(k);
        for (const auto& [o, labels] : s.sets) {
            Index oi = cat.find_object(o.text);
            if (oi == npos)
                throw Located(o.where, "unknown object " + o.text);
            u.sets[oi] = to_set(labels);
        }
        std::vector<char> given(cat.morphism_count(), 0);
        for (const auto& m : s.maps) {
            Index mi = cat.find_morphism(m.morphism.text);
            if (mi == npos)
                throw Located(m.morphism.where, "unknown morphism " + m.morphism.text);
            const auto& mm = cat.morphism(mi);
            u.functions[mi] = function_of(m, u.sets[mm.dom], u.sets[mm.cod]);
            given[mi] = 1;
        }
        for (Index m = 0; m < cat.morphism_count(); ++m) {
            const auto& mm = cat.morphism(m);
            if (given[m] || (u.functions[m].dom == u.sets[mm.dom] && u.functions[m].cod == u.sets[mm.cod]))
                continue;
            if (cat.is_identity(m))
                u.functions[m] = FinFunction::identity(u.sets[mm.dom]);
            else
                throw Located(n.where, "underlying sets changed; give a map for " + mm.name);
        }
        auto e = make_emergence(n.text, k, std::move(u), s.semi ? EmergenceKind::semi : EmergenceKind::standard);
        ws.add_emergence(n.text, {e, s.construct.text}, n.where);
    }

    static void build_functor(Workspace& ws, const Name& n, const FunctorSyntax& s)
    {
        auto a = ws.category_of(s.source.text);
        auto b = ws.category_of(s.target.text);
        Functor f{a, b, std::vector<Index>(a->object_count(), npos), std::vector<Index>(a->morphism_count(), npos)};
        for (const auto& [x, y] : s.objects) {
            Index xi = a->find_object(x.text), yi = b->find_object(y.text);
            if (xi == npos)
                throw Located(x.where, "unknown object " + x.text + " in " + a->name());
            if (yi == npos)
                throw Located(y.where, "unknown object " + y.text + " in " + b->name());
            f.object_map[xi] = yi;
        }
        for (const auto& [x, y] : s.morphisms) {
            Index xi = a->find_morphism(x.text), yi = b->find_morphism(y.text);
            if (xi == npos)
                throw Located(x.where, "unknown morphism " + x.text + " in " + a->name());
            if (yi == npos)
                throw Located(y.where, "unknown morphism " + y.text + " in " + b->name());
            f.morphism_map[xi] = yi;
        }
        for (Index o = 0; o < a->object_count(); ++o)
            if (f.object_map[o] == npos)
                throw Located(n.where, "functor " + n.text + " does not map object " + a->object(o));
        for (Index m = 0; m < a->morphism_count(); ++m) {
            if (f.morphism_map[m] != npos)
                continue;
            if (!a->is_identity(m))
                throw Located(n.where, "functor " + n.text + " does not map morphism " + a->morphism(m).name);
            f.morphism_map[m] = b->identity(f.object_map[a->morphism(m).dom]);
        }
        ws.add_functor(n.text, {f, s.source.text, s.target.text}, n.where);
    }

    std::vector<Token> t_;
    std::size_t p_ = 0;
    std::vector<Pending>& out_;
    Settings& settings_;
};

Workspace resolve(std::vector<Pending> pending, Settings settings, std::vector<WorkspaceIssue> issues)
{
    Workspace ws;
    ws.settings = std::move(settings);
    std::map<std::pair<DeclKind, std::string>, Index> by_key;
    std::vector<char> failed(pending.size(), 0);
    for (Index i = 0; i < pending.size(); ++i) {
        auto key = std::make_pair(pending[i].kind, pending[i].name.text);
        auto [it, inserted] = by_key.emplace(key, i);
        if (!inserted) {
            const auto& first = pending[it->second].name.where;
            issues.push_back({pending[i].name.where, "duplicate " + to_string(pending[i].kind) + " " +
                                                         pending[i].name.text + " (first declared at " +
                                                         where_text(first) + ")"});
            failed[i] = 1;
        }
    }
    std::vector<std::vector<Index>> edges(pending.size());
    for (Index i = 0; i < pending.size(); ++i) {
        if (failed[i])
            continue;
        for (const auto& r : pending[i].deps) {
            Index target = npos;
            for (auto k : r.kinds) {
                auto it = by_key.find({k, r.name.text});
                if (it != by_key.end()) {
                    target = it->second;
                    break;
                }
            }
            if (target == npos) {
                std::string kinds;
                for (auto k : r.kinds)
                    kinds += (kinds.empty() ? "" : " or ") + to_string(k);
                issues.push_back({r.name.where, "undeclared " + kinds + " " + r.name.text + " referenced by " +
                                                    to_string(pending[i].kind) + " " + pending[i].name.text});
                failed[i] = 1;
                continue;
            }
            edges[i].push_back(target);
        }
    }
    // Depth-first topological order; declaration order breaks ties.
    std::vector<int> state(pending.size(), 0);
    std::vector<Index> topo, stack;
    std::function<void(Index)> visit = [&](Index i) {
        if (state[i] == 2)
            return;
        if (state[i] == 1) {
            std::string cycle;
            auto from = std::find(stack.begin(), stack.end(), i);
            for (auto it = from; it != stack.end(); ++it)
                cycle += pending[*it].name.text + " -> ";
            issues.push_back({pending[i].name.where, "cycle in references: " + cycle + pending[i].name.text});
            failed[i] = 1;
            return;
        }
        state[i] = 1;
        stack.push_back(i);
        for (Index j : edges[i])
            visit(j);
        stack.pop_back();
        state[i] = 2;
        topo.push_back(i);
    };
    for (Index i = 0; i < pending.size(); ++i)
        visit(i);

    std::vector<char> built(pending.size(), 0);
    for (Index i : topo) {
        if (failed[i])
            continue;
        if (std::any_of(edges[i].begin(), edges[i].end(), [&](Index j) { return !built[j]; }))
            continue; // the root cause has been reported
        try {
            pending[i].build(ws);
            built[i] = 1;
        } catch (const Located& e) {
            issues.push_back({e.where, e.what()});
        } catch (const Error& e) {
            issues.push_back({pending[i].name.where, e.what()});
        }
    }
    if (!issues.empty())
        throw WorkspaceError(std::move(issues));
    // Restore textual order.
    std::map<std::pair<DeclKind, std::string>, Index> position;
    for (Index i = 0; i < pending.size(); ++i)
        position.emplace(std::make_pair(pending[i].kind, pending[i].name.text), i);
    std::stable_sort(ws.order.begin(), ws.order.end(), [&](const Declaration& a, const Declaration& b) {
        return position.at({a.kind, a.name}) < position.at({b.kind, b.name});
    });
    return ws;
}

} // namespace

Workspace parse_workspace_sources(const std::vector<std::pair<std::string, std::string>>& sources)
{
    std::vector<Pending> pending;
    Settings settings;
    std::vector<WorkspaceIssue> issues;
    for (const auto& [file, text] : sources) {
        try {
            Parser p(lex(text, file), pending, settings);
            p.parse();
        } catch (const Located& e) {
            issues.push_back({e.where, e.what()});
        }
    }
    return resolve(std::move(pending), std::move(settings), std::move(issues));
}

Workspace parse_workspace_text(const std::string& text, const std::string& file)
{
    return parse_workspace_sources({{file, text}});
}

Workspace parse_workspace(const std::vector<std::string>& paths)
{
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            throw WorkspaceError({{{p, 0, 0}, "cannot read file"}});
        std::ostringstream s;
        s << in.rdbuf();
        sources.push_back({p, s.str()});
    }
    return parse_workspace_sources(sources);
}

} // namespace emergence
