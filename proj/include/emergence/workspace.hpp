#pragma once

#include "emergence/abd.hpp"
#include "emergence/universal.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emergence {

enum class DeclKind { category, construct, emergence, functor, natural, source, sink, diagram, abd, hints, setfunctor, battery };

std::string to_string(DeclKind k);

struct Location {
    std::string file;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Declaration {
    DeclKind kind;
    std::string name;
    Location where;
};

struct EmergenceDecl {
    EmergenceRef emergence;
    std::string construct;
};

struct FunctorDecl {
    Functor functor;
    std::string source;
    std::string target;
};

struct NaturalDecl {
    NaturalTransformation transformation;
    std::string from;
    std::string to;
};

// A source (legs out of the apex) or a sink (legs into it).
struct ConeDecl {
    std::string apex;
    std::vector<std::string> legs;
};

struct DiagramDecl {
    DiagramEmergence diagram;
    std::vector<std::string> nodes;  // emergence per scheme object
    std::vector<std::string> edges;  // functor per scheme morphism, empty for implied identities
};

struct AbdDecl {
    Resolution resolution;
    AbstractBlockDiagram abd;
};

struct HintsDecl {
    std::string abd;
    SignatureHints hints;
};

struct SetFunctorDecl {
    std::string abd;
    SetFunctorAction action;
    SetFunctorTable table;
};

struct BatteryDecl {
    std::vector<std::string> categories;
    std::vector<std::string> emergences;
};

struct Settings {
    std::optional<std::uint64_t> budget;
    std::optional<std::string> battery;
    std::optional<std::string> format;
};

class Workspace {
public:
    std::vector<Declaration> order; // textual order across files
    std::map<std::string, CategoryRef> categories;
    std::map<std::string, ConstructRef> constructs;
    std::map<std::string, EmergenceDecl> emergences;
    std::map<std::string, FunctorDecl> functors;
    std::map<std::string, NaturalDecl> naturals;
    std::map<std::string, ConeDecl> sources;
    std::map<std::string, ConeDecl> sinks;
    std::map<std::string, DiagramDecl> diagrams;
    std::map<std::string, AbdDecl> abds;
    std::map<std::string, HintsDecl> hints;
    std::map<std::string, SetFunctorDecl> setfunctors;
    std::map<std::string, BatteryDecl> batteries;
    Settings settings;

    bool contains(DeclKind kind, const std::string& name) const;
    // Category of an emergence, construct or category, in that priority.
    CategoryRef category_of(const std::string& name) const;
    EmergenceRef emergence(const std::string& name) const;
    const Functor& functor(const std::string& name) const;
    Battery battery(const std::string& name) const;
    std::vector<EmergenceRef> emergence_battery(const std::string& name) const;

    void add_category(const std::string& name, CategoryRef c, Location where = {});
    void add_construct(const std::string& name, ConstructRef c, Location where = {});
    void add_emergence(const std::string& name, EmergenceDecl e, Location where = {});
    void add_functor(const std::string& name, FunctorDecl f, Location where = {});
};

// Registers an emergence together with its category and construct; the
// category and construct may already be present if they are the same.
void register_emergence(Workspace& ws, const EmergenceRef& e);
// Workspace holding the given emergences, e.g. one of the batteries.
Workspace workspace_of(const std::vector<EmergenceRef>& es);

struct WorkspaceIssue {
    Location where;
    std::string message;
};

// Located parse and reference errors collected over a whole workspace.
class WorkspaceError : public Error {
public:
    explicit WorkspaceError(std::vector<WorkspaceIssue> issues);
    const std::vector<WorkspaceIssue>& issues() const { return issues_; }

private:
    std::vector<WorkspaceIssue> issues_;
};

// Files are merged in the given order; references may point forward.
Workspace parse_workspace(const std::vector<std::string>& paths);
Workspace parse_workspace_text(const std::string& text, const std::string& file = "<text>");
Workspace parse_workspace_sources(const std::vector<std::pair<std::string, std::string>>& sources);

std::string serialize(const Workspace& ws);
// Text of one declaration, as serialize() writes it.
std::string serialize_declaration(const Workspace& ws, DeclKind kind, const std::string& name);

// Structural equality of declarations and settings.
bool equivalent(const Workspace& a, const Workspace& b);

} // namespace emergence
