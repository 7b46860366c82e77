#pragma once

#include "emergence/emergence.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emergence {

struct Port {
    std::string name;
    FinSet set;
    bool operator==(const Port&) const = default;
};

// A component maps the product of its input ports to the product of its
// output ports. Tuples are indexed in mixed radix with the first port
// varying slowest; positions within a port follow the sorted FinSet order.
struct Component {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<Index> table; // input tuple index -> output tuple index
    bool operator==(const Component&) const = default;
};

struct AbstractBlockDiagram {
    std::string name;
    std::vector<Port> ports;
    std::vector<Component> components;

    Index find_port(const std::string& name) const;
    const Port& port(const std::string& name) const;
    Index find_component(const std::string& name) const;
    std::vector<std::size_t> input_radix(const Component& c) const;
    std::vector<std::size_t> output_radix(const Component& c) const;
    // Ports consumed but never produced, and produced but never consumed.
    std::vector<std::string> external_inputs() const;
    std::vector<std::string> external_outputs() const;

    bool operator==(const AbstractBlockDiagram&) const = default;
};

std::size_t tuple_count(const std::vector<std::size_t>& radix);
std::vector<Index> decode_tuple(Index k, const std::vector<std::size_t>& radix);
Index encode_tuple(const std::vector<Index>& digits, const std::vector<std::size_t>& radix);

ValidationReport validate_abd(const AbstractBlockDiagram& abd);

// Output coordinates of a component on the given input coordinates.
std::vector<Index> evaluate(const AbstractBlockDiagram& abd, const Component& c, const std::vector<Index>& inputs);

// The component as a function between left-bracketed products.
FinFunction component_function(const AbstractBlockDiagram& abd, const Component& c);

struct PortDecl {
    std::string name;
    std::optional<FinSet> type; // a part may restate the signal type
};

struct Part {
    std::string name;
    std::vector<PortDecl> inputs;
    std::vector<PortDecl> outputs;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rows;
};

struct Resolution {
    std::string system;
    std::vector<Port> signals;
    std::vector<Part> parts;
};

AbstractBlockDiagram resolve_to_abd(const Resolution& r);
// A resolution listing every row of every component.
Resolution resolution_of(const AbstractBlockDiagram& abd);

// Coordinates on which the table actually depends, found by varying one
// coordinate at a time over every tuple.
std::vector<Index> support(const std::vector<std::size_t>& radix, const std::vector<Index>& table);

// Proper coordinate subset the mapping factors through, if any. Mappings
// with fewer than two inputs are never reported as factorable.
std::optional<std::vector<Index>> is_factorable(const std::vector<std::size_t>& radix, const std::vector<Index>& table);
std::optional<std::vector<Index>> is_factorable(const AbstractBlockDiagram& abd, const Component& c);

// Restricts every mapping to its support and removes ports left without a
// producer or consumer. `passes` receives the number of rewriting passes.
AbstractBlockDiagram canonical_form(const AbstractBlockDiagram& abd, std::size_t* passes = nullptr);

// Splits multi-output components into components named "comp/port".
AbstractBlockDiagram refine_single_output(const AbstractBlockDiagram& abd);

struct DeclaredArrow {
    std::string name;
    Index source = 0; // lattice positions
    Index target = 0;
    FinFunction arrow;
    FinFunction image;
};

struct DeclaredProduct {
    Index left = 0;
    Index right = 0;
    Index product = npos; // npos: product not in the lattice
};

// A set-functor given on a declared finite lattice of subsets of a universe.
struct SetFunctorTable {
    std::string name;
    FinSet universe;
    std::vector<FinSet> lattice;
    std::vector<FinSet> images;
    std::vector<DeclaredArrow> arrows;
    std::vector<DeclaredProduct> products;

    Index find(const FinSet& s) const;
};

ValidationReport validate_set_functor(const SetFunctorTable& t);

enum class SetFunctorRule { identity, empty, square, relabel };
std::string to_string(SetFunctorRule r);

// Applies a rule to labels, sets and functions. `relabel` renames atoms
// and acts structurally on bracketed pairs.
struct SetFunctorAction {
    SetFunctorRule rule = SetFunctorRule::identity;
    std::map<std::string, std::string> relabel;

    std::string on_label(const std::string& x) const;
    FinSet on_set(const FinSet& s) const;
    FinFunction on_function(const FinFunction& f) const;
};

// Declares the lattice an ABD needs: port sets, the intermediate products
// of every component domain and codomain, and the component mappings.
SetFunctorTable set_functor_for(const AbstractBlockDiagram& abd, const SetFunctorAction& action,
                                const std::string& name = "T");

struct SetFunctorCheck {
    bool regular = true;
    std::string regular_rule; // "nonempty" or "inclusion" on failure
    std::vector<std::string> regular_witness;
    bool multiplicative = true;
    std::vector<std::string> multiplicative_witness;
    std::vector<std::string> inconclusive;
    std::string note;
};

SetFunctorCheck check_set_functor(const SetFunctorTable& t);

struct SetFunctorApplication {
    std::optional<AbstractBlockDiagram> abd;
    SetFunctorCheck check;
    bool valid = false;
    std::vector<std::string> defect;
    std::string verdict; // "no defect found" or "defect"
};

SetFunctorApplication apply_set_functor(const AbstractBlockDiagram& abd, const SetFunctorTable& t);

struct SignatureHints {
    StructureSignature signature;
    std::map<std::string, std::vector<OperationTable>> tables; // per port
};

struct AbdEmergence {
    EmergenceRef emergence;
    bool canonicalized = false;
    std::vector<std::string> notices;
};

// Objects are the ports, the products "A*B" used by components and the
// unit "1"; morphisms are identities, component mappings and composites.
AbdEmergence abd_to_emergence(const AbstractBlockDiagram& abd, const SignatureHints& hints,
                              std::uint64_t budget = default_budget());

} // namespace emergence
