#pragma once

#include "emergence/universal.hpp"

#include <functional>

namespace emergence {

// Small fixed categories and emergences used for exhaustive checks.

CategoryRef discrete_category(const std::string& name, std::size_t n);
// Thin chain x0 < x1 < ... with every composite.
CategoryRef chain_category(const std::string& name, std::size_t n);
// Two objects X, Y with h: X -> Y and k: Y -> X mutually inverse.
CategoryRef codiscrete_pair();

// F, G : A -> codiscrete_pair() agreeing exactly on the morphisms between
// objects of the inclusion's image. For a full inclusion their equalizer is
// the inclusion itself.
std::pair<Functor, Functor> regular_mono_fixture(const Functor& inclusion);

FinSet numbered_set(std::size_t n); // {0, 1, ..., n-1}

OperationTable table_from(const FinSet& carrier, const std::function<Index(Index, Index)>& op, TagSet claims);
OperationTable action_from(const FinSet& carrier, const FinSet& scalars, const std::function<Index(Index, Index)>& act,
                           TagSet claims);

TagSet group_tags();   // associative, commutative, has_identity, has_inverses
TagSet monoid_tags();  // associative, commutative, has_identity
TagSet semigroup_tags(); // associative, commutative

struct ConcreteObject {
    std::string name;
    FinSet carrier;
    std::vector<OperationTable> structure;
};

struct ConcreteGenerator {
    std::string name;
    std::string dom;
    std::string cod;
    std::vector<Index> table;
};

// Construct on the composition closure of the generators with the standard
// underlying functor. Throws ConstructionError when validation fails.
EmergenceRef concrete_emergence(const std::string& name, const StructureSignature& signature,
                                const std::vector<ConcreteObject>& objects,
                                const std::vector<ConcreteGenerator>& generators,
                                std::uint64_t budget = default_budget());

// Ten standard emergences: eight of order 1 and two of order 2.
std::vector<EmergenceRef> standard_battery();
// standard_battery() plus one semi-emergence.
std::vector<EmergenceRef> emergence_battery();

// One object {*}, its identity, one slot.
EmergenceRef terminal_example();
// Emergences of order >= 2 whose carriers are all {*}.
std::vector<EmergenceRef> singleton_battery();

// Thin constructs used by the internal-structure report.
ConstructRef chain_construct(std::size_t n);
ConstructRef antichain_construct(std::size_t n);

} // namespace emergence
