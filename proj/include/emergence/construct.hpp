#pragma once

#include "emergence/finset.hpp"

#include <set>

namespace emergence {

enum class OpKind { internal, external };
enum class Tag { associative, commutative, has_identity, has_inverses, distributes_over };

std::string to_string(OpKind k);
std::string to_string(Tag t);

struct TagClaim {
    Tag tag;
    std::string other; // slot name, only for distributes_over

    auto operator<=>(const TagClaim&) const = default;
    bool operator==(const TagClaim&) const = default;
};

using TagSet = std::set<TagClaim>;

std::string to_string(const TagClaim& c);
std::string to_string(const TagSet& tags);

struct OperationSlot {
    std::string name;
    OpKind kind = OpKind::internal;
    TagSet tags;
    FinSet scalars; // external slots only

    bool operator==(const OperationSlot&) const = default;
};

struct StructureSignature {
    std::vector<OperationSlot> slots;

    std::size_t size() const { return slots.size(); }
    Index find(const std::string& name) const;
    bool operator==(const StructureSignature&) const = default;
};

// internal: table[x * n + y] = x * y; external: table[k * n + x] = k . x.
// Entries are positions in `carrier`.
struct OperationTable {
    OpKind kind = OpKind::internal;
    FinSet carrier;
    FinSet scalars;
    std::vector<Index> table;
    TagSet tags; // claimed

    Index apply(Index left, Index right) const { return table[left * carrier.size() + right]; }
    bool operator==(const OperationTable&) const = default;
};

// Throws StructuralError on a table of the wrong size or with values
// outside the carrier.
void check_table_shape(const OperationTable& t);

// The tags among associative, commutative, has_identity, has_inverses that
// hold on `t`.
TagSet check_operation_properties(const OperationTable& t);
// Same, plus distributes_over claims against the other internal slots of one
// object's structure (aligned with `signature`).
TagSet check_operation_properties(const std::vector<OperationTable>& structure, const StructureSignature& signature,
                                  Index slot);

// Returns a witness tuple (labels) refuting `claim` on `t`, or an empty
// vector when the claim holds. `other` is the distributed-over table.
std::vector<std::string> refute_claim(const OperationTable& t, const TagClaim& claim, const OperationTable* other);

struct Construct {
    std::string name;
    CategoryRef category;
    StructureSignature signature;
    std::vector<FinSet> carriers;                      // per object
    std::vector<std::vector<OperationTable>> structure; // per object, aligned with signature
    std::vector<FinFunction> underlying;               // per morphism
};

using ConstructRef = std::shared_ptr<const Construct>;

// Checks sizes and shapes; throws StructuralError on mismatch.
ConstructRef make_construct(Construct c);

ValidationReport validate_construct(const Construct& c);

enum class UnderlyingMode { gu, gsu };

struct UnderlyingFunctor {
    ConstructRef construct;
    std::vector<FinSet> sets;
    std::vector<FinFunction> functions;

    SetAssignment assignment() const { return {construct->category, sets, functions}; }
};

UnderlyingFunctor standard_underlying(const ConstructRef& c);

ValidationReport validate_gu(const UnderlyingFunctor& u, UnderlyingMode mode);

struct ConcreteArrow {
    std::string name;
    Index dom = 0;
    Index cod = 0;
    FinFunction function;
};

struct ConcreteCategory {
    CategoryRef category;
    std::vector<FinFunction> functions; // per morphism
    std::vector<std::string> merged;    // generators equal to an earlier morphism
};

// Category of the given objects with identities, the generators and all
// composites; composites are named "g.f". Morphisms with equal endpoints and
// equal functions are identified.
ConcreteCategory close_under_composition(const std::string& name, const std::vector<std::string>& objects,
                                         const std::vector<FinSet>& carriers,
                                         const std::vector<ConcreteArrow>& generators,
                                         std::uint64_t budget = default_budget());

// Operation table helpers used by the constructions and batteries.
OperationTable cyclic_addition(const FinSet& carrier, TagSet claims);
OperationTable trivial_action(const FinSet& carrier, const FinSet& scalars, TagSet claims);

} // namespace emergence
