#pragma once

#include "emergence/construct.hpp"
#include "emergence/search.hpp"

namespace emergence {

enum class EmergenceKind { standard, semi };

struct Emergence {
    std::string name;
    ConstructRef construct;
    UnderlyingFunctor underlying;
    EmergenceKind kind = EmergenceKind::standard;

    std::size_t order() const { return construct->signature.size(); }
    const CategoryRef& category() const { return construct->category; }
    const StructureSignature& signature() const { return construct->signature; }
};

using EmergenceRef = std::shared_ptr<const Emergence>;

// Standard emergence over `c` with its standard underlying functor.
EmergenceRef make_emergence(std::string name, const ConstructRef& c);
EmergenceRef make_emergence(std::string name, const ConstructRef& c, UnderlyingFunctor u,
                            EmergenceKind kind = EmergenceKind::standard);

// Cross-validates construct, underlying functor (gu or gsu by kind) and the
// non-empty signature rule.
ValidationReport validate_emergence(const Emergence& e);

struct MorphismVerdict {
    bool holds = false;
    std::vector<std::string> witness;
    std::string detail;
    std::optional<Functor> functor;
};

enum class HomMode { hom, strong, semi, strong_semi };
enum class IsoMode { iso, strong_iso, semi_iso, strong_semi_iso, equivalence, semi_equivalence };

std::string to_string(HomMode m);
std::string to_string(IsoMode m);

MorphismVerdict check_morphism(const Functor& f, const Emergence& a, const Emergence& b, HomMode mode);

std::vector<Functor> enumerate_homomorphisms(const Emergence& a, const Emergence& b, HomMode mode,
                                             std::uint64_t budget = default_budget());

// Search options restricting functors A -> B to those with U_B∘F = U_A.
SearchOptions compatibility_filter(const Emergence& a, const Emergence& b, std::uint64_t budget);

MorphismVerdict check_iso(const Emergence& a, const Emergence& b, IsoMode mode, std::uint64_t budget = default_budget());

struct OppositeEmergence {
    EmergenceRef emergence;
    std::string underlying_rule; // "supplied", "inverse" or "reindexed"
    bool functorial = true;
};

// `reversal`, when given, holds for each morphism f: A -> B a function
// U(B) -> U(A) used as the underlying function of f in the opposite.
OppositeEmergence opposite_emergence(const Emergence& e, const std::vector<FinFunction>* reversal = nullptr);

struct Classification {
    bool small = true;
    bool thin = false;
};

Classification classify(const Emergence& e);

struct SubEmergenceCheck {
    MorphismVerdict verdict;
    std::optional<Functor> inclusion;
};

// Is `b` a (full) sub-emergence of `a`? Objects and morphisms are matched
// by name.
SubEmergenceCheck check_sub_emergence(const Emergence& b, const Emergence& a, bool full);

// Does `a` induce `b`: every B-object has an A-object with the same carrier
// carrying each operation of B (same kind and table, claimed tags a subset).
MorphismVerdict check_induces(const Emergence& a, const Emergence& b);

struct Representation {
    Index object = npos;
    std::string element;        // x in U(A) generating the isomorphism
    FinSetFragment fragment;    // shared target of hom(A,-) and U
    NaturalTransformation transformation;
    bool preserves_monos = false;
    std::vector<std::string> monos; // monomorphisms of the category
};

std::optional<Representation> find_representation(const Emergence& e, std::uint64_t budget = default_budget());

// Left-cancellable morphisms of c.
std::vector<Index> monomorphisms(const FinCategory& c);

enum class GradedKind { partial, relative };

struct GradedArrow {
    GradedKind kind;
    EmergenceRef source;
    EmergenceRef target;
    Functor functor;
    long degree = 0;
};

GradedArrow graded_arrow(GradedKind kind, const EmergenceRef& a, const EmergenceRef& b, const Functor& f);
GradedArrow compose_graded(const GradedArrow& first, const GradedArrow& second);

struct ExtremalStatus {
    MorphismVerdict initial;
    MorphismVerdict terminal;
    MorphismVerdict zero;
    std::vector<std::string> skipped; // battery members outside the terminal clause
    std::string note;
};

ExtremalStatus extremal_status(const Emergence& e, const std::vector<EmergenceRef>& battery,
                               std::uint64_t budget = default_budget());

// Sub-emergence of `a` on the given objects and morphisms (which must be
// closed under identities and composition), with restricted structure and
// restricted underlying functor. Returns the emergence and its inclusion.
std::pair<EmergenceRef, Functor> restrict_emergence(const Emergence& a, const std::vector<Index>& objects,
                                                    const std::vector<Index>& morphisms, const std::string& name);

} // namespace emergence
