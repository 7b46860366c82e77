#pragma once

#include "emergence/emergence.hpp"

namespace emergence {

// Finite family of test categories used as domains of competitor cones.
struct Battery {
    std::string name;
    std::vector<CategoryRef> categories;
};

// {empty, one object, arrow, parallel pair, 3-chain}.
Battery default_battery();

struct DiagramShape {
    struct Edge {
        Index from;
        Index to;
        Functor functor;
    };
    std::vector<CategoryRef> nodes;
    std::vector<Edge> edges;
};

struct MediatorRecord {
    std::string competitor;
    std::size_t count = 0; // number of mediators, capped at 2
    std::optional<Functor> witness;
    std::optional<Functor> second;
};

struct UniversalVerdict {
    std::string kind;
    bool commutes = false;
    std::size_t competitors = 0;
    std::vector<MediatorRecord> mediators; // one per competitor
    bool overall = false;
    bool inconclusive = false;
    std::vector<std::string> witness; // first failure
    std::string note;
};

enum class UniversalKind {
    equalizer,
    n_equalizer,
    product,
    coproduct,
    pullback,
    limit,
    coequalizer_candidate,
    colimit_candidate,
    pushout_candidate,
    mono_source
};

std::string to_string(UniversalKind k);
bool is_colimit_kind(UniversalKind k);

struct UniversalCandidate {
    UniversalKind kind;
    DiagramShape diagram;
    CategoryRef apex;
    std::vector<Functor> legs; // one per diagram node (mono_source: any family)
};

// Exhaustive universal-property check over competitor cones (or cocones)
// built from `battery`. Budget overruns yield an inconclusive verdict.
UniversalVerdict verify_universal(const UniversalCandidate& candidate, const Battery& battery,
                                  std::uint64_t budget = default_budget());

// Right-cancellation of `f` against all pairs of functors out of its
// target into battery categories.
UniversalVerdict verify_epi(const Functor& f, const Battery& battery, std::uint64_t budget = default_budget());

// Candidate builders for the standard shapes.
UniversalCandidate equalizer_candidate(const Functor& inclusion, const std::vector<Functor>& fs);
UniversalCandidate coequalizer_candidate(const Functor& quotient, const std::vector<Functor>& fs);
UniversalCandidate product_candidate(const CategoryRef& apex, const std::vector<Functor>& projections);
UniversalCandidate coproduct_candidate(const CategoryRef& apex, const std::vector<Functor>& injections);
UniversalCandidate pullback_candidate(const Functor& to_a, const Functor& to_b, const Functor& f, const Functor& g);
UniversalCandidate pushout_candidate(const Functor& from_a, const Functor& from_b, const Functor& f, const Functor& g);
UniversalCandidate mono_source_candidate(const CategoryRef& apex, const std::vector<Functor>& legs);

struct EqualizerResult {
    EmergenceRef emergence;
    Functor inclusion;
    bool empty = false;
};

// Sub-emergence of `a` on the objects and morphisms where every functor in
// `fs` agrees.
EqualizerResult equalizer_emergence(const Emergence& a, const std::vector<Functor>& fs, const std::string& name = {});

// Equalizer of the two underlying readings u1, u2 of `e`.
EqualizerResult stabilizer(const Emergence& e, const UnderlyingFunctor& u1, const UnderlyingFunctor& u2,
                           std::uint64_t budget = default_budget());

// Equalizer of U_B∘F and U_B∘G.
EqualizerResult strong_equalizer_emergence(const Emergence& a, const Emergence& b, const Functor& f, const Functor& g,
                                           std::uint64_t budget = default_budget());

struct StrongEqualizerVerdict {
    UniversalVerdict plain;  // equalizer of F, G
    UniversalVerdict strong; // equalizer of U_B∘F, U_B∘G
    bool u_embedding = false;
    bool homomorphisms = false;
    bool isomorphism_required = false;
    bool is_isomorphism = false;
    bool overall = false;
};

StrongEqualizerVerdict check_strong_equalizer(const Functor& inclusion, const Functor& f, const Functor& g,
                                              const Emergence& a, const Emergence& b, const Battery& battery,
                                              std::uint64_t budget = default_budget());

struct ProductResult {
    EmergenceRef emergence;
    std::vector<Functor> projections;
    std::vector<EmergenceRef> factors;
};

ProductResult product_emergence(const std::vector<EmergenceRef>& es, std::uint64_t budget = default_budget(),
                                const std::string& name = {});

struct CoproductResult {
    std::vector<Functor> injections;
    EmergenceRef emergence;
    bool shared_signature = true;
};

CoproductResult coproduct_emergence(const std::vector<EmergenceRef>& es, const std::string& name = {});

struct PullbackResult {
    EmergenceRef emergence;
    Functor to_a;
    Functor to_b;
    bool empty = false;
    std::string mode; // "shared-carrier" or "left-structure"
    FinSetFragment fragment;
    Functor ua; // U_A realized into `fragment`
    Functor ub;
};

PullbackResult pullback_emergence(const Emergence& a, const Emergence& b, std::uint64_t budget = default_budget(),
                                  const std::string& name = {});

struct DiagramEmergence {
    std::string name;
    CategoryRef scheme;
    std::vector<EmergenceRef> nodes; // per scheme object
    std::vector<Functor> edges;      // per scheme morphism
};

ValidationReport validate_diagram(const DiagramEmergence& d);
DiagramShape shape_of(const DiagramEmergence& d);

struct SourceEmergence {
    EmergenceRef apex;
    std::vector<Functor> legs;
    std::vector<EmergenceRef> targets;
};

struct SinkEmergence {
    std::vector<EmergenceRef> sources;
    std::vector<Functor> legs;
    EmergenceRef apex;
};

SourceEmergence limit_of_diagram(const DiagramEmergence& d, std::uint64_t budget = default_budget(),
                                 const std::string& name = {});

enum class ConeVariance { limit, colimit };

// Isomorphism T between two apexes commuting with the legs
// (limit: legs2∘T = legs1; colimit: T∘legs1 = legs2).
std::optional<Functor> essential_uniqueness(const CategoryRef& apex1, const std::vector<Functor>& legs1,
                                            const CategoryRef& apex2, const std::vector<Functor>& legs2,
                                            ConeVariance variance, std::uint64_t budget = default_budget());

struct InternalProduct {
    std::string left;
    std::string right;
    std::optional<std::string> apex;
    std::string first;  // projection names when found
    std::string second;
};

struct InternalEqualizer {
    std::string f;
    std::string g;
    std::optional<std::string> object;
    std::string inclusion;
};

struct LatticeCheck {
    bool complete = false;
    std::vector<std::string> witness; // subset lacking a meet or join
    std::string missing;              // "meet" or "join"
};

struct InternalReport {
    std::vector<std::string> terminal_objects;
    std::vector<InternalProduct> products;
    bool has_binary_products = false;
    std::vector<InternalEqualizer> equalizers;
    bool has_equalizers = false;
    bool finitely_complete = false;
    bool thin = false;
    std::optional<LatticeCheck> lattice;
    bool lattice_equivalence = false; // thin only: complete lattice <=> finitely complete
};

InternalReport internal_structure_report(const Construct& c, std::uint64_t budget = default_budget());

} // namespace emergence
