#pragma once

#include "emergence/fincat.hpp"

#include <map>
#include <string>
#include <vector>

namespace emergence {

// A finite set of opaque labels, kept sorted and duplicate-free so that
// equality of sets is equality of label sets.
class FinSet {
public:
    FinSet() = default;
    explicit FinSet(std::vector<std::string> labels);

    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    const std::string& operator[](Index i) const { return elements_[i]; }
    const std::vector<std::string>& elements() const { return elements_; }
    Index index_of(const std::string& label) const;
    bool contains(const std::string& label) const { return index_of(label) != npos; }
    bool subset_of(const FinSet& other) const;
    std::string to_string() const;

    auto begin() const { return elements_.begin(); }
    auto end() const { return elements_.end(); }

    bool operator==(const FinSet&) const = default;
    auto operator<=>(const FinSet&) const = default;

private:
    std::vector<std::string> elements_;
};

// Ordered-pair encoding with fixed left bracketing: ((a,b),c).
std::string pair_label(const std::string& a, const std::string& b);
FinSet pair_product(const FinSet& a, const FinSet& b);
// Left-bracketed product of a list; the empty list gives the unit {()}.
FinSet bracketed_product(const std::vector<FinSet>& sets);
// Label of a tuple under the left-bracketed encoding.
std::string bracketed_label(const std::vector<std::string>& parts);

struct FinFunction {
    FinSet dom;
    FinSet cod;
    std::vector<Index> table; // position in cod for each element of dom

    static FinFunction identity(const FinSet& s);
    static FinFunction from_pairs(const FinSet& dom, const FinSet& cod,
                                  const std::vector<std::pair<std::string, std::string>>& pairs);

    const std::string& operator()(const std::string& x) const;
    bool valid() const;
    bool injective() const;
    bool surjective() const;
    bool bijective() const { return injective() && surjective(); }
    FinFunction inverse() const; // requires bijective()
    std::string to_string() const;

    bool operator==(const FinFunction&) const = default;
    auto operator<=>(const FinFunction&) const = default;
};

// g∘f. Throws StructuralError when cod(f) != dom(g).
FinFunction compose(const FinFunction& g, const FinFunction& f);

// A finite fragment of the category of sets and functions.
struct FinSetFragment {
    CategoryRef category;
    std::vector<FinSet> sets;
    std::vector<FinFunction> functions;

    Index object_of(const FinSet& s) const;
    Index morphism_of(const FinFunction& f) const;
};

enum class FragmentMode { full, generated };

// Full mode: every function between the given sets, ordered by (dom, cod)
// and then lexicographically by table. Generated mode: identities, the seed
// functions and their closure under composition. Duplicate sets are merged.
FinSetFragment materialize_finset(const std::vector<FinSet>& sets, FragmentMode mode,
                                  const std::vector<FinFunction>& seeds = {},
                                  std::uint64_t budget = default_budget());

// A functor into sets given extensionally, before it is realized as a
// Functor into a concrete fragment.
struct SetAssignment {
    CategoryRef category;
    std::vector<FinSet> sets;
    std::vector<FinFunction> functions;
};

ValidationReport validate_set_assignment(const SetAssignment& s);

struct RealizedFunctors {
    FinSetFragment fragment;
    std::vector<Functor> functors;
};

// Realizes several assignments into one shared generated fragment so that
// their functors have a common target. `extra` seeds are added as well.
RealizedFunctors realize(const std::vector<SetAssignment>& assignments, const std::vector<FinFunction>& extra = {},
                         std::uint64_t budget = default_budget());

struct HomFunctor {
    SetAssignment assignment; // X -> hom(a, X) as a set of morphism names
    FinSetFragment fragment;
    Functor functor;
};

HomFunctor hom_functor(const CategoryRef& c, Index a, std::uint64_t budget = default_budget());

} // namespace emergence
