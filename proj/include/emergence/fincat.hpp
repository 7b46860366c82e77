#pragma once

#include "emergence/core.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace emergence {

struct Morphism {
    std::string name;
    Index dom = npos;
    Index cod = npos;

    bool operator==(const Morphism&) const = default;
};

// A finite category given by explicit tables. Objects and morphisms are
// addressed by position; names are unique within their kind.
class FinCategory {
public:
    FinCategory() = default;
    // `compose` is a flat |Mor| x |Mor| table indexed [g * |Mor| + f] holding
    // g∘f, or npos where undefined. Throws StructuralError on malformed data;
    // axioms are checked separately by validate_category.
    FinCategory(std::string name, std::vector<std::string> objects, std::vector<Morphism> morphisms,
                std::vector<Index> identity, std::vector<Index> compose);

    const std::string& name() const { return name_; }
    std::size_t object_count() const { return objects_.size(); }
    std::size_t morphism_count() const { return morphisms_.size(); }
    const std::string& object(Index i) const { return objects_.at(i); }
    const std::vector<std::string>& objects() const { return objects_; }
    const Morphism& morphism(Index i) const { return morphisms_.at(i); }
    const std::vector<Morphism>& morphisms() const { return morphisms_; }
    Index identity(Index object) const { return identity_.at(object); }
    const std::vector<Index>& identities() const { return identity_; }
    // g∘f, npos when not composable or not tabulated.
    Index compose(Index g, Index f) const { return compose_[g * morphisms_.size() + f]; }
    const std::vector<Index>& compose_table() const { return compose_; }
    const std::vector<Index>& hom(Index a, Index b) const { return hom_[a * objects_.size() + b]; }

    Index find_object(const std::string& name) const;
    Index find_morphism(const std::string& name) const;
    bool is_identity(Index m) const { return identity_[morphisms_[m].dom] == m; }
    bool thin() const;

    // Inverse of m when m is an isomorphism, npos otherwise.
    Index inverse(Index m) const { return inverse_.at(m); }
    // Isomorphism class representative (smallest object index) per object.
    Index iso_class(Index object) const { return iso_class_.at(object); }

    bool operator==(const FinCategory& other) const;

private:
    void index();

    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<Index> identity_;
    std::vector<Index> compose_;
    std::vector<std::vector<Index>> hom_;
    std::vector<Index> inverse_;
    std::vector<Index> iso_class_;
    std::map<std::string, Index> object_index_;
    std::map<std::string, Index> morphism_index_;
};

using CategoryRef = std::shared_ptr<const FinCategory>;

// Incremental builder used by the workspace parser, the test batteries and
// the constructions. Composites must be supplied explicitly; unit_laws()
// fills only the rows forced by the identity axioms.
class CategoryBuilder {
public:
    explicit CategoryBuilder(std::string name) : name_(std::move(name)) {}

    // Adds an object with identity named `identity` (default "id" + name).
    Index object(const std::string& name, const std::string& identity = {});
    Index morphism(const std::string& name, const std::string& dom, const std::string& cod);
    Index morphism(const std::string& name, Index dom, Index cod);
    CategoryBuilder& compose(const std::string& g, const std::string& f, const std::string& h);
    CategoryBuilder& compose(Index g, Index f, Index h);
    CategoryBuilder& unit_laws();

    Index find_object(const std::string& name) const;
    Index find_morphism(const std::string& name) const;
    std::size_t morphism_count() const { return morphisms_.size(); }

    CategoryRef build() const;

private:
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<Index> identity_;
    std::map<std::pair<Index, Index>, Index> compose_;
};

ValidationReport validate_category(const FinCategory& c);

CategoryRef opposite(const FinCategory& c);

struct Functor {
    CategoryRef source;
    CategoryRef target;
    std::vector<Index> object_map;
    std::vector<Index> morphism_map;

    Index operator()(Index morphism) const { return morphism_map[morphism]; }
    Index on_object(Index object) const { return object_map[object]; }
};

// Extensional equality: equal endpoints (by value) and equal maps.
bool operator==(const Functor& a, const Functor& b);
bool same_category(const CategoryRef& a, const CategoryRef& b);

Functor identity_functor(const CategoryRef& c);
// g∘f; throws StructuralError when f.target and g.source differ.
Functor compose(const Functor& g, const Functor& f);

// Throws StructuralError when the maps are not total or out of range.
ValidationReport validate_functor(const Functor& f);

struct PropertyFlags {
    bool faithful = false;
    bool full = false;
    bool embedding = false;
    bool injective_on_objects = false;
    bool isomorphism_dense = false;
    bool is_isomorphism = false;
};

struct FunctorProperties {
    PropertyFlags flags;
    std::optional<Functor> inverse;
};

FunctorProperties functor_properties(const Functor& f);

struct NaturalTransformation {
    Functor from;
    Functor to;
    std::vector<Index> components; // per source object, a target morphism
};

ValidationReport check_natural(const NaturalTransformation& t);

enum class NaturalMode { all, isomorphisms };

// All natural transformations F => G (or only natural isomorphisms) in
// lexicographic order of component vectors. Throws ModeMismatch when F and G
// are not parallel, BudgetExceeded when the component space is too large.
std::vector<NaturalTransformation> find_natural(const Functor& f, const Functor& g, NaturalMode mode,
                                                std::uint64_t budget = default_budget());

struct ProductCategory {
    CategoryRef category;
    std::vector<CategoryRef> factors;
    std::vector<Functor> projections;

    Index object_of(const std::vector<Index>& coords) const;
    Index morphism_of(const std::vector<Index>& coords) const;
    std::vector<Index> object_coords(Index object) const;
    std::vector<Index> morphism_coords(Index morphism) const;
};

// Cartesian product with projections. Objects "(A,B)", morphisms "(f,g)",
// first factor varies slowest. Throws BudgetExceeded when the morphism count
// estimate exceeds `budget`.
ProductCategory product_category(const std::vector<CategoryRef>& cs, std::uint64_t budget = default_budget());

// Componentwise functor F1 x ... x Fn between two products.
Functor product_functor(const ProductCategory& from, const ProductCategory& to, const std::vector<Functor>& fs);

// Pairing <F1,...,Fn> : X -> product of the targets.
Functor pairing(const CategoryRef& x, const ProductCategory& to, const std::vector<Functor>& fs);

std::string tuple_label(const std::vector<std::string>& parts);

} // namespace emergence
