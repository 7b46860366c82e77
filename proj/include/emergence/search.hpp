#pragma once

#include "emergence/fincat.hpp"

#include <functional>
#include <optional>

namespace emergence {

struct SearchOptions {
    std::uint64_t budget = default_budget();
    bool injective = false; // on objects and on morphisms
    bool bijective = false; // implies injective; adds degree-signature pruning
    // Allowed images per source object / morphism. An empty outer vector
    // means unrestricted; an empty inner vector forbids every image.
    std::vector<std::vector<Index>> object_domain;
    std::vector<std::vector<Index>> morphism_domain;
};

// Backtracking functor search. Functors are produced in lexicographic order
// of (object_map, morphism_map). `visit` returns false to stop early.
// The budget bounds the number of candidate object maps and is checked
// before anything is visited.
void search_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options,
                     const std::function<bool(const Functor&)>& visit);

std::vector<Functor> enumerate_functors(const CategoryRef& a, const CategoryRef& b,
                                        std::uint64_t budget = default_budget());
std::vector<Functor> enumerate_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options);

// Counts functors, stopping once `stop_at` have been seen (0 = no limit).
std::size_t count_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options,
                           std::size_t stop_at = 0);

std::optional<Functor> find_isomorphism(const CategoryRef& a, const CategoryRef& b,
                                        std::uint64_t budget = default_budget());

// Estimated number of candidate object maps for `options`.
std::uint64_t object_map_estimate(const FinCategory& a, const FinCategory& b, const SearchOptions& options);

} // namespace emergence
