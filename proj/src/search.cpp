#include "emergence/search.hpp"

#include <algorithm>
#include <tuple>

namespace emergence {

namespace {

using Signature = std::tuple<std::size_t, std::vector<std::size_t>, std::vector<std::size_t>>;

Signature degree_signature(const FinCategory& c, Index o)
{
    std::vector<std::size_t> out, in;
    for (Index x = 0; x < c.object_count(); ++x) {
        out.push_back(c.hom(o, x).size());
        in.push_back(c.hom(x, o).size());
    }
    std::sort(out.begin(), out.end());
    std::sort(in.begin(), in.end());
    return {c.hom(o, o).size(), std::move(out), std::move(in)};
}

class Searcher {
public:
    Searcher(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options,
             const std::function<bool(const Functor&)>& visit)
        : a_(*a), b_(*b), options_(options), visit_(visit), current_{a, b, {}, {}}
    {
        injective_ = options.injective || options.bijective;
        const std::size_t n = a_.object_count();
        const std::size_t m = a_.morphism_count();
        current_.object_map.assign(n, npos);
        current_.morphism_map.assign(m, npos);

        object_candidates_.resize(n);
        std::vector<Signature> bsig;
        if (options.bijective)
            for (Index y = 0; y < b_.object_count(); ++y)
                bsig.push_back(degree_signature(b_, y));
        for (Index o = 0; o < n; ++o) {
            std::vector<Index> base;
            if (!options.object_domain.empty() && !options.object_domain[o].empty()) {
                base = options.object_domain[o];
                std::sort(base.begin(), base.end());
                base.erase(std::unique(base.begin(), base.end()), base.end());
            } else if (options.object_domain.empty()) {
                for (Index y = 0; y < b_.object_count(); ++y)
                    base.push_back(y);
            }
            if (options.bijective) {
                auto sig = degree_signature(a_, o);
                std::erase_if(base, [&](Index y) { return bsig[y] != sig; });
            }
            object_candidates_[o] = std::move(base);
        }

        if (!options.morphism_domain.empty()) {
            allowed_.assign(m, std::vector<char>(b_.morphism_count(), 0));
            restricted_.assign(m, 0);
            for (Index f = 0; f < m; ++f) {
                restricted_[f] = 1;
                for (Index g : options.morphism_domain[f])
                    if (g < b_.morphism_count())
                        allowed_[f][g] = 1;
            }
        }

        neighbours_.resize(n);
        for (Index o = 0; o < n; ++o)
            for (Index p = 0; p <= o; ++p)
                if (!a_.hom(p, o).empty() || !a_.hom(o, p).empty() || options.bijective)
                    neighbours_[o].push_back(p);

        triples_.resize(m);
        for (Index g = 0; g < m; ++g)
            for (Index f = 0; f < m; ++f) {
                Index h = a_.compose(g, f);
                if (h == npos)
                    continue;
                triples_[std::max({g, f, h})].push_back({g, f, h});
            }
        used_objects_.assign(b_.object_count(), 0);
        used_morphisms_.assign(b_.morphism_count(), 0);
    }

    std::uint64_t estimate() const
    {
        std::uint64_t e = 1;
        for (const auto& c : object_candidates_)
            e = sat_mul(e, c.size());
        return a_.object_count() == 0 ? 1 : e;
    }

    void run()
    {
        if (options_.bijective &&
            (a_.object_count() != b_.object_count() || a_.morphism_count() != b_.morphism_count()))
            return;
        assign_object(0);
    }

private:
    bool object_ok(Index o, Index y)
    {
        if (injective_ && used_objects_[y])
            return false;
        current_.object_map[o] = y;
        for (Index p : neighbours_[o]) {
            Index fp = current_.object_map[p];
            if (options_.bijective) {
                if (a_.hom(p, o).size() != b_.hom(fp, y).size() || a_.hom(o, p).size() != b_.hom(y, fp).size())
                    return false;
                continue;
            }
            if (!a_.hom(p, o).empty() && b_.hom(fp, y).empty())
                return false;
            if (!a_.hom(o, p).empty() && b_.hom(y, fp).empty())
                return false;
        }
        return true;
    }

    void assign_object(Index o)
    {
        if (stopped_)
            return;
        if (o == a_.object_count()) {
            assign_morphism(0);
            return;
        }
        for (Index y : object_candidates_[o]) {
            if (object_ok(o, y)) {
                used_objects_[y] = 1;
                assign_object(o + 1);
                used_objects_[y] = 0;
                if (stopped_)
                    break;
            }
            current_.object_map[o] = npos;
        }
        current_.object_map[o] = npos;
    }

    bool morphism_ok(Index f, Index g)
    {
        if (!restricted_.empty() && restricted_[f] && !allowed_[f][g])
            return false;
        if (injective_ && used_morphisms_[g])
            return false;
        current_.morphism_map[f] = g;
        for (const auto& [x, y, h] : triples_[f]) {
            if (b_.compose(current_.morphism_map[x], current_.morphism_map[y]) != current_.morphism_map[h])
                return false;
        }
        return true;
    }

    void assign_morphism(Index f)
    {
        if (stopped_)
            return;
        if (f == a_.morphism_count()) {
            if (!visit_(current_))
                stopped_ = true;
            return;
        }
        const auto& mf = a_.morphism(f);
        Index fd = current_.object_map[mf.dom];
        Index fc = current_.object_map[mf.cod];
        auto attempt = [&](Index g) {
            if (morphism_ok(f, g)) {
                used_morphisms_[g] = 1;
                assign_morphism(f + 1);
                used_morphisms_[g] = 0;
            }
            current_.morphism_map[f] = npos;
        };
        if (a_.is_identity(f)) {
            attempt(b_.identity(fd));
            return;
        }
        for (Index g : b_.hom(fd, fc)) {
            attempt(g);
            if (stopped_)
                return;
        }
    }

    const FinCategory& a_;
    const FinCategory& b_;
    const SearchOptions& options_;
    const std::function<bool(const Functor&)>& visit_;
    Functor current_;
    bool injective_ = false;
    bool stopped_ = false;
    std::vector<std::vector<Index>> object_candidates_;
    std::vector<std::vector<char>> allowed_;
    std::vector<char> restricted_;
    std::vector<std::vector<Index>> neighbours_;
    std::vector<std::vector<std::tuple<Index, Index, Index>>> triples_;
    std::vector<char> used_objects_;
    std::vector<char> used_morphisms_;
};

} // namespace

std::uint64_t object_map_estimate(const FinCategory& a, const FinCategory& b, const SearchOptions& options)
{
    std::uint64_t e = 1;
    for (Index o = 0; o < a.object_count(); ++o) {
        std::uint64_t k = b.object_count();
        if (!options.object_domain.empty())
            k = options.object_domain[o].size();
        e = sat_mul(e, k);
    }
    return e;
}

void search_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options,
                     const std::function<bool(const Functor&)>& visit)
{
    if (!options.object_domain.empty() && options.object_domain.size() != a->object_count())
        throw StructuralError("object filter does not cover every source object");
    if (!options.morphism_domain.empty() && options.morphism_domain.size() != a->morphism_count())
        throw StructuralError("morphism filter does not cover every source morphism");
    Searcher s(a, b, options, visit);
    std::uint64_t e = s.estimate();
    if (e > options.budget)
        throw BudgetExceeded("functor search " + a->name() + " -> " + b->name(), e, options.budget);
    s.run();
}

std::vector<Functor> enumerate_functors(const CategoryRef& a, const CategoryRef& b, std::uint64_t budget)
{
    SearchOptions options;
    options.budget = budget;
    return enumerate_functors(a, b, options);
}

std::vector<Functor> enumerate_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options)
{
    std::vector<Functor> out;
    search_functors(a, b, options, [&](const Functor& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

std::size_t count_functors(const CategoryRef& a, const CategoryRef& b, const SearchOptions& options,
                           std::size_t stop_at)
{
    std::size_t n = 0;
    search_functors(a, b, options, [&](const Functor&) {
        ++n;
        return stop_at == 0 || n < stop_at;
    });
    return n;
}

std::optional<Functor> find_isomorphism(const CategoryRef& a, const CategoryRef& b, std::uint64_t budget)
{
    SearchOptions options;
    options.budget = budget;
    options.bijective = true;
    std::optional<Functor> found;
    search_functors(a, b, options, [&](const Functor& f) {
        found = f;
        return false;
    });
    return found;
}

} // namespace emergence
