#pragma once

// Seeded random instances for the property suites.

#include "emergence/abd.hpp"
#include "emergence/battery.hpp"

#include <algorithm>
#include <random>

namespace gen {

using namespace emergence;

struct Limits {
    std::size_t max_objects = 4;
    std::size_t max_morphisms = 12;
    std::size_t max_carrier = 4;
    std::size_t max_generators = 4;
};

// A construct on the composition closure of a few random functions between
// random carriers, with Z/n addition as its one operation. Retries until
// the closure fits the limits.
inline EmergenceRef random_emergence(std::mt19937& rng, const std::string& name, const Limits& lim = {})
{
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    StructureSignature sig{{{"add", OpKind::internal, group_tags(), {}}}};
    while (true) {
        const std::size_t n = pick(1, lim.max_objects);
        std::vector<ConcreteObject> objects;
        for (std::size_t i = 0; i < n; ++i) {
            auto carrier = numbered_set(pick(1, lim.max_carrier));
            objects.push_back({"o" + std::to_string(i), carrier, {cyclic_addition(carrier, group_tags())}});
        }
        std::vector<ConcreteGenerator> gens;
        const std::size_t g = pick(0, lim.max_generators);
        for (std::size_t i = 0; i < g; ++i) {
            const auto d = pick(0, n - 1), c = pick(0, n - 1);
            std::vector<Index> table(objects[d].carrier.size());
            for (auto& t : table)
                t = pick(0, objects[c].carrier.size() - 1);
            gens.push_back({"g" + std::to_string(i), objects[d].name, objects[c].name, table});
        }
        auto e = concrete_emergence(name, sig, objects, gens);
        if (e->category()->morphism_count() <= lim.max_morphisms)
            return e;
    }
}

// Random table for a component with the given input and output radices.
inline std::vector<Index> random_table(std::mt19937& rng, std::size_t rows, std::size_t outputs)
{
    std::vector<Index> t(rows);
    for (auto& x : t)
        x = std::uniform_int_distribution<std::size_t>(0, outputs - 1)(rng);
    return t;
}

// A random feed-forward diagram: components consume earlier ports only.
// Some tables ignore an input so that canonical_form has work to do.
inline AbstractBlockDiagram random_abd(std::mt19937& rng, const std::string& name, std::size_t max_rows = 256)
{
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    AbstractBlockDiagram abd;
    abd.name = name;
    const std::size_t inputs = pick(1, 3);
    for (std::size_t i = 0; i < inputs; ++i)
        abd.ports.push_back({"s" + std::to_string(abd.ports.size()), numbered_set(pick(2, 4))});
    const std::size_t comps = pick(1, 4);
    for (std::size_t c = 0; c < comps; ++c) {
        Component comp;
        comp.name = "c" + std::to_string(c);
        std::vector<std::size_t> radix;
        std::size_t rows = 1;
        const std::size_t want = pick(1, 3);
        for (std::size_t k = 0; k < want; ++k) {
            const auto& p = abd.ports[pick(0, abd.ports.size() - 1)];
            if (std::count(comp.inputs.begin(), comp.inputs.end(), p.name) || rows * p.set.size() > max_rows)
                continue;
            comp.inputs.push_back(p.name);
            radix.push_back(p.set.size());
            rows *= p.set.size();
        }
        std::vector<std::size_t> out_radix;
        const std::size_t outs = pick(1, 2);
        std::size_t out_rows = 1;
        for (std::size_t k = 0; k < outs; ++k) {
            Port p{"s" + std::to_string(abd.ports.size()), numbered_set(pick(2, 3))};
            comp.outputs.push_back(p.name);
            out_radix.push_back(p.set.size());
            out_rows *= p.set.size();
            abd.ports.push_back(p);
        }
        comp.table = random_table(rng, rows, out_rows);
        if (radix.size() >= 2 && pick(0, 1)) {
            // make the table ignore its last input
            for (std::size_t t = 0; t < rows; ++t) {
                auto d = decode_tuple(t, radix);
                d.back() = 0;
                comp.table[t] = comp.table[encode_tuple(d, radix)];
            }
        }
        abd.components.push_back(std::move(comp));
    }
    return abd;
}

} // namespace gen
