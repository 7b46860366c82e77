#pragma once

#include "emergence/abd.hpp"
#include "emergence/universal.hpp"

namespace emergence {

struct DotOptions {
    bool identities = false; // identity arrows are suppressed by default
};

std::string dot_category(const FinCategory& c, const DotOptions& options = {});
// Source and target as clusters, object assignments as dashed edges.
std::string dot_functor(const std::string& name, const Functor& f, const DotOptions& options = {});

struct DotCluster {
    std::string label;
    CategoryRef category;
};

struct DotLeg {
    Index from = 0;
    Index to = 0;
    std::string label;
};

// One cluster per category, legs drawn between clusters.
std::string dot_clusters(const std::string& name, const std::vector<DotCluster>& clusters,
                         const std::vector<DotLeg>& legs, const DotOptions& options = {});
std::string dot_diagram(const DiagramEmergence& d, const DotOptions& options = {});
// Components as boxes, ports as ellipses.
std::string dot_abd(const AbstractBlockDiagram& abd);

} // namespace emergence
