#include "emergence/dot.hpp"

#include <sstream>

namespace emergence {

namespace {

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string node_id(Index cluster, const std::string& object)
{
    return quote("c" + std::to_string(cluster) + ":" + object);
}

void category_body(std::ostringstream& o, const FinCategory& c, Index cluster, const std::string& pad,
                   const DotOptions& options)
{
    for (const auto& x : c.objects())
        o << pad << node_id(cluster, x) << " [label=" << quote(x) << "];\n";
    for (Index m = 0; m < c.morphism_count(); ++m) {
        if (c.is_identity(m) && !options.identities)
            continue;
        const auto& mm = c.morphism(m);
        o << pad << node_id(cluster, c.object(mm.dom)) << " -> " << node_id(cluster, c.object(mm.cod))
          << " [label=" << quote(mm.name) << "];\n";
    }
}

} // namespace

std::string dot_category(const FinCategory& c, const DotOptions& options)
{
    std::ostringstream o;
    o << "digraph " << quote(c.name()) << " {\n";
    category_body(o, c, 0, "  ", options);
    o << "}\n";
    return o.str();
}

std::string dot_functor(const std::string& name, const Functor& f, const DotOptions& options)
{
    std::ostringstream o;
    o << "digraph " << quote(name) << " {\n  compound=true;\n";
    const CategoryRef cats[2] = {f.source, f.target};
    for (Index i = 0; i < 2; ++i) {
        o << "  subgraph " << quote("cluster" + std::to_string(i)) << " {\n    label=" << quote(cats[i]->name())
          << ";\n";
        category_body(o, *cats[i], i, "    ", options);
        o << "  }\n";
    }
    for (Index x = 0; x < f.object_map.size(); ++x)
        o << "  " << node_id(0, f.source->object(x)) << " -> " << node_id(1, f.target->object(f.object_map[x]))
          << " [style=dashed, label=" << quote(name) << "];\n";
    o << "}\n";
    return o.str();
}

std::string dot_clusters(const std::string& name, const std::vector<DotCluster>& clusters,
                         const std::vector<DotLeg>& legs, const DotOptions& options)
{
    std::ostringstream o;
    o << "digraph " << quote(name) << " {\n  compound=true;\n";
    for (Index i = 0; i < clusters.size(); ++i) {
        o << "  subgraph " << quote("cluster" + std::to_string(i)) << " {\n    label=" << quote(clusters[i].label)
          << ";\n    " << node_id(i, "") << " [shape=point, style=invis];\n";
        category_body(o, *clusters[i].category, i, "    ", options);
        o << "  }\n";
    }
    for (const auto& l : legs)
        o << "  " << node_id(l.from, "") << " -> " << node_id(l.to, "") << " [ltail="
          << quote("cluster" + std::to_string(l.from)) << ", lhead=" << quote("cluster" + std::to_string(l.to))
          << ", label=" << quote(l.label) << "];\n";
    o << "}\n";
    return o.str();
}

std::string dot_diagram(const DiagramEmergence& d, const DotOptions& options)
{
    const auto& s = *d.scheme;
    std::vector<DotCluster> clusters;
    for (Index x = 0; x < s.object_count(); ++x)
        clusters.push_back({s.object(x) + " = " + d.nodes[x]->name, d.nodes[x]->category()});
    std::vector<DotLeg> legs;
    for (Index m = 0; m < s.morphism_count(); ++m)
        if (!s.is_identity(m) || options.identities)
            legs.push_back({s.morphism(m).dom, s.morphism(m).cod, s.morphism(m).name});
    return dot_clusters(d.name, clusters, legs, options);
}

std::string dot_abd(const AbstractBlockDiagram& abd)
{
    std::ostringstream o;
    o << "digraph " << quote(abd.name) << " {\n  rankdir=LR;\n";
    for (const auto& p : abd.ports)
        o << "  " << quote("port:" + p.name) << " [shape=ellipse, label=" << quote(p.name + " " + p.set.to_string())
          << "];\n";
    for (const auto& c : abd.components)
        o << "  " << quote("comp:" + c.name) << " [shape=box, label=" << quote(c.name) << "];\n";
    for (const auto& c : abd.components) {
        for (const auto& i : c.inputs)
            o << "  " << quote("port:" + i) << " -> " << quote("comp:" + c.name) << ";\n";
        for (const auto& out : c.outputs)
            o << "  " << quote("comp:" + c.name) << " -> " << quote("port:" + out) << ";\n";
    }
    o << "}\n";
    return o.str();
}

} // namespace emergence
