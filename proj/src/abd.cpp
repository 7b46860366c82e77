#include "emergence/abd.hpp"

#include <algorithm>
#include <set>

namespace emergence {

Index AbstractBlockDiagram::find_port(const std::string& n) const
{
    for (Index i = 0; i < ports.size(); ++i)
        if (ports[i].name == n)
            return i;
    return npos;
}

const Port& AbstractBlockDiagram::port(const std::string& n) const
{
    Index i = find_port(n);
    if (i == npos)
        throw StructuralError("unknown port " + n + " in " + name);
    return ports[i];
}

Index AbstractBlockDiagram::find_component(const std::string& n) const
{
    for (Index i = 0; i < components.size(); ++i)
        if (components[i].name == n)
            return i;
    return npos;
}

std::vector<std::size_t> AbstractBlockDiagram::input_radix(const Component& c) const
{
    std::vector<std::size_t> r;
    for (const auto& p : c.inputs)
        r.push_back(port(p).set.size());
    return r;
}

std::vector<std::size_t> AbstractBlockDiagram::output_radix(const Component& c) const
{
    std::vector<std::size_t> r;
    for (const auto& p : c.outputs)
        r.push_back(port(p).set.size());
    return r;
}

std::vector<std::string> AbstractBlockDiagram::external_inputs() const
{
    std::vector<std::string> out;
    for (const auto& p : ports) {
        bool consumed = false, produced = false;
        for (const auto& c : components) {
            consumed = consumed || std::count(c.inputs.begin(), c.inputs.end(), p.name);
            produced = produced || std::count(c.outputs.begin(), c.outputs.end(), p.name);
        }
        if (consumed && !produced)
            out.push_back(p.name);
    }
    return out;
}

std::vector<std::string> AbstractBlockDiagram::external_outputs() const
{
    std::vector<std::string> out;
    for (const auto& p : ports) {
        bool consumed = false, produced = false;
        for (const auto& c : components) {
            consumed = consumed || std::count(c.inputs.begin(), c.inputs.end(), p.name);
            produced = produced || std::count(c.outputs.begin(), c.outputs.end(), p.name);
        }
        if (produced && !consumed)
            out.push_back(p.name);
    }
    return out;
}

std::size_t tuple_count(const std::vector<std::size_t>& radix)
{
    std::size_t n = 1;
    for (auto r : radix)
        n *= r;
    return n;
}

std::vector<Index> decode_tuple(Index k, const std::vector<std::size_t>& radix)
{
    std::vector<Index> d(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
        d[i] = k % radix[i];
        k /= radix[i];
    }
    return d;
}

Index encode_tuple(const std::vector<Index>& digits, const std::vector<std::size_t>& radix)
{
    Index k = 0;
    for (std::size_t i = 0; i < radix.size(); ++i)
        k = k * radix[i] + digits[i];
    return k;
}

ValidationReport validate_abd(const AbstractBlockDiagram& abd)
{
    ValidationReport report;
    std::set<std::string> names;
    for (const auto& p : abd.ports)
        if (!names.insert(p.name).second)
            report.add("port-duplicate", {p.name});
    names.clear();
    std::map<std::string, std::string> producer;
    for (const auto& c : abd.components) {
        if (!names.insert(c.name).second)
            report.add("component-duplicate", {c.name});
        bool known = true;
        for (const auto& p : c.inputs)
            if (abd.find_port(p) == npos) {
                report.add("unknown-port", {c.name, p});
                known = false;
            }
        for (const auto& p : c.outputs) {
            if (abd.find_port(p) == npos) {
                report.add("unknown-port", {c.name, p});
                known = false;
                continue;
            }
            auto [it, inserted] = producer.emplace(p, c.name);
            if (!inserted)
                report.add("multiple-producers", {p, it->second, c.name});
        }
        if (!known)
            continue;
        const auto rows = tuple_count(abd.input_radix(c));
        const auto outs = tuple_count(abd.output_radix(c));
        if (c.table.size() != rows) {
            report.add("table-size", {c.name, std::to_string(c.table.size()), std::to_string(rows)});
            continue;
        }
        for (Index k = 0; k < rows; ++k)
            if (c.table[k] >= outs) {
                report.add("table-range", {c.name, std::to_string(k)});
                break;
            }
    }
    return report;
}

std::vector<Index> evaluate(const AbstractBlockDiagram& abd, const Component& c, const std::vector<Index>& inputs)
{
    return decode_tuple(c.table.at(encode_tuple(inputs, abd.input_radix(c))), abd.output_radix(c));
}

namespace {

std::vector<std::string> tuple_labels(const AbstractBlockDiagram& abd, const std::vector<std::string>& ports,
                                      const std::vector<Index>& digits)
{
    std::vector<std::string> parts;
    for (Index i = 0; i < ports.size(); ++i)
        parts.push_back(abd.port(ports[i]).set[digits[i]]);
    return parts;
}

std::vector<FinSet> port_sets(const AbstractBlockDiagram& abd, const std::vector<std::string>& ports)
{
    std::vector<FinSet> sets;
    for (const auto& p : ports)
        sets.push_back(abd.port(p).set);
    return sets;
}

} // namespace

FinFunction component_function(const AbstractBlockDiagram& abd, const Component& c)
{
    FinFunction f{bracketed_product(port_sets(abd, c.inputs)), bracketed_product(port_sets(abd, c.outputs)), {}};
    f.table.assign(f.dom.size(), 0);
    const auto in = abd.input_radix(c);
    const auto out = abd.output_radix(c);
    for (Index k = 0; k < c.table.size(); ++k) {
        auto x = bracketed_label(tuple_labels(abd, c.inputs, decode_tuple(k, in)));
        auto y = bracketed_label(tuple_labels(abd, c.outputs, decode_tuple(c.table[k], out)));
        f.table[f.dom.index_of(x)] = f.cod.index_of(y);
    }
    return f;
}

AbstractBlockDiagram resolve_to_abd(const Resolution& r)
{
    AbstractBlockDiagram abd;
    abd.name = r.system;
    std::map<std::string, FinSet> declared;
    for (const auto& s : r.signals) {
        if (!declared.emplace(s.name, s.set).second)
            throw StructuralError("signal " + s.name + " declared twice in " + r.system);
        abd.ports.push_back(s);
    }
    std::map<std::string, std::pair<std::string, FinSet>> stated;
    auto resolve_port = [&](const Part& part, const PortDecl& d) {
        auto it = declared.find(d.name);
        if (it == declared.end())
            throw StructuralError("part " + part.name + " references undeclared signal " + d.name);
        if (!d.type)
            return;
        auto [prev, inserted] = stated.emplace(d.name, std::make_pair(part.name, *d.type));
        if (!inserted && prev->second.second != *d.type)
            throw StructuralError("signal type mismatch on " + d.name + ": " + prev->second.first + " uses " +
                                  prev->second.second.to_string() + ", " + part.name + " uses " + d.type->to_string());
        if (*d.type != it->second)
            throw StructuralError("signal type mismatch on " + d.name + ": " + part.name + " uses " +
                                  d.type->to_string() + ", declared " + it->second.to_string());
    };
    for (const auto& part : r.parts) {
        Component c;
        c.name = part.name;
        for (const auto& d : part.inputs) {
            resolve_port(part, d);
            c.inputs.push_back(d.name);
        }
        for (const auto& d : part.outputs) {
            resolve_port(part, d);
            c.outputs.push_back(d.name);
        }
        const auto in = abd.input_radix(c);
        const auto out = abd.output_radix(c);
        const auto rows = tuple_count(in);
        c.table.assign(rows, npos);
        auto coords = [&](const std::vector<std::string>& ports, const std::vector<std::string>& labels,
                          const char* side) {
            if (labels.size() != ports.size())
                throw StructuralError("row of " + part.name + " has " + std::to_string(labels.size()) + " " + side +
                                      " values, expected " + std::to_string(ports.size()));
            std::vector<Index> d;
            for (Index i = 0; i < ports.size(); ++i) {
                Index x = abd.port(ports[i]).set.index_of(labels[i]);
                if (x == npos)
                    throw StructuralError("value " + labels[i] + " is not in signal " + ports[i] + " (part " +
                                          part.name + ")");
                d.push_back(x);
            }
            return d;
        };
        for (const auto& [xs, ys] : part.rows) {
            Index k = encode_tuple(coords(c.inputs, xs, "input"), in);
            Index v = encode_tuple(coords(c.outputs, ys, "output"), out);
            if (c.table[k] != npos && c.table[k] != v)
                throw StructuralError("part " + part.name + " maps one input tuple to two outputs");
            c.table[k] = v;
        }
        for (Index k = 0; k < rows; ++k)
            if (c.table[k] == npos)
                throw StructuralError("table of " + part.name + " is not total; missing input " +
                                      bracketed_label(tuple_labels(abd, c.inputs, decode_tuple(k, in))));
        abd.components.push_back(std::move(c));
    }
    auto report = validate_abd(abd);
    if (!report.ok())
        throw StructuralError("resolution " + r.system + " is not a block diagram: " + report.summary());
    return abd;
}

Resolution resolution_of(const AbstractBlockDiagram& abd)
{
    Resolution r{abd.name, abd.ports, {}};
    for (const auto& c : abd.components) {
        Part p;
        p.name = c.name;
        for (const auto& i : c.inputs)
            p.inputs.push_back({i, std::nullopt});
        for (const auto& o : c.outputs)
            p.outputs.push_back({o, std::nullopt});
        const auto in = abd.input_radix(c);
        const auto out = abd.output_radix(c);
        for (Index k = 0; k < c.table.size(); ++k)
            p.rows.push_back({tuple_labels(abd, c.inputs, decode_tuple(k, in)),
                              tuple_labels(abd, c.outputs, decode_tuple(c.table[k], out))});
        r.parts.push_back(std::move(p));
    }
    return r;
}

std::vector<Index> support(const std::vector<std::size_t>& radix, const std::vector<Index>& table)
{
    std::vector<Index> out;
    const auto rows = tuple_count(radix);
    for (Index i = 0; i < radix.size(); ++i) {
        bool depends = false;
        for (Index k = 0; k < rows && !depends; ++k) {
            auto d = decode_tuple(k, radix);
            if (d[i] != 0)
                continue;
            for (Index v = 1; v < radix[i] && !depends; ++v) {
                d[i] = v;
                depends = table[encode_tuple(d, radix)] != table[k];
            }
        }
        if (depends)
            out.push_back(i);
    }
    return out;
}

std::optional<std::vector<Index>> is_factorable(const std::vector<std::size_t>& radix, const std::vector<Index>& table)
{
    if (radix.size() < 2)
        return std::nullopt;
    auto s = support(radix, table);
    if (s.size() == radix.size())
        return std::nullopt;
    return s;
}

std::optional<std::vector<Index>> is_factorable(const AbstractBlockDiagram& abd, const Component& c)
{
    return is_factorable(abd.input_radix(c), c.table);
}

AbstractBlockDiagram canonical_form(const AbstractBlockDiagram& abd, std::size_t* passes)
{
    AbstractBlockDiagram out = abd;
    std::size_t count = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (auto& c : out.components) {
            const auto radix = out.input_radix(c);
            const auto s = support(radix, c.table);
            if (s.size() == radix.size())
                continue;
            std::vector<std::size_t> reduced;
            std::vector<std::string> inputs;
            for (Index i : s) {
                reduced.push_back(radix[i]);
                inputs.push_back(c.inputs[i]);
            }
            std::vector<Index> table(tuple_count(reduced));
            std::vector<Index> full(radix.size(), 0);
            for (Index k = 0; k < table.size(); ++k) {
                auto d = decode_tuple(k, reduced);
                for (Index j = 0; j < s.size(); ++j)
                    full[s[j]] = d[j];
                table[k] = c.table[encode_tuple(full, radix)];
            }
            c.inputs = std::move(inputs);
            c.table = std::move(table);
            changed = true;
        }
        std::vector<Port> kept;
        for (const auto& p : out.ports) {
            bool used = false;
            for (const auto& c : out.components)
                used = used || std::count(c.inputs.begin(), c.inputs.end(), p.name) ||
                       std::count(c.outputs.begin(), c.outputs.end(), p.name);
            if (used)
                kept.push_back(p);
        }
        if (kept.size() != out.ports.size()) {
            out.ports = std::move(kept);
            changed = true;
        }
        if (changed)
            ++count;
    }
    if (passes)
        *passes = count;
    return out;
}

AbstractBlockDiagram refine_single_output(const AbstractBlockDiagram& abd)
{
    AbstractBlockDiagram out = abd;
    out.components.clear();
    for (const auto& c : abd.components) {
        if (c.outputs.size() <= 1) {
            out.components.push_back(c);
            continue;
        }
        const auto radix = abd.output_radix(c);
        for (Index j = 0; j < c.outputs.size(); ++j) {
            Component part{c.name + "/" + c.outputs[j], c.inputs, {c.outputs[j]}, {}};
            for (Index v : c.table)
                part.table.push_back(decode_tuple(v, radix)[j]);
            out.components.push_back(std::move(part));
        }
    }
    return out;
}

Index SetFunctorTable::find(const FinSet& s) const
{
    for (Index i = 0; i < lattice.size(); ++i)
        if (lattice[i] == s)
            return i;
    return npos;
}

ValidationReport validate_set_functor(const SetFunctorTable& t)
{
    ValidationReport report;
    if (t.images.size() != t.lattice.size()) {
        report.add("image-count", {std::to_string(t.images.size()), std::to_string(t.lattice.size())});
        return report;
    }
    for (const auto& s : t.lattice)
        if (!s.subset_of(t.universe))
            report.add("lattice-universe", {s.to_string()});
    for (const auto& a : t.arrows) {
        if (a.source >= t.lattice.size() || a.target >= t.lattice.size()) {
            report.add("arrow-endpoints", {a.name});
            continue;
        }
        if (a.arrow.dom != t.lattice[a.source] || a.arrow.cod != t.lattice[a.target] || !a.arrow.valid())
            report.add("arrow-endpoints", {a.name});
        if (a.image.dom != t.images[a.source] || a.image.cod != t.images[a.target] || !a.image.valid())
            report.add("image-endpoints", {a.name});
        if (a.source == a.target && a.arrow == FinFunction::identity(a.arrow.dom) &&
            a.image != FinFunction::identity(a.image.dom))
            report.add("identity", {a.name});
    }
    if (!report.ok())
        return report;
    for (const auto& f : t.arrows)
        for (const auto& g : t.arrows) {
            if (g.source != f.target)
                continue;
            auto gf = compose(g.arrow, f.arrow);
            for (const auto& h : t.arrows)
                if (h.source == f.source && h.target == g.target && h.arrow == gf &&
                    h.image != compose(g.image, f.image))
                    report.add("composition", {g.name, f.name, h.name});
        }
    for (const auto& p : t.products)
        if (p.left >= t.lattice.size() || p.right >= t.lattice.size() ||
            (p.product != npos && p.product >= t.lattice.size()))
            report.add("product-index", {std::to_string(p.left), std::to_string(p.right)});
    return report;
}

std::string to_string(SetFunctorRule r)
{
    switch (r) {
    case SetFunctorRule::identity:
        return "identity";
    case SetFunctorRule::empty:
        return "empty";
    case SetFunctorRule::square:
        return "square";
    case SetFunctorRule::relabel:
        return "relabel";
    }
    return "?";
}

namespace {

// Splits "(l,r)" at its top-level comma; false for atoms and "()".
bool split_pair(const std::string& x, std::string& l, std::string& r)
{
    if (x.size() < 5 || x.front() != '(' || x.back() != ')')
        return false;
    int depth = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (x[i] == '(')
            ++depth;
        else if (x[i] == ')')
            --depth;
        else if (x[i] == ',' && depth == 0) {
            l = x.substr(1, i - 1);
            r = x.substr(i + 1, x.size() - i - 2);
            return true;
        }
    }
    return false;
}

} // namespace

std::string SetFunctorAction::on_label(const std::string& x) const
{
    switch (rule) {
    case SetFunctorRule::identity:
        return x;
    case SetFunctorRule::empty:
        throw StructuralError("the empty set-functor has no elements");
    case SetFunctorRule::square:
        return pair_label(x, x);
    case SetFunctorRule::relabel: {
        std::string l, r;
        if (split_pair(x, l, r))
            return pair_label(on_label(l), on_label(r));
        auto it = relabel.find(x);
        return it == relabel.end() ? x : it->second;
    }
    }
    return x;
}

FinSet SetFunctorAction::on_set(const FinSet& s) const
{
    if (rule == SetFunctorRule::empty)
        return {};
    if (rule == SetFunctorRule::square)
        return pair_product(s, s);
    std::vector<std::string> labels;
    for (const auto& x : s)
        labels.push_back(on_label(x));
    FinSet out(labels);
    if (out.size() != s.size())
        throw StructuralError("relabeling is not injective on " + s.to_string());
    return out;
}

FinFunction SetFunctorAction::on_function(const FinFunction& f) const
{
    FinFunction g{on_set(f.dom), on_set(f.cod), {}};
    g.table.assign(g.dom.size(), 0);
    if (rule == SetFunctorRule::empty)
        return g;
    if (rule == SetFunctorRule::square) {
        for (const auto& x : f.dom)
            for (const auto& y : f.dom)
                g.table[g.dom.index_of(pair_label(x, y))] = g.cod.index_of(pair_label(f(x), f(y)));
        return g;
    }
    for (const auto& x : f.dom)
        g.table[g.dom.index_of(on_label(x))] = g.cod.index_of(on_label(f(x)));
    return g;
}

SetFunctorTable set_functor_for(const AbstractBlockDiagram& abd, const SetFunctorAction& action,
                                const std::string& name)
{
    SetFunctorTable t;
    t.name = name;
    auto add = [&](const FinSet& s) {
        Index i = t.find(s);
        if (i != npos)
            return i;
        t.lattice.push_back(s);
        return t.lattice.size() - 1;
    };
    auto add_products = [&](const std::vector<std::string>& ports) {
        auto sets = port_sets(abd, ports);
        if (sets.empty())
            return add(bracketed_product({}));
        Index acc = add(sets[0]);
        for (Index i = 1; i < sets.size(); ++i) {
            Index right = add(sets[i]);
            Index prod = add(pair_product(t.lattice[acc], sets[i]));
            DeclaredProduct p{acc, right, prod};
            if (std::none_of(t.products.begin(), t.products.end(), [&](const DeclaredProduct& q) {
                    return q.left == p.left && q.right == p.right;
                }))
                t.products.push_back(p);
            acc = prod;
        }
        return acc;
    };
    for (const auto& p : abd.ports)
        add(p.set);
    for (const auto& c : abd.components) {
        Index dom = add_products(c.inputs);
        Index cod = add_products(c.outputs);
        auto f = component_function(abd, c);
        t.arrows.push_back({c.name, dom, cod, f, action.on_function(f)});
    }
    std::set<std::string> universe;
    for (const auto& s : t.lattice)
        universe.insert(s.begin(), s.end());
    t.universe = FinSet({universe.begin(), universe.end()});
    for (const auto& s : t.lattice)
        t.images.push_back(action.on_set(s));
    return t;
}

SetFunctorCheck check_set_functor(const SetFunctorTable& t)
{
    auto report = validate_set_functor(t);
    if (!report.ok())
        throw StructuralError("set-functor " + t.name + " is not functorial on its lattice: " + report.summary());
    SetFunctorCheck out;
    out.note = "relative to the declared lattice of " + std::to_string(t.lattice.size()) + " subsets";
    for (Index i = 0; i < t.lattice.size() && out.regular; ++i)
        if (!t.lattice[i].empty() && t.images[i].empty()) {
            out.regular = false;
            out.regular_rule = "nonempty";
            out.regular_witness = {t.lattice[i].to_string()};
        }
    for (Index i = 0; i < t.lattice.size() && out.regular; ++i)
        for (Index j = 0; j < t.lattice.size() && out.regular; ++j)
            if (i != j && t.lattice[i].subset_of(t.lattice[j]) && !t.images[i].subset_of(t.images[j])) {
                out.regular = false;
                out.regular_rule = "inclusion";
                out.regular_witness = {t.lattice[i].to_string(), t.lattice[j].to_string()};
            }
    for (const auto& p : t.products) {
        const auto label = t.lattice[p.left].to_string() + " x " + t.lattice[p.right].to_string();
        if (p.product == npos) {
            out.inconclusive.push_back(label);
            continue;
        }
        auto expected = pair_product(t.images[p.left], t.images[p.right]);
        if (out.multiplicative && expected != t.images[p.product]) {
            out.multiplicative = false;
            out.multiplicative_witness = {label, expected.to_string(), t.images[p.product].to_string()};
        }
    }
    return out;
}

SetFunctorApplication apply_set_functor(const AbstractBlockDiagram& abd, const SetFunctorTable& t)
{
    SetFunctorApplication out;
    out.check = check_set_functor(t);
    AbstractBlockDiagram result;
    result.name = t.name + "(" + abd.name + ")";
    for (const auto& p : abd.ports) {
        Index i = t.find(p.set);
        if (i == npos)
            throw StructuralError("set-functor " + t.name + " is undefined on port " + p.name);
        if (!p.set.empty() && t.images[i].empty() && out.defect.empty())
            out.defect = {"port", p.name, "collapsed to the empty set"};
        result.ports.push_back({p.name, t.images[i]});
    }
    bool built = true;
    for (const auto& c : abd.components) {
        auto f = component_function(abd, c);
        auto it = std::find_if(t.arrows.begin(), t.arrows.end(), [&](const DeclaredArrow& a) { return a.arrow == f; });
        if (it == t.arrows.end())
            throw StructuralError("set-functor " + t.name + " is undefined on the mapping of " + c.name);
        const auto& g = it->image;
        auto dom = bracketed_product(port_sets(result, c.inputs));
        auto cod = bracketed_product(port_sets(result, c.outputs));
        if (g.dom != dom || g.cod != cod) {
            if (out.defect.empty())
                out.defect = {"component", c.name,
                              g.dom != dom ? "image domain " + g.dom.to_string() + " is not the product " + dom.to_string()
                                           : "image codomain " + g.cod.to_string() + " is not the product " +
                                                 cod.to_string()};
            built = false;
            continue;
        }
        Component n{c.name, c.inputs, c.outputs, {}};
        const auto in = result.input_radix(n);
        const auto outr = result.output_radix(n);
        std::map<std::string, Index> out_index;
        for (Index k = 0; k < tuple_count(outr); ++k)
            out_index[bracketed_label(tuple_labels(result, n.outputs, decode_tuple(k, outr)))] = k;
        for (Index k = 0; k < tuple_count(in); ++k)
            n.table.push_back(out_index.at(g(bracketed_label(tuple_labels(result, n.inputs, decode_tuple(k, in))))));
        result.components.push_back(std::move(n));
    }
    if (built) {
        out.valid = validate_abd(result).ok();
        out.abd = std::move(result);
    }
    if (out.defect.empty() && !out.check.regular)
        out.defect = {"regular", out.check.regular_rule, out.check.regular_witness.front()};
    if (out.defect.empty() && !out.check.multiplicative)
        out.defect = {"multiplicative", out.check.multiplicative_witness.front()};
    out.verdict = out.defect.empty() && out.valid ? "no defect found" : "defect";
    return out;
}

namespace {

struct ProductObject {
    std::string name;
    std::vector<std::string> factors;
    FinSet carrier;
};

OperationTable product_table(const AbstractBlockDiagram& abd, const ProductObject& p, const OperationSlot& slot,
                             const std::vector<const OperationTable*>& factors)
{
    OperationTable t{slot.kind, p.carrier, slot.scalars, {}, slot.tags};
    const std::size_t n = p.carrier.size();
    std::vector<std::size_t> radix;
    for (const auto& f : p.factors)
        radix.push_back(abd.port(f).set.size());
    std::vector<Index> pos(n);
    for (Index k = 0; k < n; ++k)
        pos[k] = p.carrier.index_of(bracketed_label(tuple_labels(abd, p.factors, decode_tuple(k, radix))));
    if (slot.kind == OpKind::internal) {
        t.table.assign(n * n, 0);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                auto dx = decode_tuple(x, radix), dy = decode_tuple(y, radix);
                for (Index i = 0; i < radix.size(); ++i)
                    dx[i] = factors[i]->apply(dx[i], dy[i]);
                t.table[pos[x] * n + pos[y]] = pos[encode_tuple(dx, radix)];
            }
    } else {
        t.table.assign(slot.scalars.size() * n, 0);
        for (Index k = 0; k < slot.scalars.size(); ++k)
            for (Index x = 0; x < n; ++x) {
                auto dx = decode_tuple(x, radix);
                for (Index i = 0; i < radix.size(); ++i)
                    dx[i] = factors[i]->apply(k, dx[i]);
                t.table[k * n + pos[x]] = pos[encode_tuple(dx, radix)];
            }
    }
    return t;
}

} // namespace

AbdEmergence abd_to_emergence(const AbstractBlockDiagram& input, const SignatureHints& hints, std::uint64_t budget)
{
    auto report = validate_abd(input);
    if (!report.ok())
        throw StructuralError("block diagram " + input.name + " is invalid: " + report.summary());
    AbdEmergence out;
    AbstractBlockDiagram abd = canonical_form(input);
    if (!(abd == input)) {
        out.canonicalized = true;
        out.notices.push_back("diagram was not canonical; factorable mappings were restricted to their support");
    }

    std::vector<std::string> missing;
    for (const auto& p : abd.ports)
        if (!hints.tables.count(p.name))
            missing.push_back(p.name);
    for (const auto& [port, tables] : hints.tables)
        if (abd.find_port(port) == npos)
            out.notices.push_back("structure hint for " + port + " ignored; no such port");
    if (hints.signature.size() == 0 || missing.size() == abd.ports.size())
        throw ConstructionError("no port of " + abd.name +
                                " carries structure; the construct is its own underlying sets and yields no emergence");
    if (!missing.empty()) {
        std::string names;
        for (const auto& m : missing)
            names += (names.empty() ? "" : ", ") + m;
        throw ConstructionError("ports without structure hints in " + abd.name + ": " + names +
                                "; every object must instantiate all " + std::to_string(hints.signature.size()) +
                                " slots");
    }

    std::vector<std::string> objects;
    std::vector<FinSet> carriers;
    std::vector<std::vector<OperationTable>> structure;
    for (const auto& p : abd.ports) {
        const auto& tables = hints.tables.at(p.name);
        if (tables.size() != hints.signature.size())
            throw ConstructionError("port " + p.name + " has " + std::to_string(tables.size()) + " tables, expected " +
                                    std::to_string(hints.signature.size()));
        for (const auto& t : tables)
            if (t.carrier != p.set)
                throw ConstructionError("structure on port " + p.name + " is over " + t.carrier.to_string());
        objects.push_back(p.name);
        carriers.push_back(p.set);
        structure.push_back(tables);
    }
    auto object_for = [&](const std::vector<std::string>& ports) -> Index {
        if (ports.size() == 1)
            return abd.find_port(ports[0]);
        std::string name = "1";
        if (!ports.empty()) {
            name.clear();
            for (const auto& p : ports)
                name += (name.empty() ? "" : "*") + p;
        }
        auto it = std::find(objects.begin(), objects.end(), name);
        if (it != objects.end())
            return static_cast<Index>(it - objects.begin());
        ProductObject po{name, ports, bracketed_product(port_sets(abd, ports))};
        std::vector<OperationTable> tables;
        for (Index s = 0; s < hints.signature.size(); ++s) {
            std::vector<const OperationTable*> factors;
            for (const auto& p : ports)
                factors.push_back(&hints.tables.at(p)[s]);
            tables.push_back(product_table(abd, po, hints.signature.slots[s], factors));
        }
        objects.push_back(name);
        carriers.push_back(po.carrier);
        structure.push_back(std::move(tables));
        return objects.size() - 1;
    };

    std::vector<std::pair<Index, Index>> component_ends;
    for (const auto& c : abd.components)
        component_ends.push_back({object_for(c.inputs), object_for(c.outputs)});
    std::vector<ConcreteArrow> generators;
    for (Index i = 0; i < abd.components.size(); ++i)
        generators.push_back({abd.components[i].name, component_ends[i].first, component_ends[i].second,
                              component_function(abd, abd.components[i])});
    auto closed = close_under_composition(abd.name, objects, carriers, generators, budget);
    for (const auto& m : closed.merged)
        out.notices.push_back("mapping identified: " + m);

    Construct c;
    c.name = abd.name;
    c.category = closed.category;
    c.signature = hints.signature;
    c.carriers = carriers;
    c.structure = std::move(structure);
    c.underlying = std::move(closed.functions);
    auto construct = make_construct(std::move(c));
    auto cr = validate_construct(*construct);
    if (!cr.ok())
        throw ConstructionError("structure hints do not yield a construct for " + abd.name + ": " + cr.summary());
    out.emergence = make_emergence(abd.name, construct);
    return out;
}

} // namespace emergence
