#ifndef RELIC_TESTS_HELPERS_HPP
#define RELIC_TESTS_HELPERS_HPP

// Shared test utilities: an independent set-of-pairs evaluator used as the
// semantic oracle, deterministic random generators, and model enumeration.
// The oracle works over std::set<std::pair<...>> and never touches the Rel
// bitset path it is used to check.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relic/graph.hpp"
#include "relic/semantics.hpp"
#include "relic/term.hpp"

namespace relic_test {

using relic::Arc;
using relic::Draft;
using relic::Graph;
using relic::Label;
using relic::Model;
using relic::NodeId;
using relic::Rel;
using relic::Slice;
using relic::Term;

using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

inline PairSet to_pairs(const Rel& r) {
    PairSet out;
    for (auto [a, b] : r.pairs()) out.insert({a, b});
    return out;
}

// --- independent evaluator -------------------------------------------------

inline PairSet naive_full(std::size_t n) {
    PairSet out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out.insert({a, b});
    return out;
}

PairSet naive_eval(const Model& m, const Label& l);

inline PairSet naive_slice_extension(const Model& m, const Slice& s) {
    const auto& nodes = s.draft().nodes();
    PairSet out;
    std::vector<std::size_t> val(nodes.size(), 0);
    // Plain odometer over all assignments.
    while (true) {
        bool ok = true;
        for (const Arc& a : s.draft().arcs()) {
            std::size_t ia = 0, ib = 0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i] == a.src) ia = i;
                if (nodes[i] == a.dst) ib = i;
            }
            if (!naive_eval(m, a.label).count({val[ia], val[ib]})) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::size_t ii = 0, io = 0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i] == s.input()) ii = i;
                if (nodes[i] == s.output()) io = i;
            }
            out.insert({val[ii], val[io]});
        }
        std::size_t k = 0;
        while (k < val.size() && ++val[k] == m.size) val[k++] = 0;
        if (k == val.size()) break;
        if (val.empty()) break;
    }
    return out;
}

inline PairSet naive_eval(const Model& m, const Label& l) {
    using relic::LabelKind;
    const std::size_t n = m.size;
    switch (l.kind()) {
        case LabelKind::Name: {
            const Rel* r = m.find(l.name());
            return r ? to_pairs(*r) : PairSet{};
        }
        case LabelKind::Bottom: return {};
        case LabelKind::Top: return naive_full(n);
        case LabelKind::Id: {
            PairSet out;
            for (std::size_t a = 0; a < n; ++a) out.insert({a, a});
            return out;
        }
        case LabelKind::Di: {
            PairSet out;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (a != b) out.insert({a, b});
            return out;
        }
        case LabelKind::Compl: {
            PairSet inner = naive_eval(m, l.child());
            PairSet out;
            for (auto p : naive_full(n))
                if (!inner.count(p)) out.insert(p);
            return out;
        }
        case LabelKind::Conv: {
            PairSet out;
            for (auto [a, b] : naive_eval(m, l.child())) out.insert({b, a});
            return out;
        }
        case LabelKind::Meet: {
            PairSet lhs = naive_eval(m, l.lhs()), rhs = naive_eval(m, l.rhs()), out;
            for (auto p : lhs)
                if (rhs.count(p)) out.insert(p);
            return out;
        }
        case LabelKind::Join: {
            PairSet out = naive_eval(m, l.lhs());
            for (auto p : naive_eval(m, l.rhs())) out.insert(p);
            return out;
        }
        case LabelKind::RelProd: {
            PairSet lhs = naive_eval(m, l.lhs()), rhs = naive_eval(m, l.rhs()), out;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t c = 0; c < n; ++c)
                        if (lhs.count({a, c}) && rhs.count({c, b})) out.insert({a, b});
            return out;
        }
        case LabelKind::RelSum: {
            // for every c: (a,c) in L or (c,b) in K
            PairSet lhs = naive_eval(m, l.lhs()), rhs = naive_eval(m, l.rhs()), out;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    bool all = true;
                    for (std::size_t c = 0; c < n; ++c)
                        if (!lhs.count({a, c}) && !rhs.count({c, b})) {
                            all = false;
                            break;
                        }
                    if (all) out.insert({a, b});
                }
            return out;
        }
        case LabelKind::SliceLit: return naive_slice_extension(m, l.slice());
        case LabelKind::GraphLit: {
            PairSet out;
            for (const Slice& s : l.graph().slices())
                for (auto p : naive_slice_extension(m, s)) out.insert(p);
            return out;
        }
    }
    return {};
}

inline PairSet naive_graph_extension(const Model& m, const Graph& g) {
    PairSet out;
    for (const Slice& s : g.slices())
        for (auto p : naive_slice_extension(m, s)) out.insert(p);
    return out;
}

// --- model enumeration -----------------------------------------------------

// All models of carrier size n over the given names, in lexicographic
// bitmask order (small n and few names only).
inline std::vector<Model> all_models(std::size_t n, const std::vector<std::string>& names) {
    std::vector<Model> out;
    const std::size_t per = n * n;
    const std::uint64_t total = std::uint64_t{1} << (per * names.size());
    for (std::uint64_t code = 0; code < total; ++code) {
        Model m;
        m.size = n;
        std::uint64_t c = code;
        for (std::size_t i = names.size(); i-- > 0;) {
            Rel r(n);
            std::uint64_t bits = c & ((std::uint64_t{1} << per) - 1);
            c >>= per;
            for (std::size_t k = 0; k < per; ++k)
                if (bits & (std::uint64_t{1} << k)) r.set(k / n, k % n);
            m.interp.emplace(names[i], std::move(r));
        }
        out.push_back(std::move(m));
    }
    return out;
}

inline Model random_model(std::mt19937& rng, std::size_t n, const std::vector<std::string>& names) {
    Model m;
    m.size = n;
    std::bernoulli_distribution coin(0.4);
    for (const std::string& name : names) {
        Rel r(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (coin(rng)) r.set(a, b);
        m.interp.emplace(name, std::move(r));
    }
    return m;
}

// --- random object generators ----------------------------------------------

inline Term random_term(std::mt19937& rng, unsigned depth, const std::vector<std::string>& names) {
    std::uniform_int_distribution<int> leaf(0, 5);
    std::uniform_int_distribution<int> node(0, 7);
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    if (depth == 0 || node(rng) >= 6) {
        switch (leaf(rng)) {
            case 0:
            case 1:
            case 2: return Term::name(names[pick(rng)]);
            case 3: return Term::bottom();
            case 4: return Term::top();
            default: return leaf(rng) % 2 ? Term::id() : Term::di();
        }
    }
    switch (node(rng)) {
        case 0: return Term::complement(random_term(rng, depth - 1, names));
        case 1: return Term::converse(random_term(rng, depth - 1, names));
        case 2:
            return Term::meet(random_term(rng, depth - 1, names), random_term(rng, depth - 1, names));
        case 3:
            return Term::join(random_term(rng, depth - 1, names), random_term(rng, depth - 1, names));
        case 4:
            return Term::rel_prod(random_term(rng, depth - 1, names),
                                  random_term(rng, depth - 1, names));
        default:
            return Term::rel_sum(random_term(rng, depth - 1, names),
                                 random_term(rng, depth - 1, names));
    }
}

// Random basic slice: name arcs plus, at positive depth, complemented-slice
// arcs over smaller random basic slices.
inline Slice random_basic_slice(std::mt19937& rng, unsigned depth, std::size_t max_nodes,
                                const std::vector<std::string>& names) {
    std::uniform_int_distribution<std::size_t> node_count(1, max_nodes);
    std::size_t n = node_count(rng);
    std::vector<NodeId> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(static_cast<NodeId>(i));
    std::uniform_int_distribution<std::size_t> pick_node(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_name(0, names.size() - 1);
    std::uniform_int_distribution<std::size_t> arc_count(1, max_nodes + 1);
    std::bernoulli_distribution nested(depth > 0 ? 0.3 : 0.0);

    std::vector<Arc> arcs;
    std::size_t k = arc_count(rng);
    for (std::size_t i = 0; i < k; ++i) {
        NodeId u = static_cast<NodeId>(pick_node(rng));
        NodeId v = static_cast<NodeId>(pick_node(rng));
        Label l = nested(rng)
                      ? Label::complement(Label::slice_lit(
                            random_basic_slice(rng, depth - 1, std::max<std::size_t>(2, max_nodes - 1),
                                               names)))
                      : Label::name(names[pick_name(rng)]);
        arcs.push_back({u, l, v});
    }
    NodeId in = static_cast<NodeId>(pick_node(rng));
    NodeId out = static_cast<NodeId>(pick_node(rng));
    return Slice(Draft(std::move(nodes), std::move(arcs)), in, out);
}

inline std::vector<std::string> default_names() { return {"p", "q", "r"}; }

}  // namespace relic_test

#endif
