#include "relic/morphism.hpp"

#include <algorithm>

namespace relic {

namespace {

struct Search {
    const Draft& src;
    const Draft& dst;

    // Target arcs indexed by label key, split by direction.
    std::map<std::string, std::vector<const Arc*>> by_label;
    std::vector<NodeId> order;          // source nodes, pinned first then by degree
    std::map<NodeId, NodeId> assign;

    Search(const Draft& s, const Draft& d) : src(s), dst(d) {
        for (const Arc& a : dst.arcs()) by_label[a.label.key()].push_back(&a);
    }

    bool arcs_consistent(NodeId n) const {
        // Check every source arc whose endpoints are both assigned and touch n.
        for (const Arc& a : src.arcs()) {
            if (a.src != n && a.dst != n) continue;
            auto su = assign.find(a.src);
            auto sv = assign.find(a.dst);
            if (su == assign.end() || sv == assign.end()) continue;
            bool found = false;
            auto it = by_label.find(a.label.key());
            if (it != by_label.end())
                for (const Arc* b : it->second)
                    if (b->src == su->second && b->dst == sv->second) { found = true; break; }
            if (!found) return false;
        }
        return true;
    }

    // Candidate targets for n constrained by an already-assigned neighbour.
    std::vector<NodeId> candidates(NodeId n) const {
        for (const Arc& a : src.arcs()) {
            bool out_arc = a.src == n && assign.count(a.dst) && a.dst != n;
            bool in_arc = a.dst == n && assign.count(a.src) && a.src != n;
            if (!out_arc && !in_arc) continue;
            std::vector<NodeId> cands;
            auto it = by_label.find(a.label.key());
            if (it == by_label.end()) return {};
            for (const Arc* b : it->second) {
                if (out_arc && b->dst == assign.at(a.dst)) cands.push_back(b->src);
                if (in_arc && b->src == assign.at(a.src)) cands.push_back(b->dst);
            }
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            return cands;
        }
        return dst.nodes();
    }

    bool go(std::size_t i) {
        if (i == order.size()) return true;
        NodeId n = order[i];
        for (NodeId t : candidates(n)) {
            assign[n] = t;
            if (arcs_consistent(n) && go(i + 1)) return true;
            assign.erase(n);
        }
        return false;
    }
};

}  // namespace

std::optional<Morphism> find_morphism(const Draft& src, const Draft& dst,
                                      const std::map<NodeId, NodeId>& pinned) {
    Search search(src, dst);

    for (const auto& [from, to] : pinned) {
        if (!dst.has_node(to)) return std::nullopt;
        search.assign[from] = to;
    }
    for (const auto& [from, _] : pinned)
        if (!search.arcs_consistent(from)) return std::nullopt;

    std::map<NodeId, std::size_t> degree;
    for (const Arc& a : src.arcs()) {
        ++degree[a.src];
        ++degree[a.dst];
    }
    for (NodeId n : src.nodes())
        if (!pinned.count(n)) search.order.push_back(n);
    std::stable_sort(search.order.begin(), search.order.end(), [&](NodeId a, NodeId b) {
        std::size_t da = degree.count(a) ? degree.at(a) : 0;
        std::size_t db = degree.count(b) ? degree.at(b) : 0;
        if (da != db) return da > db;
        return a < b;
    });

    if (!search.go(0)) return std::nullopt;

    Morphism theta{std::move(search.assign)};
    if (!morphism_valid(theta, src, dst)) return std::nullopt;  // post-hoc guard
    return theta;
}

bool morphism_valid(const Morphism& theta, const Draft& src, const Draft& dst) {
    for (NodeId n : src.nodes())
        if (!theta.map.count(n) || !dst.has_node(theta.map.at(n))) return false;
    for (const Arc& a : src.arcs()) {
        bool found = false;
        for (const Arc& b : dst.arcs()) {
            if (b.src == theta.map.at(a.src) && b.dst == theta.map.at(a.dst) &&
                label_equal(a.label, b.label)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::optional<ZeroWitness> is_zero_slice(const Slice& s) {
    for (const Arc& a : s.draft().arcs()) {
        if (a.label.kind() != LabelKind::Compl) continue;
        if (a.label.child().kind() != LabelKind::SliceLit) continue;
        const Slice& t = a.label.child().slice();
        std::map<NodeId, NodeId> pinned{{t.input(), a.src}, {t.output(), a.dst}};
        if (t.input() == t.output() && a.src != a.dst) continue;  // cannot pin both
        auto theta = find_morphism(t.draft(), s.draft(), pinned);
        if (theta) return ZeroWitness{a, std::move(*theta)};
    }
    return std::nullopt;
}

bool is_zero_graph(const Graph& g) {
    for (const Slice& s : g.slices())
        if (!is_zero_slice(s)) return false;
    return true;
}

std::optional<ErasureWitness> is_erasable(const Slice& s, const std::vector<Slice>& hyps) {
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        auto theta = find_morphism(hyps[i].draft(), s.draft());
        if (theta) return ErasureWitness{i, std::move(*theta)};
    }
    return std::nullopt;
}

}  // namespace relic
