#ifndef RELIC_MORPHISM_HPP
#define RELIC_MORPHISM_HPP

#include <map>
#include <optional>

#include "relic/graph.hpp"

namespace relic {

// Arc-preserving node map between drafts: for every arc u L v of the source,
// theta(u) L' theta(v) is an arc of the target with label_equal(L, L').
struct Morphism {
    std::map<NodeId, NodeId> map;
};

// First morphism extending `pinned` under ordered backtracking, if any.
// The search is complete over the finite candidate space.
std::optional<Morphism> find_morphism(const Draft& src, const Draft& dst,
                                      const std::map<NodeId, NodeId>& pinned = {});

bool morphism_valid(const Morphism& theta, const Draft& src, const Draft& dst);

// Witness that a slice is zero: an arc u ~T v together with a morphism from
// T's underlying draft pinned at (u, v).
struct ZeroWitness {
    Arc arc;
    Morphism theta;
};

std::optional<ZeroWitness> is_zero_slice(const Slice& s);
bool is_zero_graph(const Graph& g);

// Witness that a slice is erasable under hypothesis slices: an unpinned
// morphism from some hypothesis slice's draft (input/output ignored).
struct ErasureWitness {
    std::size_t hyp_index;
    Morphism theta;
};

std::optional<ErasureWitness> is_erasable(const Slice& s, const std::vector<Slice>& hyps);

}  // namespace relic

#endif
