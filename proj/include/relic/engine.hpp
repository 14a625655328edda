#ifndef RELIC_ENGINE_HPP
#define RELIC_ENGINE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relic/conversion.hpp"
#include "relic/graph.hpp"
#include "relic/morphism.hpp"
#include "relic/semantics.hpp"
#include "relic/term.hpp"

namespace relic {

// One application of the expansion rule: the slice (identified by canonical
// key within the current graph) is replaced by the glue of t at (u, v) and by
// itself with an added u ~t v arc. The replacement keys pin down the result.
struct ExpansionStep {
    std::string slice_key;
    NodeId u = 0;
    NodeId v = 0;
    std::string t_key;
    NodeId arena_base = 0;
    std::string glued_key;
    std::string marked_key;
};

// Erasure of a hypothesis-matched slice: {S} ~> { }.
struct ErasureStep {
    std::string slice_key;
    std::size_t hyp_index = 0;
    Morphism witness;
};

using SearchStep = std::variant<ExpansionStep, ErasureStep>;

enum class HypothesisMode { EraseRule, HZeroGoal };

std::string hypothesis_mode_name(HypothesisMode m);
std::optional<HypothesisMode> hypothesis_mode_from_name(const std::string& s);

// Replayable record of a proof: the goal converts to a basic graph, which the
// recorded expansions and erasures turn into a zero graph (erase-rule mode)
// or an H-zero graph (h-zero-goal mode).
struct Derivation {
    Inclusion goal;
    std::vector<Inclusion> hypotheses;
    std::vector<Slice> hyp_slices;
    NodeId goal_arena_base = 0;
    std::vector<ConversionStep> conversion;
    std::vector<SearchStep> search;
    Graph final_graph;
    HypothesisMode mode = HypothesisMode::EraseRule;

    std::size_t expansion_count() const;
};

struct ProvedVerdict {
    Derivation derivation;
};

struct CountermodelVerdict {
    Model model;
    std::pair<std::size_t, std::size_t> witness;
};

struct UnknownVerdict {
    unsigned depth_reached = 0;
    std::size_t frontier = 0;  // open leaves seen at the final depth
    std::string note;
};

struct Verdict {
    enum class Kind { Proved, Countermodel, Unknown } kind;
    std::optional<ProvedVerdict> proved;
    std::optional<CountermodelVerdict> countermodel;
    std::optional<UnknownVerdict> unknown;
};

struct ProveConfig {
    unsigned max_expansion_depth = 4;
    std::size_t countermodel_max_size = 3;
    HypothesisMode hypothesis_mode = HypothesisMode::EraseRule;
    std::size_t step_budget = 20000;  // expansion applications across the search
    OracleOptions oracle;
};

// Expansion rule (Exp): g must contain s, u and v must be nodes of s, t basic.
Graph expand(const Graph& g, const Slice& s, NodeId u, NodeId v, const Slice& t,
             NodeArena& arena);

struct Candidate {
    NodeId u;
    NodeId v;
    Slice t;
};

// The candidate slices considered when expanding s: its embedded slices plus
// the single-arc slices of their arcs, in canonical form.
SliceSet expansion_pool(const Slice& s);

// Ordered by (rank of t, node pair, canonical key); pairs that already carry
// the ~t arc or a pinned image of t are skipped.
std::vector<Candidate> candidate_expansions(const Slice& s);

// Removes every erasable slice (zero slices are kept; they close on their own).
Graph erase(const Graph& g, const std::vector<Slice>& hyps);

// Hypothesis inclusions compile to basic slices: each slice of the basic form
// of the hypothesis difference slice asserts "slice <= bottom".
std::vector<Slice> compile_hypotheses(const std::vector<Inclusion>& hyps, NodeArena& arena);

Verdict prove(const Inclusion& inc, const std::vector<Inclusion>& hyps, const ProveConfig& cfg);

struct VerifyReport {
    bool ok = false;
    // Index into conversion steps followed by search steps; equal to the total
    // step count when the final graph or its zero/H-zero claim fails; -1 for
    // preamble (hypothesis compilation) failures.
    long failed_step = -1;
    std::string message;
};

VerifyReport verify_derivation(const Derivation& d);

}  // namespace relic

#endif
