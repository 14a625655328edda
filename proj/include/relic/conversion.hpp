#ifndef RELIC_CONVERSION_HPP
#define RELIC_CONVERSION_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relic/graph.hpp"
#include "relic/term.hpp"

namespace relic {

enum class RuleId {
    Bot,
    Top,
    Id,
    Di,
    DoubleCompl,
    Conv,
    Meet,
    Join,
    RelProd,
    RelSum,
    GraphArc,              // replace a graph-labeled arc by glued slices
    ComplGraph,            // replace ~G by the slice of G
    ComplSmallSlice,       // replace ~{S}, S small, by the graph of S
    ComplName,             // replace ~r by the complemented single-arc slice
    DerivedComplGraphArc,  // replace a ~G arc by parallel ~T arcs, T in G
};

std::string rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& s);

// Path into the workspace graph: "s<i>" selects a slice, "a<j>" an arc of the
// current slice (entering the body of a slice literal where one is adjacent),
// "c"/"v"/"l"/"r" descend through complement, converse and binary children.
struct PathComp {
    enum Kind { SliceAt, ArcAt, ComplChild, ConvChild, Left, Right } kind;
    std::size_t index = 0;
};
using Position = std::vector<PathComp>;

std::string position_to_string(const Position& pos);
Position position_from_string(const std::string& text);

// One Table 1/2 application. `before`/`after` hold the canonical keys of the
// redex and contractum; `arena_base` is the fresh-node counter before the
// step, so replaying with the same counter reproduces the contractum exactly.
struct ConversionStep {
    RuleId rule;
    std::string position;
    std::string before;
    std::string after;
    NodeId arena_base = 0;
};

struct ConversionResult {
    Graph graph;
    std::vector<ConversionStep> steps;
};

// Head application of a Table 1 row; nullopt when the head is a name, a
// single complement, or a literal.
using LabelOrGraph = std::variant<Label, Graph>;
std::optional<std::pair<LabelOrGraph, ConversionStep>> apply_operational(const Label& l,
                                                                         NodeArena& arena);

// Head application of a Table 2 label row ((~G), (~{small S}), (~r)).
std::optional<std::pair<Label, ConversionStep>> apply_structural(const Label& l, NodeArena& arena);

// Slice-level structural rules: gluing of the first graph-labeled arc, or the
// derived rule on the first complemented-graph arc.
std::optional<std::pair<Graph, ConversionStep>> apply_structural(const Slice& s, NodeArena& arena);

// Normalization to an equivalent basic graph under a fixed deterministic
// strategy (innermost-leftmost; double complements eliminated eagerly).
ConversionResult to_basic(const Label& l, NodeArena& arena);
ConversionResult to_basic_inclusion(const Inclusion& inc, NodeArena& arena);
ConversionResult to_basic_difference(const Label& lhs, const Label& rhs, NodeArena& arena);

// Replays one recorded step against a workspace; throws Error (with the
// mismatch description) if the step does not apply exactly.
Graph replay_step(const Graph& workspace, const ConversionStep& step, NodeArena& arena);

}  // namespace relic

#endif
