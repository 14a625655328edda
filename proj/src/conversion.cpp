#include "relic/conversion.hpp"

#include <cassert>
#include <sstream>

namespace relic {

std::string rule_name(RuleId r) {
    switch (r) {
        case RuleId::Bot: return "bot";
        case RuleId::Top: return "top";
        case RuleId::Id: return "id";
        case RuleId::Di: return "di";
        case RuleId::DoubleCompl: return "double-compl";
        case RuleId::Conv: return "conv";
        case RuleId::Meet: return "meet";
        case RuleId::Join: return "join";
        case RuleId::RelProd: return "rel-prod";
        case RuleId::RelSum: return "rel-sum";
        case RuleId::GraphArc: return "graph-arc";
        case RuleId::ComplGraph: return "compl-graph";
        case RuleId::ComplSmallSlice: return "compl-small-slice";
        case RuleId::ComplName: return "compl-name";
        case RuleId::DerivedComplGraphArc: return "derived-compl-graph-arc";
    }
    return "?";
}

std::optional<RuleId> rule_from_name(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(RuleId::DerivedComplGraphArc); ++i) {
        RuleId r = static_cast<RuleId>(i);
        if (rule_name(r) == s) return r;
    }
    return std::nullopt;
}

std::string position_to_string(const Position& pos) {
    std::ostringstream out;
    bool first = true;
    for (const PathComp& c : pos) {
        if (!first) out << "/";
        first = false;
        switch (c.kind) {
            case PathComp::SliceAt: out << "s" << c.index; break;
            case PathComp::ArcAt: out << "a" << c.index; break;
            case PathComp::ComplChild: out << "c"; break;
            case PathComp::ConvChild: out << "v"; break;
            case PathComp::Left: out << "l"; break;
            case PathComp::Right: out << "r"; break;
        }
    }
    return out.str();
}

Position position_from_string(const std::string& text) {
    Position pos;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i++];
        PathComp comp;
        switch (c) {
            case 's': comp.kind = PathComp::SliceAt; break;
            case 'a': comp.kind = PathComp::ArcAt; break;
            case 'c': comp.kind = PathComp::ComplChild; break;
            case 'v': comp.kind = PathComp::ConvChild; break;
            case 'l': comp.kind = PathComp::Left; break;
            case 'r': comp.kind = PathComp::Right; break;
            default: throw Error("bad position component '" + std::string(1, c) + "'");
        }
        if (comp.kind == PathComp::SliceAt || comp.kind == PathComp::ArcAt) {
            std::size_t start = i;
            while (i < text.size() && text[i] != '/') ++i;
            std::string digits = text.substr(start, i - start);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw Error("bad position index in '" + text + "'");
            comp.index = std::stoul(digits);
        }
        if (i < text.size()) {
            if (text[i] != '/') throw Error("bad position '" + text + "'");
            ++i;
        }
        pos.push_back(comp);
    }
    return pos;
}

namespace {

struct Redex {
    RuleId rule;
    Position pos;
};

// --- redex scan: innermost-leftmost, double complement eagerly ---

std::optional<Redex> scan_label(const Label& l, Position pos, bool arc_root);

std::optional<Redex> scan_slice(const Slice& s, const Position& prefix) {
    const auto& arcs = s.draft().arcs();
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        Position pos = prefix;
        pos.push_back({PathComp::ArcAt, j});
        if (auto r = scan_label(arcs[j].label, std::move(pos), true)) return r;
    }
    return std::nullopt;
}

std::optional<Redex> scan_graph(const Graph& g, const Position& prefix) {
    for (std::size_t i = 0; i < g.slices().size(); ++i) {
        Position pos = prefix;
        pos.push_back({PathComp::SliceAt, i});
        if (auto r = scan_slice(g.slices()[i], pos)) return r;
    }
    return std::nullopt;
}

std::optional<Redex> scan_label(const Label& l, Position pos, bool arc_root) {
    switch (l.kind()) {
        case LabelKind::Name:
            return std::nullopt;
        case LabelKind::Bottom: return Redex{RuleId::Bot, std::move(pos)};
        case LabelKind::Top: return Redex{RuleId::Top, std::move(pos)};
        case LabelKind::Id: return Redex{RuleId::Id, std::move(pos)};
        case LabelKind::Di: return Redex{RuleId::Di, std::move(pos)};
        case LabelKind::Conv: {
            Position inner = pos;
            inner.push_back({PathComp::ConvChild, 0});
            if (auto r = scan_label(l.child(), std::move(inner), false)) return r;
            return Redex{RuleId::Conv, std::move(pos)};
        }
        case LabelKind::Meet:
        case LabelKind::Join:
        case LabelKind::RelProd:
        case LabelKind::RelSum: {
            Position left = pos;
            left.push_back({PathComp::Left, 0});
            if (auto r = scan_label(l.lhs(), std::move(left), false)) return r;
            Position right = pos;
            right.push_back({PathComp::Right, 0});
            if (auto r = scan_label(l.rhs(), std::move(right), false)) return r;
            RuleId rule = l.kind() == LabelKind::Meet      ? RuleId::Meet
                          : l.kind() == LabelKind::Join    ? RuleId::Join
                          : l.kind() == LabelKind::RelProd ? RuleId::RelProd
                                                           : RuleId::RelSum;
            return Redex{rule, std::move(pos)};
        }
        case LabelKind::Compl: {
            const Label& inner = l.child();
            if (inner.kind() == LabelKind::Compl) return Redex{RuleId::DoubleCompl, std::move(pos)};
            if (inner.kind() == LabelKind::Name) return Redex{RuleId::ComplName, std::move(pos)};
            Position down = pos;
            down.push_back({PathComp::ComplChild, 0});
            if (inner.kind() == LabelKind::SliceLit) {
                if (!inner.slice().basic()) return scan_slice(inner.slice(), down);
                return std::nullopt;  // ~T with T basic: already a basic label
            }
            if (inner.kind() == LabelKind::GraphLit) {
                if (!inner.graph().basic()) return scan_graph(inner.graph(), down);
                const Graph& g = inner.graph();
                if (g.size() == 1 && is_small(g.slices()[0]) &&
                    g.slices()[0].input() != g.slices()[0].output())
                    return Redex{RuleId::ComplSmallSlice, std::move(pos)};
                if (arc_root) return Redex{RuleId::DerivedComplGraphArc, std::move(pos)};
                return Redex{RuleId::ComplGraph, std::move(pos)};
            }
            return scan_label(inner, std::move(down), false);
        }
        case LabelKind::SliceLit: {
            if (auto r = scan_slice(l.slice(), pos)) return r;
            if (arc_root) return Redex{RuleId::GraphArc, std::move(pos)};
            return std::nullopt;  // internally basic literal under an operation
        }
        case LabelKind::GraphLit: {
            if (auto r = scan_graph(l.graph(), pos)) return r;
            if (arc_root) return Redex{RuleId::GraphArc, std::move(pos)};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// --- rule right-hand sides ---

Slice two_node(const Label& label, NodeArena& arena) {
    NodeId x = arena.fresh();
    NodeId y = arena.fresh();
    return Slice(Draft({x, y}, {{x, label, y}}), x, y);
}

Slice consecutive_arc_slice(const Label& l, const Label& k, NodeArena& arena) {
    NodeId x = arena.fresh();
    NodeId y = arena.fresh();
    NodeId z = arena.fresh();
    return Slice(Draft({x, y, z}, {{x, l, z}, {z, k, y}}), x, y);
}

struct StepInfo {
    std::string before;
    std::string after;
};

[[noreturn]] void rule_mismatch(RuleId rule, const std::string& got) {
    throw Error("rule " + rule_name(rule) + " does not apply to " + got);
}

Label apply_label_rule(RuleId rule, const Label& l, NodeArena& arena, StepInfo& info) {
    info.before = l.key();
    Label result;
    switch (rule) {
        case RuleId::Bot:
            if (l.kind() != LabelKind::Bottom) rule_mismatch(rule, l.key());
            result = Label::graph_lit(Graph());
            break;
        case RuleId::Top: {
            if (l.kind() != LabelKind::Top) rule_mismatch(rule, l.key());
            NodeId x = arena.fresh();
            NodeId y = arena.fresh();
            result = Label::graph_lit(Graph({Slice(Draft({x, y}, {}), x, y)}));
            break;
        }
        case RuleId::Id: {
            if (l.kind() != LabelKind::Id) rule_mismatch(rule, l.key());
            NodeId x = arena.fresh();
            result = Label::graph_lit(Graph({Slice(Draft({x}, {}), x, x)}));
            break;
        }
        case RuleId::Di: {
            if (l.kind() != LabelKind::Di) rule_mismatch(rule, l.key());
            NodeId w = arena.fresh();
            Label inner = Label::complement(Label::slice_lit(Slice(Draft({w}, {}), w, w)));
            result = Label::graph_lit(Graph({two_node(inner, arena)}));
            break;
        }
        case RuleId::DoubleCompl:
            if (l.kind() != LabelKind::Compl || l.child().kind() != LabelKind::Compl)
                rule_mismatch(rule, l.key());
            result = l.child().child();
            break;
        case RuleId::Conv: {
            if (l.kind() != LabelKind::Conv) rule_mismatch(rule, l.key());
            NodeId x = arena.fresh();
            NodeId y = arena.fresh();
            result = Label::graph_lit(Graph({Slice(Draft({x, y}, {{y, l.child(), x}}), x, y)}));
            break;
        }
        case RuleId::Meet: {
            if (l.kind() != LabelKind::Meet) rule_mismatch(rule, l.key());
            NodeId x = arena.fresh();
            NodeId y = arena.fresh();
            result = Label::graph_lit(
                Graph({Slice(Draft({x, y}, {{x, l.lhs(), y}, {x, l.rhs(), y}}), x, y)}));
            break;
        }
        case RuleId::Join: {
            if (l.kind() != LabelKind::Join) rule_mismatch(rule, l.key());
            NodeId x = arena.fresh();
            NodeId y = arena.fresh();
            result = Label::graph_lit(Graph({Slice(Draft({x, y}, {{x, l.lhs(), y}}), x, y),
                                             Slice(Draft({x, y}, {{x, l.rhs(), y}}), x, y)}));
            break;
        }
        case RuleId::RelProd:
            if (l.kind() != LabelKind::RelProd) rule_mismatch(rule, l.key());
            result = Label::graph_lit(Graph({consecutive_arc_slice(l.lhs(), l.rhs(), arena)}));
            break;
        case RuleId::RelSum: {
            if (l.kind() != LabelKind::RelSum) rule_mismatch(rule, l.key());
            Slice cs = consecutive_arc_slice(Label::complement(l.lhs()), Label::complement(l.rhs()), arena);
            result = Label::graph_lit(
                Graph({two_node(Label::complement(Label::slice_lit(std::move(cs))), arena)}));
            break;
        }
        case RuleId::ComplName: {
            if (l.kind() != LabelKind::Compl || l.child().kind() != LabelKind::Name)
                rule_mismatch(rule, l.key());
            result = Label::complement(Label::slice_lit(two_node(l.child(), arena)));
            break;
        }
        case RuleId::ComplGraph: {
            if (l.kind() != LabelKind::Compl || l.child().kind() != LabelKind::GraphLit)
                rule_mismatch(rule, l.key());
            result = Label::slice_lit(slice_of_graph(l.child().graph(), arena));
            break;
        }
        case RuleId::ComplSmallSlice: {
            const Slice* target = nullptr;
            if (l.kind() == LabelKind::Compl) {
                const Label& inner = l.child();
                if (inner.kind() == LabelKind::GraphLit && inner.graph().size() == 1)
                    target = &inner.graph().slices()[0];
                else if (inner.kind() == LabelKind::SliceLit)
                    target = &inner.slice();
            }
            if (!target || !is_small(*target)) rule_mismatch(rule, l.key());
            result = Label::graph_lit(graph_of_slice(*target, arena));
            break;
        }
        default:
            rule_mismatch(rule, l.key());
    }
    info.after = result.key();
    return result;
}

Slice replace_arc_label(const Slice& s, std::size_t arc_index, const Label& label) {
    std::vector<Arc> arcs = s.draft().arcs();
    arcs[arc_index].label = label;
    return Slice(Draft(s.draft().nodes(), std::move(arcs)), s.input(), s.output());
}

Slice remove_arc(const Slice& s, std::size_t arc_index) {
    std::vector<Arc> arcs = s.draft().arcs();
    arcs.erase(arcs.begin() + static_cast<std::ptrdiff_t>(arc_index));
    return Slice(Draft(s.draft().nodes(), std::move(arcs)), s.input(), s.output());
}

Label rewrite_label(const Label& l, const Redex& r, std::size_t idx, NodeArena& arena,
                    StepInfo& info);

// Replacement slices for the slice addressed just before pos[idx] (an arc
// component). Gluing may split one slice into several or none.
std::vector<Slice> rewrite_slice(const Slice& s, const Redex& r, std::size_t idx,
                                 NodeArena& arena, StepInfo& info) {
    if (idx >= r.pos.size() || r.pos[idx].kind != PathComp::ArcAt)
        throw Error("bad position: expected arc component");
    std::size_t j = r.pos[idx].index;
    if (j >= s.draft().arcs().size()) throw Error("bad position: arc index out of range");
    const Arc arc = s.draft().arcs()[j];

    if (idx + 1 == r.pos.size()) {
        switch (r.rule) {
            case RuleId::GraphArc: {
                Graph h;
                if (arc.label.kind() == LabelKind::GraphLit)
                    h = arc.label.graph();
                else if (arc.label.kind() == LabelKind::SliceLit)
                    h = Graph({arc.label.slice()});
                else
                    rule_mismatch(r.rule, arc.label.key());
                info.before = s.key();
                Graph glued = glue_graph(remove_arc(s, j), arc.src, arc.dst, h, arena);
                info.after = glued.key();
                return glued.slices();
            }
            case RuleId::DerivedComplGraphArc: {
                if (arc.label.kind() != LabelKind::Compl ||
                    arc.label.child().kind() != LabelKind::GraphLit)
                    rule_mismatch(r.rule, arc.label.key());
                info.before = s.key();
                std::vector<Arc> arcs = s.draft().arcs();
                arcs.erase(arcs.begin() + static_cast<std::ptrdiff_t>(j));
                for (const Slice& t : arc.label.child().graph().slices())
                    arcs.push_back({arc.src, Label::complement(Label::slice_lit(t)), arc.dst});
                Slice out(Draft(s.draft().nodes(), std::move(arcs)), s.input(), s.output());
                info.after = out.key();
                return {out};
            }
            default:
                return {replace_arc_label(s, j, apply_label_rule(r.rule, arc.label, arena, info))};
        }
    }
    return {replace_arc_label(s, j, rewrite_label(arc.label, r, idx + 1, arena, info))};
}

Label rewrite_label(const Label& l, const Redex& r, std::size_t idx, NodeArena& arena,
                    StepInfo& info) {
    if (idx == r.pos.size()) return apply_label_rule(r.rule, l, arena, info);
    const PathComp& comp = r.pos[idx];
    switch (comp.kind) {
        case PathComp::ComplChild:
            if (l.kind() != LabelKind::Compl) throw Error("bad position: not a complement");
            return Label::complement(rewrite_label(l.child(), r, idx + 1, arena, info));
        case PathComp::ConvChild:
            if (l.kind() != LabelKind::Conv) throw Error("bad position: not a converse");
            return Label::converse(rewrite_label(l.child(), r, idx + 1, arena, info));
        case PathComp::Left:
            if (!l.is_binary()) throw Error("bad position: not a binary label");
            return Label::binary(l.kind(), rewrite_label(l.lhs(), r, idx + 1, arena, info), l.rhs());
        case PathComp::Right:
            if (!l.is_binary()) throw Error("bad position: not a binary label");
            return Label::binary(l.kind(), l.lhs(), rewrite_label(l.rhs(), r, idx + 1, arena, info));
        case PathComp::ArcAt: {
            if (l.kind() != LabelKind::SliceLit) throw Error("bad position: not a slice literal");
            std::vector<Slice> repl = rewrite_slice(l.slice(), r, idx, arena, info);
            if (repl.size() == 1) return Label::slice_lit(repl[0]);
            return Label::graph_lit(Graph(std::move(repl)));
        }
        case PathComp::SliceAt: {
            if (l.kind() != LabelKind::GraphLit) throw Error("bad position: not a graph literal");
            const Graph& g = l.graph();
            if (comp.index >= g.size()) throw Error("bad position: slice index out of range");
            std::vector<Slice> members;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (i == comp.index) {
                    for (Slice& t : rewrite_slice(g.slices()[i], r, idx + 1, arena, info))
                        members.push_back(std::move(t));
                } else {
                    members.push_back(g.slices()[i]);
                }
            }
            return Label::graph_lit(Graph(std::move(members)));
        }
    }
    throw Error("bad position");
}

Graph rewrite_workspace(const Graph& ws, const Redex& r, NodeArena& arena, StepInfo& info) {
    if (r.pos.empty() || r.pos[0].kind != PathComp::SliceAt)
        throw Error("bad position: expected slice component");
    std::size_t i = r.pos[0].index;
    if (i >= ws.size()) throw Error("bad position: slice index out of range");
    std::vector<Slice> out;
    for (std::size_t k = 0; k < ws.size(); ++k) {
        if (k == i) {
            for (Slice& t : rewrite_slice(ws.slices()[k], r, 1, arena, info))
                out.push_back(std::move(t));
        } else {
            out.push_back(ws.slices()[k]);
        }
    }
    return Graph(std::move(out));
}

constexpr std::size_t kStepLimit = 100000;

ConversionResult normalize(Graph ws, NodeArena& arena) {
    ConversionResult result;
    while (auto redex = scan_graph(ws, {})) {
        if (result.steps.size() >= kStepLimit)
            throw Error("conversion exceeded the internal step limit");
        ConversionStep step;
        step.rule = redex->rule;
        step.position = position_to_string(redex->pos);
        step.arena_base = arena.peek();
        StepInfo info;
        ws = rewrite_workspace(ws, *redex, arena, info);
        step.before = info.before;
        step.after = info.after;
        result.steps.push_back(std::move(step));
    }
    result.graph = std::move(ws);
    assert(result.graph.basic());
    return result;
}

}  // namespace

std::optional<std::pair<LabelOrGraph, ConversionStep>> apply_operational(const Label& l,
                                                                         NodeArena& arena) {
    RuleId rule;
    switch (l.kind()) {
        case LabelKind::Bottom: rule = RuleId::Bot; break;
        case LabelKind::Top: rule = RuleId::Top; break;
        case LabelKind::Id: rule = RuleId::Id; break;
        case LabelKind::Di: rule = RuleId::Di; break;
        case LabelKind::Conv: rule = RuleId::Conv; break;
        case LabelKind::Meet: rule = RuleId::Meet; break;
        case LabelKind::Join: rule = RuleId::Join; break;
        case LabelKind::RelProd: rule = RuleId::RelProd; break;
        case LabelKind::RelSum: rule = RuleId::RelSum; break;
        case LabelKind::Compl:
            if (l.child().kind() != LabelKind::Compl) return std::nullopt;
            rule = RuleId::DoubleCompl;
            break;
        default:
            return std::nullopt;
    }
    ConversionStep step;
    step.rule = rule;
    step.arena_base = arena.peek();
    StepInfo info;
    Label out = apply_label_rule(rule, l, arena, info);
    step.before = info.before;
    step.after = info.after;
    if (rule == RuleId::DoubleCompl)
        return std::make_pair(LabelOrGraph{out}, std::move(step));
    return std::make_pair(LabelOrGraph{out.graph()}, std::move(step));
}

std::optional<std::pair<Label, ConversionStep>> apply_structural(const Label& l,
                                                                 NodeArena& arena) {
    if (l.kind() != LabelKind::Compl) return std::nullopt;
    const Label& inner = l.child();
    RuleId rule;
    if (inner.kind() == LabelKind::Name) {
        rule = RuleId::ComplName;
    } else if (inner.kind() == LabelKind::GraphLit || inner.kind() == LabelKind::SliceLit) {
        bool small_singleton = false;
        if (inner.kind() == LabelKind::GraphLit && inner.graph().size() == 1)
            small_singleton = is_small(inner.graph().slices()[0]);
        if (inner.kind() == LabelKind::SliceLit) small_singleton = is_small(inner.slice());
        rule = small_singleton ? RuleId::ComplSmallSlice : RuleId::ComplGraph;
        if (rule == RuleId::ComplGraph && inner.kind() != LabelKind::GraphLit) return std::nullopt;
    } else {
        return std::nullopt;
    }
    ConversionStep step;
    step.rule = rule;
    step.arena_base = arena.peek();
    StepInfo info;
    Label out = apply_label_rule(rule, l, arena, info);
    step.before = info.before;
    step.after = info.after;
    return std::make_pair(std::move(out), std::move(step));
}

std::optional<std::pair<Graph, ConversionStep>> apply_structural(const Slice& s,
                                                                 NodeArena& arena) {
    const auto& arcs = s.draft().arcs();
    for (std::size_t j = 0; j < arcs.size(); ++j) {
        const Label& l = arcs[j].label;
        RuleId rule;
        if (l.kind() == LabelKind::GraphLit || l.kind() == LabelKind::SliceLit)
            rule = RuleId::GraphArc;
        else if (l.kind() == LabelKind::Compl && l.child().kind() == LabelKind::GraphLit)
            rule = RuleId::DerivedComplGraphArc;
        else
            continue;
        Redex redex{rule, {{PathComp::ArcAt, j}}};
        ConversionStep step;
        step.rule = rule;
        step.position = position_to_string(redex.pos);
        step.arena_base = arena.peek();
        StepInfo info;
        std::vector<Slice> repl = rewrite_slice(s, redex, 0, arena, info);
        step.before = info.before;
        step.after = info.after;
        return std::make_pair(Graph(std::move(repl)), std::move(step));
    }
    return std::nullopt;
}

ConversionResult to_basic(const Label& l, NodeArena& arena) {
    if (l.kind() == LabelKind::GraphLit) return normalize(l.graph(), arena);
    if (l.kind() == LabelKind::SliceLit) return normalize(Graph({l.slice()}), arena);
    NodeId x = arena.fresh();
    NodeId y = arena.fresh();
    return normalize(Graph({Slice(Draft({x, y}, {{x, l, y}}), x, y)}), arena);
}

ConversionResult to_basic_difference(const Label& lhs, const Label& rhs, NodeArena& arena) {
    return normalize(Graph({difference_slice(lhs, rhs, arena)}), arena);
}

ConversionResult to_basic_inclusion(const Inclusion& inc, NodeArena& arena) {
    return to_basic_difference(term_to_label(inc.lhs), term_to_label(inc.rhs), arena);
}

Graph replay_step(const Graph& workspace, const ConversionStep& step, NodeArena& arena) {
    Redex redex{step.rule, position_from_string(step.position)};
    arena.reset(step.arena_base);
    StepInfo info;
    Graph out = rewrite_workspace(workspace, redex, arena, info);
    if (info.before != step.before)
        throw Error("replay mismatch: redex is " + info.before + ", trace says " + step.before);
    if (info.after != step.after)
        throw Error("replay mismatch: contractum is " + info.after + ", trace says " + step.after);
    return out;
}

}  // namespace relic
