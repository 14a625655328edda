#include "relic/serialize.hpp"

#include <sstream>

namespace relic {

namespace {

const char* op_name(LabelKind k) {
    switch (k) {
        case LabelKind::Name: return "name";
        case LabelKind::Bottom: return "bot";
        case LabelKind::Top: return "top";
        case LabelKind::Id: return "id";
        case LabelKind::Di: return "di";
        case LabelKind::Compl: return "compl";
        case LabelKind::Conv: return "conv";
        case LabelKind::Meet: return "meet";
        case LabelKind::Join: return "join";
        case LabelKind::RelProd: return "prod";
        case LabelKind::RelSum: return "sum";
        case LabelKind::SliceLit: return "slice";
        case LabelKind::GraphLit: return "graph";
    }
    return "?";
}

}  // namespace

Json label_to_json(const Label& l) {
    Json j;
    j["op"] = op_name(l.kind());
    switch (l.kind()) {
        case LabelKind::Name: j["id"] = l.name(); break;
        case LabelKind::Compl:
        case LabelKind::Conv: j["arg"] = label_to_json(l.child()); break;
        case LabelKind::Meet:
        case LabelKind::Join:
        case LabelKind::RelProd:
        case LabelKind::RelSum:
            j["lhs"] = label_to_json(l.lhs());
            j["rhs"] = label_to_json(l.rhs());
            break;
        case LabelKind::SliceLit: j["value"] = slice_to_json(l.slice()); break;
        case LabelKind::GraphLit: j["value"] = graph_to_json(l.graph()); break;
        default: break;
    }
    return j;
}

Json slice_to_json(const Slice& s) {
    Json j;
    j["nodes"] = s.draft().nodes();
    Json arcs = Json::array();
    for (const Arc& a : s.draft().arcs())
        arcs.push_back(Json::array({a.src, label_to_json(a.label), a.dst}));
    j["arcs"] = std::move(arcs);
    j["input"] = s.input();
    j["output"] = s.output();
    return j;
}

Json graph_to_json(const Graph& g) {
    Json slices = Json::array();
    for (const Slice& s : g.slices()) slices.push_back(slice_to_json(s));
    return Json{{"slices", std::move(slices)}};
}

Label label_from_json(const Json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "name") return Label::name(j.at("id").get<std::string>());
    if (op == "bot") return Label::bottom();
    if (op == "top") return Label::top();
    if (op == "id") return Label::id();
    if (op == "di") return Label::di();
    if (op == "compl") return Label::complement(label_from_json(j.at("arg")));
    if (op == "conv") return Label::converse(label_from_json(j.at("arg")));
    if (op == "meet") return Label::meet(label_from_json(j.at("lhs")), label_from_json(j.at("rhs")));
    if (op == "join") return Label::join(label_from_json(j.at("lhs")), label_from_json(j.at("rhs")));
    if (op == "prod")
        return Label::rel_prod(label_from_json(j.at("lhs")), label_from_json(j.at("rhs")));
    if (op == "sum")
        return Label::rel_sum(label_from_json(j.at("lhs")), label_from_json(j.at("rhs")));
    if (op == "slice") return Label::slice_lit(slice_from_json(j.at("value")));
    if (op == "graph") return Label::graph_lit(graph_from_json(j.at("value")));
    throw Error("unknown label op '" + op + "'");
}

Slice slice_from_json(const Json& j) {
    std::vector<NodeId> nodes = j.at("nodes").get<std::vector<NodeId>>();
    std::vector<Arc> arcs;
    for (const Json& a : j.at("arcs"))
        arcs.push_back({a.at(0).get<NodeId>(), label_from_json(a.at(1)), a.at(2).get<NodeId>()});
    return Slice(Draft(std::move(nodes), std::move(arcs)), j.at("input").get<NodeId>(),
                 j.at("output").get<NodeId>());
}

Graph graph_from_json(const Json& j) {
    std::vector<Slice> slices;
    for (const Json& s : j.at("slices")) slices.push_back(slice_from_json(s));
    return Graph(std::move(slices));
}

Json model_to_json(const Model& m) {
    Json interp = Json::object();
    for (const auto& [name, rel] : m.interp) {
        Json pairs = Json::array();
        for (auto [a, b] : rel.pairs()) pairs.push_back(Json::array({a, b}));
        interp[name] = std::move(pairs);
    }
    return Json{{"size", m.size}, {"interp", std::move(interp)}};
}

Model model_from_json(const Json& j) {
    Model m;
    m.size = j.at("size").get<std::size_t>();
    for (auto it = j.at("interp").begin(); it != j.at("interp").end(); ++it) {
        Rel r(m.size);
        for (const Json& p : it.value()) r.set(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
        m.interp.emplace(it.key(), std::move(r));
    }
    return m;
}

namespace {

Json conversion_step_to_json(const ConversionStep& s) {
    return Json{{"kind", "convert"},
                {"rule", rule_name(s.rule)},
                {"position", s.position},
                {"before", s.before},
                {"after", s.after},
                {"arena", s.arena_base}};
}

ConversionStep conversion_step_from_json(const Json& j) {
    ConversionStep s;
    auto rule = rule_from_name(j.at("rule").get<std::string>());
    if (!rule) throw Error("unknown rule '" + j.at("rule").get<std::string>() + "'");
    s.rule = *rule;
    s.position = j.at("position").get<std::string>();
    s.before = j.at("before").get<std::string>();
    s.after = j.at("after").get<std::string>();
    s.arena_base = j.at("arena").get<NodeId>();
    return s;
}

Json search_step_to_json(const SearchStep& step) {
    if (std::holds_alternative<ExpansionStep>(step)) {
        const auto& e = std::get<ExpansionStep>(step);
        return Json{{"kind", "expand"},   {"slice", e.slice_key}, {"u", e.u},
                    {"v", e.v},           {"t", e.t_key},         {"arena", e.arena_base},
                    {"glued", e.glued_key}, {"marked", e.marked_key}};
    }
    const auto& e = std::get<ErasureStep>(step);
    Json map = Json::array();
    for (auto [from, to] : e.witness.map) map.push_back(Json::array({from, to}));
    return Json{{"kind", "erase"}, {"slice", e.slice_key}, {"hyp", e.hyp_index}, {"map", map}};
}

SearchStep search_step_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "expand") {
        ExpansionStep e;
        e.slice_key = j.at("slice").get<std::string>();
        e.u = j.at("u").get<NodeId>();
        e.v = j.at("v").get<NodeId>();
        e.t_key = j.at("t").get<std::string>();
        e.arena_base = j.at("arena").get<NodeId>();
        e.glued_key = j.at("glued").get<std::string>();
        e.marked_key = j.at("marked").get<std::string>();
        return e;
    }
    if (kind == "erase") {
        ErasureStep e;
        e.slice_key = j.at("slice").get<std::string>();
        e.hyp_index = j.at("hyp").get<std::size_t>();
        for (const Json& p : j.at("map"))
            e.witness.map[p.at(0).get<NodeId>()] = p.at(1).get<NodeId>();
        return e;
    }
    throw Error("unknown search step kind '" + kind + "'");
}

}  // namespace

Json derivation_to_json(const Derivation& d) {
    Json j;
    j["format"] = "relic-derivation";
    j["version"] = 1;
    j["goal"] = Json{{"lhs", render_term(d.goal.lhs)}, {"rhs", render_term(d.goal.rhs)}};
    Json hyps = Json::array();
    for (const Inclusion& h : d.hypotheses)
        hyps.push_back(Json{{"lhs", render_term(h.lhs)}, {"rhs", render_term(h.rhs)}});
    j["hypotheses"] = std::move(hyps);
    Json hyp_slices = Json::array();
    for (const Slice& s : d.hyp_slices) hyp_slices.push_back(slice_to_json(s));
    j["hypothesis_slices"] = std::move(hyp_slices);
    j["goal_arena"] = d.goal_arena_base;
    Json conv = Json::array();
    for (const ConversionStep& s : d.conversion) conv.push_back(conversion_step_to_json(s));
    j["conversion"] = std::move(conv);
    Json search = Json::array();
    for (const SearchStep& s : d.search) search.push_back(search_step_to_json(s));
    j["search"] = std::move(search);
    j["final"] = graph_to_json(d.final_graph);
    j["mode"] = hypothesis_mode_name(d.mode);
    return j;
}

Derivation derivation_from_json(const Json& j) {
    if (j.at("format").get<std::string>() != "relic-derivation")
        throw Error("not a relic derivation trace");
    if (j.at("version").get<int>() != 1) throw Error("unsupported trace version");
    Derivation d;
    d.goal = Inclusion{parse_term(j.at("goal").at("lhs").get<std::string>()),
                       parse_term(j.at("goal").at("rhs").get<std::string>())};
    for (const Json& h : j.at("hypotheses"))
        d.hypotheses.push_back(Inclusion{parse_term(h.at("lhs").get<std::string>()),
                                         parse_term(h.at("rhs").get<std::string>())});
    for (const Json& s : j.at("hypothesis_slices")) d.hyp_slices.push_back(slice_from_json(s));
    d.goal_arena_base = j.at("goal_arena").get<NodeId>();
    for (const Json& s : j.at("conversion")) d.conversion.push_back(conversion_step_from_json(s));
    for (const Json& s : j.at("search")) d.search.push_back(search_step_from_json(s));
    d.final_graph = graph_from_json(j.at("final"));
    auto mode = hypothesis_mode_from_name(j.at("mode").get<std::string>());
    if (!mode) throw Error("unknown hypothesis mode");
    d.mode = *mode;
    return d;
}

namespace {

struct DotWriter {
    std::ostringstream out;
    int cluster = 0;
    int anon = 0;

    std::string node_id(const std::string& scope, NodeId n) {
        return scope + "_" + std::to_string(n);
    }

    // Emits a slice's nodes and arcs inside the current context; arcs labeled
    // by complemented slices get a dashed sub-cluster holding the inner slice.
    void emit_slice_body(const Slice& s, const std::string& scope) {
        for (NodeId n : s.draft().nodes()) {
            out << "    " << node_id(scope, n) << " [label=\"" << node_name(n) << "\"";
            if (n == s.input() && n == s.output())
                out << ", shape=doublecircle";
            else if (n == s.input() || n == s.output())
                out << ", shape=circle, penwidth=2";
            else
                out << ", shape=circle";
            out << "];\n";
        }
        for (const Arc& a : s.draft().arcs()) emit_arc(a, scope);
    }

    void emit_arc(const Arc& a, const std::string& scope) {
        const Label& l = a.label;
        if (l.kind() == LabelKind::Compl && l.child().kind() == LabelKind::SliceLit) {
            std::string name = "T" + std::to_string(++cluster);
            out << "    subgraph cluster_" << name << " {\n"
                << "      style=dashed; label=\"" << name << "\";\n";
            std::string inner_scope = scope + "_" + name;
            const Slice& t = l.child().slice();
            for (NodeId n : t.draft().nodes()) {
                out << "      " << node_id(inner_scope, n) << " [label=\"" << node_name(n)
                    << "\", shape=" << ((n == t.input() || n == t.output()) ? "circle, penwidth=2" : "circle")
                    << "];\n";
            }
            for (const Arc& b : t.draft().arcs()) emit_arc(b, inner_scope);
            out << "    }\n";
            out << "    " << node_id(scope, a.src) << " -> " << node_id(scope, a.dst)
                << " [label=\"~" << name << "\", style=dashed];\n";
            return;
        }
        out << "    " << node_id(scope, a.src) << " -> " << node_id(scope, a.dst) << " [label=\""
            << dot_label(l) << "\"];\n";
    }

    std::string dot_label(const Label& l) {
        switch (l.kind()) {
            case LabelKind::Name: return l.name();
            case LabelKind::Bottom: return "0";
            case LabelKind::Top: return "1";
            case LabelKind::Id: return "I";
            case LabelKind::Di: return "D";
            case LabelKind::Compl: return "~" + dot_label(l.child());
            case LabelKind::Conv: return dot_label(l.child()) + "^";
            case LabelKind::Meet: return "(" + dot_label(l.lhs()) + " & " + dot_label(l.rhs()) + ")";
            case LabelKind::Join: return "(" + dot_label(l.lhs()) + " | " + dot_label(l.rhs()) + ")";
            case LabelKind::RelProd:
                return "(" + dot_label(l.lhs()) + ";" + dot_label(l.rhs()) + ")";
            case LabelKind::RelSum:
                return "(" + dot_label(l.lhs()) + "!" + dot_label(l.rhs()) + ")";
            case LabelKind::SliceLit: return "[slice]";
            case LabelKind::GraphLit: return "[graph]";
        }
        return "?";
    }
};

}  // namespace

std::string slice_to_dot(const Slice& s, const std::string& graph_name) {
    DotWriter w;
    w.out << "digraph " << graph_name << " {\n  rankdir=LR;\n";
    w.emit_slice_body(s, "n");
    w.out << "}\n";
    return w.out.str();
}

std::string graph_to_dot(const Graph& g, const std::string& graph_name) {
    DotWriter w;
    w.out << "digraph " << graph_name << " {\n  rankdir=LR;\n";
    if (g.empty()) w.out << "  empty [label=\"{ }\", shape=plaintext];\n";
    int i = 0;
    for (const Slice& s : g.slices()) {
        std::string scope = "s" + std::to_string(i);
        w.out << "  subgraph cluster_slice" << i << " {\n    label=\"slice " << i << "\";\n";
        w.emit_slice_body(s, scope);
        w.out << "  }\n";
        ++i;
    }
    w.out << "}\n";
    return w.out.str();
}

std::string pretty_label(const Label& l) {
    switch (l.kind()) {
        case LabelKind::Name: return l.name();
        case LabelKind::Bottom: return "0";
        case LabelKind::Top: return "1";
        case LabelKind::Id: return "I";
        case LabelKind::Di: return "D";
        case LabelKind::Compl: return "~" + pretty_label(l.child());
        case LabelKind::Conv: return pretty_label(l.child()) + "^";
        case LabelKind::Meet: return "(" + pretty_label(l.lhs()) + " & " + pretty_label(l.rhs()) + ")";
        case LabelKind::Join: return "(" + pretty_label(l.lhs()) + " | " + pretty_label(l.rhs()) + ")";
        case LabelKind::RelProd: return "(" + pretty_label(l.lhs()) + ";" + pretty_label(l.rhs()) + ")";
        case LabelKind::RelSum: return "(" + pretty_label(l.lhs()) + "!" + pretty_label(l.rhs()) + ")";
        case LabelKind::SliceLit: return pretty_slice(l.slice());
        case LabelKind::GraphLit: return pretty_graph(l.graph());
    }
    return "?";
}

std::string pretty_slice(const Slice& s) {
    std::ostringstream out;
    out << "[" << node_name(s.input()) << ">" << node_name(s.output());
    for (const Arc& a : s.draft().arcs())
        out << " | " << node_name(a.src) << " " << pretty_label(a.label) << " " << node_name(a.dst);
    bool bare = false;
    for (NodeId n : s.draft().nodes()) {
        bool touched = n == s.input() || n == s.output();
        for (const Arc& a : s.draft().arcs())
            if (a.src == n || a.dst == n) touched = true;
        if (!touched) {
            out << (bare ? " " : " | nodes ") << node_name(n);
            bare = true;
        }
    }
    out << "]";
    return out.str();
}

std::string pretty_graph(const Graph& g) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const Slice& s : g.slices()) {
        out << (first ? " " : ", ") << pretty_slice(s);
        first = false;
    }
    out << (first ? "}" : " }");
    return out.str();
}

}  // namespace relic
