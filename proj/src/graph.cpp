#include "relic/graph.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace relic {

namespace {

const char* kind_tag(LabelKind k) {
    switch (k) {
        case LabelKind::Name: return "n";
        case LabelKind::Bottom: return "bot";
        case LabelKind::Top: return "top";
        case LabelKind::Id: return "id";
        case LabelKind::Di: return "di";
        case LabelKind::Compl: return "~";
        case LabelKind::Conv: return "v";
        case LabelKind::Meet: return "m";
        case LabelKind::Join: return "j";
        case LabelKind::RelProd: return "p";
        case LabelKind::RelSum: return "s";
        case LabelKind::SliceLit: return "S";
        case LabelKind::GraphLit: return "G";
    }
    return "?";
}

}  // namespace

struct Label::Data {
    LabelKind kind = LabelKind::Name;
    std::string name;
    std::shared_ptr<const Data> lhs, rhs;
    SlicePtr slice;
    GraphPtr graph;
    std::string key;
    bool basic = false;
};

LabelKind Label::kind() const { return data_->kind; }
const std::string& Label::name() const { return data_->name; }
Label Label::lhs() const { return Label(data_->lhs); }
Label Label::rhs() const { return Label(data_->rhs); }
const Slice& Label::slice() const { return *data_->slice; }
const SlicePtr& Label::slice_ptr() const { return data_->slice; }
const Graph& Label::graph() const { return *data_->graph; }
const GraphPtr& Label::graph_ptr() const { return data_->graph; }
const std::string& Label::key() const { return data_->key; }
bool Label::basic() const { return data_->basic; }

bool Label::is_binary() const {
    switch (kind()) {
        case LabelKind::Meet:
        case LabelKind::Join:
        case LabelKind::RelProd:
        case LabelKind::RelSum:
            return true;
        default:
            return false;
    }
}

Label Label::finish(Data data) {
    std::ostringstream key;
    switch (data.kind) {
        case LabelKind::Name:
            key << "n(" << data.name << ")";
            data.basic = true;
            break;
        case LabelKind::Bottom:
        case LabelKind::Top:
        case LabelKind::Id:
        case LabelKind::Di:
            key << kind_tag(data.kind);
            break;
        case LabelKind::Compl:
            key << "~(" << data.lhs->key << ")";
            // Basic labels are names and complemented basic slices.
            data.basic = data.lhs->kind == LabelKind::SliceLit && data.lhs->slice->basic();
            break;
        case LabelKind::Conv:
            key << "v(" << data.lhs->key << ")";
            break;
        case LabelKind::Meet:
        case LabelKind::Join:
        case LabelKind::RelProd:
        case LabelKind::RelSum:
            key << kind_tag(data.kind) << "(" << data.lhs->key << "," << data.rhs->key << ")";
            break;
        case LabelKind::SliceLit:
            key << data.slice->key();
            break;
        case LabelKind::GraphLit:
            key << data.graph->key();
            break;
    }
    data.key = key.str();
    return Label(std::make_shared<const Data>(std::move(data)));
}

Label Label::name(std::string id) {
    Data d;
    d.kind = LabelKind::Name;
    d.name = std::move(id);
    return finish(std::move(d));
}

Label Label::bottom() { Data d; d.kind = LabelKind::Bottom; return finish(std::move(d)); }
Label Label::top() { Data d; d.kind = LabelKind::Top; return finish(std::move(d)); }
Label Label::id() { Data d; d.kind = LabelKind::Id; return finish(std::move(d)); }
Label Label::di() { Data d; d.kind = LabelKind::Di; return finish(std::move(d)); }

Label Label::complement(Label l) {
    Data d;
    d.kind = LabelKind::Compl;
    d.lhs = l.data_;
    return finish(std::move(d));
}

Label Label::converse(Label l) {
    Data d;
    d.kind = LabelKind::Conv;
    d.lhs = l.data_;
    return finish(std::move(d));
}

Label Label::binary(LabelKind kind, Label l, Label k) {
    Data d;
    d.kind = kind;
    d.lhs = l.data_;
    d.rhs = k.data_;
    return finish(std::move(d));
}

Label Label::meet(Label l, Label k) { return binary(LabelKind::Meet, std::move(l), std::move(k)); }
Label Label::join(Label l, Label k) { return binary(LabelKind::Join, std::move(l), std::move(k)); }
Label Label::rel_prod(Label l, Label k) { return binary(LabelKind::RelProd, std::move(l), std::move(k)); }
Label Label::rel_sum(Label l, Label k) { return binary(LabelKind::RelSum, std::move(l), std::move(k)); }

Label Label::slice_lit(Slice s) {
    Data d;
    d.kind = LabelKind::SliceLit;
    d.slice = std::make_shared<const Slice>(std::move(s));
    return finish(std::move(d));
}

Label Label::graph_lit(Graph g) {
    Data d;
    d.kind = LabelKind::GraphLit;
    d.graph = std::make_shared<const Graph>(std::move(g));
    return finish(std::move(d));
}

bool operator==(const Arc& a, const Arc& b) {
    return a.src == b.src && a.dst == b.dst && label_equal(a.label, b.label);
}

bool arc_less(const Arc& a, const Arc& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.label.key() < b.label.key();
}

Draft::Draft(std::vector<NodeId> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    for (const Arc& a : arcs_) {
        nodes_.push_back(a.src);
        nodes_.push_back(a.dst);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    std::sort(arcs_.begin(), arcs_.end(), arc_less);
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end(),
                            [](const Arc& a, const Arc& b) { return a == b; }),
                arcs_.end());
}

bool Draft::has_node(NodeId n) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), n);
}

bool Draft::has_arc(const Arc& a) const {
    for (const Arc& b : arcs_)
        if (a == b) return true;
    return false;
}

namespace {

// Canonical node numbering: order nodes by an iteratively refined,
// isomorphism-invariant signature, then break remaining ties by trying every
// class-consistent ordering and keeping the lexicographically least
// serialization.
struct Canonicalizer {
    const Draft& draft;
    NodeId input, output;
    std::vector<NodeId> nodes;
    std::map<NodeId, std::string> sig;

    Canonicalizer(const Draft& d, NodeId in, NodeId out)
        : draft(d), input(in), output(out), nodes(d.nodes()) {}

    std::string initial_sig(NodeId n) const {
        std::vector<std::string> inc;
        for (const Arc& a : draft.arcs()) {
            if (a.src == n && a.dst == n)
                inc.push_back("s:" + a.label.key());
            else if (a.src == n)
                inc.push_back("o:" + a.label.key());
            else if (a.dst == n)
                inc.push_back("i:" + a.label.key());
        }
        std::sort(inc.begin(), inc.end());
        std::ostringstream out_sig;
        out_sig << (n == input ? 'I' : '-') << (n == output ? 'O' : '-');
        for (const auto& s : inc) out_sig << '|' << s;
        return out_sig.str();
    }

    void refine() {
        for (NodeId n : nodes) sig[n] = initial_sig(n);
        for (std::size_t round = 0; round < nodes.size(); ++round) {
            std::map<NodeId, std::string> next;
            for (NodeId n : nodes) {
                std::vector<std::string> inc;
                for (const Arc& a : draft.arcs()) {
                    if (a.src == n && a.dst == n) continue;
                    if (a.src == n)
                        inc.push_back("o:" + a.label.key() + ">" + sig[a.dst]);
                    else if (a.dst == n)
                        inc.push_back("i:" + a.label.key() + ">" + sig[a.src]);
                }
                std::sort(inc.begin(), inc.end());
                std::ostringstream s;
                s << sig[n];
                for (const auto& v : inc) s << '#' << v;
                next[n] = s.str();
            }
            if (partition_of(next) == partition_of(sig)) break;
            sig = std::move(next);
        }
    }

    std::vector<std::vector<NodeId>> partition_of(const std::map<NodeId, std::string>& s) const {
        std::map<std::string, std::vector<NodeId>> by_sig;
        for (NodeId n : nodes) by_sig[s.at(n)].push_back(n);
        std::vector<std::vector<NodeId>> classes;
        for (auto& [_, ns] : by_sig) classes.push_back(ns);
        return classes;
    }

    std::string serialize(const std::map<NodeId, NodeId>& perm) const {
        std::vector<std::string> arc_strs;
        for (const Arc& a : draft.arcs()) {
            std::ostringstream s;
            s << "(" << perm.at(a.src) << "," << perm.at(a.dst) << "," << a.label.key() << ")";
            arc_strs.push_back(s.str());
        }
        std::sort(arc_strs.begin(), arc_strs.end());
        std::ostringstream out_str;
        out_str << "S{" << nodes.size() << ";" << perm.at(input) << ";" << perm.at(output) << ";";
        for (const auto& s : arc_strs) out_str << s;
        out_str << "}";
        return out_str.str();
    }

    void run(std::map<NodeId, NodeId>& best_perm, std::string& best_key) {
        refine();
        auto classes = partition_of(sig);
        std::map<NodeId, NodeId> perm;
        best_key.clear();
        enumerate(classes, 0, perm, 0, best_perm, best_key);
        assert(!best_key.empty());
    }

    void enumerate(std::vector<std::vector<NodeId>>& classes, std::size_t ci,
                   std::map<NodeId, NodeId>& perm, NodeId next,
                   std::map<NodeId, NodeId>& best_perm, std::string& best_key) {
        if (ci == classes.size()) {
            std::string key = serialize(perm);
            if (best_key.empty() || key < best_key) {
                best_key = key;
                best_perm = perm;
            }
            return;
        }
        std::vector<NodeId>& cls = classes[ci];
        std::sort(cls.begin(), cls.end());
        std::vector<NodeId> order(cls);
        do {
            NodeId id = next;
            for (NodeId n : order) perm[n] = id++;
            enumerate(classes, ci + 1, perm, id, best_perm, best_key);
            for (NodeId n : order) perm.erase(n);
        } while (std::next_permutation(order.begin(), order.end()));
    }
};

}  // namespace

Slice::Slice(Draft draft, NodeId input, NodeId output)
    : draft_(std::move(draft)), input_(input), output_(output) {
    if (!draft_.has_node(input_) || !draft_.has_node(output_)) {
        // Input/output must live in the node set; extend it rather than fail,
        // mirroring arc addition (callers construct via fresh ids).
        std::vector<NodeId> ns = draft_.nodes();
        ns.push_back(input_);
        ns.push_back(output_);
        draft_ = Draft(std::move(ns), draft_.arcs());
    }
    Canonicalizer canon(draft_, input_, output_);
    canon.run(canon_map_, key_);
    basic_ = true;
    for (const Arc& a : draft_.arcs())
        if (!a.label.basic()) { basic_ = false; break; }
}

Slice Slice::canonical() const {
    std::vector<NodeId> nodes;
    for (NodeId n : draft_.nodes()) nodes.push_back(canon_map_.at(n));
    std::vector<Arc> arcs;
    for (const Arc& a : draft_.arcs())
        arcs.push_back({canon_map_.at(a.src), a.label, canon_map_.at(a.dst)});
    return Slice(Draft(std::move(nodes), std::move(arcs)),
                 canon_map_.at(input_), canon_map_.at(output_));
}

Graph::Graph(std::vector<Slice> slices) : slices_(std::move(slices)) {
    std::sort(slices_.begin(), slices_.end(),
              [](const Slice& a, const Slice& b) { return a.key() < b.key(); });
    slices_.erase(std::unique(slices_.begin(), slices_.end(),
                              [](const Slice& a, const Slice& b) { return slice_equal(a, b); }),
                  slices_.end());
    std::ostringstream key;
    key << "G{";
    for (const Slice& s : slices_) key << s.key();
    key << "}";
    key_ = key.str();
}

bool Graph::basic() const {
    for (const Slice& s : slices_)
        if (!s.basic()) return false;
    return true;
}

bool Graph::contains(const Slice& s) const {
    for (const Slice& m : slices_)
        if (slice_equal(m, s)) return true;
    return false;
}

Slice difference_slice(const Label& l, const Label& k, NodeArena& arena) {
    NodeId x = arena.fresh();
    NodeId y = arena.fresh();
    return Slice(Draft({x, y}, {{x, l, y}, {x, Label::complement(k), y}}), x, y);
}

Draft add_arc(const Draft& d, const Arc& a) {
    std::vector<Arc> arcs = d.arcs();
    arcs.push_back(a);
    return Draft(d.nodes(), std::move(arcs));
}

Slice add_arc(const Slice& s, const Arc& a) {
    return Slice(add_arc(s.draft(), a), s.input(), s.output());
}

Slice glue_slice(const Slice& s, NodeId u, NodeId v, const Slice& t, NodeArena& arena) {
    // Host-side merge: identifying t's input with u and t's output with v
    // collapses u and v when t has input == output.
    auto host = [&](NodeId n) { return (t.input() == t.output() && n == v) ? u : n; };

    std::map<NodeId, NodeId> tmap;
    for (NodeId n : t.draft().nodes()) {
        if (n == t.input())
            tmap[n] = host(u);
        else if (n == t.output())
            tmap[n] = host(v);
        else
            tmap[n] = arena.fresh();
    }

    std::vector<NodeId> nodes;
    for (NodeId n : s.draft().nodes()) nodes.push_back(host(n));
    nodes.push_back(host(u));
    nodes.push_back(host(v));
    for (NodeId n : t.draft().nodes()) nodes.push_back(tmap[n]);

    std::vector<Arc> arcs;
    for (const Arc& a : s.draft().arcs()) arcs.push_back({host(a.src), a.label, host(a.dst)});
    for (const Arc& a : t.draft().arcs()) arcs.push_back({tmap[a.src], a.label, tmap[a.dst]});

    return Slice(Draft(std::move(nodes), std::move(arcs)), host(s.input()), host(s.output()));
}

Graph glue_graph(const Slice& s, NodeId u, NodeId v, const Graph& h, NodeArena& arena) {
    std::vector<Slice> out;
    for (const Slice& t : h.slices()) out.push_back(glue_slice(s, u, v, t, arena));
    return Graph(std::move(out));
}

Slice eliminate_id_arc(const Slice& s, const Arc& a) {
    if (a.label.kind() != LabelKind::Id) throw Error("eliminate_id_arc: arc label is not id");
    if (!s.draft().has_arc(a)) throw Error("eliminate_id_arc: arc not present");
    auto ren = [&](NodeId n) { return n == a.src ? a.dst : n; };
    std::vector<NodeId> nodes;
    for (NodeId n : s.draft().nodes())
        if (n != a.src) nodes.push_back(n);
    nodes.push_back(a.dst);
    std::vector<Arc> arcs;
    for (const Arc& b : s.draft().arcs()) {
        if (b == a) continue;
        arcs.push_back({ren(b.src), b.label, ren(b.dst)});
    }
    return Slice(Draft(std::move(nodes), std::move(arcs)), ren(s.input()), ren(s.output()));
}

Slice slice_of_graph(const Graph& g, NodeArena& arena) {
    NodeId x = arena.fresh();
    NodeId y = arena.fresh();
    std::vector<Arc> arcs;
    for (const Slice& s : g.slices())
        arcs.push_back({x, Label::complement(Label::slice_lit(s)), y});
    return Slice(Draft({x, y}, std::move(arcs)), x, y);
}

bool is_small(const Slice& s) {
    for (NodeId n : s.draft().nodes())
        if (n != s.input() && n != s.output()) return false;
    return true;
}

Graph graph_of_slice(const Slice& s, NodeArena& arena) {
    if (!is_small(s)) throw Error("graph_of_slice: slice is not small");
    std::vector<Slice> out;
    for (const Arc& a : s.draft().arcs()) {
        NodeId x = arena.fresh();
        NodeId y = arena.fresh();
        auto tr = [&](NodeId n) { return n == s.input() ? x : y; };
        Arc t{tr(a.src), Label::complement(a.label), tr(a.dst)};
        out.push_back(Slice(Draft({x, y}, {t}), x, y));
    }
    return Graph(std::move(out));
}

bool is_basic(const Label& l) { return l.basic(); }
bool is_basic(const Slice& s) { return s.basic(); }
bool is_basic(const Graph& g) { return g.basic(); }

unsigned rank(const Label& l) {
    if (l.kind() == LabelKind::Name) return 0;
    if (l.basic()) return rank(l.child().slice()) + 1;
    throw Error("rank: label is not basic");
}

unsigned rank(const Draft& d) {
    unsigned total = 0;
    for (const Arc& a : d.arcs()) total += rank(a.label);
    return total;
}

unsigned rank(const Slice& s) { return rank(s.draft()); }

SliceSet embedded_slices(const Label& l) {
    if (l.kind() == LabelKind::Name) return {};
    if (!l.basic()) throw Error("embedded_slices: label is not basic");
    const Slice& t = l.child().slice();
    SliceSet out = embedded_slices(t.draft());
    Slice canon = t.canonical();
    out.emplace(canon.key(), canon);
    return out;
}

SliceSet embedded_slices(const Draft& d) {
    SliceSet out;
    for (const Arc& a : d.arcs())
        for (auto& [key, s] : embedded_slices(a.label)) out.emplace(key, s);
    return out;
}

SliceSet embedded_slices(const Slice& s) { return embedded_slices(s.draft()); }

std::string node_name(NodeId n) { return "n" + std::to_string(n); }

}  // namespace relic
