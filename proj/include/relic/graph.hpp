#ifndef RELIC_GRAPH_HPP
#define RELIC_GRAPH_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// Individual nodes. Ids are allocated from a NodeArena scoped to one
// derivation; allocation never reuses an id within that scope.
using NodeId = std::uint32_t;

class NodeArena {
public:
    explicit NodeArena(NodeId start = 0) : next_(start) {}

    NodeId fresh() { return next_++; }
    NodeId peek() const { return next_; }
    void reset(NodeId value) { next_ = value; }

private:
    NodeId next_;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LabelKind {
    Name,
    Bottom,
    Top,
    Id,
    Di,
    Compl,
    Conv,
    Meet,
    Join,
    RelProd,
    RelSum,
    SliceLit,
    GraphLit,
};

class Slice;
class Graph;
using SlicePtr = std::shared_ptr<const Slice>;
using GraphPtr = std::shared_ptr<const Graph>;

// A label: relation name, constant, relational operation, or an embedded
// slice/graph literal. Immutable; subtrees are shared. Every label carries a
// canonical key so that structural equality (with embedded slices compared up
// to isomorphism) is a string comparison.
class Label {
public:
    Label() = default;

    LabelKind kind() const;
    const std::string& name() const;
    Label lhs() const;
    Label rhs() const;
    Label child() const { return lhs(); }
    const Slice& slice() const;
    const SlicePtr& slice_ptr() const;
    const Graph& graph() const;
    const GraphPtr& graph_ptr() const;

    const std::string& key() const;
    bool basic() const;
    bool is_binary() const;
    bool valid() const { return data_ != nullptr; }

    static Label name(std::string id);
    static Label bottom();
    static Label top();
    static Label id();
    static Label di();
    static Label complement(Label l);
    static Label converse(Label l);
    static Label meet(Label l, Label k);
    static Label join(Label l, Label k);
    static Label rel_prod(Label l, Label k);
    static Label rel_sum(Label l, Label k);
    static Label slice_lit(Slice s);
    static Label graph_lit(Graph g);
    static Label binary(LabelKind kind, Label l, Label k);

private:
    struct Data;
    explicit Label(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    static Label finish(Data data);

    std::shared_ptr<const Data> data_;
};

inline bool label_equal(const Label& l, const Label& k) { return l.key() == k.key(); }

struct Arc {
    NodeId src;
    Label label;
    NodeId dst;
};

bool operator==(const Arc& a, const Arc& b);
bool arc_less(const Arc& a, const Arc& b);

// Finite node and arc sets; arc endpoints always belong to the node set
// (the constructor unions them in, matching the convention of arc addition).
class Draft {
public:
    Draft() = default;
    Draft(std::vector<NodeId> nodes, std::vector<Arc> arcs);

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool has_node(NodeId n) const;
    bool has_arc(const Arc& a) const;

private:
    std::vector<NodeId> nodes_;  // sorted, unique
    std::vector<Arc> arcs_;      // sorted by (src, dst, label key), unique
};

// Draft plus distinguished input/output nodes. Construction computes the
// canonical key (node renumbering chosen so isomorphic slices share it),
// the basicness flag and, for basic slices, the rank.
class Slice {
public:
    Slice(Draft draft, NodeId input, NodeId output);

    const Draft& draft() const { return draft_; }
    NodeId input() const { return input_; }
    NodeId output() const { return output_; }
    const std::string& key() const { return key_; }
    bool basic() const { return basic_; }

    // Isomorphic renumbering onto 0..n-1; idempotent.
    Slice canonical() const;
    const std::map<NodeId, NodeId>& canonical_map() const { return canon_map_; }

private:
    Draft draft_;
    NodeId input_;
    NodeId output_;
    std::string key_;
    std::map<NodeId, NodeId> canon_map_;
    bool basic_ = false;
};

inline bool slice_equal(const Slice& a, const Slice& b) { return a.key() == b.key(); }

// Finite set of alternative slices, deduplicated up to isomorphism.
class Graph {
public:
    Graph() : key_("G{}") {}
    explicit Graph(std::vector<Slice> slices);

    const std::vector<Slice>& slices() const { return slices_; }
    bool empty() const { return slices_.empty(); }
    std::size_t size() const { return slices_.size(); }
    const std::string& key() const { return key_; }
    bool basic() const;
    bool contains(const Slice& s) const;

private:
    std::vector<Slice> slices_;  // sorted by canonical key, unique
    std::string key_;
};

inline bool graph_equal(const Graph& a, const Graph& b) { return a.key() == b.key(); }

// --- constructions ---

// Two parallel arcs x L y, x ~K y on fresh nodes; empty extension in a model
// exactly when L <= K holds there.
Slice difference_slice(const Label& l, const Label& k, NodeArena& arena);

// Arc addition: endpoints outside the slice are added to the node set.
Slice add_arc(const Slice& s, const Arc& a);
Draft add_arc(const Draft& d, const Arc& a);

// Pushout of s and t over the two-node arcless draft: t's input lands on u,
// t's output on v, the remaining t nodes are renamed fresh. Gluing a slice
// whose input equals its output at distinct u, v merges those host nodes.
Slice glue_slice(const Slice& s, NodeId u, NodeId v, const Slice& t, NodeArena& arena);
Graph glue_graph(const Slice& s, NodeId u, NodeId v, const Graph& h, NodeArena& arena);

// Removes an id-labeled arc by renaming its source to its target throughout
// (input/output roles included). Errors if the arc is absent or not id.
Slice eliminate_id_arc(const Slice& s, const Arc& a);

// Slice of graph: fresh x, y with one arc x ~S y per member slice.
Slice slice_of_graph(const Graph& g, NodeArena& arena);

// Graph of slice (small slices only): one single-arc slice per I-O arc, the
// arc transformed by renaming input to x, output to y and complementing the
// label. Errors if s is not small.
Graph graph_of_slice(const Slice& s, NodeArena& arena);

// N = {input, output} as a set equality; a single-node slice counts.
bool is_small(const Slice& s);

bool is_basic(const Label& l);
bool is_basic(const Slice& s);
bool is_basic(const Graph& g);

// --- complexity measures (defined for basic objects only) ---

unsigned rank(const Label& l);
unsigned rank(const Draft& d);
unsigned rank(const Slice& s);

// Embedded slices, keyed by canonical form.
using SliceSet = std::map<std::string, Slice>;
SliceSet embedded_slices(const Label& l);
SliceSet embedded_slices(const Draft& d);
SliceSet embedded_slices(const Slice& s);

std::string node_name(NodeId n);

}  // namespace relic

#endif
