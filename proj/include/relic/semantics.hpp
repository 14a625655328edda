#ifndef RELIC_SEMANTICS_HPP
#define RELIC_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relic/graph.hpp"
#include "relic/term.hpp"

namespace relic {

// Binary relation on a carrier 0..n-1, stored as an n*n bitmask
// (row-major: bit a*n+b set iff (a,b) in the relation).
class Rel {
public:
    Rel() : n_(0) {}
    explicit Rel(std::size_t n) : n_(n), bits_((n * n + 63) / 64, 0) {}

    std::size_t carrier() const { return n_; }
    bool at(std::size_t a, std::size_t b) const;
    void set(std::size_t a, std::size_t b, bool value = true);

    static Rel empty(std::size_t n) { return Rel(n); }
    static Rel full(std::size_t n);
    static Rel identity(std::size_t n);
    static Rel diversity(std::size_t n);

    Rel complement() const;
    Rel converse() const;
    Rel meet(const Rel& other) const;
    Rel join(const Rel& other) const;
    Rel compose(const Rel& other) const;  // relative product
    Rel rel_sum(const Rel& other) const;

    bool subset_of(const Rel& other) const;
    bool is_empty() const;
    std::size_t count() const;
    // Lexicographically first pair in this \ other, if any.
    std::optional<std::pair<std::size_t, std::size_t>> first_not_in(const Rel& other) const;
    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    bool operator==(const Rel& other) const { return n_ == other.n_ && bits_ == other.bits_; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> bits_;
};

// Finite model: carrier size plus one relation per interpreted name.
// Names without an interpretation evaluate to the empty relation.
struct Model {
    std::size_t size = 0;
    std::map<std::string, Rel> interp;

    const Rel* find(const std::string& name) const {
        auto it = interp.find(name);
        return it == interp.end() ? nullptr : &it->second;
    }
};

using Assignment = std::map<NodeId, std::size_t>;

Rel eval_label(const Model& m, const Label& l);

// Pairs of input/output values over the assignments satisfying the draft.
Rel slice_extension(const Model& m, const Slice& s);
Rel graph_extension(const Model& m, const Graph& g);

bool satisfies(const Model& m, const Assignment& gamma, const Draft& d);

struct LabelInclusion {
    Label lhs;
    Label rhs;
};

bool holds(const Model& m, const LabelInclusion& inc);
bool holds(const Model& m, const Inclusion& inc);

// Carrier = the draft's nodes; each name interpreted by its arcs.
// The returned node_index maps draft nodes onto carrier elements.
Model natural_model(const Draft& d);
Model natural_model(const Draft& d, std::map<NodeId, std::size_t>& node_index);

struct Countermodel {
    Model model;
    std::pair<std::size_t, std::size_t> witness;  // in lhs, not in rhs
};

struct BudgetExceeded : Error {
    BudgetExceeded(std::string msg, std::uint64_t bits) : Error(std::move(msg)), space_bits(bits) {}
    std::uint64_t space_bits;  // log2 of the interpretation space
};

struct OracleOptions {
    // Interpretation space guard: distinct names times size^2 may not exceed
    // this many bits.
    unsigned bit_budget = 27;
    unsigned threads = 0;  // 0 = hardware default, capped at 8
};

// Exhaustive search over carriers of size 1..max_size and all interpretations
// of the names occurring in the goal and hypotheses, ascending sizes,
// interpretations in lexicographic bitmask order; returns the first model
// where every hypothesis holds and the goal fails.
std::optional<Countermodel> find_countermodel(const Inclusion& inc,
                                              const std::vector<Inclusion>& hyps,
                                              std::size_t max_size,
                                              const OracleOptions& opts = {});

std::vector<std::string> collect_names(const Term& t);
std::vector<std::string> collect_names(const Inclusion& inc, const std::vector<Inclusion>& hyps);
std::vector<std::string> collect_names(const Label& l);

// Model text format:
//   size N
//   name: (a,b) (c,d) ...
std::string model_to_text(const Model& m);
Model model_from_text(const std::string& text);

}  // namespace relic

#endif
