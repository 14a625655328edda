#include "relic/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace relic {

std::string hypothesis_mode_name(HypothesisMode m) {
    return m == HypothesisMode::EraseRule ? "erase" : "hzero";
}

std::optional<HypothesisMode> hypothesis_mode_from_name(const std::string& s) {
    if (s == "erase") return HypothesisMode::EraseRule;
    if (s == "hzero") return HypothesisMode::HZeroGoal;
    return std::nullopt;
}

std::size_t Derivation::expansion_count() const {
    std::size_t n = 0;
    for (const SearchStep& s : search)
        if (std::holds_alternative<ExpansionStep>(s)) ++n;
    return n;
}

Graph expand(const Graph& g, const Slice& s, NodeId u, NodeId v, const Slice& t,
             NodeArena& arena) {
    if (!g.contains(s)) throw Error("expand: slice is not a member of the graph");
    if (!s.draft().has_node(u) || !s.draft().has_node(v))
        throw Error("expand: u and v must be nodes of the slice");
    if (!t.basic()) throw Error("expand: expansion slice must be basic");

    Slice glued = glue_slice(s, u, v, t, arena);
    Slice marked = add_arc(s, {u, Label::complement(Label::slice_lit(t)), v});

    std::vector<Slice> out;
    for (const Slice& m : g.slices())
        if (!slice_equal(m, s)) out.push_back(m);
    out.push_back(std::move(glued));
    out.push_back(std::move(marked));
    return Graph(std::move(out));
}

namespace {

Slice single_arc_slice(const Arc& a) {
    if (a.src == a.dst) return Slice(Draft({0}, {{0, a.label, 0}}), 0, 0);
    return Slice(Draft({0, 1}, {{0, a.label, 1}}), 0, 1).canonical();
}

}  // namespace

SliceSet expansion_pool(const Slice& s) {
    SliceSet pool;
    SliceSet esl = embedded_slices(s);
    for (const auto& [key, t] : esl) {
        pool.emplace(key, t);
        for (const Arc& a : t.draft().arcs()) {
            Slice single = single_arc_slice(a).canonical();
            pool.emplace(single.key(), single);
        }
    }
    return pool;
}

std::vector<Candidate> candidate_expansions(const Slice& s) {
    SliceSet pool = expansion_pool(s);

    std::vector<Slice> ts;
    for (const auto& [_, t] : pool) ts.push_back(t);
    std::stable_sort(ts.begin(), ts.end(), [](const Slice& a, const Slice& b) {
        unsigned ra = rank(a), rb = rank(b);
        if (ra != rb) return ra < rb;
        return a.key() < b.key();
    });

    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u : s.draft().nodes())
        for (NodeId v : s.draft().nodes()) pairs.emplace_back(u, v);

    std::vector<Candidate> out;
    for (const auto& [u, v] : pairs) {
        for (const Slice& t : ts) {
            Label marker = Label::complement(Label::slice_lit(t));
            bool skip = false;
            for (const Arc& a : s.draft().arcs())
                if (a.src == u && a.dst == v && label_equal(a.label, marker)) { skip = true; break; }
            if (!skip && !(t.input() == t.output() && u != v)) {
                std::map<NodeId, NodeId> pinned{{t.input(), u}, {t.output(), v}};
                if (find_morphism(t.draft(), s.draft(), pinned)) skip = true;
            }
            if (!skip) out.push_back({u, v, t});
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
        unsigned ra = rank(a.t), rb = rank(b.t);
        if (ra != rb) return ra < rb;
        return false;
    });
    return out;
}

Graph erase(const Graph& g, const std::vector<Slice>& hyps) {
    std::vector<Slice> out;
    for (const Slice& s : g.slices())
        if (!is_erasable(s, hyps)) out.push_back(s);
    return Graph(std::move(out));
}

std::vector<Slice> compile_hypotheses(const std::vector<Inclusion>& hyps, NodeArena& arena) {
    std::vector<Slice> out;
    for (const Inclusion& h : hyps) {
        ConversionResult r = to_basic_inclusion(h, arena);
        for (const Slice& s : r.graph.slices()) out.push_back(s);
    }
    return out;
}

namespace {

struct SearchDriver {
    const Inclusion& inc;
    const std::vector<Inclusion>& hyps;
    const std::vector<Slice>& hyp_slices;
    const ProveConfig& cfg;
    NodeArena& arena;

    std::size_t budget;
    bool budget_hit = false;
    std::size_t frontier = 0;
    std::optional<Model> probe_model;
    std::optional<Graph> final_graph;

    enum class Outcome { Closed, Counter, Exhausted };

    SearchDriver(const Inclusion& i, const std::vector<Inclusion>& h,
                 const std::vector<Slice>& hs, const ProveConfig& c, NodeArena& a)
        : inc(i), hyps(h), hyp_slices(hs), cfg(c), arena(a), budget(c.step_budget) {}

    bool probe(const Slice& s) {
        Model m = natural_model(s.draft());
        for (const Inclusion& h : hyps)
            if (!holds(m, h)) return false;
        if (holds(m, inc)) return false;
        probe_model = std::move(m);
        return true;
    }

    Outcome dfs(const Graph& g, unsigned depth, std::vector<SearchStep>& steps_out) {
        // Zero slices stay and count as closed; erasable slices are erased
        // (erase-rule mode) or merely count as closed (h-zero-goal mode).
        std::vector<SearchStep> erasures;
        std::vector<Slice> kept;
        std::set<std::string> open_keys;
        for (const Slice& s : g.slices()) {
            if (is_zero_slice(s)) {
                kept.push_back(s);
                continue;
            }
            auto w = is_erasable(s, hyp_slices);
            if (w) {
                if (cfg.hypothesis_mode == HypothesisMode::EraseRule) {
                    erasures.push_back(ErasureStep{s.key(), w->hyp_index, w->theta});
                    continue;
                }
                kept.push_back(s);
                continue;
            }
            open_keys.insert(s.key());
            kept.push_back(s);
        }
        Graph current(std::move(kept));
        std::vector<Slice> open;
        for (const Slice& s : current.slices())
            if (open_keys.count(s.key())) open.push_back(s);

        if (open.empty()) {
            final_graph = current;
            steps_out = std::move(erasures);
            return Outcome::Closed;
        }
        for (const Slice& s : open)
            if (probe(s)) return Outcome::Counter;
        if (depth == 0) {
            ++frontier;
            return Outcome::Exhausted;
        }

        const Slice target = open.front();
        for (const Candidate& c : candidate_expansions(target)) {
            if (budget == 0) {
                budget_hit = true;
                return Outcome::Exhausted;
            }
            --budget;

            ExpansionStep step;
            step.slice_key = target.key();
            step.u = c.u;
            step.v = c.v;
            step.t_key = c.t.key();
            step.arena_base = arena.peek();
            Slice glued = glue_slice(target, c.u, c.v, c.t, arena);
            Slice marked = add_arc(target, {c.u, Label::complement(Label::slice_lit(c.t)), c.v});
            step.glued_key = glued.key();
            step.marked_key = marked.key();

            std::vector<Slice> members;
            for (const Slice& m : current.slices())
                if (!slice_equal(m, target)) members.push_back(m);
            members.push_back(std::move(glued));
            members.push_back(std::move(marked));
            Graph next(std::move(members));

            std::vector<SearchStep> sub;
            Outcome r = dfs(next, depth - 1, sub);
            if (r == Outcome::Closed) {
                steps_out = erasures;
                steps_out.push_back(std::move(step));
                for (SearchStep& x : sub) steps_out.push_back(std::move(x));
                return Outcome::Closed;
            }
            if (r == Outcome::Counter) return Outcome::Counter;
        }
        return Outcome::Exhausted;
    }
};

Verdict make_countermodel_verdict(const Inclusion& inc, const std::vector<Inclusion>& hyps,
                                  Model m, const ProveConfig& cfg) {
    // Prefer the lexicographically first smallest countermodel when the
    // exhaustive oracle can reach one.
    std::size_t cap = std::min(cfg.countermodel_max_size, m.size);
    if (cap >= 1) {
        try {
            auto found = find_countermodel(inc, hyps, cap, cfg.oracle);
            if (found) m = std::move(found->model);
        } catch (const BudgetExceeded&) {
            // keep the probe model
        }
    }
    // Re-validate before emission.
    for (const Inclusion& h : hyps)
        if (!holds(m, h)) throw Error("internal: countermodel fails a hypothesis");
    Rel l = eval_label(m, term_to_label(inc.lhs));
    Rel r = eval_label(m, term_to_label(inc.rhs));
    auto w = l.first_not_in(r);
    if (!w) throw Error("internal: countermodel does not falsify the goal");
    Verdict v;
    v.kind = Verdict::Kind::Countermodel;
    v.countermodel = CountermodelVerdict{std::move(m), *w};
    return v;
}

}  // namespace

Verdict prove(const Inclusion& inc, const std::vector<Inclusion>& hyps, const ProveConfig& cfg) {
    if (cfg.max_expansion_depth == 0 || cfg.countermodel_max_size == 0 || cfg.step_budget == 0)
        throw Error("prove: config limits must be positive");

    NodeArena arena;
    std::vector<Slice> hyp_slices = compile_hypotheses(hyps, arena);

    Derivation d;
    d.goal = inc;
    d.hypotheses = hyps;
    d.hyp_slices = hyp_slices;
    d.mode = cfg.hypothesis_mode;
    d.goal_arena_base = arena.peek();

    ConversionResult conv = to_basic_inclusion(inc, arena);
    d.conversion = conv.steps;

    SearchDriver driver(inc, hyps, hyp_slices, cfg, arena);
    unsigned depth_reached = 0;
    for (unsigned depth = 0; depth <= cfg.max_expansion_depth; ++depth) {
        depth_reached = depth;
        driver.frontier = 0;
        std::vector<SearchStep> steps;
        auto outcome = driver.dfs(conv.graph, depth, steps);
        if (outcome == SearchDriver::Outcome::Closed) {
            d.search = std::move(steps);
            d.final_graph = *driver.final_graph;
            VerifyReport check = verify_derivation(d);
            if (!check.ok)
                throw Error("internal: produced derivation failed verification: " + check.message);
            Verdict v;
            v.kind = Verdict::Kind::Proved;
            v.proved = ProvedVerdict{std::move(d)};
            return v;
        }
        if (outcome == SearchDriver::Outcome::Counter)
            return make_countermodel_verdict(inc, hyps, std::move(*driver.probe_model), cfg);
        if (driver.budget_hit) break;
    }

    std::string note;
    try {
        auto found = find_countermodel(inc, hyps, cfg.countermodel_max_size, cfg.oracle);
        if (found) {
            for (const Inclusion& h : hyps)
                if (!holds(found->model, h))
                    throw Error("internal: countermodel fails a hypothesis");
            Verdict v;
            v.kind = Verdict::Kind::Countermodel;
            v.countermodel = CountermodelVerdict{std::move(found->model), found->witness};
            return v;
        }
        std::ostringstream o;
        o << "no countermodel up to size " << cfg.countermodel_max_size;
        note = o.str();
    } catch (const BudgetExceeded& e) {
        note = std::string("countermodel search skipped: ") + e.what();
    }
    if (driver.budget_hit) note += (note.empty() ? "" : "; ") + std::string("step budget exhausted");

    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.unknown = UnknownVerdict{depth_reached, driver.frontier, std::move(note)};
    return v;
}

namespace {

const Slice* find_by_key(const Graph& g, const std::string& key) {
    for (const Slice& s : g.slices())
        if (s.key() == key) return &s;
    return nullptr;
}

}  // namespace

VerifyReport verify_derivation(const Derivation& d) {
    VerifyReport report;
    auto fail = [&](long step, const std::string& msg) {
        report.ok = false;
        report.failed_step = step;
        report.message = msg;
        return report;
    };

    NodeArena arena;
    try {
        // Hypothesis slices must be the slice-wise compilation of the
        // hypothesis inclusions.
        std::vector<Slice> expect = compile_hypotheses(d.hypotheses, arena);
        if (expect.size() != d.hyp_slices.size())
            return fail(-1, "hypothesis slice count mismatch");
        std::multiset<std::string> a, b;
        for (const Slice& s : expect) a.insert(s.key());
        for (const Slice& s : d.hyp_slices) b.insert(s.key());
        if (a != b) return fail(-1, "hypothesis slices do not match their inclusions");

        arena.reset(d.goal_arena_base);
        Graph state({difference_slice(term_to_label(d.goal.lhs), term_to_label(d.goal.rhs), arena)});

        long index = 0;
        for (const ConversionStep& step : d.conversion) {
            try {
                state = replay_step(state, step, arena);
            } catch (const Error& e) {
                return fail(index, std::string("conversion step failed: ") + e.what());
            }
            ++index;
        }
        if (!state.basic())
            return fail(index, "conversion did not reach a basic graph");

        for (const SearchStep& step : d.search) {
            if (std::holds_alternative<ExpansionStep>(step)) {
                const auto& e = std::get<ExpansionStep>(step);
                const Slice* s = find_by_key(state, e.slice_key);
                if (!s) return fail(index, "expansion target slice not in graph");
                if (!s->draft().has_node(e.u) || !s->draft().has_node(e.v))
                    return fail(index, "expansion nodes not in slice");
                SliceSet pool = expansion_pool(*s);
                auto it = pool.find(e.t_key);
                if (it == pool.end())
                    return fail(index, "expansion slice not in the candidate pool");
                arena.reset(e.arena_base);
                Slice glued = glue_slice(*s, e.u, e.v, it->second, arena);
                Slice marked = add_arc(*s, {e.u, Label::complement(Label::slice_lit(it->second)), e.v});
                if (glued.key() != e.glued_key || marked.key() != e.marked_key)
                    return fail(index, "expansion result does not match the recorded slices");
                std::vector<Slice> next;
                for (const Slice& m : state.slices())
                    if (m.key() != e.slice_key) next.push_back(m);
                next.push_back(std::move(glued));
                next.push_back(std::move(marked));
                state = Graph(std::move(next));
            } else {
                const auto& e = std::get<ErasureStep>(step);
                const Slice* s = find_by_key(state, e.slice_key);
                if (!s) return fail(index, "erased slice not in graph");
                if (e.hyp_index >= d.hyp_slices.size())
                    return fail(index, "erasure hypothesis index out of range");
                if (!morphism_valid(e.witness, d.hyp_slices[e.hyp_index].draft(), s->draft()))
                    return fail(index, "erasure witness is not a morphism");
                std::vector<Slice> next;
                for (const Slice& m : state.slices())
                    if (m.key() != e.slice_key) next.push_back(m);
                state = Graph(std::move(next));
            }
            ++index;
        }

        if (!graph_equal(state, d.final_graph))
            return fail(index, "replayed graph does not match the recorded final graph");

        for (const Slice& s : state.slices()) {
            bool zero = is_zero_slice(s).has_value();
            bool ok = zero || (d.mode == HypothesisMode::HZeroGoal &&
                               is_erasable(s, d.hyp_slices).has_value());
            if (!ok)
                return fail(index, "final graph is not " +
                                       std::string(d.mode == HypothesisMode::HZeroGoal
                                                       ? "H-zero"
                                                       : "zero"));
        }

        report.ok = true;
        report.failed_step = -1;
        report.message = "ok";
        return report;
    } catch (const std::exception& e) {
        return fail(-1, std::string("verification error: ") + e.what());
    }
}

}  // namespace relic
