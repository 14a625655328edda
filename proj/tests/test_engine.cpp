#include <doctest.h>

#include "helpers.hpp"
#include "relic/engine.hpp"
#include "relic/serialize.hpp"

using namespace relic;
using relic_test::all_models;

namespace {

Label nm(const std::string& s) { return Label::name(s); }
Label compl_slice(const Slice& s) { return Label::complement(Label::slice_lit(s)); }

const Slice& only_slice(const Graph& g) {
    REQUIRE(g.size() == 1);
    return g.slices()[0];
}

}  // namespace

TEST_CASE("expand replaces a slice by its glued and marked variants") {
    NodeArena arena;
    Graph g0 = to_basic_inclusion(parse_inclusion("p;(q!r) <= (p;q)!r"), arena).graph;
    const Slice& s = only_slice(g0);

    // Locate u (target of the p arc) and v (target of the ~T2 arc).
    NodeId u = 0, v = 0;
    for (const Arc& a : s.draft().arcs()) {
        if (a.label.kind() == LabelKind::Name) u = a.dst;
        if (a.label.kind() == LabelKind::Compl && a.label.child().slice().draft().arcs().size() == 2 &&
            a.label.child().slice().basic() &&
            a.label.child().slice().draft().nodes().size() == 3 &&
            a.label.child().slice().draft().arcs()[0].label.kind() == LabelKind::Name)
            v = a.dst;
    }
    REQUIRE(u != 0);
    REQUIRE(v != 0);

    Slice q_slice(Draft({50, 51}, {{50, nm("q"), 51}}), 50, 51);
    Graph g1 = expand(g0, s, u, v, q_slice, arena);
    REQUIRE(g1.size() == 2);
    // The glued branch adds u -q-> v; the marked branch adds u -~[q]-> v.
    bool glued_found = false, marked_found = false;
    for (const Slice& m : g1.slices()) {
        for (const Arc& a : m.draft().arcs()) {
            if (a.src == u && a.dst == v && label_equal(a.label, nm("q"))) glued_found = true;
            if (a.src == u && a.dst == v &&
                label_equal(a.label, compl_slice(q_slice.canonical())))
                marked_found = true;
        }
    }
    CHECK(glued_found);
    CHECK(marked_found);
    // Both branches are zero: this is the one-expansion proof.
    CHECK(is_zero_graph(g1));
}

TEST_CASE("expand with the arcless two-node slice degenerates") {
    NodeArena arena;
    Slice s(Draft({0, 1}, {{0, nm("p"), 1}}), 0, 1);
    Graph g({s});
    Slice top(Draft({10, 11}, {}), 10, 11);
    Graph out = expand(g, s, 0, 1, top, arena);
    REQUIRE(out.size() == 2);
    CHECK(out.contains(s));  // gluing added nothing
    Slice marked = add_arc(s, {0, compl_slice(top), 1});
    CHECK(out.contains(marked));
}

TEST_CASE("expand preconditions") {
    NodeArena arena;
    Slice s(Draft({0, 1}, {{0, nm("p"), 1}}), 0, 1);
    Slice other(Draft({0, 1}, {{0, nm("q"), 1}}), 0, 1);
    Slice t(Draft({10, 11}, {{10, nm("r"), 11}}), 10, 11);
    Graph g({s});
    CHECK_THROWS_AS(expand(g, other, 0, 1, t, arena), Error);
    CHECK_THROWS_AS(expand(g, s, 0, 7, t, arena), Error);
    Slice nonbasic(Draft({10, 11}, {{10, Label::top(), 11}}), 10, 11);
    CHECK_THROWS_AS(expand(g, s, 0, 1, nonbasic, arena), Error);
}

TEST_CASE("expansion preserves the graph extension") {
    std::mt19937 rng(61);
    auto names = relic_test::default_names();
    int exercised = 0;
    for (int trial = 0; trial < 200 && exercised < 60; ++trial) {
        Slice s = relic_test::random_basic_slice(rng, 1, 4, names);
        SliceSet esl = embedded_slices(s);
        if (esl.empty()) continue;
        ++exercised;
        const auto& nodes = s.draft().nodes();
        std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
        NodeId u = nodes[pick(rng)], v = nodes[pick(rng)];
        auto it = esl.begin();
        std::advance(it, static_cast<long>(pick(rng)) % static_cast<long>(esl.size()));
        const Slice& t = it->second;
        if (t.input() == t.output() && u != v) {
            --exercised;
            continue;  // gluing would merge u and v; still sound but pick plain cases
        }
        NodeArena arena(1000);
        Graph before({s});
        Graph after = expand(before, s, u, v, t, arena);
        for (const Model& m : all_models(2, names))
            CHECK(graph_extension(m, before) == graph_extension(m, after));
    }
    CHECK(exercised >= 40);
}

TEST_CASE("expansion with a merging slice also preserves the extension") {
    // Gluing a slice with input == output at distinct (u, v) merges host
    // nodes; the union of the two branches still denotes the same relation.
    Slice t(Draft({10}, {{10, nm("q"), 10}}), 10, 10);
    Slice s(Draft({0, 1}, {{0, nm("p"), 1}}), 0, 1);
    NodeArena arena(100);
    Graph before({s});
    Graph after = expand(before, s, 0, 1, t, arena);
    auto names = std::vector<std::string>{"p", "q"};
    for (const Model& m : all_models(2, names))
        CHECK(graph_extension(m, before) == graph_extension(m, after));
}

TEST_CASE("candidate_expansions") {
    SUBCASE("a slice without embedded slices offers no candidates") {
        Slice s(Draft({0, 1, 2}, {{0, nm("p"), 1}, {1, nm("q"), 2}}), 0, 2);
        CHECK(candidate_expansions(s).empty());
    }
    SUBCASE("the relative-sum goal offers the inner q-slice at (u, v)") {
        NodeArena arena;
        Graph g0 = to_basic_inclusion(parse_inclusion("p;(q!r) <= (p;q)!r"), arena).graph;
        const Slice& s = only_slice(g0);
        NodeId u = 0, v = 0;
        for (const Arc& a : s.draft().arcs()) {
            if (a.label.kind() == LabelKind::Name) u = a.dst;
            if (a.label.kind() == LabelKind::Compl &&
                a.label.child().slice().draft().nodes().size() == 3 &&
                a.label.child().slice().draft().arcs()[0].label.kind() == LabelKind::Name)
                v = a.dst;
        }
        Slice q_slice = Slice(Draft({0, 1}, {{0, nm("q"), 1}}), 0, 1).canonical();
        bool found = false;
        for (const Candidate& c : candidate_expansions(s))
            if (c.u == u && c.v == v && slice_equal(c.t, q_slice)) found = true;
        CHECK(found);
    }
    SUBCASE("the hypothesis-example goal offers the r'' single-arc slice") {
        NodeArena arena;
        Graph g0 = to_basic_inclusion(parse_inclusion("p;r';q <= p;r'';q"), arena).graph;
        const Slice& s = only_slice(g0);
        NodeId u = 0, v = 0;
        for (const Arc& a : s.draft().arcs())
            if (a.label.kind() == LabelKind::Name && a.label.name() == "r'") {
                u = a.src;
                v = a.dst;
            }
        Slice r2 = Slice(Draft({0, 1}, {{0, nm("r''"), 1}}), 0, 1).canonical();
        bool found = false;
        for (const Candidate& c : candidate_expansions(s))
            if (c.u == u && c.v == v && slice_equal(c.t, r2)) found = true;
        CHECK(found);
    }
    SUBCASE("pairs already carrying the marker arc are skipped") {
        Slice t = Slice(Draft({10, 11}, {{10, nm("q"), 11}}), 10, 11).canonical();
        Slice s(Draft({0, 1}, {{0, nm("p"), 1}, {0, compl_slice(t), 1}}), 0, 1);
        for (const Candidate& c : candidate_expansions(s))
            CHECK(!(c.u == 0 && c.v == 1 && slice_equal(c.t, t)));
    }
    SUBCASE("pairs with a completed glue image are skipped") {
        Slice t = Slice(Draft({10, 11}, {{10, nm("q"), 11}}), 10, 11).canonical();
        Slice inner(Draft({20, 21, 22}, {{20, nm("q"), 22}, {22, nm("q"), 21}}), 20, 21);
        // s has a q arc 0 -> 1 and embeds t via a complemented arc elsewhere.
        Slice s(Draft({0, 1, 2}, {{0, nm("q"), 1}, {1, compl_slice(inner), 2}}), 0, 2);
        for (const Candidate& c : candidate_expansions(s))
            CHECK(!(c.u == 0 && c.v == 1 && slice_equal(c.t, t)));
    }
    SUBCASE("candidates come rank-first") {
        auto cands = candidate_expansions(Slice(
            Draft({0, 1},
                  {{0,
                    compl_slice(Slice(Draft({10, 11},
                                            {{10, nm("p"), 11},
                                             {10, compl_slice(Slice(Draft({20, 21},
                                                                          {{20, nm("q"), 21}}),
                                                                    20, 21)),
                                              11}}),
                                      10, 11)),
                    1}}),
            0, 1));
        REQUIRE(!cands.empty());
        unsigned last = 0;
        for (const Candidate& c : cands) {
            unsigned r = rank(c.t);
            CHECK(r >= last);
            last = r;
        }
    }
}

TEST_CASE("erase removes erasable slices and keeps the rest") {
    // Hypothesis: r' <= r'' compiled by hand.
    Slice r2(Draft({10, 11}, {{10, nm("r''"), 11}}), 10, 11);
    Slice hyp(Draft({0, 1}, {{0, nm("r'"), 1}, {0, compl_slice(r2), 1}}), 0, 1);

    Slice erasable(Draft({20, 21, 22},
                         {{20, nm("r'"), 21}, {20, compl_slice(r2), 21}, {21, nm("q"), 22}}),
                   20, 22);
    Slice kept(Draft({30, 31}, {{30, nm("p"), 31}}), 30, 31);
    Graph g({erasable, kept});
    Graph out = erase(g, {hyp});
    CHECK(out.size() == 1);
    CHECK(out.contains(kept));
    CHECK(graph_equal(erase(g, {}), g));
}

TEST_CASE("compile_hypotheses produces the difference-slice basic forms") {
    NodeArena arena;
    auto slices = compile_hypotheses({parse_inclusion("r' <= r''")}, arena);
    REQUIRE(slices.size() == 1);
    Slice r2(Draft({10, 11}, {{10, nm("r''"), 11}}), 10, 11);
    Slice expect(Draft({0, 1}, {{0, nm("r'"), 1}, {0, compl_slice(r2), 1}}), 0, 1);
    CHECK(slice_equal(slices[0], expect));
}

TEST_CASE("prove: worked-example goals") {
    ProveConfig cfg;

    SUBCASE("converse against complemented product closes by conversion alone") {
        Verdict v = prove(parse_inclusion("p^ ; ~(p;q) <= ~q"), {}, cfg);
        REQUIRE(v.kind == Verdict::Kind::Proved);
        CHECK(v.proved->derivation.expansion_count() == 0);
    }
    SUBCASE("modular law closes by conversion alone") {
        Verdict v = prove(parse_inclusion("r & (s;t) <= s;((s^;r) & t)"), {}, cfg);
        REQUIRE(v.kind == Verdict::Kind::Proved);
        CHECK(v.proved->derivation.expansion_count() == 0);
    }
    SUBCASE("relative-sum distribution needs exactly one expansion") {
        Verdict v = prove(parse_inclusion("p;(q!r) <= (p;q)!r"), {}, cfg);
        REQUIRE(v.kind == Verdict::Kind::Proved);
        CHECK(v.proved->derivation.expansion_count() == 1);
    }
    SUBCASE("hypothesis example is proved in both modes") {
        std::vector<Inclusion> hyps{parse_inclusion("r' <= r''")};
        Inclusion goal = parse_inclusion("p;r';q <= p;r'';q");

        Verdict v1 = prove(goal, hyps, cfg);
        REQUIRE(v1.kind == Verdict::Kind::Proved);
        CHECK(v1.proved->derivation.expansion_count() == 1);

        ProveConfig hz = cfg;
        hz.hypothesis_mode = HypothesisMode::HZeroGoal;
        Verdict v2 = prove(goal, hyps, hz);
        REQUIRE(v2.kind == Verdict::Kind::Proved);
        CHECK(v2.proved->derivation.expansion_count() == 1);
    }
    SUBCASE("an inclusion whose hypothesis matches it closes immediately") {
        std::vector<Inclusion> hyps{parse_inclusion("r & ~s <= 0")};
        Verdict v = prove(parse_inclusion("r <= s"), hyps, cfg);
        REQUIRE(v.kind == Verdict::Kind::Proved);
        CHECK(v.proved->derivation.expansion_count() == 0);

        ProveConfig hz = cfg;
        hz.hypothesis_mode = HypothesisMode::HZeroGoal;
        Verdict v2 = prove(parse_inclusion("r <= s"), hyps, hz);
        REQUIRE(v2.kind == Verdict::Kind::Proved);
        CHECK(v2.proved->derivation.expansion_count() == 0);
    }
}

TEST_CASE("prove: a battery of valid laws") {
    const char* valid[] = {
        "p ; ~(p^ ; ~q) <= q",    // Schroeder-style cancellation
        "D <= ~I",
        "1 <= D | I",
        "~~~~p <= ~~p",
        "~(p^) <= (~p)^",
        "p;(q|r) <= p;q | p;r",
        "p;q | p;r <= p;(q|r)",
        "(p|q)^ <= p^ | q^",
        "p & q <= p",
        "p <= p | q",
        "p;I <= p",
        "p <= p;1",
        "I;p <= p",
        "(p^)^ <= p",
        "p!0 <= p",
        "p & ~p <= 0",
        "I <= ~D",
    };
    for (const char* text : valid) {
        CAPTURE(text);
        Verdict v = prove(parse_inclusion(text), {}, ProveConfig{});
        CHECK(v.kind == Verdict::Kind::Proved);
    }
}

TEST_CASE("prove: a battery of non-laws") {
    const char* invalid[] = {
        "p;q <= p!q", "1 <= p",  "I <= p",  "p|q <= p&q", "p <= p;p",
        "p;p <= p",   "D <= I",  "1 <= D",  "p^ <= p",    "~p <= p",
        "p!q <= q!p", "I <= p;p^",
    };
    for (const char* text : invalid) {
        CAPTURE(text);
        Inclusion inc = parse_inclusion(text);
        Verdict v = prove(inc, {}, ProveConfig{});
        REQUIRE(v.kind == Verdict::Kind::Countermodel);
        CHECK(!holds(v.countermodel->model, inc));
    }
}

TEST_CASE("a join hypothesis splits into one slice per alternative") {
    std::vector<Inclusion> hyps{parse_inclusion("p|q <= r")};
    NodeArena arena;
    CHECK(compile_hypotheses(hyps, arena).size() == 2);
    CHECK(prove(parse_inclusion("p <= r"), hyps, ProveConfig{}).kind == Verdict::Kind::Proved);
    CHECK(prove(parse_inclusion("q <= r"), hyps, ProveConfig{}).kind == Verdict::Kind::Proved);
    Verdict v = prove(parse_inclusion("r <= p"), hyps, ProveConfig{});
    REQUIRE(v.kind == Verdict::Kind::Countermodel);
    CHECK(holds(v.countermodel->model, hyps[0]));
}

TEST_CASE("prove: countermodels") {
    ProveConfig cfg;
    SUBCASE("p <= q fails in the one-element model") {
        Verdict v = prove(parse_inclusion("p <= q"), {}, cfg);
        REQUIRE(v.kind == Verdict::Kind::Countermodel);
        CHECK(v.countermodel->model.size == 1);
        CHECK(!holds(v.countermodel->model, parse_inclusion("p <= q")));
    }
    SUBCASE("products do not commute") {
        Verdict v = prove(parse_inclusion("p;q <= q;p"), {}, cfg);
        REQUIRE(v.kind == Verdict::Kind::Countermodel);
        CHECK(v.countermodel->model.size <= 2);
        CHECK(!holds(v.countermodel->model, parse_inclusion("p;q <= q;p")));
    }
    SUBCASE("countermodels satisfy the hypotheses") {
        std::vector<Inclusion> hyps{parse_inclusion("p <= q")};
        Verdict v = prove(parse_inclusion("q <= p"), hyps, cfg);
        REQUIRE(v.kind == Verdict::Kind::Countermodel);
        CHECK(holds(v.countermodel->model, hyps[0]));
        CHECK(!holds(v.countermodel->model, parse_inclusion("q <= p")));
    }
}

TEST_CASE("prove: unknown on budget exhaustion of a valid goal") {
    ProveConfig cfg;
    cfg.step_budget = 1;
    Verdict v = prove(parse_inclusion("p;(q!r) <= (p;q)!r"), {}, cfg);
    REQUIRE(v.kind == Verdict::Kind::Unknown);
    CHECK(v.unknown->note.find("no countermodel") != std::string::npos);
}

TEST_CASE("prove is deterministic") {
    for (int i = 0; i < 2; ++i) {
        Verdict a = prove(parse_inclusion("p;(q!r) <= (p;q)!r"), {}, ProveConfig{});
        Verdict b = prove(parse_inclusion("p;(q!r) <= (p;q)!r"), {}, ProveConfig{});
        REQUIRE(a.kind == Verdict::Kind::Proved);
        REQUIRE(b.kind == Verdict::Kind::Proved);
        CHECK(derivation_to_json(a.proved->derivation) == derivation_to_json(b.proved->derivation));
    }
    Verdict a = prove(parse_inclusion("p;q <= q;p"), {}, ProveConfig{});
    Verdict b = prove(parse_inclusion("p;q <= q;p"), {}, ProveConfig{});
    REQUIRE(a.kind == Verdict::Kind::Countermodel);
    REQUIRE(b.kind == Verdict::Kind::Countermodel);
    CHECK(model_to_text(a.countermodel->model) == model_to_text(b.countermodel->model));
}

TEST_CASE("verify_derivation accepts produced proofs and rejects tampering") {
    std::vector<Inclusion> hyps{parse_inclusion("r' <= r''")};
    Verdict v = prove(parse_inclusion("p;r';q <= p;r'';q"), hyps, ProveConfig{});
    REQUIRE(v.kind == Verdict::Kind::Proved);
    const Derivation& good = v.proved->derivation;
    REQUIRE(verify_derivation(good).ok);

    const long conv_steps = static_cast<long>(good.conversion.size());

    SUBCASE("tampered conversion contractum fails at its step") {
        Derivation bad = good;
        bad.conversion[2].after = "G{}";
        VerifyReport r = verify_derivation(bad);
        CHECK(!r.ok);
        CHECK(r.failed_step == 2);
    }
    SUBCASE("tampered expansion target fails at its step") {
        Derivation bad = good;
        for (std::size_t i = 0; i < bad.search.size(); ++i) {
            if (auto* e = std::get_if<ExpansionStep>(&bad.search[i])) {
                e->u = e->v == 99 ? 98 : 99;  // not a node of the slice
                VerifyReport r = verify_derivation(bad);
                CHECK(!r.ok);
                CHECK(r.failed_step == conv_steps + static_cast<long>(i));
                break;
            }
        }
    }
    SUBCASE("tampered expansion result keys fail at their step") {
        Derivation bad = good;
        for (std::size_t i = 0; i < bad.search.size(); ++i) {
            if (auto* e = std::get_if<ExpansionStep>(&bad.search[i])) {
                e->glued_key = "S{0;0;0;}";
                VerifyReport r = verify_derivation(bad);
                CHECK(!r.ok);
                CHECK(r.failed_step == conv_steps + static_cast<long>(i));
                break;
            }
        }
    }
    SUBCASE("tampered erasure witness fails at its step") {
        Derivation bad = good;
        bool found = false;
        for (std::size_t i = 0; i < bad.search.size() && !found; ++i) {
            if (auto* e = std::get_if<ErasureStep>(&bad.search[i])) {
                found = true;
                for (auto& [from, to] : e->witness.map) to = 9999;
                VerifyReport r = verify_derivation(bad);
                CHECK(!r.ok);
                CHECK(r.failed_step == conv_steps + static_cast<long>(i));
            }
        }
        CHECK(found);
    }
    SUBCASE("tampered final graph fails at the end") {
        Derivation bad = good;
        bad.final_graph = Graph();
        VerifyReport r = verify_derivation(bad);
        CHECK(!r.ok);
        CHECK(r.failed_step == conv_steps + static_cast<long>(good.search.size()));
    }
    SUBCASE("tampered hypothesis slices fail in the preamble") {
        Derivation bad = good;
        bad.hyp_slices.clear();
        VerifyReport r = verify_derivation(bad);
        CHECK(!r.ok);
        CHECK(r.failed_step == -1);
    }
}

TEST_CASE("the hypothesis-example expansion splits as displayed") {
    // Expanding the goal slice with the single-arc r'' slice at the r' arc's
    // endpoints yields one zero branch and one erasable branch.
    NodeArena arena;
    std::vector<Inclusion> hyps{parse_inclusion("r' <= r''")};
    std::vector<Slice> hyp_slices = compile_hypotheses(hyps, arena);
    Graph g0 = to_basic_inclusion(parse_inclusion("p;r';q <= p;r'';q"), arena).graph;
    const Slice& s1 = only_slice(g0);
    NodeId u = 0, v = 0;
    for (const Arc& a : s1.draft().arcs())
        if (a.label.kind() == LabelKind::Name && a.label.name() == "r'") {
            u = a.src;
            v = a.dst;
        }
    Slice r2 = Slice(Draft({0, 1}, {{0, nm("r''"), 1}}), 0, 1).canonical();
    Graph h = expand(g0, s1, u, v, r2, arena);
    REQUIRE(h.size() == 2);
    int zero = 0, erasable = 0;
    for (const Slice& m : h.slices()) {
        if (is_zero_slice(m))
            ++zero;
        else if (is_erasable(m, hyp_slices))
            ++erasable;
    }
    CHECK(zero == 1);
    CHECK(erasable == 1);
    // Erasure removes exactly the marked branch; the zero slice stays.
    Graph after = erase(h, hyp_slices);
    REQUIRE(after.size() == 1);
    CHECK(is_zero_slice(after.slices()[0]).has_value());
}

TEST_CASE("conversion-only proofs verify") {
    // The modular law closes without expansions; its trace replays.
    Verdict v = prove(parse_inclusion("r & (s;t) <= s;((s^;r)&t)"), {}, ProveConfig{});
    REQUIRE(v.kind == Verdict::Kind::Proved);
    CHECK(v.proved->derivation.search.empty());
    CHECK(verify_derivation(v.proved->derivation).ok);
}

TEST_CASE("hypothesis modes agree on random provable goals") {
    // Both calculi with hypotheses prove the same goals (at matching depth).
    std::mt19937 rng(62);
    auto names = relic_test::default_names();
    ProveConfig erase_cfg;
    erase_cfg.max_expansion_depth = 3;
    erase_cfg.step_budget = 300;
    ProveConfig hz_cfg = erase_cfg;
    hz_cfg.hypothesis_mode = HypothesisMode::HZeroGoal;

    int proved_pairs = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Term a = relic_test::random_term(rng, 2, names);
        Term b = relic_test::random_term(rng, 2, names);
        Term c = relic_test::random_term(rng, 2, names);
        std::vector<Inclusion> hyps{{a, b}};
        Inclusion goal{c, Term::top()};
        if (trial % 2) goal = Inclusion{a, b};  // trivially follows

        Verdict v1 = prove(goal, hyps, erase_cfg);
        Verdict v2 = prove(goal, hyps, hz_cfg);
        if (v1.kind == Verdict::Kind::Proved || v2.kind == Verdict::Kind::Proved) {
            CHECK(v1.kind == v2.kind);
            ++proved_pairs;
        }
    }
    CHECK(proved_pairs >= 25);
}

TEST_CASE("proved verdicts survive serialization round-trips") {
    Verdict v = prove(parse_inclusion("p;(q!r) <= (p;q)!r"), {}, ProveConfig{});
    REQUIRE(v.kind == Verdict::Kind::Proved);
    Json j = derivation_to_json(v.proved->derivation);
    Derivation back = derivation_from_json(j);
    VerifyReport r = verify_derivation(back);
    CHECK(r.ok);
    CHECK(derivation_to_json(back) == j);
}
