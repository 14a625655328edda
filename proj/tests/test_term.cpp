#include <doctest.h>

#include "helpers.hpp"
#include "relic/term.hpp"

using namespace relic;

TEST_CASE("parse_term: names and atoms") {
    CHECK(parse_term("p") == Term::name("p"));
    CHECK(parse_term("r'") == Term::name("r'"));
    CHECK(parse_term("r''") == Term::name("r''"));
    CHECK(parse_term("abc_1'x") == Term::name("abc_1'x"));
    CHECK(parse_term("0") == Term::bottom());
    CHECK(parse_term("1") == Term::top());
    CHECK(parse_term("I") == Term::id());
    CHECK(parse_term("D") == Term::di());
}

TEST_CASE("parse_term: converse and complement of a product") {
    // p^ ; ~(p;q)
    Term t = parse_term("p^ ; ~(p;q)");
    Term expect = Term::rel_prod(Term::converse(Term::name("p")),
                                 Term::complement(Term::rel_prod(Term::name("p"), Term::name("q"))));
    CHECK(t == expect);
}

TEST_CASE("parse_term: meet binds looser than product") {
    Term t = parse_term("r & (s;t)");
    CHECK(t == Term::meet(Term::name("r"), Term::rel_prod(Term::name("s"), Term::name("t"))));
    // Without parentheses the product still binds tighter.
    CHECK(parse_term("r & s;t") == t);
}

TEST_CASE("parse_term: declared precedence trees") {
    CHECK(parse_term("a;b!c") ==
          Term::rel_sum(Term::rel_prod(Term::name("a"), Term::name("b")), Term::name("c")));
    CHECK(parse_term("a&b|c") ==
          Term::join(Term::meet(Term::name("a"), Term::name("b")), Term::name("c")));
    // Left associativity.
    CHECK(parse_term("a;b;c") ==
          Term::rel_prod(Term::rel_prod(Term::name("a"), Term::name("b")), Term::name("c")));
    // Postfix converse binds tighter than prefix complement.
    CHECK(parse_term("~p^") == Term::complement(Term::converse(Term::name("p"))));
    CHECK(parse_term("p^^") == Term::converse(Term::converse(Term::name("p"))));
}

TEST_CASE("parse_inclusion") {
    Inclusion inc = parse_inclusion("p <= q");
    CHECK(inc.lhs == Term::name("p"));
    CHECK(inc.rhs == Term::name("q"));

    Inclusion sum_dist = parse_inclusion("p;(q!r) <= (p;q)!r");
    CHECK(sum_dist.lhs == Term::rel_prod(Term::name("p"),
                                      Term::rel_sum(Term::name("q"), Term::name("r"))));
    CHECK(sum_dist.rhs == Term::rel_sum(Term::rel_prod(Term::name("p"), Term::name("q")),
                                     Term::name("r")));

    Inclusion primes = parse_inclusion("r' <= r''");
    CHECK(primes.lhs == Term::name("r'"));
    CHECK(primes.rhs == Term::name("r''"));
}

TEST_CASE("parse errors carry position and expectations") {
    try {
        parse_term("p & ");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
        CHECK(!e.expected.empty());
    }
    try {
        parse_term("p q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 2);
    }
    CHECK_THROWS_AS(parse_term("(p"), ParseError);
    CHECK_THROWS_AS(parse_term("p <"), ParseError);
    CHECK_THROWS_AS(parse_inclusion("p"), ParseError);
    CHECK_THROWS_AS(parse_term("P"), ParseError);  // names are lowercase
}

TEST_CASE("render_term basics") {
    CHECK(render_term(Term::name("p")) == "p");
    CHECK(render_term(Term::complement(Term::complement(Term::name("p")))) == "~~p");
    CHECK(render_term(Term::meet(Term::name("r"),
                                 Term::rel_prod(Term::name("s"), Term::name("t")))) == "r & s;t");
    // Round-trip confirms the minimal-parenthesis choice.
    Term t = Term::meet(Term::name("r"), Term::rel_prod(Term::name("s"), Term::name("t")));
    CHECK(parse_term(render_term(t)) == t);
    // Parenthesization forced by precedence.
    CHECK(render_term(Term::rel_prod(Term::name("a"), Term::rel_prod(Term::name("b"),
                                                                     Term::name("c")))) ==
          "a;(b;c)");
    CHECK(render_term(Term::converse(Term::rel_prod(Term::name("a"), Term::name("b")))) == "(a;b)^");
}

TEST_CASE("round-trip over random terms") {
    std::mt19937 rng(20240811);
    auto names = relic_test::default_names();
    for (int i = 0; i < 500; ++i) {
        Term t = relic_test::random_term(rng, 6, names);
        std::string text = render_term(t);
        CAPTURE(text);
        CHECK(parse_term(text) == t);
    }
}

TEST_CASE("term_to_label embeds injectively") {
    Term t = parse_term("p^ ; ~(p;q) & ~~q");
    Label l = term_to_label(t);
    Label l2 = term_to_label(parse_term("p^ ; ~(p;q) & ~~q"));
    CHECK(label_equal(l, l2));
    Label other = term_to_label(parse_term("p^ ; ~(p;q) & ~q"));
    CHECK(!label_equal(l, other));
}
