#ifndef RELIC_TERM_HPP
#define RELIC_TERM_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "relic/graph.hpp"

namespace relic {

enum class TermKind {
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
};

// Relational term over names, constants and the RelMiCs operations.
//
// Concrete syntax: `~` complement (prefix), `^` converse (postfix), `;`
// relative product, `!` relative sum, `&` meet, `|` join, constants `0`, `1`,
// `I`, `D`. Binding, tightest first: ^  ~  ;  !  &  |, binaries
// left-associative. Names match [a-z][a-zA-Z0-9_']*.
class Term {
public:
    Term() = default;

    TermKind kind() const;
    const std::string& name() const;
    Term lhs() const;
    Term rhs() const;
    Term child() const { return lhs(); }
    bool valid() const { return data_ != nullptr; }

    static Term name(std::string id);
    static Term bottom();
    static Term top();
    static Term id();
    static Term di();
    static Term complement(Term t);
    static Term converse(Term t);
    static Term meet(Term l, Term r);
    static Term join(Term l, Term r);
    static Term rel_prod(Term l, Term r);
    static Term rel_sum(Term l, Term r);

private:
    struct Data;
    explicit Term(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    static Term make(TermKind kind, std::string name, Term lhs, Term rhs);

    std::shared_ptr<const Data> data_;
};

bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

struct Inclusion {
    Term lhs;
    Term rhs;
};

struct ParseError : std::runtime_error {
    ParseError(std::string msg, std::size_t pos, std::vector<std::string> expected);
    std::size_t position;                // byte offset into the input
    std::vector<std::string> expected;   // expected token descriptions
};

Term parse_term(const std::string& text);
Inclusion parse_inclusion(const std::string& text);

// Minimal-parenthesis rendering; parse_term(render_term(t)) == t.
std::string render_term(const Term& t);
std::string render_inclusion(const Inclusion& inc);

// Terms embed injectively into labels.
Label term_to_label(const Term& t);

}  // namespace relic

#endif
