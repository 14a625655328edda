#include "relic/term.hpp"

#include <cctype>
#include <sstream>

namespace relic {

struct Term::Data {
    TermKind kind = TermKind::Name;
    std::string name;
    std::shared_ptr<const Data> lhs, rhs;
};

TermKind Term::kind() const { return data_->kind; }
const std::string& Term::name() const { return data_->name; }
Term Term::lhs() const { return Term(data_->lhs); }
Term Term::rhs() const { return Term(data_->rhs); }

Term Term::make(TermKind kind, std::string name, Term lhs, Term rhs) {
    auto d = std::make_shared<Data>();
    d->kind = kind;
    d->name = std::move(name);
    d->lhs = lhs.data_;
    d->rhs = rhs.data_;
    return Term(std::move(d));
}

Term Term::name(std::string id) { return make(TermKind::Name, std::move(id), {}, {}); }
Term Term::bottom() { return make(TermKind::Bottom, {}, {}, {}); }
Term Term::top() { return make(TermKind::Top, {}, {}, {}); }
Term Term::id() { return make(TermKind::Id, {}, {}, {}); }
Term Term::di() { return make(TermKind::Di, {}, {}, {}); }
Term Term::complement(Term t) { return make(TermKind::Compl, {}, std::move(t), {}); }
Term Term::converse(Term t) { return make(TermKind::Conv, {}, std::move(t), {}); }
Term Term::meet(Term l, Term r) { return make(TermKind::Meet, {}, std::move(l), std::move(r)); }
Term Term::join(Term l, Term r) { return make(TermKind::Join, {}, std::move(l), std::move(r)); }
Term Term::rel_prod(Term l, Term r) { return make(TermKind::RelProd, {}, std::move(l), std::move(r)); }
Term Term::rel_sum(Term l, Term r) { return make(TermKind::RelSum, {}, std::move(l), std::move(r)); }

bool operator==(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::Name:
            return a.name() == b.name();
        case TermKind::Bottom:
        case TermKind::Top:
        case TermKind::Id:
        case TermKind::Di:
            return true;
        case TermKind::Compl:
        case TermKind::Conv:
            return a.child() == b.child();
        default:
            return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

ParseError::ParseError(std::string msg, std::size_t pos, std::vector<std::string> exp)
    : std::runtime_error(std::move(msg)), position(pos), expected(std::move(exp)) {}

namespace {

struct Token {
    enum Kind { Name, Bot, Top, Id, Di, Compl, Conv, Prod, Sum, Meet, Join, LParen, RParen, Incl, End } kind;
    std::string text;
    std::size_t pos;
};

const char* token_desc(Token::Kind k) {
    switch (k) {
        case Token::Name: return "name";
        case Token::Bot: return "'0'";
        case Token::Top: return "'1'";
        case Token::Id: return "'I'";
        case Token::Di: return "'D'";
        case Token::Compl: return "'~'";
        case Token::Conv: return "'^'";
        case Token::Prod: return "';'";
        case Token::Sum: return "'!'";
        case Token::Meet: return "'&'";
        case Token::Join: return "'|'";
        case Token::LParen: return "'('";
        case Token::RParen: return "')'";
        case Token::Incl: return "'<='";
        case Token::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= text_.size()) return {Token::End, "", start};
        char c = text_[pos_];
        if (c >= 'a' && c <= 'z') {
            std::size_t end = pos_ + 1;
            while (end < text_.size()) {
                char d = text_[end];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'')
                    ++end;
                else
                    break;
            }
            Token t{Token::Name, text_.substr(pos_, end - pos_), start};
            pos_ = end;
            return t;
        }
        ++pos_;
        switch (c) {
            case '0': return {Token::Bot, "0", start};
            case '1': return {Token::Top, "1", start};
            case 'I': return {Token::Id, "I", start};
            case 'D': return {Token::Di, "D", start};
            case '~': return {Token::Compl, "~", start};
            case '^': return {Token::Conv, "^", start};
            case ';': return {Token::Prod, ";", start};
            case '!': return {Token::Sum, "!", start};
            case '&': return {Token::Meet, "&", start};
            case '|': return {Token::Join, "|", start};
            case '(': return {Token::LParen, "(", start};
            case ')': return {Token::RParen, ")", start};
            case '<':
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    ++pos_;
                    return {Token::Incl, "<=", start};
                }
                throw ParseError("unexpected character '<' (did you mean '<='?)", start, {"'<='"});
            default: {
                std::ostringstream msg;
                msg << "unexpected character '" << c << "'";
                throw ParseError(msg.str(), start, {});
            }
        }
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { advance(); }

    Term term() { return join(); }

    Inclusion inclusion() {
        Term l = join();
        expect(Token::Incl);
        Term r = join();
        return {std::move(l), std::move(r)};
    }

    void finish() {
        if (cur_.kind != Token::End)
            fail({"end of input"});
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect(Token::Kind k) {
        if (cur_.kind != k) fail({token_desc(k)});
        advance();
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream msg;
        msg << "syntax error at offset " << cur_.pos << ": unexpected "
            << (cur_.kind == Token::End ? "end of input" : "'" + cur_.text + "'");
        if (!expected.empty()) {
            msg << ", expected ";
            for (std::size_t i = 0; i < expected.size(); ++i)
                msg << (i ? " or " : "") << expected[i];
        }
        throw ParseError(msg.str(), cur_.pos, std::move(expected));
    }

    Term join() {
        Term t = meet();
        while (cur_.kind == Token::Join) {
            advance();
            t = Term::join(std::move(t), meet());
        }
        return t;
    }

    Term meet() {
        Term t = sum();
        while (cur_.kind == Token::Meet) {
            advance();
            t = Term::meet(std::move(t), sum());
        }
        return t;
    }

    Term sum() {
        Term t = prod();
        while (cur_.kind == Token::Sum) {
            advance();
            t = Term::rel_sum(std::move(t), prod());
        }
        return t;
    }

    Term prod() {
        Term t = unary();
        while (cur_.kind == Token::Prod) {
            advance();
            t = Term::rel_prod(std::move(t), unary());
        }
        return t;
    }

    Term unary() {
        if (cur_.kind == Token::Compl) {
            advance();
            return Term::complement(unary());
        }
        Term t = atom();
        while (cur_.kind == Token::Conv) {
            advance();
            t = Term::converse(std::move(t));
        }
        return t;
    }

    Term atom() {
        switch (cur_.kind) {
            case Token::Name: {
                Term t = Term::name(cur_.text);
                advance();
                return t;
            }
            case Token::Bot: advance(); return Term::bottom();
            case Token::Top: advance(); return Term::top();
            case Token::Id: advance(); return Term::id();
            case Token::Di: advance(); return Term::di();
            case Token::LParen: {
                advance();
                Term t = join();
                expect(Token::RParen);
                return t;
            }
            default:
                fail({"name", "'0'", "'1'", "'I'", "'D'", "'~'", "'('"});
        }
    }

    Lexer lex_;
    Token cur_;
};

// Binding strength, loosest first: | & ! ; ~ ^ atom.
int level(TermKind k) {
    switch (k) {
        case TermKind::Join: return 0;
        case TermKind::Meet: return 1;
        case TermKind::RelSum: return 2;
        case TermKind::RelProd: return 3;
        case TermKind::Compl: return 4;
        case TermKind::Conv: return 5;
        default: return 6;
    }
}

void render(const Term& t, int min_level, std::ostream& out) {
    int lv = level(t.kind());
    bool parens = lv < min_level;
    if (parens) out << "(";
    switch (t.kind()) {
        case TermKind::Name: out << t.name(); break;
        case TermKind::Bottom: out << "0"; break;
        case TermKind::Top: out << "1"; break;
        case TermKind::Id: out << "I"; break;
        case TermKind::Di: out << "D"; break;
        case TermKind::Compl:
            out << "~";
            render(t.child(), 4, out);
            break;
        case TermKind::Conv:
            render(t.child(), 5, out);
            out << "^";
            break;
        case TermKind::RelProd:
            render(t.lhs(), 3, out);
            out << ";";
            render(t.rhs(), 4, out);
            break;
        case TermKind::RelSum:
            render(t.lhs(), 2, out);
            out << "!";
            render(t.rhs(), 3, out);
            break;
        case TermKind::Meet:
            render(t.lhs(), 1, out);
            out << " & ";
            render(t.rhs(), 2, out);
            break;
        case TermKind::Join:
            render(t.lhs(), 0, out);
            out << " | ";
            render(t.rhs(), 1, out);
            break;
    }
    if (parens) out << ")";
}

}  // namespace

Term parse_term(const std::string& text) {
    Parser p(text);
    Term t = p.term();
    p.finish();
    return t;
}

Inclusion parse_inclusion(const std::string& text) {
    Parser p(text);
    Inclusion inc = p.inclusion();
    p.finish();
    return inc;
}

std::string render_term(const Term& t) {
    std::ostringstream out;
    render(t, 0, out);
    return out.str();
}

std::string render_inclusion(const Inclusion& inc) {
    return render_term(inc.lhs) + " <= " + render_term(inc.rhs);
}

Label term_to_label(const Term& t) {
    switch (t.kind()) {
        case TermKind::Name: return Label::name(t.name());
        case TermKind::Bottom: return Label::bottom();
        case TermKind::Top: return Label::top();
        case TermKind::Id: return Label::id();
        case TermKind::Di: return Label::di();
        case TermKind::Compl: return Label::complement(term_to_label(t.child()));
        case TermKind::Conv: return Label::converse(term_to_label(t.child()));
        case TermKind::Meet: return Label::meet(term_to_label(t.lhs()), term_to_label(t.rhs()));
        case TermKind::Join: return Label::join(term_to_label(t.lhs()), term_to_label(t.rhs()));
        case TermKind::RelProd:
            return Label::rel_prod(term_to_label(t.lhs()), term_to_label(t.rhs()));
        case TermKind::RelSum:
            return Label::rel_sum(term_to_label(t.lhs()), term_to_label(t.rhs()));
    }
    throw Error("term_to_label: bad kind");
}

}  // namespace relic
