#include "posg/ltl.hpp"

#include <algorithm>
#include <cctype>

#include "posg/errors.hpp"

namespace posg::ltl {

namespace {

FormulaPtr node(Op op, std::string atom = {}, FormulaPtr lhs = nullptr, FormulaPtr rhs = nullptr) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->atom = std::move(atom);
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

}  // namespace

FormulaPtr make_true() { return node(Op::True); }
FormulaPtr make_false() { return node(Op::False); }
FormulaPtr make_atom(std::string name) { return node(Op::Atom, std::move(name)); }
FormulaPtr make_not(FormulaPtr f) { return node(Op::Not, {}, std::move(f)); }
FormulaPtr make_and(FormulaPtr a, FormulaPtr b) { return node(Op::And, {}, std::move(a), std::move(b)); }
FormulaPtr make_or(FormulaPtr a, FormulaPtr b) { return node(Op::Or, {}, std::move(a), std::move(b)); }
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b) { return node(Op::Implies, {}, std::move(a), std::move(b)); }
FormulaPtr make_next(FormulaPtr f) { return node(Op::Next, {}, std::move(f)); }
FormulaPtr make_until(FormulaPtr a, FormulaPtr b) { return node(Op::Until, {}, std::move(a), std::move(b)); }
FormulaPtr make_eventually(FormulaPtr f) { return node(Op::Eventually, {}, std::move(f)); }
FormulaPtr make_always(FormulaPtr f) { return node(Op::Always, {}, std::move(f)); }

namespace {

enum class TokKind { Atom, True, False, Not, And, Or, Implies, Next, Until, Eventually, Always, LParen, RParen, End };

struct Token {
    TokKind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= text_.size()) {
            current_ = {TokKind::End, "", start};
            return;
        }
        char c = text_[i_];
        if (c == '(') { ++i_; current_ = {TokKind::LParen, "(", start}; return; }
        if (c == ')') { ++i_; current_ = {TokKind::RParen, ")", start}; return; }
        if (c == '!') { ++i_; current_ = {TokKind::Not, "!", start}; return; }
        if (c == '&') { ++i_; current_ = {TokKind::And, "&", start}; return; }
        if (c == '|') { ++i_; current_ = {TokKind::Or, "|", start}; return; }
        if (c == '-') {
            if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
                i_ += 2;
                current_ = {TokKind::Implies, "->", start};
                return;
            }
            throw parse_error("expected '->'", start);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            std::string word = text_.substr(i_, j - i_);
            i_ = j;
            if (word == "true") { current_ = {TokKind::True, word, start}; return; }
            if (word == "false") { current_ = {TokKind::False, word, start}; return; }
            if (word == "X") { current_ = {TokKind::Next, word, start}; return; }
            if (word == "U") { current_ = {TokKind::Until, word, start}; return; }
            if (word == "F") { current_ = {TokKind::Eventually, word, start}; return; }
            if (word == "G") { current_ = {TokKind::Always, word, start}; return; }
            current_ = {TokKind::Atom, word, start};
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", start);
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_{TokKind::End, "", 0};
};

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& declared_ap)
        : lex_(text), declared_ap_(declared_ap) {}

    FormulaPtr parse() {
        FormulaPtr f = parseImplies();
        if (lex_.peek().kind != TokKind::End)
            throw parse_error("trailing input after formula", lex_.peek().pos);
        return f;
    }

private:
    // implies is the loosest binder and right-associative
    FormulaPtr parseImplies() {
        FormulaPtr left = parseOr();
        if (lex_.peek().kind == TokKind::Implies) {
            lex_.take();
            return make_implies(std::move(left), parseImplies());
        }
        return left;
    }

    FormulaPtr parseOr() {
        FormulaPtr left = parseAnd();
        while (lex_.peek().kind == TokKind::Or) {
            lex_.take();
            left = make_or(std::move(left), parseAnd());
        }
        return left;
    }

    FormulaPtr parseAnd() {
        FormulaPtr left = parseUntil();
        while (lex_.peek().kind == TokKind::And) {
            lex_.take();
            left = make_and(std::move(left), parseUntil());
        }
        return left;
    }

    // right-associative: a U b U c == a U (b U c)
    FormulaPtr parseUntil() {
        FormulaPtr left = parseUnary();
        if (lex_.peek().kind == TokKind::Until) {
            lex_.take();
            return make_until(std::move(left), parseUntil());
        }
        return left;
    }

    FormulaPtr parseUnary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case TokKind::Not: lex_.take(); return make_not(parseUnary());
            case TokKind::Next: lex_.take(); return make_next(parseUnary());
            case TokKind::Eventually: lex_.take(); return make_eventually(parseUnary());
            case TokKind::Always: lex_.take(); return make_always(parseUnary());
            default: return parseAtomOrParen();
        }
    }

    FormulaPtr parseAtomOrParen() {
        Token t = lex_.take();
        switch (t.kind) {
            case TokKind::True: return make_true();
            case TokKind::False: return make_false();
            case TokKind::Atom:
                if (!declared_ap_.empty() &&
                    std::find(declared_ap_.begin(), declared_ap_.end(), t.text) == declared_ap_.end())
                    throw parse_error("undeclared atom '" + t.text + "'", t.pos);
                return make_atom(t.text);
            case TokKind::LParen: {
                FormulaPtr inner = parseImplies();
                Token close = lex_.take();
                if (close.kind != TokKind::RParen)
                    throw parse_error("expected ')'", close.pos);
                return inner;
            }
            case TokKind::End: throw parse_error("unexpected end of input", t.pos);
            default: throw parse_error("expected a formula, got '" + t.text + "'", t.pos);
        }
    }

    Lexer lex_;
    const std::vector<std::string>& declared_ap_;
};

int precedence(Op op) {
    switch (op) {
        case Op::Implies: return 0;
        case Op::Or: return 1;
        case Op::And: return 2;
        case Op::Until: return 3;
        default: return 4;
    }
}

void render(const FormulaPtr& f, int parent_prec, std::string& out) {
    int prec = precedence(f->op);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (f->op) {
        case Op::True: out += "true"; break;
        case Op::False: out += "false"; break;
        case Op::Atom: out += f->atom; break;
        case Op::Not: out += '!'; render(f->lhs, 4, out); break;
        case Op::Next: out += "X "; render(f->lhs, 4, out); break;
        case Op::Eventually: out += "F "; render(f->lhs, 4, out); break;
        case Op::Always: out += "G "; render(f->lhs, 4, out); break;
        case Op::Until:
            render(f->lhs, prec + 1, out);
            out += " U ";
            render(f->rhs, prec, out);
            break;
        case Op::And:
            render(f->lhs, prec, out);
            out += " & ";
            render(f->rhs, prec + 1, out);
            break;
        case Op::Or:
            render(f->lhs, prec, out);
            out += " | ";
            render(f->rhs, prec + 1, out);
            break;
        case Op::Implies:
            render(f->lhs, prec + 1, out);
            out += " -> ";
            render(f->rhs, prec, out);
            break;
    }
    if (parens) out += ')';
}

void collect(const FormulaPtr& f, std::vector<std::string>& atoms) {
    if (!f) return;
    if (f->op == Op::Atom) {
        if (std::find(atoms.begin(), atoms.end(), f->atom) == atoms.end()) atoms.push_back(f->atom);
        return;
    }
    collect(f->lhs, atoms);
    collect(f->rhs, atoms);
}

}  // namespace

FormulaPtr parse_ltl(const std::string& text, const std::vector<std::string>& declared_ap) {
    return Parser(text, declared_ap).parse();
}

FormulaPtr normalize(const FormulaPtr& f) {
    switch (f->op) {
        case Op::True:
        case Op::Atom:
            return f;
        case Op::False:
            return make_not(make_true());
        case Op::Not:
            return make_not(normalize(f->lhs));
        case Op::And:
            return make_and(normalize(f->lhs), normalize(f->rhs));
        case Op::Or:
            return make_not(make_and(make_not(normalize(f->lhs)), make_not(normalize(f->rhs))));
        case Op::Implies:
            return make_not(make_and(normalize(f->lhs), make_not(normalize(f->rhs))));
        case Op::Next:
            return make_next(normalize(f->lhs));
        case Op::Until:
            return make_until(normalize(f->lhs), normalize(f->rhs));
        case Op::Eventually:
            return make_until(make_true(), normalize(f->lhs));
        case Op::Always:
            return make_not(make_until(make_true(), make_not(normalize(f->lhs))));
    }
    return f;
}

std::string to_string(const FormulaPtr& f) {
    std::string out;
    render(f, 0, out);
    return out;
}

std::vector<std::string> collect_atoms(const FormulaPtr& f) {
    std::vector<std::string> atoms;
    collect(f, atoms);
    return atoms;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->atom != b->atom) return false;
    return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

}  // namespace posg::ltl
