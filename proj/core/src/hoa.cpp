#include "posg/hoa.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "posg/errors.hpp"

namespace posg {

namespace {

enum class Tok {
    Header,   // word ending in ':'
    Word,
    Int,
    String,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Body,
    End,
    Eof,
};

struct Token {
    Tok kind;
    std::string text;
    long value = 0;
    std::size_t pos = 0;
};

class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) { next(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        next();
        return t;
    }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind) throw parse_error(std::string("expected ") + what, cur_.pos);
        return take();
    }

private:
    void next() {
        skip();
        std::size_t start = i_;
        if (i_ >= text_.size()) {
            cur_ = {Tok::Eof, "", 0, start};
            return;
        }
        char c = text_[i_];
        switch (c) {
            case '[': ++i_; cur_ = {Tok::LBracket, "[", 0, start}; return;
            case ']': ++i_; cur_ = {Tok::RBracket, "]", 0, start}; return;
            case '{': ++i_; cur_ = {Tok::LBrace, "{", 0, start}; return;
            case '}': ++i_; cur_ = {Tok::RBrace, "}", 0, start}; return;
            case '(': ++i_; cur_ = {Tok::LParen, "(", 0, start}; return;
            case ')': ++i_; cur_ = {Tok::RParen, ")", 0, start}; return;
            case '!': ++i_; cur_ = {Tok::Not, "!", 0, start}; return;
            case '&': ++i_; cur_ = {Tok::And, "&", 0, start}; return;
            case '|': ++i_; cur_ = {Tok::Or, "|", 0, start}; return;
            default: break;
        }
        if (c == '"') {
            std::string s;
            ++i_;
            while (i_ < text_.size() && text_[i_] != '"') {
                if (text_[i_] == '\\' && i_ + 1 < text_.size()) ++i_;
                s += text_[i_++];
            }
            if (i_ >= text_.size()) throw parse_error("unterminated string", start);
            ++i_;
            cur_ = {Tok::String, s, 0, start};
            return;
        }
        if (c == '-' && text_.compare(i_, 8, "--BODY--") == 0) {
            i_ += 8;
            cur_ = {Tok::Body, "--BODY--", 0, start};
            return;
        }
        if (c == '-' && text_.compare(i_, 7, "--END--") == 0) {
            i_ += 7;
            cur_ = {Tok::End, "--END--", 0, start};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long v = 0;
            while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_])))
                v = v * 10 + (text_[i_++] - '0');
            cur_ = {Tok::Int, text_.substr(start, i_ - start), v, start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_' ||
                    text_[j] == '-'))
                ++j;
            std::string word = text_.substr(i_, j - i_);
            i_ = j;
            if (i_ < text_.size() && text_[i_] == ':') {
                ++i_;
                cur_ = {Tok::Header, word + ":", 0, start};
            } else {
                cur_ = {Tok::Word, word, 0, start};
            }
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", start);
    }

    void skip() {
        for (;;) {
            while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
            if (i_ + 1 < text_.size() && text_[i_] == '/' && text_[i_ + 1] == '*') {
                std::size_t close = text_.find("*/", i_ + 2);
                if (close == std::string::npos) throw parse_error("unterminated comment", i_);
                i_ = close + 2;
                continue;
            }
            return;
        }
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token cur_{Tok::Eof, "", 0, 0};
};

// Boolean edge label over AP indices.
struct LabelExpr {
    enum Kind { True, False, Ap, NotK, AndK, OrK } kind;
    int ap = -1;
    std::unique_ptr<LabelExpr> a, b;

    bool eval(Letter letter) const {
        switch (kind) {
            case True: return true;
            case False: return false;
            case Ap: return (letter >> ap) & 1;
            case NotK: return !a->eval(letter);
            case AndK: return a->eval(letter) && b->eval(letter);
            case OrK: return a->eval(letter) || b->eval(letter);
        }
        return false;
    }
};

using LabelPtr = std::unique_ptr<LabelExpr>;

LabelPtr label_node(LabelExpr::Kind k, int ap = -1, LabelPtr a = nullptr, LabelPtr b = nullptr) {
    auto e = std::make_unique<LabelExpr>();
    e->kind = k;
    e->ap = ap;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

class LabelParser {
public:
    LabelParser(Scanner& scanner, int num_ap) : sc_(scanner), num_ap_(num_ap) {}

    LabelPtr parse() { return parseOr(); }

private:
    LabelPtr parseOr() {
        LabelPtr left = parseAnd();
        while (sc_.peek().kind == Tok::Or) {
            sc_.take();
            left = label_node(LabelExpr::OrK, -1, std::move(left), parseAnd());
        }
        return left;
    }

    LabelPtr parseAnd() {
        LabelPtr left = parseUnary();
        while (sc_.peek().kind == Tok::And) {
            sc_.take();
            left = label_node(LabelExpr::AndK, -1, std::move(left), parseUnary());
        }
        return left;
    }

    LabelPtr parseUnary() {
        const Token& t = sc_.peek();
        if (t.kind == Tok::Not) {
            sc_.take();
            return label_node(LabelExpr::NotK, -1, parseUnary());
        }
        if (t.kind == Tok::LParen) {
            sc_.take();
            LabelPtr inner = parseOr();
            sc_.expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind == Tok::Int) {
            Token tok = sc_.take();
            if (tok.value < 0 || tok.value >= num_ap_)
                throw parse_error("AP index out of range in label", tok.pos);
            return label_node(LabelExpr::Ap, static_cast<int>(tok.value));
        }
        if (t.kind == Tok::Word && t.text == "t") {
            sc_.take();
            return label_node(LabelExpr::True);
        }
        if (t.kind == Tok::Word && t.text == "f") {
            sc_.take();
            return label_node(LabelExpr::False);
        }
        throw parse_error("expected a label expression", t.pos);
    }

    Scanner& sc_;
    int num_ap_;
};

// Element of the Acceptance: header expression.
struct AccAtom {
    bool fin;
    long set;
};

class AcceptanceParser {
public:
    explicit AcceptanceParser(Scanner& scanner) : sc_(scanner) {}

    // disjuncts of conjunction lists
    std::vector<std::vector<AccAtom>> parse() {
        std::vector<std::vector<AccAtom>> result;
        result.push_back(parseConj());
        while (sc_.peek().kind == Tok::Or) {
            sc_.take();
            result.push_back(parseConj());
        }
        return result;
    }

private:
    std::vector<AccAtom> parseConj() {
        std::vector<AccAtom> atoms;
        parseFactor(atoms);
        while (sc_.peek().kind == Tok::And) {
            sc_.take();
            parseFactor(atoms);
        }
        return atoms;
    }

    void parseFactor(std::vector<AccAtom>& atoms) {
        if (sc_.peek().kind == Tok::LParen) {
            sc_.take();
            parseFactor(atoms);
            while (sc_.peek().kind == Tok::And) {
                sc_.take();
                parseFactor(atoms);
            }
            sc_.expect(Tok::RParen, "')'");
            return;
        }
        Token word = sc_.expect(Tok::Word, "Fin or Inf");
        bool fin;
        if (word.text == "Fin")
            fin = true;
        else if (word.text == "Inf")
            fin = false;
        else
            throw parse_error("expected Fin or Inf", word.pos);
        sc_.expect(Tok::LParen, "'('");
        Token idx = sc_.expect(Tok::Int, "acceptance set index");
        sc_.expect(Tok::RParen, "')'");
        atoms.push_back({fin, idx.value});
    }

    Scanner& sc_;
};

struct Edge {
    LabelPtr label;
    int dest;
};

}  // namespace

Dra import_hoa(const std::string& text) {
    Scanner sc(text);

    Token hoa = sc.expect(Tok::Header, "HOA: header");
    if (hoa.text != "HOA:") throw parse_error("document must start with HOA:", hoa.pos);
    Token version = sc.expect(Tok::Word, "format version");
    if (version.text != "v1") throw parse_error("unsupported HOA version " + version.text, version.pos);

    std::optional<int> num_states;
    std::optional<int> start;
    std::vector<std::string> ap;
    bool have_ap = false;
    std::optional<long> rabin_pairs;
    std::optional<long> acc_sets;
    std::vector<std::vector<AccAtom>> acc_expr;

    while (sc.peek().kind == Tok::Header) {
        Token header = sc.take();
        if (header.text == "States:") {
            num_states = static_cast<int>(sc.expect(Tok::Int, "state count").value);
        } else if (header.text == "Start:") {
            if (start) throw validation_error("nondeterministic automaton: multiple Start: headers");
            start = static_cast<int>(sc.expect(Tok::Int, "initial state").value);
            if (sc.peek().kind == Tok::And)
                throw validation_error("nondeterministic automaton: conjunctive initial states");
        } else if (header.text == "AP:") {
            long n = sc.expect(Tok::Int, "AP count").value;
            for (long i = 0; i < n; ++i) ap.push_back(sc.expect(Tok::String, "AP name").text);
            have_ap = true;
        } else if (header.text == "acc-name:") {
            Token name = sc.expect(Tok::Word, "acceptance name");
            if (name.text != "Rabin")
                throw validation_error("acceptance is not Rabin: " + name.text);
            rabin_pairs = sc.expect(Tok::Int, "Rabin pair count").value;
        } else if (header.text == "Acceptance:") {
            acc_sets = sc.expect(Tok::Int, "acceptance set count").value;
            if (*acc_sets > 0) acc_expr = AcceptanceParser(sc).parse();
        } else if (header.text == "tool:" || header.text == "name:") {
            while (sc.peek().kind == Tok::String) sc.take();
        } else if (header.text == "properties:") {
            while (sc.peek().kind == Tok::Word) sc.take();
        } else {
            throw parse_error("unsupported header " + header.text, header.pos);
        }
    }

    if (!num_states) throw parse_error("missing States: header", sc.peek().pos);
    if (!start) throw parse_error("missing Start: header", sc.peek().pos);
    if (!have_ap) throw parse_error("missing AP: header", sc.peek().pos);
    if (!rabin_pairs || *rabin_pairs < 1) throw validation_error("acceptance is not Rabin (acc-name missing)");
    if (!acc_sets || *acc_sets != 2 * *rabin_pairs)
        throw validation_error("Rabin acceptance needs exactly 2 sets per pair");
    if (ap.size() > 16) throw validation_error("alphabet too large (more than 16 atoms)");
    if (*start < 0 || *start >= *num_states) throw validation_error("initial state out of range");

    // The canonical Rabin shape: pair i is Fin(2i) & Inf(2i+1).
    if (static_cast<long>(acc_expr.size()) != *rabin_pairs)
        throw validation_error("acceptance expression does not match acc-name: Rabin");
    for (long i = 0; i < *rabin_pairs; ++i) {
        const auto& conj = acc_expr[i];
        bool fin_ok = false, inf_ok = false;
        if (conj.size() != 2) throw validation_error("acceptance expression does not match acc-name: Rabin");
        for (const auto& atom : conj) {
            if (atom.fin && atom.set == 2 * i) fin_ok = true;
            if (!atom.fin && atom.set == 2 * i + 1) inf_ok = true;
        }
        if (!fin_ok || !inf_ok)
            throw validation_error("acceptance expression does not match acc-name: Rabin");
    }

    sc.expect(Tok::Body, "--BODY--");

    std::vector<std::vector<Edge>> edges(*num_states);
    std::vector<std::vector<long>> state_sets(*num_states);
    std::vector<char> declared(*num_states, 0);

    while (sc.peek().kind == Tok::Header && sc.peek().text == "State:") {
        Token state_tok = sc.take();
        if (sc.peek().kind == Tok::LBracket)
            throw parse_error("state labels are not supported (labels go on edges)", sc.peek().pos);
        Token idx = sc.expect(Tok::Int, "state index");
        if (idx.value < 0 || idx.value >= *num_states)
            throw parse_error("state index out of range", idx.pos);
        int s = static_cast<int>(idx.value);
        if (declared[s]) throw parse_error("state declared twice", state_tok.pos);
        declared[s] = 1;
        if (sc.peek().kind == Tok::String) sc.take();  // optional state name
        if (sc.peek().kind == Tok::LBrace) {
            sc.take();
            while (sc.peek().kind == Tok::Int) {
                long set = sc.take().value;
                if (set < 0 || set >= *acc_sets)
                    throw validation_error("acceptance set index out of range");
                state_sets[s].push_back(set);
            }
            sc.expect(Tok::RBrace, "'}'");
        }
        while (sc.peek().kind == Tok::LBracket) {
            sc.take();
            LabelPtr label = LabelParser(sc, static_cast<int>(ap.size())).parse();
            sc.expect(Tok::RBracket, "']'");
            Token dest = sc.expect(Tok::Int, "edge destination");
            if (dest.value < 0 || dest.value >= *num_states)
                throw parse_error("edge destination out of range", dest.pos);
            if (sc.peek().kind == Tok::LBrace)
                throw validation_error("edge acceptance marks are not supported (state-based only)");
            if (sc.peek().kind == Tok::And)
                throw parse_error("universal branching is not supported", sc.peek().pos);
            edges[s].push_back({std::move(label), static_cast<int>(dest.value)});
        }
    }

    sc.expect(Tok::End, "--END--");

    for (int s = 0; s < *num_states; ++s)
        if (!declared[s]) throw validation_error("state " + std::to_string(s) + " has no body");

    Dra dra;
    dra.ap = ap;
    dra.num_states = *num_states;
    dra.initial = *start;
    const int nl = dra.num_letters();
    dra.delta.assign(static_cast<std::size_t>(*num_states) * nl, -1);
    for (int s = 0; s < *num_states; ++s) {
        for (int a = 0; a < nl; ++a) {
            int match = -1;
            for (const auto& edge : edges[s]) {
                if (!edge.label->eval(static_cast<Letter>(a))) continue;
                if (match != -1)
                    throw validation_error("nondeterministic automaton: state " + std::to_string(s) +
                                           " has two edges for one letter");
                match = edge.dest;
            }
            if (match == -1)
                throw validation_error("incomplete automaton: state " + std::to_string(s) +
                                       " has no edge for some letter");
            dra.delta[static_cast<std::size_t>(s) * nl + a] = match;
        }
    }

    dra.pairs.resize(*rabin_pairs);
    for (auto& pair : dra.pairs) {
        pair.l.assign(*num_states, 0);
        pair.k.assign(*num_states, 0);
    }
    for (int s = 0; s < *num_states; ++s)
        for (long set : state_sets[s]) {
            if (set % 2 == 0)
                dra.pairs[set / 2].l[s] = 1;
            else
                dra.pairs[set / 2].k[s] = 1;
        }

    validate_dra(dra);
    return dra;
}

std::string export_hoa(const Dra& dra) {
    std::ostringstream out;
    out << "HOA: v1\n";
    out << "States: " << dra.num_states << "\n";
    out << "Start: " << dra.initial << "\n";
    out << "AP: " << dra.ap.size();
    for (const auto& name : dra.ap) out << " \"" << name << "\"";
    out << "\n";
    out << "acc-name: Rabin " << dra.pairs.size() << "\n";
    out << "Acceptance: " << 2 * dra.pairs.size() << " ";
    for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
        if (i) out << " | ";
        out << "(Fin(" << 2 * i << ") & Inf(" << 2 * i + 1 << "))";
    }
    out << "\n--BODY--\n";
    const int nl = dra.num_letters();
    for (int s = 0; s < dra.num_states; ++s) {
        out << "State: " << s;
        bool any = false;
        for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
            if (dra.pairs[i].l[s]) {
                out << (any ? " " : " {") << 2 * i;
                any = true;
            }
            if (dra.pairs[i].k[s]) {
                out << (any ? " " : " {") << 2 * i + 1;
                any = true;
            }
        }
        if (any) out << "}";
        out << "\n";
        for (int a = 0; a < nl; ++a) {
            out << "[";
            if (dra.ap.empty()) {
                out << "t";
            } else {
                for (std::size_t bit = 0; bit < dra.ap.size(); ++bit) {
                    if (bit) out << "&";
                    if (!((a >> bit) & 1)) out << "!";
                    out << bit;
                }
            }
            out << "] " << dra.step(s, static_cast<Letter>(a)) << "\n";
        }
    }
    out << "--END--\n";
    return out.str();
}

}  // namespace posg
