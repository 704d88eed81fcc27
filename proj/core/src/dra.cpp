#include "posg/dra.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "posg/errors.hpp"

namespace posg {

void validate_dra(const Dra& dra) {
    if (dra.num_states <= 0) throw validation_error("DRA has no states");
    if (dra.initial < 0 || dra.initial >= dra.num_states)
        throw validation_error("DRA initial state out of range");
    if (dra.pairs.empty()) throw validation_error("DRA needs at least one acceptance pair");
    const std::size_t expected = static_cast<std::size_t>(dra.num_states) * dra.num_letters();
    if (dra.delta.size() != expected)
        throw validation_error("DRA transition table has the wrong size");
    for (int q = 0; q < dra.num_states; ++q)
        for (int a = 0; a < dra.num_letters(); ++a) {
            int to = dra.step(q, static_cast<Letter>(a));
            if (to < 0 || to >= dra.num_states)
                throw validation_error("DRA transition target out of range");
        }
    for (const auto& pair : dra.pairs)
        if (pair.l.size() != static_cast<std::size_t>(dra.num_states) ||
            pair.k.size() != static_cast<std::size_t>(dra.num_states))
            throw validation_error("DRA acceptance pair has the wrong size");
}

Letter letter_from_atoms(const std::vector<std::string>& ap,
                         const std::vector<std::string>& atoms) {
    Letter letter = 0;
    for (const auto& atom : atoms) {
        auto it = std::find(ap.begin(), ap.end(), atom);
        if (it == ap.end()) throw validation_error("atom '" + atom + "' not in the AP list");
        letter |= Letter{1} << (it - ap.begin());
    }
    return letter;
}

namespace {

using ltl::FormulaPtr;
using ltl::Op;

// One conjunct compiled to a single-pair automaton fragment. `buchi` marks
// pairs with an empty L part (the Inf side carries the content); for all
// other templates K is the complement of L, so Fin(L) alone decides
// acceptance.
struct Template {
    int num_states = 0;
    int initial = 0;
    std::vector<int> delta;  // num_states x num_letters
    std::vector<char> l;
    std::vector<char> k;
    bool buchi = false;
};

Template two_state(int num_letters, const std::function<bool(Letter)>& go_one, bool one_absorbs,
                   std::vector<char> l, std::vector<char> k, bool buchi) {
    Template t;
    t.num_states = 2;
    t.delta.resize(2 * num_letters);
    for (int a = 0; a < num_letters; ++a) {
        t.delta[a] = go_one(static_cast<Letter>(a)) ? 1 : 0;
        t.delta[num_letters + a] = one_absorbs ? 1 : t.delta[a];
    }
    t.l = std::move(l);
    t.k = std::move(k);
    t.buchi = buchi;
    return t;
}

// G F a: state 1 <=> the letter just read contained a.
Template template_gf(int num_letters, int bit) {
    return two_state(
        num_letters, [bit](Letter a) { return (a >> bit) & 1; }, false, {0, 0}, {0, 1}, true);
}

// F G a: same transitions as G F a, but state 0 must be left behind for good.
Template template_fg(int num_letters, int bit) {
    return two_state(
        num_letters, [bit](Letter a) { return (a >> bit) & 1; }, false, {1, 0}, {0, 1}, false);
}

// Safety G p: state 1 is the absorbing violation.
Template template_safety(int num_letters, const std::function<bool(Letter)>& violates) {
    return two_state(num_letters, violates, true, {0, 1}, {1, 0}, false);
}

// F a: state 1 is the absorbing witness.
Template template_f(int num_letters, int bit) {
    return two_state(
        num_letters, [bit](Letter a) { return (a >> bit) & 1; }, true, {1, 0}, {0, 1}, false);
}

// a U b: 0 waiting while a holds, 1 accept sink (b seen), 2 reject sink.
Template template_until(int num_letters, int bit_a, int bit_b) {
    Template t;
    t.num_states = 3;
    t.delta.resize(3 * num_letters);
    for (int a = 0; a < num_letters; ++a) {
        int to;
        if ((a >> bit_b) & 1)
            to = 1;
        else if ((a >> bit_a) & 1)
            to = 0;
        else
            to = 2;
        t.delta[a] = to;
        t.delta[num_letters + a] = 1;
        t.delta[2 * num_letters + a] = 2;
    }
    t.l = {1, 0, 1};
    t.k = {0, 1, 0};
    t.buchi = false;
    return t;
}

Template template_const(int num_letters, bool value) {
    Template t;
    t.num_states = 1;
    t.delta.assign(num_letters, 0);
    t.l = {value ? char(0) : char(1)};
    t.k = {value ? char(1) : char(0)};
    t.buchi = false;
    return t;
}

bool is_const(const FormulaPtr& f, Op op) { return f->op == op; }

// Constant folding so that e.g. G true and true U b match as constants and
// F b respectively.
FormulaPtr simplify(const FormulaPtr& f) {
    using namespace ltl;
    switch (f->op) {
        case Op::True:
        case Op::False:
        case Op::Atom:
            return f;
        case Op::Not: {
            FormulaPtr x = simplify(f->lhs);
            if (is_const(x, Op::True)) return make_false();
            if (is_const(x, Op::False)) return make_true();
            if (x->op == Op::Not) return x->lhs;
            return make_not(x);
        }
        case Op::And: {
            FormulaPtr a = simplify(f->lhs);
            FormulaPtr b = simplify(f->rhs);
            if (is_const(a, Op::False) || is_const(b, Op::False)) return make_false();
            if (is_const(a, Op::True)) return b;
            if (is_const(b, Op::True)) return a;
            return make_and(a, b);
        }
        case Op::Or: {
            FormulaPtr a = simplify(f->lhs);
            FormulaPtr b = simplify(f->rhs);
            if (is_const(a, Op::True) || is_const(b, Op::True)) return make_true();
            if (is_const(a, Op::False)) return b;
            if (is_const(b, Op::False)) return a;
            return make_or(a, b);
        }
        case Op::Implies: {
            FormulaPtr a = simplify(f->lhs);
            FormulaPtr b = simplify(f->rhs);
            if (is_const(a, Op::False) || is_const(b, Op::True)) return make_true();
            if (is_const(a, Op::True)) return b;
            return make_implies(a, b);
        }
        case Op::Next: {
            FormulaPtr x = simplify(f->lhs);
            if (is_const(x, Op::True)) return make_true();
            if (is_const(x, Op::False)) return make_false();
            return make_next(x);
        }
        case Op::Until: {
            FormulaPtr a = simplify(f->lhs);
            FormulaPtr b = simplify(f->rhs);
            if (is_const(b, Op::True)) return make_true();
            if (is_const(b, Op::False)) return make_false();
            if (is_const(a, Op::True)) return make_eventually(b);
            if (is_const(a, Op::False)) return b;  // only j = 0 can witness
            return make_until(a, b);
        }
        case Op::Eventually: {
            FormulaPtr x = simplify(f->lhs);
            if (is_const(x, Op::True)) return make_true();
            if (is_const(x, Op::False)) return make_false();
            return make_eventually(x);
        }
        case Op::Always: {
            FormulaPtr x = simplify(f->lhs);
            if (is_const(x, Op::True)) return make_true();
            if (is_const(x, Op::False)) return make_false();
            return make_always(x);
        }
    }
    return f;
}

void flatten_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->op == Op::And) {
        flatten_conjuncts(f->lhs, out);
        flatten_conjuncts(f->rhs, out);
    } else {
        out.push_back(f);
    }
}

int atom_bit(const std::vector<std::string>& ap, const std::string& name, const FormulaPtr& ctx) {
    auto it = std::find(ap.begin(), ap.end(), name);
    if (it == ap.end()) throw unsupported_fragment_error(ltl::to_string(ctx));
    return static_cast<int>(it - ap.begin());
}

Template compile_conjunct(const FormulaPtr& c, const std::vector<std::string>& ap) {
    const int nl = 1 << static_cast<int>(ap.size());
    if (c->op == Op::True) return template_const(nl, true);
    if (c->op == Op::False) return template_const(nl, false);
    if (c->op == Op::Always) {
        const FormulaPtr& inner = c->lhs;
        if (inner->op == Op::Atom) {
            int bit = atom_bit(ap, inner->atom, c);
            return template_safety(nl, [bit](Letter a) { return !((a >> bit) & 1); });
        }
        if (inner->op == Op::Not && inner->lhs->op == Op::Atom) {
            int bit = atom_bit(ap, inner->lhs->atom, c);
            return template_safety(nl, [bit](Letter a) { return (a >> bit) & 1; });
        }
        if (inner->op == Op::Eventually && inner->lhs->op == Op::Atom)
            return template_gf(nl, atom_bit(ap, inner->lhs->atom, c));
    }
    if (c->op == Op::Eventually) {
        const FormulaPtr& inner = c->lhs;
        if (inner->op == Op::Atom) return template_f(nl, atom_bit(ap, inner->atom, c));
        if (inner->op == Op::Always && inner->lhs->op == Op::Atom)
            return template_fg(nl, atom_bit(ap, inner->lhs->atom, c));
    }
    if (c->op == Op::Until && c->lhs->op == Op::Atom && c->rhs->op == Op::Atom)
        return template_until(nl, atom_bit(ap, c->lhs->atom, c), atom_bit(ap, c->rhs->atom, c));
    throw unsupported_fragment_error(ltl::to_string(c));
}

Dra remove_unreachable(const Dra& dra) {
    std::vector<int> index(dra.num_states, -1);
    std::deque<int> queue;
    index[dra.initial] = 0;
    queue.push_back(dra.initial);
    std::vector<int> order{dra.initial};
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int a = 0; a < dra.num_letters(); ++a) {
            int to = dra.step(q, static_cast<Letter>(a));
            if (index[to] == -1) {
                index[to] = static_cast<int>(order.size());
                order.push_back(to);
                queue.push_back(to);
            }
        }
    }
    if (static_cast<int>(order.size()) == dra.num_states) return dra;
    Dra out;
    out.ap = dra.ap;
    out.num_states = static_cast<int>(order.size());
    out.initial = 0;
    out.delta.resize(static_cast<std::size_t>(out.num_states) * out.num_letters());
    for (int i = 0; i < out.num_states; ++i)
        for (int a = 0; a < out.num_letters(); ++a)
            out.delta[static_cast<std::size_t>(i) * out.num_letters() + a] =
                index[dra.step(order[i], static_cast<Letter>(a))];
    for (const auto& pair : dra.pairs) {
        RabinPair p;
        p.l.resize(out.num_states);
        p.k.resize(out.num_states);
        for (int i = 0; i < out.num_states; ++i) {
            p.l[i] = pair.l[order[i]];
            p.k[i] = pair.k[order[i]];
        }
        out.pairs.push_back(std::move(p));
    }
    return out;
}

// Synchronous product of single-pair templates. The combined acceptance is
//   Fin(union of non-Buchi L parts)  and  Inf(K_j) for every Buchi conjunct.
// With zero or one Inf requirement this is a plain Rabin pair on the product;
// with m >= 2 a round-robin counter plus a wrap flag marks completed rounds,
// and Inf(wrap) captures the conjunction of the Inf parts.
Dra conjoin(const std::vector<Template>& parts, const std::vector<std::string>& ap) {
    const int nl = 1 << static_cast<int>(ap.size());
    std::vector<int> buchi_index;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (parts[i].buchi) buchi_index.push_back(static_cast<int>(i));
    const int m = static_cast<int>(buchi_index.size());
    const bool counted = m >= 2;

    std::vector<int> stride(parts.size());
    int tuple_count = 1;
    for (std::size_t i = parts.size(); i-- > 0;) {
        stride[i] = tuple_count;
        tuple_count *= parts[i].num_states;
    }
    const int counter_states = counted ? 2 * m : 1;  // (c, wrap flag)
    const int total = tuple_count * counter_states;

    auto component = [&](int tuple, std::size_t i) { return (tuple / stride[i]) % parts[i].num_states; };

    Dra out;
    out.ap = ap;
    out.num_states = total;
    out.initial = 0;
    int init_tuple = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) init_tuple += parts[i].initial * stride[i];
    out.initial = init_tuple * counter_states;

    out.delta.resize(static_cast<std::size_t>(total) * nl);
    for (int s = 0; s < total; ++s) {
        int tuple = s / counter_states;
        int c = counted ? (s % counter_states) / 2 : 0;
        for (int a = 0; a < nl; ++a) {
            int next_tuple = 0;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                int q = component(tuple, i);
                next_tuple += parts[i].delta[static_cast<std::size_t>(q) * nl + a] * stride[i];
            }
            int next = next_tuple * counter_states;
            if (counted) {
                const Template& watched = parts[buchi_index[c]];
                bool hit = watched.k[component(next_tuple, buchi_index[c])] != 0;
                int c2 = hit ? (c + 1) % m : c;
                int wrap = (hit && c == m - 1) ? 1 : 0;
                next = next_tuple * counter_states + c2 * 2 + wrap;
            }
            out.delta[static_cast<std::size_t>(s) * nl + a] = next;
        }
    }

    RabinPair pair;
    pair.l.assign(total, 0);
    pair.k.assign(total, 0);
    for (int s = 0; s < total; ++s) {
        int tuple = s / counter_states;
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (!parts[i].buchi && parts[i].l[component(tuple, i)]) pair.l[s] = 1;
        if (counted) {
            if (s % 2 == 1) pair.k[s] = 1;  // wrap flag set
        } else if (m == 1) {
            pair.k[s] = parts[buchi_index[0]].k[component(tuple, buchi_index[0])];
        } else {
            pair.k[s] = pair.l[s] ? 0 : 1;  // Fin(L) alone decides; K is its complement
        }
    }
    out.pairs.push_back(std::move(pair));
    return remove_unreachable(out);
}

}  // namespace

Dra ltl_to_dra(const ltl::FormulaPtr& formula, const std::vector<std::string>& ap_order) {
    std::vector<std::string> ap = ap_order;
    if (ap.empty()) ap = ltl::collect_atoms(formula);
    for (const auto& atom : ltl::collect_atoms(formula))
        if (std::find(ap.begin(), ap.end(), atom) == ap.end())
            throw validation_error("ap_order does not cover atom '" + atom + "'");
    if (ap.size() > 16) throw validation_error("alphabet too large (more than 16 atoms)");

    FormulaPtr f = simplify(formula);
    std::vector<FormulaPtr> conjuncts;
    flatten_conjuncts(f, conjuncts);

    std::vector<Template> parts;
    parts.reserve(conjuncts.size());
    for (const auto& c : conjuncts) parts.push_back(compile_conjunct(c, ap));

    Dra dra = conjoin(parts, ap);
    validate_dra(dra);
    return dra;
}

bool dra_accepts_lasso(const Dra& dra, const std::vector<Letter>& prefix,
                       const std::vector<Letter>& cycle) {
    if (cycle.empty()) throw validation_error("lasso cycle must be nonempty");
    int q = dra.initial;
    for (Letter a : prefix) q = dra.step(q, a);
    const int anchor = q;
    std::vector<char> visited(dra.num_states, 0);
    for (Letter a : cycle) {
        q = dra.step(q, a);
        visited[q] = 1;
    }
    if (q != anchor) throw validation_error("cycle does not close on a DRA state");
    for (const auto& pair : dra.pairs) {
        bool hits_l = false, hits_k = false;
        for (int s = 0; s < dra.num_states; ++s) {
            if (!visited[s]) continue;
            if (pair.l[s]) hits_l = true;
            if (pair.k[s]) hits_k = true;
        }
        if (!hits_l && hits_k) return true;
    }
    return false;
}

bool accepts_ultimately_periodic(const Dra& dra, const std::vector<Letter>& prefix,
                                 const std::vector<Letter>& cycle) {
    if (cycle.empty()) throw validation_error("lasso cycle must be nonempty");
    int q = dra.initial;
    for (Letter a : prefix) q = dra.step(q, a);
    // Pump the cycle until the entry state repeats; the run is then truly
    // periodic with period (k2 - k1) cycle traversals.
    std::vector<int> seen{q};
    for (;;) {
        for (Letter a : cycle) q = dra.step(q, a);
        auto it = std::find(seen.begin(), seen.end(), q);
        if (it != seen.end()) {
            int k1 = static_cast<int>(it - seen.begin());
            int k2 = static_cast<int>(seen.size());
            std::vector<Letter> new_prefix = prefix;
            for (int i = 0; i < k1; ++i) new_prefix.insert(new_prefix.end(), cycle.begin(), cycle.end());
            std::vector<Letter> new_cycle;
            for (int i = 0; i < k2 - k1; ++i) new_cycle.insert(new_cycle.end(), cycle.begin(), cycle.end());
            return dra_accepts_lasso(dra, new_prefix, new_cycle);
        }
        seen.push_back(q);
    }
}

Dra canonicalize(const Dra& dra) {
    std::vector<int> index(dra.num_states, -1);
    std::vector<int> order;
    std::deque<int> queue;
    index[dra.initial] = 0;
    order.push_back(dra.initial);
    queue.push_back(dra.initial);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int a = 0; a < dra.num_letters(); ++a) {
            int to = dra.step(q, static_cast<Letter>(a));
            if (index[to] == -1) {
                index[to] = static_cast<int>(order.size());
                order.push_back(to);
                queue.push_back(to);
            }
        }
    }
    Dra out;
    out.ap = dra.ap;
    out.num_states = static_cast<int>(order.size());
    out.initial = 0;
    out.delta.resize(static_cast<std::size_t>(out.num_states) * out.num_letters());
    for (int i = 0; i < out.num_states; ++i)
        for (int a = 0; a < out.num_letters(); ++a)
            out.delta[static_cast<std::size_t>(i) * out.num_letters() + a] =
                index[dra.step(order[i], static_cast<Letter>(a))];
    for (const auto& pair : dra.pairs) {
        RabinPair p;
        p.l.resize(out.num_states);
        p.k.resize(out.num_states);
        for (int i = 0; i < out.num_states; ++i) {
            p.l[i] = pair.l[order[i]];
            p.k[i] = pair.k[order[i]];
        }
        out.pairs.push_back(std::move(p));
    }
    return out;
}

bool isomorphic(const Dra& a, const Dra& b) {
    if (a.ap != b.ap || a.pairs.size() != b.pairs.size()) return false;
    Dra ca = canonicalize(a);
    Dra cb = canonicalize(b);
    if (ca.num_states != cb.num_states || ca.delta != cb.delta) return false;
    for (std::size_t i = 0; i < ca.pairs.size(); ++i)
        if (ca.pairs[i].l != cb.pairs[i].l || ca.pairs[i].k != cb.pairs[i].k) return false;
    return true;
}

}  // namespace posg
