#pragma once

#include <memory>
#include <string>
#include <vector>

namespace posg::ltl {

enum class Op {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Eventually,
    Always,
};

/// Immutable formula node. Trees are shared through shared_ptr so that
/// subformulas can be referenced from error messages and matchers without
/// copies.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    Op op;
    std::string atom;    // Op::Atom only
    FormulaPtr lhs;      // unary operand or left operand
    FormulaPtr rhs;      // right operand of And/Or/Implies/Until
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_atom(std::string name);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr make_next(FormulaPtr f);
FormulaPtr make_until(FormulaPtr a, FormulaPtr b);
FormulaPtr make_eventually(FormulaPtr f);
FormulaPtr make_always(FormulaPtr f);

/// Parses the concrete syntax:
///   atoms  [a-zA-Z_][a-zA-Z0-9_]*  (except the reserved words below)
///   true false ! & | -> X U F G ( )
/// Precedence: unary (!, X, F, G) > U > & > | > ->.
/// U and -> associate to the right.
///
/// If `declared_ap` is nonempty, every atom must be a member of it;
/// otherwise atoms are accepted as encountered.
/// Throws parse_error on malformed input.
FormulaPtr parse_ltl(const std::string& text,
                     const std::vector<std::string>& declared_ap = {});

/// Rewrites derived connectives into the core grammar
/// {True, Atom, Not, And, Next, Until}:
///   a | b   -> !(!a & !b)
///   a -> b  -> !(a & !b)
///   F a     -> true U a
///   G a     -> !(true U !a)
///   false   -> !true
FormulaPtr normalize(const FormulaPtr& f);

/// Renders with minimal parentheses, matching the parser's grammar.
std::string to_string(const FormulaPtr& f);

/// Atoms in order of first appearance (left-to-right, depth-first).
std::vector<std::string> collect_atoms(const FormulaPtr& f);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

}  // namespace posg::ltl
