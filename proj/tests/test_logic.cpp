#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "posg/dra.hpp"
#include "posg/errors.hpp"
#include "posg/hoa.hpp"
#include "posg/ltl.hpp"

using namespace posg;
using namespace posg::ltl;

TEST_CASE("parser builds the objective formula") {
    FormulaPtr f = parse_ltl("G F tar & G !obs");
    FormulaPtr expected =
        make_and(make_always(make_eventually(make_atom("tar"))), make_always(make_not(make_atom("obs"))));
    CHECK(structurally_equal(f, expected));
    CHECK(to_string(f) == "G F tar & G !obs");
}

TEST_CASE("parser basics and precedence") {
    CHECK(parse_ltl("true")->op == Op::True);
    CHECK(structurally_equal(parse_ltl("a U (b U c)"),
                             make_until(make_atom("a"), make_until(make_atom("b"), make_atom("c")))));
    // U is right-associative
    CHECK(structurally_equal(parse_ltl("a U b U c"), parse_ltl("a U (b U c)")));
    // unary > U > & > | > ->
    CHECK(structurally_equal(parse_ltl("!a U b & c | d -> e"),
                             make_implies(make_or(make_and(make_until(make_not(make_atom("a")),
                                                                      make_atom("b")),
                                                           make_atom("c")),
                                                  make_atom("d")),
                                          make_atom("e"))));
    CHECK(structurally_equal(parse_ltl("a -> b -> c"),
                             make_implies(make_atom("a"), make_implies(make_atom("b"), make_atom("c")))));
}

TEST_CASE("parser reports positions and undeclared atoms") {
    CHECK_THROWS_AS(parse_ltl("a &"), parse_error);
    CHECK_THROWS_AS(parse_ltl("(a"), parse_error);
    CHECK_THROWS_AS(parse_ltl("a b"), parse_error);
    try {
        parse_ltl("a & %");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse_ltl("a & c", {"a", "b"}), parse_error);
    CHECK_NOTHROW(parse_ltl("a & b", {"a", "b"}));
}

TEST_CASE("normalize rewrites to the core grammar") {
    FormulaPtr f = normalize(parse_ltl("F a"));
    CHECK(structurally_equal(f, make_until(make_true(), make_atom("a"))));
    FormulaPtr g = normalize(parse_ltl("G a"));
    CHECK(structurally_equal(
        g, make_not(make_until(make_true(), make_not(make_atom("a"))))));
    // or / implies reduce to and/not
    std::function<bool(const FormulaPtr&)> core_only = [&](const FormulaPtr& h) {
        if (!h) return true;
        switch (h->op) {
            case Op::True:
            case Op::Atom:
            case Op::Not:
            case Op::And:
            case Op::Next:
            case Op::Until:
                return core_only(h->lhs) && core_only(h->rhs);
            default:
                return false;
        }
    };
    CHECK(core_only(normalize(parse_ltl("a | b -> X c"))));
}

TEST_CASE("trivial objective translations") {
    Dra top = ltl_to_dra(parse_ltl("G true"));
    CHECK(top.num_states == 1);
    REQUIRE(top.pairs.size() == 1);
    CHECK(top.pairs[0].l == std::vector<char>{0});
    CHECK(top.pairs[0].k == std::vector<char>{1});
    CHECK(dra_accepts_lasso(top, {}, {0}));

    Dra gf = ltl_to_dra(parse_ltl("G F a"));
    CHECK(gf.num_states == 2);
    REQUIRE(gf.pairs.size() == 1);
    for (int q = 0; q < 2; ++q) CHECK(gf.pairs[0].l[q] == 0);  // empty Fin part
}

TEST_CASE("objective automaton lasso behavior") {
    Dra dra = ltl_to_dra(parse_ltl("G F tar & G !obs"), {"tar", "obs"});
    REQUIRE(dra.pairs.size() == 1);
    Letter tar = letter_from_atoms(dra.ap, {"tar"});
    Letter obs = letter_from_atoms(dra.ap, {"obs"});
    Letter none = 0;

    CHECK(accepts_ultimately_periodic(dra, {none, none}, {tar}));
    CHECK_FALSE(accepts_ultimately_periodic(dra, {none}, {obs}));
    CHECK_FALSE(accepts_ultimately_periodic(dra, {obs}, {tar}));
    CHECK_FALSE(accepts_ultimately_periodic(dra, {}, {none}));
    CHECK(accepts_ultimately_periodic(dra, {}, {none, tar}));
}

TEST_CASE("dra_accepts_lasso closure handling") {
    Dra dra = ltl_to_dra(parse_ltl("G F tar & G !obs"), {"tar", "obs"});
    Letter tar = letter_from_atoms(dra.ap, {"tar"});
    Letter obs = letter_from_atoms(dra.ap, {"obs"});
    CHECK(dra_accepts_lasso(dra, {0, tar}, {tar}));
    // the same cycle straight after the empty-letter prefix has not settled
    // yet; the pumping wrapper closes it
    CHECK_THROWS_AS(dra_accepts_lasso(dra, {0}, {tar}), validation_error);
    CHECK(accepts_ultimately_periodic(dra, {0}, {tar}));
    // entering the violation trap does not close on the loop entry state
    CHECK_THROWS_AS(dra_accepts_lasso(dra, {}, {obs}), validation_error);
    CHECK_THROWS_AS(dra_accepts_lasso(dra, {}, {}), validation_error);

    Dra top = ltl_to_dra(parse_ltl("true"), {"tar"});
    CHECK(dra_accepts_lasso(top, {1, 0}, {1}));
}

TEST_CASE("fragment translations agree with direct LTL semantics on all short lassos") {
    const std::vector<std::string> ap{"a", "b"};
    const std::vector<std::string> formulas{
        "G !b",    "G a",      "G F a",        "F G a",
        "F a",     "a U b",    "G F a & G !b", "G F a & G F b",
        "F a & G !b", "a U b & G a", "G F a & F G b & G !b", "true", "false",
    };
    for (const auto& text : formulas) {
        CAPTURE(text);
        FormulaPtr f = parse_ltl(text);
        Dra dra = ltl_to_dra(f, ap);
        REQUIRE(dra.pairs.size() >= 1);
        int disagreements = 0;
        oracles::for_each_lasso(4, 4, [&](const std::vector<Letter>& prefix,
                                          const std::vector<Letter>& cycle) {
            bool by_automaton = accepts_ultimately_periodic(dra, prefix, cycle);
            bool by_semantics = oracles::lasso_models(f, prefix, cycle, ap);
            if (by_automaton != by_semantics) ++disagreements;
        });
        CHECK(disagreements == 0);
    }
}

TEST_CASE("unsupported fragment is rejected with the offending subformula") {
    CHECK_THROWS_AS(ltl_to_dra(parse_ltl("X a")), unsupported_fragment_error);
    CHECK_THROWS_AS(ltl_to_dra(parse_ltl("a | b")), unsupported_fragment_error);
    CHECK_THROWS_AS(ltl_to_dra(parse_ltl("G (a & b)")), unsupported_fragment_error);
    try {
        ltl_to_dra(parse_ltl("G F a & (b U (c U d))"));
        CHECK(false);
    } catch (const unsupported_fragment_error& e) {
        CHECK(e.subformula() == "b U c U d");
    }
}

TEST_CASE("hoa import of the smallest all-accepting automaton") {
    const char* text = R"(HOA: v1
States: 1
Start: 0
AP: 1 "p"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
--BODY--
State: 0 {1}
[t] 0
--END--
)";
    Dra dra = import_hoa(text);
    CHECK(dra.num_states == 1);
    REQUIRE(dra.pairs.size() == 1);
    CHECK(dra.pairs[0].l[0] == 0);
    CHECK(dra.pairs[0].k[0] == 1);
    CHECK(dra.ap == std::vector<std::string>{"p"});
    CHECK(accepts_ultimately_periodic(dra, {}, {0}));
}

TEST_CASE("hoa import accepts the same language as the translated objective") {
    // Hand-written trap-merged automaton for the reach-repeatedly objective.
    const char* text = R"(HOA: v1
States: 3
Start: 0
AP: 2 "tar" "obs"
acc-name: Rabin 1
Acceptance: 2 (Fin(0) & Inf(1))
--BODY--
State: 0
[!0 & !1] 0
[0 & !1] 1
[1] 2
State: 1 {1}
[!0 & !1] 0
[0 & !1] 1
[1] 2
State: 2 {0}
[t] 2
--END--
)";
    Dra imported = import_hoa(text);
    Dra translated = ltl_to_dra(parse_ltl("G F tar & G !obs"), {"tar", "obs"});
    int disagreements = 0;
    oracles::for_each_lasso(4, 5, [&](const std::vector<Letter>& prefix,
                                      const std::vector<Letter>& cycle) {
        if (accepts_ultimately_periodic(imported, prefix, cycle) !=
            accepts_ultimately_periodic(translated, prefix, cycle))
            ++disagreements;
    });
    CHECK(disagreements == 0);
}

TEST_CASE("hoa error paths") {
    const char* incomplete = R"(HOA: v1
States: 2
Start: 0
AP: 1 "p"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
--BODY--
State: 0 {1}
[0] 1
State: 1
[t] 1
--END--
)";
    CHECK_THROWS_WITH_AS(import_hoa(incomplete), doctest::Contains("incomplete"), validation_error);

    const char* nondeterministic = R"(HOA: v1
States: 1
Start: 0
AP: 1 "p"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
--BODY--
State: 0 {1}
[t] 0
[0] 0
--END--
)";
    CHECK_THROWS_WITH_AS(import_hoa(nondeterministic), doctest::Contains("nondeterministic"),
                         validation_error);

    const char* buchi = R"(HOA: v1
States: 1
Start: 0
AP: 1 "p"
acc-name: Buchi
Acceptance: 1 Inf(0)
--BODY--
State: 0 {0}
[t] 0
--END--
)";
    CHECK_THROWS_AS(import_hoa(buchi), validation_error);
}

TEST_CASE("hoa round-trip is isomorphic for every template") {
    const std::vector<std::string> ap{"a", "b"};
    for (const auto& text : {"G !b", "G a", "G F a", "F G a", "F a", "a U b", "G F a & G !b",
                             "G F a & G F b"}) {
        CAPTURE(text);
        Dra dra = ltl_to_dra(parse_ltl(text), ap);
        Dra back = import_hoa(export_hoa(dra));
        CHECK(isomorphic(dra, back));
    }
}
