#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "posg/digraph.hpp"
#include "posg/errors.hpp"
#include "posg/matrix_game.hpp"
#include "posg/rng.hpp"
#include "posg/simplex.hpp"

using namespace posg;

namespace {

std::set<std::set<int>> as_sets(const std::vector<std::vector<int>>& components) {
    std::set<std::set<int>> out;
    for (const auto& c : components) out.insert(std::set<int>(c.begin(), c.end()));
    return out;
}

}  // namespace

TEST_CASE("scc basics") {
    Digraph cycle;
    cycle.adjacency = {{1}, {2}, {0}};
    auto components = sccs(cycle);
    REQUIRE(components.size() == 1);
    CHECK(components[0].size() == 3);

    Digraph dag;
    dag.adjacency = {{1}, {2}, {3}, {}};
    CHECK(sccs(dag).size() == 4);

    auto sinks = sink_components(dag, sccs(dag));
    int sink_count = 0;
    for (char s : sinks) sink_count += s;
    CHECK(sink_count == 1);
}

TEST_CASE("scc matches the transitive-closure oracle on random digraphs") {
    for (int seed = 0; seed < 100; ++seed) {
        CounterRng rng(20240 + seed);
        int n = 2 + rng.next_int(49);
        Digraph graph = oracles::random_digraph(rng, n, 0.08 + 0.04 * rng.next_double());
        auto components = sccs(graph);
        CHECK(as_sets(components) == as_sets(oracles::scc_closure(graph)));

        // reverse topological: every edge lands in the same or an earlier
        // component
        std::vector<int> component_of(n, -1);
        for (std::size_t c = 0; c < components.size(); ++c)
            for (int v : components[c]) component_of[v] = static_cast<int>(c);
        for (int v = 0; v < n; ++v)
            for (int w : graph.adjacency[v]) CHECK(component_of[w] <= component_of[v]);
    }
}

TEST_CASE("lp basics") {
    {
        LinearProgram lp(1);
        lp.objective = {1.0};
        lp.add_ineq({1.0}, 3.0);
        LpSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.value == doctest::Approx(3.0));
        CHECK(sol.duality_gap <= 1e-8);
    }
    {
        LinearProgram lp(2);
        lp.objective = {1.0, 1.0};
        lp.add_ineq({1.0, 1.0}, 1.0);
        LpSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.value == doctest::Approx(1.0));
    }
}

TEST_CASE("lp equality rows and duals") {
    LinearProgram lp(2);
    lp.objective = {1.0, 2.0};
    lp.add_eq({1.0, 1.0}, 1.0);
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(1.0));
    REQUIRE(sol.eq_duals.size() == 1);
    CHECK(sol.eq_duals[0] == doctest::Approx(2.0));
    CHECK(sol.duality_gap <= 1e-8);
}

TEST_CASE("lp infeasible and unbounded detection") {
    LinearProgram infeasible(1);
    infeasible.objective = {1.0};
    infeasible.add_ineq({1.0}, -1.0);
    CHECK(solve_lp(infeasible).status == LpStatus::infeasible);

    LinearProgram unbounded(1);
    unbounded.objective = {1.0};
    CHECK(solve_lp(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("lp negative lower bounds and upper bounds") {
    LinearProgram lp(2);
    lp.objective = {1.0, -1.0};
    lp.lower = {-2.0, -3.0};
    lp.upper = {std::optional<double>(1.5), std::optional<double>(4.0)};
    lp.add_ineq({1.0, 1.0}, 1.0);
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(4.5));  // x = 1.5, y = -3
    CHECK(sol.duality_gap <= 1e-8);
}

TEST_CASE("lp agrees with vertex enumeration on random feasible instances") {
    for (int seed = 0; seed < 20; ++seed) {
        CounterRng rng(501 + seed);
        int n = 2 + rng.next_int(5);
        int m = 2 + rng.next_int(4);
        LinearProgram lp(n);
        std::vector<double> interior(n);
        for (double& v : interior) v = rng.next_double();
        for (int j = 0; j < n; ++j) {
            lp.objective[j] = rng.next_double() * 2.0 - 1.0;
            lp.upper[j] = interior[j] + 0.5 + rng.next_double();
        }
        for (int r = 0; r < m; ++r) {
            std::vector<double> row(n);
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) {
                row[j] = rng.next_double() * 2.0 - 1.0;
                lhs += row[j] * interior[j];
            }
            lp.add_ineq(std::move(row), lhs + 0.1 + rng.next_double());
        }
        double expected = oracles::lp_vertex_enumeration(lp);
        LpSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.value == doctest::Approx(expected).epsilon(1e-6));
        CHECK(sol.duality_gap <= 1e-8);
        CHECK(sol.primal_residual <= 1e-8);
    }
}

TEST_CASE("matrix game closed forms") {
    MatrixGame identity;
    identity.rows = identity.cols = 2;
    identity.payoff = {1.0, 0.0, 0.0, 1.0};
    GameSolution sol = game_value(identity);
    CHECK(sol.value == doctest::Approx(0.5));
    CHECK(sol.row_strategy[0] == doctest::Approx(0.5));
    CHECK(sol.col_strategy[0] == doctest::Approx(0.5));

    // fully mixed 2x2: v = (ad - bc) / (a + d - b - c)
    MatrixGame mixed;
    mixed.rows = mixed.cols = 2;
    mixed.payoff = {3.0, 1.0, 2.0, 4.0};
    CHECK(game_value(mixed).value == doctest::Approx((3.0 * 4 - 1.0 * 2) / (3.0 + 4 - 1 - 2)));

    MatrixGame dominant;
    dominant.rows = 2;
    dominant.cols = 3;
    dominant.payoff = {1.0, 1.0, 1.0, 0.0, 0.5, 0.2};
    GameSolution dom = game_value(dominant);
    CHECK(dom.value == doctest::Approx(1.0));
    CHECK(dom.row_strategy[0] == doctest::Approx(1.0));
}

TEST_CASE("matrix game saddle inequalities and fictitious-play bracket") {
    for (int seed = 0; seed < 20; ++seed) {
        CounterRng rng(7000 + seed);
        MatrixGame game;
        game.rows = game.cols = 4;
        game.payoff.resize(16);
        for (double& v : game.payoff) v = rng.next_double() * 2.0 - 1.0;
        GameSolution sol = game_value(game);

        // saddle inequalities against every pure strategy (minimax = maximin)
        for (int j = 0; j < 4; ++j) {
            double payoff = 0.0;
            for (int i = 0; i < 4; ++i) payoff += sol.row_strategy[i] * game.at(i, j);
            CHECK(payoff >= sol.value - 1e-8);
        }
        for (int i = 0; i < 4; ++i) {
            double payoff = 0.0;
            for (int j = 0; j < 4; ++j) payoff += sol.col_strategy[j] * game.at(i, j);
            CHECK(payoff <= sol.value + 1e-8);
        }

        auto bracket = oracles::fictitious_play(game, 100000);
        CHECK(sol.value >= bracket.lower - 1e-9);
        CHECK(sol.value <= bracket.upper + 1e-9);
    }
}

TEST_CASE("matrix game invariances") {
    CounterRng rng(31337);
    MatrixGame game;
    game.rows = 3;
    game.cols = 4;
    game.payoff.resize(12);
    for (double& v : game.payoff) v = rng.next_double();
    double base = game_value(game).value;

    MatrixGame shifted = game;
    for (double& v : shifted.payoff) v += 2.75;
    CHECK(game_value(shifted).value == doctest::Approx(base + 2.75));

    MatrixGame permuted;
    permuted.rows = 3;
    permuted.cols = 4;
    permuted.payoff.resize(12);
    int row_perm[3] = {2, 0, 1};
    int col_perm[4] = {3, 1, 0, 2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) permuted.at(i, j) = game.at(row_perm[i], col_perm[j]);
    CHECK(game_value(permuted).value == doctest::Approx(base));

    // strategies are distributions
    GameSolution sol = game_value(game);
    double row_total = 0.0, col_total = 0.0;
    for (double p : sol.row_strategy) {
        CHECK(p >= 0.0);
        row_total += p;
    }
    for (double p : sol.col_strategy) {
        CHECK(p >= 0.0);
        col_total += p;
    }
    CHECK(row_total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(col_total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("matrix game rejects malformed input") {
    MatrixGame empty;
    CHECK_THROWS_AS(game_value(empty), validation_error);
    MatrixGame nan_game;
    nan_game.rows = nan_game.cols = 1;
    nan_game.payoff = {std::nan("")};
    CHECK_THROWS_AS(game_value(nan_game), validation_error);
}
