#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "posg/errors.hpp"
#include "posg/grid_world.hpp"
#include "posg/posg.hpp"
#include "posg/posg_io.hpp"

using namespace posg;

namespace {

GridConfig example_config() {
    GridConfig config;
    config.width = 3;
    config.height = 2;
    config.obstacles = {4};
    config.targets = {5};
    return config;
}

int action_index(const Posg& model, const std::string& name, bool defender) {
    const auto& list = defender ? model.actions_d : model.actions_a;
    return static_cast<int>(std::find(list.begin(), list.end(), name) - list.begin());
}

}  // namespace

TEST_CASE("grid world transition law matches the worked example") {
    Posg g = grid_world(example_config());
    CHECK(g.num_states() == 6);
    int R = action_index(g, "R", true);
    int A = action_index(g, "A", false);
    int NA = action_index(g, "NA", false);

    CHECK(g.t(0, R, NA, 1) == doctest::Approx(0.8));
    CHECK(g.t(0, R, A, 1) == doctest::Approx(0.6));
    // residual spread over {s0} + neighbors(s0) minus the target {s1}
    CHECK(g.t(0, R, NA, 0) == doctest::Approx(0.1));
    CHECK(g.t(0, R, NA, 3) == doctest::Approx(0.1));
    CHECK(g.t(0, R, A, 0) == doctest::Approx(0.2));
    CHECK(g.t(0, R, A, 3) == doctest::Approx(0.2));
    // right edge self-loops under both adversary actions
    CHECK(g.t(2, R, NA, 2) == doctest::Approx(1.0));
    CHECK(g.t(2, R, A, 2) == doctest::Approx(1.0));

    // default observation kernels
    CHECK(g.od(0, 0) == doctest::Approx(0.8));
    CHECK(g.oa(0, 0) == doctest::Approx(0.6));

    CHECK(g.label[4] == letter_from_atoms(g.ap, {"obs"}));
    CHECK(g.label[5] == letter_from_atoms(g.ap, {"tar"}));
    CHECK(g.label[0] == 0);
}

TEST_CASE("grid world edge rules mirror in every direction") {
    Posg g = grid_world(example_config());
    int L = action_index(g, "L", true);
    int U = action_index(g, "U", true);
    int D = action_index(g, "D", true);
    int NA = action_index(g, "NA", false);
    CHECK(g.t(0, L, NA, 0) == doctest::Approx(1.0));  // left edge
    CHECK(g.t(0, D, NA, 0) == doctest::Approx(1.0));  // bottom edge
    CHECK(g.t(3, U, NA, 3) == doctest::Approx(1.0));  // top edge
    CHECK(g.t(1, U, NA, 4) == doctest::Approx(0.8));  // interior upward move
}

TEST_CASE("generator output validates across sizes and the probability grid") {
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= 6; ++n) {
            GridConfig config;
            config.width = m;
            config.height = n;
            if (m * n > 1) config.targets = {m * n - 1};
            CHECK(validate_posg(grid_world(config)).ok());
        }
    // full 0.1-grid sweep of the probability parameters on the 3x2 shape
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b)
            for (int c = 0; c <= 10; ++c)
                for (int d = 0; d <= 10; ++d) {
                    GridConfig config = example_config();
                    config.p_d_correct = a / 10.0;
                    config.p_a_correct = b / 10.0;
                    config.p_move_na = c / 10.0;
                    config.p_move_a = d / 10.0;
                    if (!validate_posg(grid_world(config)).ok()) {
                        CAPTURE(a);
                        CAPTURE(b);
                        CAPTURE(c);
                        CAPTURE(d);
                        REQUIRE(false);
                    }
                }
}

TEST_CASE("perfect observation flag only touches labeled states") {
    GridConfig config = example_config();
    config.perfect_obs_on_labeled = true;
    Posg g = grid_world(config);
    CHECK(g.od(4, 0) == doctest::Approx(1.0));
    CHECK(g.od(5, 0) == doctest::Approx(1.0));
    CHECK(g.od(0, 0) == doctest::Approx(0.8));
    CHECK(g.oa(4, 0) == doctest::Approx(0.6));  // adversary kernel unchanged
}

TEST_CASE("grid world rejects bad indices") {
    GridConfig config = example_config();
    config.obstacles = {17};
    CHECK_THROWS_AS(grid_world(config), validation_error);
    config = example_config();
    config.targets = {4};  // collides with the obstacle
    CHECK_THROWS_AS(grid_world(config), validation_error);
}

TEST_CASE("validate_posg pinpoints violations") {
    Posg g = grid_world(example_config());
    CHECK(validate_posg(g).ok());

    Posg broken = g;
    broken.t(0, 0, 0, 1) -= 0.1;  // row sums to 0.9
    ValidationReport report = validate_posg(broken);
    REQUIRE_FALSE(report.ok());
    CHECK(report.issues[0].location == "transitions(s0,R,A)");
    CHECK(report.issues[0].value == doctest::Approx(0.9));

    Posg negative = g;
    negative.obs_kernel_d[0] = -0.2;
    negative.obs_kernel_d[1] = 1.2;
    report = validate_posg(negative);
    REQUIRE_FALSE(report.ok());
    CHECK(report.issues[0].location == "obs_kernel_d(s0)[0]");
}

TEST_CASE("model file round-trip") {
    Posg g = grid_world(example_config());
    Posg back = load_posg(save_posg(g));
    CHECK(back == g);
}

TEST_CASE("model schema errors carry pointer-style paths") {
    CHECK_THROWS_AS(load_posg("not json"), schema_error);
    CHECK_THROWS_AS(load_posg("[1,2]"), schema_error);

    try {
        load_posg(R"({"states": []})");
        CHECK(false);
    } catch (const schema_error& e) {
        CHECK(e.path() == "/states");
    }
    try {
        load_posg(R"({"states": ["s0", "s0"]})");
        CHECK(false);
    } catch (const schema_error& e) {
        CHECK(e.path() == "/states/1");
    }

    // missing transition rows are an error, not an implicit zero row
    Posg g = grid_world(example_config());
    std::string text = save_posg(g);
    auto pos = text.find("\"transitions\"");
    REQUIRE(pos != std::string::npos);
    std::string truncated = text;
    truncated.replace(pos, std::string("\"transitions\"").size(), "\"transitions_gone\"");
    CHECK_THROWS_AS(load_posg(truncated), schema_error);
}

TEST_CASE("model validation failures surface on load") {
    Posg g = grid_world(example_config());
    g.t(0, 0, 0, 1) += 0.5;
    CHECK_THROWS_AS(load_posg(save_posg(g)), validation_error);
}

TEST_CASE("uniform_fsc spreads over the mask") {
    {
        Fsc fsc = uniform_fsc(1, 0, 1, 2, full_mask(1, 1, 2), Agent::defender);
        CHECK(fsc.prob(0, 0, 0, 0) == doctest::Approx(0.5));
        CHECK(fsc.prob(0, 0, 0, 1) == doctest::Approx(0.5));
    }
    {
        std::vector<char> mask(4, 0);
        mask[0] = 1;  // row (g=0, o=0): only label (g'=0, u=0)
        mask[3] = 1;  // row (g=0, o=1): only label (g'=0, u=1)
        Fsc fsc = uniform_fsc(1, 0, 2, 2, mask, Agent::defender);
        CHECK(fsc.prob(0, 0, 0, 0) == doctest::Approx(1.0));
        CHECK(fsc.prob(0, 1, 0, 1) == doctest::Approx(1.0));
    }
    {
        Fsc fsc = uniform_fsc(2, 0, 1, 4, full_mask(2, 1, 4), Agent::defender);
        for (int g2 = 0; g2 < 2; ++g2)
            for (int u = 0; u < 4; ++u) CHECK(fsc.prob(0, 0, g2, u) == doctest::Approx(0.125));
    }
    std::vector<char> dead(8, 0);
    dead[0] = 1;  // row (g=0,o=0) alive, row (g=0,o=1) dead
    CHECK_THROWS_AS(uniform_fsc(1, 0, 2, 4, dead, Agent::defender), validation_error);
}

TEST_CASE("fsc file round-trip and validation") {
    Posg g = grid_world(example_config());
    CounterRng rng(11);
    Fsc fsc = oracles::random_fsc(rng, 2, g.num_obs_d(), g.num_actions_d(), Agent::defender);
    std::string text = save_fsc(fsc, g.obs_d, g.actions_d);
    Fsc back = load_fsc(text, g.obs_d, g.actions_d);
    CHECK(back.num_states == fsc.num_states);
    CHECK(back.mask == fsc.mask);
    for (std::size_t i = 0; i < fsc.mu.size(); ++i)
        CHECK(back.mu[i] == doctest::Approx(fsc.mu[i]).epsilon(1e-12));

    CHECK_THROWS_AS(load_fsc(R"({"num_states": 0})", g.obs_d, g.actions_d), schema_error);
    // a missing (g, o) row violates kernel totality
    const char* missing_row = R"({
      "num_states": 1, "initial": 0, "agent": "defender",
      "mu": [{"g": 0, "o": "correct", "dist": {"0,R": 1.0}}]
    })";
    CHECK_THROWS_AS(load_fsc(missing_row, g.obs_d, g.actions_d), schema_error);
}

TEST_CASE("reparam marginalizes the observation kernel") {
    Posg g = grid_world(example_config());

    // point-mass kernel: mu_hat equals the observed row
    Posg deterministic = g;
    for (int s = 0; s < g.num_states(); ++s) {
        deterministic.obs_kernel_d[2 * s] = 1.0;
        deterministic.obs_kernel_d[2 * s + 1] = 0.0;
    }
    CounterRng rng(5);
    Fsc fsc = oracles::random_fsc(rng, 2, 2, 4, Agent::defender);
    auto hat = reparam(fsc, deterministic);
    const int labels = fsc.num_labels();
    for (int s = 0; s < g.num_states(); ++s)
        for (int gnode = 0; gnode < 2; ++gnode)
            for (int z = 0; z < labels; ++z)
                CHECK(hat[(static_cast<std::size_t>(s) * 2 + gnode) * labels + z] ==
                      doctest::Approx(fsc.mu[(static_cast<std::size_t>(gnode) * 2 + 0) * labels + z]));

    // 0.8 / 0.2 mixture, expanded by hand
    auto mixed = reparam(fsc, g);
    for (int gnode = 0; gnode < 2; ++gnode)
        for (int z = 0; z < labels; ++z) {
            double expected = 0.8 * fsc.mu[(static_cast<std::size_t>(gnode) * 2 + 0) * labels + z] +
                              0.2 * fsc.mu[(static_cast<std::size_t>(gnode) * 2 + 1) * labels + z];
            CHECK(mixed[(static_cast<std::size_t>(0) * 2 + gnode) * labels + z] ==
                  doctest::Approx(expected));
        }

    // mu uniform over two entries stays uniform under any kernel
    std::vector<char> mask(2 * 2 * (2 * 4), 0);
    for (int o = 0; o < 2; ++o) {
        mask[(0 * 2 + o) * 8 + 2] = 1;
        mask[(0 * 2 + o) * 8 + 5] = 1;
        mask[(1 * 2 + o) * 8 + 0] = 1;
    }
    Fsc uniform = uniform_fsc(2, 0, 2, 4, mask, Agent::defender);
    auto hat2 = reparam(uniform, g);
    for (int s = 0; s < g.num_states(); ++s) {
        CHECK(hat2[(static_cast<std::size_t>(s) * 2 + 0) * 8 + 2] == doctest::Approx(0.5));
        CHECK(hat2[(static_cast<std::size_t>(s) * 2 + 0) * 8 + 5] == doctest::Approx(0.5));
    }

    // stochastic per (g, s)
    for (int s = 0; s < g.num_states(); ++s)
        for (int gnode = 0; gnode < 2; ++gnode) {
            double total = 0.0;
            for (int z = 0; z < labels; ++z)
                total += mixed[(static_cast<std::size_t>(s) * 2 + gnode) * labels + z];
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
}
