#include "posg/grid_world.hpp"

#include <algorithm>

#include "posg/errors.hpp"

namespace posg {

namespace {

std::vector<int> neighbors(int i, int m, int n) {
    std::vector<int> out;
    int x = i % m, y = i / m;
    if (x + 1 < m) out.push_back(i + 1);
    if (x > 0) out.push_back(i - 1);
    if (y + 1 < n) out.push_back(i + m);
    if (y > 0) out.push_back(i - m);
    return out;
}

// Move target for an action, or -1 when the move would leave the grid.
int move_target(int i, int action, int m, int n) {
    int x = i % m, y = i / m;
    switch (action) {
        case 0: return x + 1 < m ? i + 1 : -1;  // R
        case 1: return x > 0 ? i - 1 : -1;      // L
        case 2: return y + 1 < n ? i + m : -1;  // U
        default: return y > 0 ? i - m : -1;     // D
    }
}

}  // namespace

Posg grid_world(const GridConfig& config) {
    if (config.width < 1 || config.height < 1)
        throw validation_error("grid dimensions must be at least 1x1");
    const int m = config.width, n = config.height;
    const int ns = m * n;
    for (int i : config.obstacles)
        if (i < 0 || i >= ns) throw validation_error("obstacle index out of range: " + std::to_string(i));
    for (int i : config.targets)
        if (i < 0 || i >= ns) throw validation_error("target index out of range: " + std::to_string(i));
    for (int i : config.obstacles)
        if (std::find(config.targets.begin(), config.targets.end(), i) != config.targets.end())
            throw validation_error("state " + std::to_string(i) + " is both obstacle and target");

    Posg g;
    g.states.reserve(ns);
    for (int i = 0; i < ns; ++i) g.states.push_back("s" + std::to_string(i));
    g.initial = 0;
    g.actions_d = {"R", "L", "U", "D"};
    g.actions_a = {"A", "NA"};
    g.obs_d = {"correct", "wrong"};
    g.obs_a = {"correct", "wrong"};
    g.ap = {"obs", "tar"};

    g.label.assign(ns, 0);
    for (int i : config.obstacles) g.label[i] = letter_from_atoms(g.ap, {"obs"});
    for (int i : config.targets) g.label[i] = letter_from_atoms(g.ap, {"tar"});

    g.trans.assign(static_cast<std::size_t>(ns) * 4 * 2 * ns, 0.0);
    for (int s = 0; s < ns; ++s) {
        auto nbrs = neighbors(s, m, n);
        for (int ud = 0; ud < 4; ++ud) {
            int target = move_target(s, ud, m, n);
            for (int ua = 0; ua < 2; ++ua) {
                double p = ua == 1 ? config.p_move_na : config.p_move_a;
                if (target < 0) {
                    g.t(s, ud, ua, s) = 1.0;
                    continue;
                }
                g.t(s, ud, ua, target) = p;
                std::vector<int> spread{s};
                for (int nb : nbrs)
                    if (nb != target) spread.push_back(nb);
                for (int cell : spread) g.t(s, ud, ua, cell) += (1.0 - p) / spread.size();
            }
        }
    }

    g.obs_kernel_d.resize(static_cast<std::size_t>(ns) * 2);
    g.obs_kernel_a.resize(static_cast<std::size_t>(ns) * 2);
    for (int s = 0; s < ns; ++s) {
        double pd = config.p_d_correct;
        if (config.perfect_obs_on_labeled && g.label[s] != 0) pd = 1.0;
        g.obs_kernel_d[2 * s] = pd;
        g.obs_kernel_d[2 * s + 1] = 1.0 - pd;
        g.obs_kernel_a[2 * s] = config.p_a_correct;
        g.obs_kernel_a[2 * s + 1] = 1.0 - config.p_a_correct;
    }
    return g;
}

}  // namespace posg
