#pragma once

#include <string>
#include <vector>

#include "posg/dra.hpp"

namespace posg {

inline constexpr double kStochasticTol = 1e-9;

/// Two-player partially observable stochastic game. All index spaces are
/// fixed by declaration order and every kernel is dense and total.
struct Posg {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::string> actions_d;
    std::vector<std::string> actions_a;
    std::vector<std::string> obs_d;
    std::vector<std::string> obs_a;
    std::vector<std::string> ap;
    std::vector<Letter> label;          // per state, bitmask over ap
    std::vector<double> trans;          // ((s*|Ud|+ud)*|Ua|+ua)*|S| + s'
    std::vector<double> obs_kernel_d;   // s*|Od| + o
    std::vector<double> obs_kernel_a;   // s*|Oa| + o

    int num_states() const { return static_cast<int>(states.size()); }
    int num_actions_d() const { return static_cast<int>(actions_d.size()); }
    int num_actions_a() const { return static_cast<int>(actions_a.size()); }
    int num_obs_d() const { return static_cast<int>(obs_d.size()); }
    int num_obs_a() const { return static_cast<int>(obs_a.size()); }

    double t(int s, int ud, int ua, int s2) const {
        return trans[(((static_cast<std::size_t>(s) * actions_d.size()) + ud) * actions_a.size() + ua) *
                         states.size() +
                     s2];
    }
    double& t(int s, int ud, int ua, int s2) {
        return trans[(((static_cast<std::size_t>(s) * actions_d.size()) + ud) * actions_a.size() + ua) *
                         states.size() +
                     s2];
    }
    double od(int s, int o) const { return obs_kernel_d[static_cast<std::size_t>(s) * obs_d.size() + o]; }
    double oa(int s, int o) const { return obs_kernel_a[static_cast<std::size_t>(s) * obs_a.size() + o]; }

    bool operator==(const Posg&) const = default;
};

enum class Agent { defender, adversary };

/// Finite state controller. mu((g', u) | g, o) is a distribution over joint
/// next-node/action labels; the boolean mask is its declared support and
/// every (g, o) row of the mask must keep at least one label alive.
struct Fsc {
    Agent agent = Agent::defender;
    int num_states = 0;
    int initial = 0;
    int num_obs = 0;
    int num_actions = 0;
    std::vector<double> mu;    // (g*num_obs + o)*num_labels() + (g'*num_actions + u)
    std::vector<char> mask;    // same shape

    int num_labels() const { return num_states * num_actions; }
    int label_of(int g_next, int u) const { return g_next * num_actions + u; }

    double prob(int g, int o, int g_next, int u) const {
        return mu[(static_cast<std::size_t>(g) * num_obs + o) * num_labels() + label_of(g_next, u)];
    }
    double& prob(int g, int o, int g_next, int u) {
        return mu[(static_cast<std::size_t>(g) * num_obs + o) * num_labels() + label_of(g_next, u)];
    }
    bool allowed(int g, int o, int g_next, int u) const {
        return mask[(static_cast<std::size_t>(g) * num_obs + o) * num_labels() + label_of(g_next, u)] != 0;
    }

    bool operator==(const Fsc&) const = default;
};

/// One violated model invariant; `location` names the offending row or entry.
struct ValidationIssue {
    std::string location;
    std::string message;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Checks stochasticity of all kernels, nonnegativity, and index ranges.
/// Collects every violation instead of stopping at the first.
ValidationReport validate_posg(const Posg& model);

/// Checks mu row stochasticity, mask support consistency
/// (mu > 0 implies mask = 1) and mask row liveness.
ValidationReport validate_fsc(const Fsc& fsc);

/// FSC whose mu spreads each (g, o) row uniformly over the mask-allowed
/// labels. Throws validation_error if some mask row is all-zero.
Fsc uniform_fsc(int num_states, int initial, int num_obs, int num_actions,
                const std::vector<char>& mask, Agent agent);

/// All-ones structure mask for the given dimensions.
std::vector<char> full_mask(int num_states, int num_obs, int num_actions);

/// Observation-marginalized controller kernel, indexed per model state:
///   out[(s * |G| + g) * labels + z] = sum_o O(o | s) mu(z | g, o),
/// with O the observation kernel matching the controller's agent. Each
/// (g, s) row is again a distribution over joint labels.
std::vector<double> reparam(const Fsc& fsc, const Posg& model);

}  // namespace posg
