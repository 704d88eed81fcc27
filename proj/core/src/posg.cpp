#include "posg/posg.hpp"

#include <cmath>
#include <sstream>

#include "posg/errors.hpp"

namespace posg {

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& issue : issues)
        out << issue.location << ": " << issue.message << " (value " << issue.value << ")\n";
    return out.str();
}

namespace {

void check_row(ValidationReport& report, const double* row, int n, const std::string& location) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (row[i] < 0.0)
            report.issues.push_back({location + "[" + std::to_string(i) + "]",
                                     "negative probability", row[i]});
        sum += row[i];
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
        report.issues.push_back({location, "row does not sum to 1", sum});
}

}  // namespace

ValidationReport validate_posg(const Posg& model) {
    ValidationReport report;
    const int ns = model.num_states();
    if (ns == 0) {
        report.issues.push_back({"states", "model has no states", 0});
        return report;
    }
    if (model.initial < 0 || model.initial >= ns)
        report.issues.push_back({"initial", "initial state out of range",
                                 static_cast<double>(model.initial)});
    if (model.label.size() != static_cast<std::size_t>(ns))
        report.issues.push_back({"label", "labeling is not total on states",
                                 static_cast<double>(model.label.size())});

    for (int s = 0; s < ns; ++s)
        for (int ud = 0; ud < model.num_actions_d(); ++ud)
            for (int ua = 0; ua < model.num_actions_a(); ++ua)
                check_row(report, &model.trans[(((static_cast<std::size_t>(s) * model.num_actions_d()) + ud) *
                                                    model.num_actions_a() +
                                                ua) *
                                               ns],
                          ns,
                          "transitions(" + model.states[s] + "," + model.actions_d[ud] + "," +
                              model.actions_a[ua] + ")");

    for (int s = 0; s < ns; ++s) {
        check_row(report, &model.obs_kernel_d[static_cast<std::size_t>(s) * model.num_obs_d()],
                  model.num_obs_d(), "obs_kernel_d(" + model.states[s] + ")");
        check_row(report, &model.obs_kernel_a[static_cast<std::size_t>(s) * model.num_obs_a()],
                  model.num_obs_a(), "obs_kernel_a(" + model.states[s] + ")");
    }
    return report;
}

ValidationReport validate_fsc(const Fsc& fsc) {
    ValidationReport report;
    if (fsc.num_states <= 0) {
        report.issues.push_back({"num_states", "FSC has no states", 0});
        return report;
    }
    if (fsc.initial < 0 || fsc.initial >= fsc.num_states)
        report.issues.push_back({"initial", "initial node out of range",
                                 static_cast<double>(fsc.initial)});
    const int labels = fsc.num_labels();
    for (int g = 0; g < fsc.num_states; ++g)
        for (int o = 0; o < fsc.num_obs; ++o) {
            std::string loc = "mu(g=" + std::to_string(g) + ",o=" + std::to_string(o) + ")";
            const std::size_t base = (static_cast<std::size_t>(g) * fsc.num_obs + o) * labels;
            check_row(report, &fsc.mu[base], labels, loc);
            bool live = false;
            for (int z = 0; z < labels; ++z) {
                if (fsc.mu[base + z] > 0.0 && !fsc.mask[base + z])
                    report.issues.push_back({loc, "mu positive outside the mask",
                                             fsc.mu[base + z]});
                if (fsc.mask[base + z]) live = true;
            }
            if (!live)
                report.issues.push_back({"mask(g=" + std::to_string(g) + ",o=" + std::to_string(o) + ")",
                                         "mask row has no allowed label", 0});
        }
    return report;
}

Fsc uniform_fsc(int num_states, int initial, int num_obs, int num_actions,
                const std::vector<char>& mask, Agent agent) {
    Fsc fsc;
    fsc.agent = agent;
    fsc.num_states = num_states;
    fsc.initial = initial;
    fsc.num_obs = num_obs;
    fsc.num_actions = num_actions;
    const int labels = fsc.num_labels();
    if (mask.size() != static_cast<std::size_t>(num_states) * num_obs * labels)
        throw validation_error("mask has the wrong shape");
    fsc.mask = mask;
    fsc.mu.assign(mask.size(), 0.0);
    for (int g = 0; g < num_states; ++g)
        for (int o = 0; o < num_obs; ++o) {
            const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
            int live = 0;
            for (int z = 0; z < labels; ++z)
                if (mask[base + z]) ++live;
            if (live == 0)
                throw validation_error("mask row all-zero at (g=" + std::to_string(g) +
                                       ",o=" + std::to_string(o) + ")");
            for (int z = 0; z < labels; ++z)
                if (mask[base + z]) fsc.mu[base + z] = 1.0 / live;
        }
    return fsc;
}

std::vector<char> full_mask(int num_states, int num_obs, int num_actions) {
    return std::vector<char>(
        static_cast<std::size_t>(num_states) * num_obs * num_states * num_actions, 1);
}

std::vector<double> reparam(const Fsc& fsc, const Posg& model) {
    const bool defender = fsc.agent == Agent::defender;
    const int num_obs = defender ? model.num_obs_d() : model.num_obs_a();
    if (num_obs != fsc.num_obs) throw validation_error("FSC observation set does not match the model");
    const int labels = fsc.num_labels();
    std::vector<double> out(
        static_cast<std::size_t>(model.num_states()) * fsc.num_states * labels, 0.0);
    for (int s = 0; s < model.num_states(); ++s)
        for (int g = 0; g < fsc.num_states; ++g)
            for (int o = 0; o < num_obs; ++o) {
                double w = defender ? model.od(s, o) : model.oa(s, o);
                if (w == 0.0) continue;
                const std::size_t src = (static_cast<std::size_t>(g) * num_obs + o) * labels;
                const std::size_t dst = (static_cast<std::size_t>(s) * fsc.num_states + g) * labels;
                for (int z = 0; z < labels; ++z) out[dst + z] += w * fsc.mu[src + z];
            }
    return out;
}

}  // namespace posg
