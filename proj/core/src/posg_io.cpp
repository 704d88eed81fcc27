#include "posg/posg_io.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "posg/errors.hpp"

namespace posg {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw schema_error("/", "not a valid JSON document");
    if (!doc.is_object()) throw schema_error("/", "expected a JSON object");
    return doc;
}

const json& field(const json& obj, const std::string& path, const std::string& name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw schema_error(path + "/" + name, "missing field");
    return *it;
}

std::vector<std::string> name_list(const json& value, const std::string& path) {
    if (!value.is_array() || value.empty())
        throw schema_error(path, "expected a nonempty array of names");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string())
            throw schema_error(path + "/" + std::to_string(i), "expected a string");
        names.push_back(value[i].get<std::string>());
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw schema_error(path + "/" + std::to_string(j), "duplicate name '" + names[i] + "'");
    return names;
}

int index_of(const std::vector<std::string>& names, const std::string& name,
             const std::string& path) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw schema_error(path, "unknown name '" + name + "'");
    return static_cast<int>(it - names.begin());
}

double number_at(const json& value, const std::string& path) {
    if (!value.is_number()) throw schema_error(path, "expected a number");
    return value.get<double>();
}

}  // namespace

Posg load_posg(const std::string& text) {
    json doc = parse_document(text);
    Posg model;

    model.states = name_list(field(doc, "", "states"), "/states");
    model.actions_d = name_list(field(doc, "", "actions_d"), "/actions_d");
    model.actions_a = name_list(field(doc, "", "actions_a"), "/actions_a");
    model.obs_d = name_list(field(doc, "", "obs_d"), "/obs_d");
    model.obs_a = name_list(field(doc, "", "obs_a"), "/obs_a");

    const json& ap = field(doc, "", "ap");
    if (!ap.is_array()) throw schema_error("/ap", "expected an array");
    for (std::size_t i = 0; i < ap.size(); ++i) {
        if (!ap[i].is_string()) throw schema_error("/ap/" + std::to_string(i), "expected a string");
        model.ap.push_back(ap[i].get<std::string>());
    }
    if (model.ap.size() > 16) throw schema_error("/ap", "more than 16 atomic propositions");

    const json& initial = field(doc, "", "initial");
    if (!initial.is_string()) throw schema_error("/initial", "expected a state name");
    model.initial = index_of(model.states, initial.get<std::string>(), "/initial");

    const int ns = model.num_states();
    model.label.assign(ns, 0);
    const json& label = field(doc, "", "label");
    if (!label.is_object()) throw schema_error("/label", "expected an object");
    for (auto it = label.begin(); it != label.end(); ++it) {
        int s = index_of(model.states, it.key(), "/label/" + it.key());
        if (!it.value().is_array()) throw schema_error("/label/" + it.key(), "expected an array of atoms");
        std::vector<std::string> atoms;
        for (const auto& atom : it.value()) {
            if (!atom.is_string()) throw schema_error("/label/" + it.key(), "expected atom names");
            atoms.push_back(atom.get<std::string>());
        }
        for (const auto& atom : atoms)
            if (std::find(model.ap.begin(), model.ap.end(), atom) == model.ap.end())
                throw schema_error("/label/" + it.key(), "atom '" + atom + "' not declared in ap");
        model.label[s] = letter_from_atoms(model.ap, atoms);
    }

    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    model.trans.assign(static_cast<std::size_t>(ns) * nud * nua * ns, 0.0);
    std::vector<char> seen(static_cast<std::size_t>(ns) * nud * nua, 0);
    const json& transitions = field(doc, "", "transitions");
    if (!transitions.is_array()) throw schema_error("/transitions", "expected an array");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const std::string path = "/transitions/" + std::to_string(i);
        const json& row = transitions[i];
        if (!row.is_object()) throw schema_error(path, "expected an object");
        const json& sv = field(row, path, "s");
        const json& udv = field(row, path, "ud");
        const json& uav = field(row, path, "ua");
        if (!sv.is_string() || !udv.is_string() || !uav.is_string())
            throw schema_error(path, "s/ud/ua must be names");
        int s = index_of(model.states, sv.get<std::string>(), path + "/s");
        int ud = index_of(model.actions_d, udv.get<std::string>(), path + "/ud");
        int ua = index_of(model.actions_a, uav.get<std::string>(), path + "/ua");
        std::size_t key = (static_cast<std::size_t>(s) * nud + ud) * nua + ua;
        if (seen[key]) throw schema_error(path, "duplicate transition row");
        seen[key] = 1;
        const json& dist = field(row, path, "dist");
        if (!dist.is_object()) throw schema_error(path + "/dist", "expected an object");
        for (auto it = dist.begin(); it != dist.end(); ++it) {
            int s2 = index_of(model.states, it.key(), path + "/dist/" + it.key());
            model.t(s, ud, ua, s2) = number_at(it.value(), path + "/dist/" + it.key());
        }
    }
    for (int s = 0; s < ns; ++s)
        for (int ud = 0; ud < nud; ++ud)
            for (int ua = 0; ua < nua; ++ua)
                if (!seen[(static_cast<std::size_t>(s) * nud + ud) * nua + ua])
                    throw schema_error("/transitions",
                                       "missing row for (" + model.states[s] + "," +
                                           model.actions_d[ud] + "," + model.actions_a[ua] + ")");

    auto load_kernel = [&](const char* key, const std::vector<std::string>& obs,
                           std::vector<double>& out) {
        out.assign(static_cast<std::size_t>(ns) * obs.size(), 0.0);
        const json& kernel = field(doc, "", key);
        const std::string base = std::string("/") + key;
        if (!kernel.is_object()) throw schema_error(base, "expected an object");
        std::vector<char> have(ns, 0);
        for (auto it = kernel.begin(); it != kernel.end(); ++it) {
            int s = index_of(model.states, it.key(), base + "/" + it.key());
            have[s] = 1;
            if (!it.value().is_object()) throw schema_error(base + "/" + it.key(), "expected an object");
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                int o = index_of(obs, jt.key(), base + "/" + it.key() + "/" + jt.key());
                out[static_cast<std::size_t>(s) * obs.size() + o] =
                    number_at(jt.value(), base + "/" + it.key() + "/" + jt.key());
            }
        }
        for (int s = 0; s < ns; ++s)
            if (!have[s]) throw schema_error(base, "missing row for state " + model.states[s]);
    };
    load_kernel("obs_kernel_d", model.obs_d, model.obs_kernel_d);
    load_kernel("obs_kernel_a", model.obs_a, model.obs_kernel_a);

    ValidationReport report = validate_posg(model);
    if (!report.ok()) throw validation_error("model failed validation:\n" + report.to_string());
    return model;
}

std::string save_posg(const Posg& model) {
    json doc;
    doc["schema_version"] = 1;
    doc["states"] = model.states;
    doc["initial"] = model.states[model.initial];
    doc["actions_d"] = model.actions_d;
    doc["actions_a"] = model.actions_a;
    doc["obs_d"] = model.obs_d;
    doc["obs_a"] = model.obs_a;
    doc["ap"] = model.ap;

    json label = json::object();
    for (int s = 0; s < model.num_states(); ++s) {
        json atoms = json::array();
        for (std::size_t bit = 0; bit < model.ap.size(); ++bit)
            if ((model.label[s] >> bit) & 1) atoms.push_back(model.ap[bit]);
        if (!atoms.empty()) label[model.states[s]] = atoms;
    }
    doc["label"] = label;

    json transitions = json::array();
    for (int s = 0; s < model.num_states(); ++s)
        for (int ud = 0; ud < model.num_actions_d(); ++ud)
            for (int ua = 0; ua < model.num_actions_a(); ++ua) {
                json row;
                row["s"] = model.states[s];
                row["ud"] = model.actions_d[ud];
                row["ua"] = model.actions_a[ua];
                json dist = json::object();
                for (int s2 = 0; s2 < model.num_states(); ++s2)
                    if (model.t(s, ud, ua, s2) != 0.0) dist[model.states[s2]] = model.t(s, ud, ua, s2);
                row["dist"] = dist;
                transitions.push_back(row);
            }
    doc["transitions"] = transitions;

    auto dump_kernel = [&](const std::vector<std::string>& obs, const std::vector<double>& kernel) {
        json out = json::object();
        for (int s = 0; s < model.num_states(); ++s) {
            json row = json::object();
            for (std::size_t o = 0; o < obs.size(); ++o) {
                double p = kernel[static_cast<std::size_t>(s) * obs.size() + o];
                if (p != 0.0) row[obs[o]] = p;
            }
            out[model.states[s]] = row;
        }
        return out;
    };
    doc["obs_kernel_d"] = dump_kernel(model.obs_d, model.obs_kernel_d);
    doc["obs_kernel_a"] = dump_kernel(model.obs_a, model.obs_kernel_a);
    return doc.dump(2);
}

Fsc load_fsc(const std::string& text, const std::vector<std::string>& obs_names,
             const std::vector<std::string>& action_names) {
    json doc = parse_document(text);
    Fsc fsc;

    const json& nsv = field(doc, "", "num_states");
    if (!nsv.is_number_integer() || nsv.get<int>() < 1)
        throw schema_error("/num_states", "expected a positive integer");
    fsc.num_states = nsv.get<int>();
    const json& init = field(doc, "", "initial");
    if (!init.is_number_integer()) throw schema_error("/initial", "expected an integer");
    fsc.initial = init.get<int>();
    if (fsc.initial < 0 || fsc.initial >= fsc.num_states)
        throw schema_error("/initial", "initial node out of range");
    const json& agent = field(doc, "", "agent");
    if (!agent.is_string()) throw schema_error("/agent", "expected a string");
    if (agent.get<std::string>() == "defender")
        fsc.agent = Agent::defender;
    else if (agent.get<std::string>() == "adversary")
        fsc.agent = Agent::adversary;
    else
        throw schema_error("/agent", "expected 'defender' or 'adversary'");

    fsc.num_obs = static_cast<int>(obs_names.size());
    fsc.num_actions = static_cast<int>(action_names.size());
    const int labels = fsc.num_labels();
    fsc.mu.assign(static_cast<std::size_t>(fsc.num_states) * fsc.num_obs * labels, 0.0);

    auto parse_label = [&](const std::string& key, const std::string& path) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw schema_error(path, "label must be \"g',action\"");
        int g_next;
        try {
            g_next = std::stoi(key.substr(0, comma));
        } catch (const std::exception&) {
            throw schema_error(path, "label must start with a node index");
        }
        if (g_next < 0 || g_next >= fsc.num_states) throw schema_error(path, "next node out of range");
        int u = index_of(action_names, key.substr(comma + 1), path);
        return fsc.label_of(g_next, u);
    };

    std::vector<char> seen(static_cast<std::size_t>(fsc.num_states) * fsc.num_obs, 0);
    const json& mu = field(doc, "", "mu");
    if (!mu.is_array()) throw schema_error("/mu", "expected an array");
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const std::string path = "/mu/" + std::to_string(i);
        const json& row = mu[i];
        if (!row.is_object()) throw schema_error(path, "expected an object");
        const json& gv = field(row, path, "g");
        if (!gv.is_number_integer() || gv.get<int>() < 0 || gv.get<int>() >= fsc.num_states)
            throw schema_error(path + "/g", "node index out of range");
        int g = gv.get<int>();
        const json& ov = field(row, path, "o");
        if (!ov.is_string()) throw schema_error(path + "/o", "expected an observation name");
        int o = index_of(obs_names, ov.get<std::string>(), path + "/o");
        if (seen[static_cast<std::size_t>(g) * fsc.num_obs + o])
            throw schema_error(path, "duplicate (g, o) row");
        seen[static_cast<std::size_t>(g) * fsc.num_obs + o] = 1;
        const json& dist = field(row, path, "dist");
        if (!dist.is_object()) throw schema_error(path + "/dist", "expected an object");
        for (auto it = dist.begin(); it != dist.end(); ++it) {
            int z = parse_label(it.key(), path + "/dist/" + it.key());
            fsc.mu[(static_cast<std::size_t>(g) * fsc.num_obs + o) * labels + z] =
                number_at(it.value(), path + "/dist/" + it.key());
        }
    }
    for (int g = 0; g < fsc.num_states; ++g)
        for (int o = 0; o < fsc.num_obs; ++o)
            if (!seen[static_cast<std::size_t>(g) * fsc.num_obs + o])
                throw schema_error("/mu", "missing row for (g=" + std::to_string(g) + ",o=" +
                                              obs_names[o] + ")");

    if (doc.contains("mask")) {
        fsc.mask.assign(fsc.mu.size(), 0);
        const json& mask = doc["mask"];
        if (!mask.is_array()) throw schema_error("/mask", "expected an array");
        for (std::size_t i = 0; i < mask.size(); ++i) {
            const std::string path = "/mask/" + std::to_string(i);
            const json& row = mask[i];
            if (!row.is_object()) throw schema_error(path, "expected an object");
            int g = field(row, path, "g").get<int>();
            if (g < 0 || g >= fsc.num_states) throw schema_error(path + "/g", "node index out of range");
            int o = index_of(obs_names, field(row, path, "o").get<std::string>(), path + "/o");
            const json& allowed = field(row, path, "allowed");
            if (!allowed.is_array()) throw schema_error(path + "/allowed", "expected an array");
            for (const auto& key : allowed) {
                if (!key.is_string()) throw schema_error(path + "/allowed", "expected label strings");
                int z = parse_label(key.get<std::string>(), path + "/allowed");
                fsc.mask[(static_cast<std::size_t>(g) * fsc.num_obs + o) * labels + z] = 1;
            }
        }
    } else {
        // Default structure: the support of mu.
        fsc.mask.assign(fsc.mu.size(), 0);
        for (std::size_t i = 0; i < fsc.mu.size(); ++i) fsc.mask[i] = fsc.mu[i] > 0.0 ? 1 : 0;
    }

    ValidationReport report = validate_fsc(fsc);
    if (!report.ok()) throw validation_error("FSC failed validation:\n" + report.to_string());
    return fsc;
}

std::string save_fsc(const Fsc& fsc, const std::vector<std::string>& obs_names,
                     const std::vector<std::string>& action_names) {
    json doc;
    doc["schema_version"] = 1;
    doc["num_states"] = fsc.num_states;
    doc["initial"] = fsc.initial;
    doc["agent"] = fsc.agent == Agent::defender ? "defender" : "adversary";
    json mu = json::array();
    json mask = json::array();
    for (int g = 0; g < fsc.num_states; ++g)
        for (int o = 0; o < fsc.num_obs; ++o) {
            json dist = json::object();
            json allowed = json::array();
            for (int g2 = 0; g2 < fsc.num_states; ++g2)
                for (int u = 0; u < fsc.num_actions; ++u) {
                    std::string key = std::to_string(g2) + "," + action_names[u];
                    if (fsc.prob(g, o, g2, u) != 0.0) dist[key] = fsc.prob(g, o, g2, u);
                    if (fsc.allowed(g, o, g2, u)) allowed.push_back(key);
                }
            json row;
            row["g"] = g;
            row["o"] = obs_names[o];
            row["dist"] = dist;
            mu.push_back(row);
            json mrow;
            mrow["g"] = g;
            mrow["o"] = obs_names[o];
            mrow["allowed"] = allowed;
            mask.push_back(mrow);
        }
    doc["mu"] = mu;
    doc["mask"] = mask;
    return doc.dump(2);
}

}  // namespace posg
