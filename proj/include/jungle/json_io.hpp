#pragma once

#include <cstdint>
#include <set>
#include <string>

#include <json.hpp>

#include "jungle/invasion.hpp"
#include "jungle/params.hpp"
#include "jungle/simulate.hpp"
#include "jungle/stability.hpp"

namespace jungle {

inline constexpr const char* kSchemaVersion = "1";

// FNV-1a 64-bit over the canonical dump; stamped into every JSON output so
// results can be traced back to their exact configuration.
inline std::string config_hash(const nlohmann::json& config) {
    const std::string s = config.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Parameters: {"e_A":..., "e_B":..., "e_D":..., "c_A":..., "c_B":..., "c_D":...}
// ---------------------------------------------------------------------------

inline nlohmann::json params_to_json(const InteractionParams& p) {
    return {{"e_A", p.e_A}, {"e_B", p.e_B}, {"e_D", p.e_D},
            {"c_A", p.c_A}, {"c_B", p.c_B}, {"c_D", p.c_D}};
}

inline InteractionParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw PreconditionError("params: JSON object expected");
    InteractionParams p{};
    const std::pair<const char*, double*> fields[] = {
        {"e_A", &p.e_A}, {"e_B", &p.e_B}, {"e_D", &p.e_D},
        {"c_A", &p.c_A}, {"c_B", &p.c_B}, {"c_D", &p.c_D}};
    for (const auto& [key, dst] : fields) {
        if (!j.contains(key) || !j.at(key).is_number())
            throw PreconditionError(std::string("params: missing or non-numeric field ") + key);
        *dst = j.at(key).get<double>();
    }
    if (!p.all_positive())
        throw PreconditionError("params: all six rates must be strictly positive and finite");
    return p;
}

// ---------------------------------------------------------------------------
// Stability report
// ---------------------------------------------------------------------------

inline nlohmann::json sigma_to_json(const ExtendedReal& s) {
    if (s.is_finite()) return s.value();
    return s.str();  // "+inf" / "-inf"
}

inline nlohmann::json cycle_report_to_json(const CycleStabilityReport& rep) {
    nlohmann::json j;
    j["id"] = rep.cycle_id;
    j["nodes"] = rep.nodes;
    j["class"] = to_string(rep.classification);
    nlohmann::json sigmas = nlohmann::json::array();
    nlohmann::json conns = nlohmann::json::array();
    for (const auto& c : rep.connections) {
        sigmas.push_back(sigma_to_json(c.sigma));
        conns.push_back({{"from", c.from}, {"to", c.to}, {"sigma", sigma_to_json(c.sigma)}});
    }
    j["sigma"] = sigmas;
    j["connections"] = conns;
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [name, value] : rep.quantities) q[name] = value;
    j["quantities"] = q;
    j["notes"] = rep.notes;
    return j;
}

inline nlohmann::json analysis_to_json(const StabilityAnalysis& a) {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["params"] = params_to_json(a.params);
    j["assumptions"] = {
        {"standing_assumptions", a.standing_assumptions},
        {"min_c_gt_max_e", a.params.all_positive() && a.params.min_c() > a.params.max_e()},
        {"e_A_gt_e_B", a.params.e_A > a.params.e_B},
        {"c_A_gt_c_B", a.params.c_A > a.params.c_B},
        {"all_e_below_one", a.all_e_below_one},
        {"violations", a.violations},
    };
    j["convention"] =
        "stability indices refer to the connecting trajectory inside the coordinate plane";
    nlohmann::json cycles = nlohmann::json::array();
    for (const auto& c : a.cycles) cycles.push_back(cycle_report_to_json(c));
    j["cycles"] = cycles;

    nlohmann::json rho_products = nlohmann::json::array();
    nlohmann::json rho = nlohmann::json::object();
    for (const auto& c : a.network.cycles) {
        rho_products.push_back(c.product);
        nlohmann::json per = nlohmann::json::object();
        for (const auto& [node, r] : c.rho_per_node) per[std::to_string(node)] = r;
        rho[c.cycle_id] = {{"rho_per_node", per},
                           {"product", c.product},
                           {"closed_form", c.closed_form},
                           {"consistent", c.consistent}};
    }
    j["network"] = {
        {"rho_products", rho_products},
        {"rho", rho},
        {"sufficient_condition", a.network.sufficient_condition},
        {"all_products_above_one", a.network.all_products_above_one},
        {"asymptotically_stable", a.network.asymptotically_stable},
        {"closed_form_consistent", a.network.closed_form_consistent},
    };
    return j;
}

// ---------------------------------------------------------------------------
// Itinerary
// ---------------------------------------------------------------------------

inline nlohmann::json itinerary_to_json(const Itinerary& itin) {
    nlohmann::json visits = nlohmann::json::array();
    for (const auto& v : itin.visits)
        visits.push_back({{"node", v.node},
                          {"enter", v.enter},
                          {"exit", v.exit},
                          {"dwell", v.dwell()},
                          {"closed", v.closed}});
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["visits"] = visits;
    return j;
}

// ---------------------------------------------------------------------------
// Invasion scenario and prediction
// ---------------------------------------------------------------------------

inline InvasionScenario scenario_from_json(const nlohmann::json& j, InteractionParams* params_out) {
    if (!j.is_object() || !j.contains("alien") || !j.at("alien").is_string())
        throw PreconditionError("scenario: field \"alien\" (\"weak\"|\"strong\") required");
    const std::string kind = j.at("alien").get<std::string>();
    AlienStrength strength;
    if (kind == "weak")
        strength = AlienStrength::Weak;
    else if (kind == "strong")
        strength = AlienStrength::Strong;
    else
        throw PreconditionError("scenario: alien must be \"weak\" or \"strong\"");

    std::array<std::string, 3> base{"S1", "S2", "S3"};
    if (j.contains("base")) {
        const auto& b = j.at("base");
        if (!b.is_array() || b.size() != 3)
            throw PreconditionError("scenario: base must be an array of three labels");
        for (size_t i = 0; i < 3; ++i) base[i] = b.at(i).get<std::string>();
    }
    if (params_out) {
        if (!j.contains("params"))
            throw PreconditionError("scenario: field \"params\" required");
        *params_out = params_from_json(j.at("params"));
    }
    return build_scenario(strength, base);
}

inline nlohmann::json prediction_to_json(const InvasionScenario& scn,
                                         const OutcomePrediction& out) {
    nlohmann::json mapping = nlohmann::json::object();
    for (int l = 0; l < 4; ++l)
        mapping[scn.species_name(l)] = scn.to_network[static_cast<size_t>(l)];
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["alien"] = to_string(scn.strength);
    j["alien_label"] = scn.alien_label;
    j["base"] = scn.base_labels;
    j["node_mapping"] = mapping;
    j["survivors"] = out.survivors;
    j["extinct"] = out.extinct;
    if (out.replaced)
        j["replaced"] = *out.replaced;
    else
        j["replaced"] = nullptr;
    j["stable_cycle_id"] = out.stable_cycle_id;
    j["stable_cycle_species"] = out.stable_cycle_species;
    j["alien_survives"] = out.alien_survives;
    if (scn.strength == AlienStrength::Strong)
        j["weakest_prey_rule"] = weakest_prey_rule(scn);
    return j;
}

}  // namespace jungle
