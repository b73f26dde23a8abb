#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jungle/graph.hpp"
#include "jungle/params.hpp"
#include "jungle/stability.hpp"

namespace jungle {

// ---------------------------------------------------------------------------
// Invasion of a three-species rock-paper-scissors population by an alien.
// A weak alien beats exactly one of the original species; a strong alien
// beats exactly two. Either tournament is isomorphic to the four-species
// predation digraph, so every prediction reduces to the cycle classification
// after relabeling.
// ---------------------------------------------------------------------------

enum class AlienStrength { Weak, Strong };

inline std::string to_string(AlienStrength s) {
    return s == AlienStrength::Weak ? "weak" : "strong";
}

struct InvasionScenario {
    AlienStrength strength = AlienStrength::Weak;
    // base[0] beats base[1] beats base[2] beats base[0]
    std::array<std::string, 3> base_labels{"S1", "S2", "S3"};
    std::string alien_label = "A_w";

    // Predation tournament over local ids 0..2 = base species, 3 = alien.
    std::set<std::pair<int, int>> edges;  // winner -> loser
    std::array<int, 4> to_network{0, 0, 0, 0};  // local id -> node 1..4

    static constexpr int kAlien = 3;

    std::string species_name(int local) const {
        return local == kAlien ? alien_label : base_labels[static_cast<size_t>(local)];
    }
    int local_at_node(int node) const {
        for (int l = 0; l < 4; ++l)
            if (to_network[static_cast<size_t>(l)] == node) return l;
        throw PreconditionError("InvasionScenario: bad node id");
    }
    std::string species_at_node(int node) const { return species_name(local_at_node(node)); }
};

namespace detail {

// Unique (here) digraph isomorphism onto the predation tournament, found by
// exhausting the 24 vertex assignments.
inline std::optional<std::array<int, 4>> map_onto_predation(
    const std::set<std::pair<int, int>>& edges) {
    const Digraph target = jungle_predation();
    std::array<int, 4> perm{1, 2, 3, 4};
    std::sort(perm.begin(), perm.end());
    do {
        bool ok = true;
        for (const auto& [u, v] : edges)
            if (!target.has_edge(perm[static_cast<size_t>(u)], perm[static_cast<size_t>(v)])) {
                ok = false;
                break;
            }
        if (ok && edges.size() == target.edges.size()) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace detail

// Tournament for a given set of base species the alien wins against
// (locals 0..2); every other confrontation goes to the base species.
inline std::set<std::pair<int, int>> invasion_tournament(const std::set<int>& alien_wins) {
    std::set<std::pair<int, int>> e = {{0, 1}, {1, 2}, {2, 0}};
    for (int l = 0; l < 3; ++l) {
        if (alien_wins.count(l))
            e.insert({InvasionScenario::kAlien, l});
        else
            e.insert({l, InvasionScenario::kAlien});
    }
    return e;
}

inline InvasionScenario build_scenario(AlienStrength strength,
                                       const std::array<std::string, 3>& base_labels = {
                                           "S1", "S2", "S3"}) {
    InvasionScenario scn;
    scn.strength = strength;
    scn.base_labels = base_labels;
    scn.alien_label = strength == AlienStrength::Weak ? "A_w" : "A_s";
    // Convention: the third base label is the alien's sole prey (weak) or its
    // sole predator (strong).
    const std::set<int> wins =
        strength == AlienStrength::Weak ? std::set<int>{2} : std::set<int>{0, 1};
    scn.edges = invasion_tournament(wins);
    const auto mapping = detail::map_onto_predation(scn.edges);
    if (!mapping)
        throw StructuralError("build_scenario: tournament not isomorphic to the game digraph");
    scn.to_network = *mapping;
    return scn;
}

// Scenario from an explicit alien win set; rejects tournaments that do not
// relabel onto the game (e.g. an alien beating all three).
inline InvasionScenario build_scenario_from_wins(const std::set<int>& alien_wins,
                                                 const std::array<std::string, 3>& base_labels = {
                                                     "S1", "S2", "S3"}) {
    InvasionScenario scn;
    scn.strength = alien_wins.size() >= 2 ? AlienStrength::Strong : AlienStrength::Weak;
    scn.base_labels = base_labels;
    scn.alien_label = "A";
    scn.edges = invasion_tournament(alien_wins);
    const auto mapping = detail::map_onto_predation(scn.edges);
    if (!mapping)
        throw StructuralError(
            "build_scenario_from_wins: tournament not isomorphic to the game digraph");
    scn.to_network = *mapping;
    return scn;
}

struct UnclassifiedError : StructuralError {
    using StructuralError::StructuralError;
};

struct OutcomePrediction {
    std::set<std::string> survivors;
    std::string extinct;                  // species at the unstable-only node
    std::optional<std::string> replaced;  // original ousted by a strong alien
    std::string stable_cycle_id;          // network cycle id after mapping
    std::vector<std::string> stable_cycle_species;  // cycle nodes in scenario labels
    bool alien_survives = false;
};

inline OutcomePrediction predict_outcome(const InvasionScenario& scn,
                                         const InteractionParams& p) {
    const StabilityAnalysis analysis = analyze_stability(p);
    if (!analysis.standing_assumptions) {
        std::string why = "predict_outcome: standing assumptions violated";
        for (const auto& v : analysis.violations) why += "; " + v;
        throw UnclassifiedError(why);
    }
    const CycleStabilityReport* eas = nullptr;
    for (const auto& c : analysis.cycles) {
        if (c.classification == CycleClass::Unclassified)
            throw UnclassifiedError("predict_outcome: cycle " + c.cycle_id + " unclassified");
        if (c.classification == CycleClass::EAS) {
            if (eas) throw UnclassifiedError("predict_outcome: multiple e.a.s. cycles");
            eas = &c;
        }
    }
    if (!eas) throw UnclassifiedError("predict_outcome: no e.a.s. cycle");

    OutcomePrediction out;
    out.stable_cycle_id = eas->cycle_id;
    std::set<int> cycle_nodes(eas->nodes.begin(), eas->nodes.end());
    for (int node : eas->nodes) out.stable_cycle_species.push_back(scn.species_at_node(node));
    for (int node = 1; node <= 4; ++node) {
        const std::string name = scn.species_at_node(node);
        if (cycle_nodes.count(node))
            out.survivors.insert(name);
        else
            out.extinct = name;
    }
    out.alien_survives = out.survivors.count(scn.alien_label) > 0;
    if (scn.strength == AlienStrength::Strong && out.extinct != scn.alien_label)
        out.replaced = out.extinct;
    return out;
}

// "The prey of the prey of the weakest": among the species losing to two
// others, the one reachable as prey-of-prey of a weakest species is the
// predicted non-survivor. Must coincide with the stability-derived
// replacement.
inline std::string weakest_prey_rule(const InvasionScenario& scn) {
    if (scn.strength != AlienStrength::Strong)
        throw PreconditionError("weakest_prey_rule: strong-alien scenario required");

    std::array<int, 4> losses{0, 0, 0, 0};
    for (const auto& [w, l] : scn.edges) ++losses[static_cast<size_t>(l)];
    std::set<int> weakest;
    for (int l = 0; l < 4; ++l)
        if (losses[static_cast<size_t>(l)] == 2) weakest.insert(l);

    auto preys = [&](int s) {
        std::set<int> out;
        for (const auto& [w, l] : scn.edges)
            if (w == s) out.insert(l);
        return out;
    };
    std::set<int> candidates;
    for (int w : weakest)
        for (int u : preys(w))
            for (int v : preys(u))
                if (weakest.count(v)) candidates.insert(v);
    if (candidates.size() != 1)
        throw StructuralError("weakest_prey_rule: rule did not single out one species");
    return scn.species_name(*candidates.begin());
}

}  // namespace jungle
