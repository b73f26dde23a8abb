// Library walkthrough: classify the cycles, check the network condition,
// run a trajectory, and predict an invasion outcome.

#include <iostream>

#include "jungle/invasion.hpp"
#include "jungle/model.hpp"
#include "jungle/simulate.hpp"
#include "jungle/stability.hpp"

int main() {
    const auto p = jungle::reference_params();

    const auto analysis = jungle::analyze_stability(p);
    std::cout << "cycle classes:";
    for (const auto& c : analysis.cycles)
        std::cout << " " << c.cycle_id << "=" << jungle::to_string(c.classification);
    std::cout << "\nnetwork asymptotically stable: "
              << (analysis.network.asymptotically_stable ? "yes" : "no") << "\n";

    const auto traj = jungle::integrate(p, {0.1, 0.1, 1.0, 0.1}, 200.0);
    const auto itin = jungle::extract_itinerary(traj);
    std::cout << "visits:";
    for (const auto& v : itin.visits) std::cout << " xi" << v.node;
    std::cout << "\nextinct:";
    for (int s : jungle::detect_extinction(traj)) std::cout << " S" << s;
    std::cout << "\n";

    const auto scn = jungle::build_scenario(jungle::AlienStrength::Strong);
    const auto out = jungle::predict_outcome(scn, p);
    std::cout << "strong alien: replaced = " << out.replaced.value_or("none") << ", survivors =";
    for (const auto& s : out.survivors) std::cout << " " << s;
    std::cout << "\n";
    return 0;
}
