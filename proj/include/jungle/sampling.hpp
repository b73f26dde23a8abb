#pragma once

#include <random>

#include "jungle/params.hpp"

namespace jungle {

// Rejection samplers over parameter boxes e in (0.3, 0.95), c in (1.0, 2.5).
// Used by the verification suites and the property tests.

inline InteractionParams sample_standing_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> e_dist(0.3, 0.95);
    std::uniform_real_distribution<double> c_dist(1.0, 2.5);
    for (;;) {
        InteractionParams p{e_dist(rng), e_dist(rng), e_dist(rng),
                            c_dist(rng), c_dist(rng), c_dist(rng)};
        if (p.standing_assumptions() && p.min_c() > p.max_e() + 1e-3 &&
            p.e_A > p.e_B + 1e-3 && p.c_A > p.c_B + 1e-3)
            return p;
    }
}

// Standing assumptions plus the network sufficient condition
// c_B^2 c_D > (c_B + e_A) e_B e_D.
inline InteractionParams sample_network_stable_params(std::mt19937_64& rng) {
    for (;;) {
        InteractionParams p = sample_standing_params(rng);
        if (p.c_B * p.c_B * p.c_D > (p.c_B + p.e_A) * p.e_B * p.e_D) return p;
    }
}

}  // namespace jungle
