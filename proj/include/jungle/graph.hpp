#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jungle/params.hpp"

namespace jungle {

// Directed graph over nodes 1..n; edge (i, j) = full set of connections
// C_ij from xi_i to xi_j.
struct Digraph {
    int n = 0;
    std::set<std::pair<int, int>> edges;

    bool has_edge(int from, int to) const { return edges.count({from, to}) > 0; }
    int out_degree(int v) const {
        int d = 0;
        for (const auto& [a, b] : edges)
            if (a == v) ++d;
        return d;
    }
};

// Predation tournament (winner -> loser): S1 beats S2 and S3, S2 beats S3
// and S4, S3 beats S4, S4 beats S1.
inline Digraph jungle_predation() {
    Digraph g;
    g.n = 4;
    g.edges = {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}, {4, 1}};
    return g;
}

// Heteroclinic network of the four-species game. Connections run opposite to
// predation: the loser's equilibrium connects to the winner's.
inline Digraph jungle_network() {
    Digraph g;
    g.n = 4;
    g.edges = {{1, 4}, {2, 1}, {3, 1}, {3, 2}, {4, 2}, {4, 3}};
    return g;
}

// The three cycles of the network, as node sequences with wraparound.
inline const std::vector<std::pair<std::string, std::vector<int>>>& jungle_cycles() {
    static const std::vector<std::pair<std::string, std::vector<int>>> cycles = {
        {"S142", {1, 4, 2}},
        {"S143", {1, 4, 3}},
        {"S1432", {1, 4, 3, 2}},
    };
    return cycles;
}

// Three nodes, three full connection sets, not a cycle: b -> m, m -> e and
// the 2-dimensional short connection b -> e.
struct DeltaClique {
    int b_point = 0;
    int m_point = 0;
    int e_point = 0;

    std::pair<int, int> short_connection() const { return {b_point, e_point}; }
    std::pair<int, int> first_long() const { return {b_point, m_point}; }
    std::pair<int, int> second_long() const { return {m_point, e_point}; }

    friend bool operator==(const DeltaClique& a, const DeltaClique& b) {
        return a.b_point == b.b_point && a.m_point == b.m_point && a.e_point == b.e_point;
    }
};

// Structural detection over all 3-node subsets: exactly three edges forming
// the transitive pattern (not a 3-cycle). For the four-species network this
// yields Delta_321 and Delta_432.
inline std::vector<DeltaClique> delta_cliques(const Digraph& g) {
    std::vector<DeltaClique> out;
    for (int a = 1; a <= g.n; ++a)
        for (int b = a + 1; b <= g.n; ++b)
            for (int c = b + 1; c <= g.n; ++c) {
                const int nodes[3] = {a, b, c};
                std::vector<std::pair<int, int>> sub;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (i != j && g.has_edge(nodes[i], nodes[j]))
                            sub.emplace_back(nodes[i], nodes[j]);
                if (sub.size() != 3) continue;

                int outdeg[3] = {0, 0, 0}, indeg[3] = {0, 0, 0};
                for (const auto& [u, v] : sub)
                    for (int i = 0; i < 3; ++i) {
                        if (nodes[i] == u) ++outdeg[i];
                        if (nodes[i] == v) ++indeg[i];
                    }
                // Transitive tournament: source (2 out), sink (2 in), middle.
                int bi = -1, ei = -1, mi = -1;
                for (int i = 0; i < 3; ++i) {
                    if (outdeg[i] == 2) bi = i;
                    if (indeg[i] == 2) ei = i;
                    if (outdeg[i] == 1 && indeg[i] == 1) mi = i;
                }
                if (bi < 0 || ei < 0 || mi < 0) continue;  // 3-cycle, not a clique
                out.push_back({nodes[bi], nodes[mi], nodes[ei]});
            }
    return out;
}

inline bool is_m_point(int node, const std::vector<DeltaClique>& cliques) {
    return std::any_of(cliques.begin(), cliques.end(),
                       [&](const DeltaClique& d) { return d.m_point == node; });
}

}  // namespace jungle
