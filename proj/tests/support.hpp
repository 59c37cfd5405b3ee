#pragma once

// Random instance generators and brute-force oracles shared by the test suites.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "lohe/digraph.hpp"
#include "lohe/dynamics.hpp"

namespace lohe::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<Index> random_permutation(Index m, Rng& rng) {
    std::vector<Index> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Weights in (0, 3]; every pair gets an edge with probability `density`.
inline Matrix random_weights(Index m, double density, Rng& rng) {
    Matrix a = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            if (i != j && uniform(rng, 0.0, 1.0) < density) a(i, j) = 3.0 - uniform(rng, 0.0, 3.0);
        }
    }
    return a;
}

/// Random digraph containing a directed spanning tree rooted at a random node.
inline Digraph random_spanning_tree_graph(Index m, Rng& rng, double extra_density = 0.2) {
    Matrix a = random_weights(m, extra_density, rng);
    const auto order = random_permutation(m, rng);
    for (Index p = 1; p < m; ++p) {
        const Index parent = order[std::uniform_int_distribution<Index>(0, p - 1)(rng)];
        a(order[p], parent) = 3.0 - uniform(rng, 0.0, 3.0);  // parent -> child
    }
    return Digraph(std::move(a));
}

/// Random strongly connected digraph: a Hamiltonian cycle plus extra edges.
inline Digraph random_strongly_connected(Index m, Rng& rng, double extra_density = 0.3) {
    Matrix a = random_weights(m, extra_density, rng);
    const auto order = random_permutation(m, rng);
    for (Index p = 0; p < m && m > 1; ++p) {
        a(order[(p + 1) % m], order[p]) = 3.0 - uniform(rng, 0.0, 3.0);
    }
    return Digraph(std::move(a));
}

inline StateMatrix random_states(Index m, Index n, Rng& rng) {
    std::normal_distribution<double> normal;
    Matrix r(m, n);
    for (Index i = 0; i < m; ++i) {
        for (Index c = 0; c < n; ++c) r(i, c) = normal(rng);
    }
    return StateMatrix::normalized(std::move(r));
}

/// Nodes reachable from `root` following information flow (j -> i when a_ij > 0).
inline std::vector<bool> reachable_from(const Digraph& g, Index root) {
    std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
    std::queue<Index> q;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
        const Index j = q.front();
        q.pop();
        for (Index i = 0; i < g.size(); ++i) {
            if (g.weight(i, j) > 0.0 && !seen[i]) {
                seen[i] = true;
                q.push(i);
            }
        }
    }
    return seen;
}

/// Brute force: some node reaches every other node.
inline bool has_root_brute_force(const Digraph& g) {
    for (Index v = 0; v < g.size(); ++v) {
        const auto seen = reachable_from(g, v);
        if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return true;
    }
    return false;
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace lohe::testing
