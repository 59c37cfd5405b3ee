#pragma once

#include <cstddef>
#include <vector>

#include "lohe/exceptions.hpp"
#include "lohe/types.hpp"

namespace lohe {

/// Weighted digraph on nodes 0..m-1.
///
/// weight(i, j) = a_ij > 0 encodes the edge j -> i: node i listens to node j.
/// Self-loops are dropped on construction.
class Digraph {
public:
    explicit Digraph(Matrix weights);

    static Digraph empty(Index m);

    Index size() const noexcept { return weights_.rows(); }
    const Matrix& weights() const noexcept { return weights_; }
    double weight(Index i, Index j) const { return weights_(i, j); }

    /// Nodes that receive information from `j` (i with a_ij > 0), ascending.
    std::vector<Index> successors(Index j) const;

    /// Induced subgraph on `nodes`, in the given order.
    Digraph subgraph(const std::vector<Index>& nodes) const;

    /// Relabels node i as perm[i].
    Digraph permuted(const std::vector<Index>& perm) const;

private:
    Matrix weights_;
};

/// Row-zero-sum Laplacian L = D - A.
Matrix laplacian(const Digraph& g);

/// Strongly connected components arranged so that every condensation edge
/// points from an earlier block to a later one (sources first).
struct Condensation {
    std::vector<std::size_t> component_of;
    std::vector<std::vector<Index>> blocks;  // node lists, each ascending
    std::vector<Index> block_sizes;
    std::vector<Index> cumulative_sizes;
    std::size_t source_count = 0;

    std::size_t block_count() const noexcept { return blocks.size(); }

    /// Concatenated blocks; order()[p] is the node placed at position p.
    std::vector<Index> order() const;
};

Condensation condensation(const Digraph& g);

bool has_spanning_tree(const Condensation& c);

/// Positive left null vector of a strongly connected block Laplacian,
/// normalised to sum 1. Throws NotStronglyConnected otherwise.
Vector left_perron(const Matrix& block_laplacian);

/// Stacked Perron weights [b1, eps b2, ..., eps^(mu-1) b_mu].
struct BetaWeights {
    std::vector<Vector> per_block;
    double epsilon = 0.1;
    Vector stacked;        // block order
    Vector node_order;     // stacked, permuted back to original labels
    double beta_min = 0.0;
    double beta_max = 0.0;

    Index size() const noexcept { return node_order.size(); }
    std::size_t block_count() const noexcept { return per_block.size(); }
};

inline constexpr double kDefaultEpsilon = 0.1;

BetaWeights beta_weights(const Condensation& c, const Digraph& g, double epsilon = kDefaultEpsilon);

}  // namespace lohe
