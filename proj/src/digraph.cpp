#include "lohe/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

namespace lohe {

namespace {

constexpr double kPerronPositivityFloor = 1e-8;
constexpr double kPerronResidualTol = 1e-10;

// Tarjan's algorithm with an explicit call stack. Components come out in
// reverse topological order of the condensation.
std::vector<std::vector<Index>> tarjan_sccs(const Digraph& g) {
    const Index m = g.size();
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) adj[j] = g.successors(j);

    std::vector<Index> index(m, -1), low(m, 0);
    std::vector<bool> on_stack(m, false);
    std::vector<Index> stack;
    std::vector<std::vector<Index>> sccs;
    Index counter = 0;

    struct Frame {
        Index node;
        std::size_t next_edge;
    };

    for (Index root = 0; root < m; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> calls{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!calls.empty()) {
            Frame& f = calls.back();
            const auto& succ = adj[f.node];
            if (f.next_edge < succ.size()) {
                const Index w = succ[f.next_edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    calls.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            const Index v = f.node;
            calls.pop_back();
            if (!calls.empty()) {
                low[calls.back().node] = std::min(low[calls.back().node], low[v]);
            }
            if (low[v] == index[v]) {
                std::vector<Index> scc;
                Index w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                } while (w != v);
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
        }
    }
    return sccs;
}

}  // namespace

Digraph::Digraph(Matrix weights) : weights_(std::move(weights)) {
    if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
        throw ValidationError("adjacency matrix must be square with at least one node");
    }
    for (Index i = 0; i < weights_.rows(); ++i) {
        for (Index j = 0; j < weights_.cols(); ++j) {
            const double a = weights_(i, j);
            if (!std::isfinite(a) || a < 0.0) {
                throw ValidationError("adjacency weight a(" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") must be finite and nonnegative");
            }
        }
        weights_(i, i) = 0.0;
    }
}

Digraph Digraph::empty(Index m) { return Digraph(Matrix::Zero(m, m)); }

std::vector<Index> Digraph::successors(Index j) const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i) {
        if (weights_(i, j) > 0.0) out.push_back(i);
    }
    return out;
}

Digraph Digraph::subgraph(const std::vector<Index>& nodes) const {
    const auto k = static_cast<Index>(nodes.size());
    Matrix sub(k, k);
    for (Index p = 0; p < k; ++p) {
        for (Index q = 0; q < k; ++q) sub(p, q) = weights_(nodes[p], nodes[q]);
    }
    return Digraph(std::move(sub));
}

Digraph Digraph::permuted(const std::vector<Index>& perm) const {
    if (static_cast<Index>(perm.size()) != size()) {
        throw DimensionMismatch("permutation length differs from node count");
    }
    Matrix out(size(), size());
    for (Index i = 0; i < size(); ++i) {
        for (Index j = 0; j < size(); ++j) out(perm[i], perm[j]) = weights_(i, j);
    }
    return Digraph(std::move(out));
}

Matrix laplacian(const Digraph& g) {
    Matrix l = -g.weights();
    for (Index i = 0; i < g.size(); ++i) {
        double row = 0.0;
        for (Index k = 0; k < g.size(); ++k) {
            if (k != i) row += g.weight(i, k);
        }
        l(i, i) = row;
    }
    return l;
}

std::vector<Index> Condensation::order() const {
    std::vector<Index> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

Condensation condensation(const Digraph& g) {
    auto sccs = tarjan_sccs(g);
    const std::size_t count = sccs.size();

    std::vector<std::size_t> comp(static_cast<std::size_t>(g.size()));
    for (std::size_t c = 0; c < count; ++c) {
        for (Index v : sccs[c]) comp[v] = c;
    }

    // Condensation DAG, then Kahn's algorithm; ties go to the block holding
    // the smallest node label.
    std::vector<std::vector<std::size_t>> out_edges(count);
    std::vector<std::size_t> indegree(count, 0);
    for (Index i = 0; i < g.size(); ++i) {
        for (Index j = 0; j < g.size(); ++j) {
            if (g.weight(i, j) > 0.0 && comp[j] != comp[i]) {
                auto& e = out_edges[comp[j]];
                if (std::find(e.begin(), e.end(), comp[i]) == e.end()) {
                    e.push_back(comp[i]);
                    ++indegree[comp[i]];
                }
            }
        }
    }

    Condensation result;
    for (std::size_t c = 0; c < count; ++c) {
        if (indegree[c] == 0) ++result.source_count;
    }

    using Key = std::pair<Index, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::size_t c = 0; c < count; ++c) {
        if (indegree[c] == 0) ready.emplace(sccs[c].front(), c);
    }
    std::vector<std::size_t> rank(count);
    while (!ready.empty()) {
        const std::size_t c = ready.top().second;
        ready.pop();
        rank[c] = result.blocks.size();
        result.blocks.push_back(sccs[c]);
        for (std::size_t d : out_edges[c]) {
            if (--indegree[d] == 0) ready.emplace(sccs[d].front(), d);
        }
    }

    result.component_of.resize(comp.size());
    for (std::size_t v = 0; v < comp.size(); ++v) result.component_of[v] = rank[comp[v]];

    Index running = 0;
    for (const auto& b : result.blocks) {
        result.block_sizes.push_back(static_cast<Index>(b.size()));
        running += static_cast<Index>(b.size());
        result.cumulative_sizes.push_back(running);
    }
    return result;
}

bool has_spanning_tree(const Condensation& c) { return c.source_count == 1; }

Vector left_perron(const Matrix& block_laplacian) {
    const Index m = block_laplacian.rows();
    if (m < 1 || block_laplacian.cols() != m) {
        throw DimensionMismatch("block Laplacian must be square and non-empty");
    }
    if (m == 1) return Vector::Ones(1);

    // Solve L^T b = 0 with the last equation replaced by 1^T b = 1.
    Matrix system = block_laplacian.transpose();
    system.row(m - 1).setOnes();
    Vector rhs = Vector::Zero(m);
    rhs(m - 1) = 1.0;

    Eigen::FullPivLU<Matrix> lu(system);
    if (lu.rank() < m) {
        throw NotStronglyConnected("zero eigenvalue of the block Laplacian is not simple");
    }
    Vector beta = lu.solve(rhs);
    if (!beta.allFinite() || beta.minCoeff() <= kPerronPositivityFloor) {
        throw NotStronglyConnected("block has no strictly positive left null vector");
    }
    beta /= beta.sum();
    const double residual = (beta.transpose() * block_laplacian).cwiseAbs().maxCoeff();
    if (residual > kPerronResidualTol * std::max(1.0, block_laplacian.cwiseAbs().maxCoeff())) {
        throw NotStronglyConnected("left null vector residual too large: " + std::to_string(residual));
    }
    return beta;
}

BetaWeights beta_weights(const Condensation& c, const Digraph& g, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("epsilon must be positive");
    }
    if (!has_spanning_tree(c)) {
        throw NoSpanningTree("digraph has " + std::to_string(c.source_count) +
                             " source components; a directed spanning tree needs exactly one");
    }

    BetaWeights out;
    out.epsilon = epsilon;
    out.stacked.resize(g.size());
    out.node_order.resize(g.size());

    Index offset = 0;
    double scale = 1.0;
    for (const auto& block : c.blocks) {
        Vector b = left_perron(laplacian(g.subgraph(block)));
        const auto len = static_cast<Index>(block.size());
        out.stacked.segment(offset, len) = scale * b;
        for (Index p = 0; p < len; ++p) out.node_order(block[p]) = scale * b(p);
        out.per_block.push_back(std::move(b));
        offset += len;
        scale *= epsilon;
    }
    out.beta_min = out.stacked.minCoeff();
    out.beta_max = out.stacked.maxCoeff();
    return out;
}

}  // namespace lohe
