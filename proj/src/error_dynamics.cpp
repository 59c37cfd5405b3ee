#include "lohe/error_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "lohe/rk4.hpp"

namespace lohe {

namespace {

constexpr double kClampTol = 1e-9;
constexpr double kBoundSlack = 1e-12;
constexpr double kMaxErrorSlack = 1e-9;

void require_same_size(Index a, Index b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " +
                                std::to_string(b) + " differ");
    }
}

// Symmetrise, zero the diagonal and clamp round-off back into [0, 2].
void restore_invariants(Matrix& e, double t) {
    if (!e.allFinite()) throw NonFinite("error matrix became non-finite at t=" + std::to_string(t));
    e = 0.5 * (e + e.transpose()).eval();
    e.diagonal().setZero();
    for (Index i = 0; i < e.rows(); ++i) {
        for (Index j = 0; j < e.cols(); ++j) {
            double& v = e(i, j);
            if (v < -kErrorRangeTol || v > 2.0 + kErrorRangeTol) {
                throw InvariantViolation("error entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         ") = " + std::to_string(v) + " left [0, 2] at t=" + std::to_string(t));
            }
            if (v < 0.0 && v >= -kClampTol) v = 0.0;
            if (v > 2.0 && v <= 2.0 + kClampTol) v = 2.0;
        }
    }
}

}  // namespace

ErrorMatrix::ErrorMatrix(Matrix entries) : e_(std::move(entries)) {
    if (e_.rows() != e_.cols()) throw DimensionMismatch("error matrix must be square");
    if (!e_.allFinite()) throw NonFinite("error matrix has non-finite entries");
    for (Index i = 0; i < e_.rows(); ++i) {
        if (e_(i, i) != 0.0) throw InvariantViolation("error matrix diagonal must be zero");
        for (Index j = i + 1; j < e_.cols(); ++j) {
            if (e_(i, j) != e_(j, i)) throw InvariantViolation("error matrix must be symmetric");
            if (e_(i, j) < -kErrorRangeTol || e_(i, j) > 2.0 + kErrorRangeTol) {
                throw InvariantViolation("error entry outside [0, 2]");
            }
        }
    }
}

ErrorMatrix error_from_states(const StateMatrix& state) {
    const Matrix& r = state.matrix();
    const Index m = state.m();
    Matrix e = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = i + 1; j < m; ++j) {
            const double v = std::min(2.0, 0.5 * (r.row(i) - r.row(j)).squaredNorm());
            e(i, j) = e(j, i) = v;
        }
    }
    return ErrorMatrix(std::move(e));
}

Vector alpha(const Matrix& e, const Digraph& g) {
    require_same_size(e.rows(), g.size(), "alpha");
    return g.weights().cwiseProduct(e).rowwise().sum();
}

Matrix riccati_rhs(const Matrix& e, const Matrix& lap, const Digraph& g, double k) {
    require_same_size(e.rows(), g.size(), "riccati_rhs");
    const Vector a = alpha(e, g);
    const Index m = e.rows();
    // For symmetric E the field is X + X^T with X = k(-L E - alpha 1^T + Lambda E),
    // which keeps the result exactly symmetric in floating point.
    const Matrix x = k * (-(lap * e) - a * Vector::Ones(m).transpose() + a.asDiagonal() * e);
    Matrix out = x + x.transpose();
    out.diagonal().setZero();
    return out;
}

Matrix riccati_rhs(const ErrorMatrix& e, const Digraph& g, double k) {
    return riccati_rhs(e.matrix(), laplacian(g), g, k);
}

std::vector<ErrorSample> integrate_riccati(const ErrorMatrix& e0, const Digraph& g, double k,
                                           const SimConfig& cfg) {
    cfg.validate();
    require_same_size(e0.size(), g.size(), "integrate_riccati");
    const Matrix lap = laplacian(g);
    auto rhs = [&](const Matrix& e) { return riccati_rhs(e, lap, g, k); };

    const std::int64_t steps = cfg.step_count();
    std::vector<ErrorSample> out;
    out.reserve(static_cast<std::size_t>(steps / cfg.record_every + 2));
    out.push_back({0.0, e0});

    Matrix e = e0.matrix();
    double t = 0.0;
    for (std::int64_t s = 1; s <= steps; ++s) {
        const double t_next = std::min(static_cast<double>(s) * cfg.dt, cfg.t_end);
        e = rk4_step(rhs, e, t_next - t);
        restore_invariants(e, t_next);
        t = t_next;
        if (s % cfg.record_every == 0 || s == steps) out.push_back({t, ErrorMatrix(e)});
    }
    return out;
}

double total_error(const Matrix& e, const Vector& beta) {
    require_same_size(e.rows(), beta.size(), "total_error");
    return 0.5 * beta.dot(e * beta);
}

double total_error(const ErrorMatrix& e, const BetaWeights& beta) {
    return total_error(e.matrix(), beta.node_order);
}

double gamma_term(const Matrix& e, const Digraph& g, const Vector& beta, double k) {
    require_same_size(e.rows(), beta.size(), "gamma_term");
    const Vector a = alpha(e, g);
    return k * beta.cwiseProduct(a).dot(e * beta);
}

double gamma_term(const ErrorMatrix& e, const Digraph& g, const BetaWeights& beta, double k) {
    return gamma_term(e.matrix(), g, beta.node_order, k);
}

bool path_bound(const ErrorMatrix& e, const std::vector<Index>& path) {
    if (path.size() < 2) return true;
    const double segments = static_cast<double>(path.size() - 1);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < path.size(); ++p) sum += e(path[p], path[p + 1]);
    return e(path.front(), path.back()) <= segments * sum + kBoundSlack;
}

Index root_node(const Condensation& c) {
    if (!has_spanning_tree(c)) throw NoSpanningTree("digraph has no directed spanning tree");
    return c.blocks.front().front();
}

LemmaConstants lemma_constants(const Digraph& g, const Condensation& c) {
    const Index root = root_node(c);
    const Index m = g.size();

    // BFS tree from the root along information flow (p -> q when a_qp > 0).
    std::vector<Index> parent(m, -1);
    std::vector<bool> seen(m, false);
    std::queue<Index> frontier;
    frontier.push(root);
    seen[root] = true;
    while (!frontier.empty()) {
        const Index p = frontier.front();
        frontier.pop();
        for (Index q : g.successors(p)) {
            if (!seen[q]) {
                seen[q] = true;
                parent[q] = p;
                frontier.push(q);
            }
        }
    }

    std::vector<int> depth(m, 0);
    std::vector<double> lightest(m, std::numeric_limits<double>::infinity());
    for (Index v = 0; v < m; ++v) {
        if (!seen[v]) throw NoSpanningTree("root does not reach node " + std::to_string(v + 1));
        for (Index w = v; w != root; w = parent[w]) {
            ++depth[v];
            lightest[v] = std::min(lightest[v], g.weight(w, parent[w]));
        }
    }

    LemmaConstants lc;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            if (i == j) continue;
            const double edges = depth[i] + depth[j];
            const double a_min = std::min(lightest[i], lightest[j]);
            lc.c1 = std::max(lc.c1, edges / a_min);
        }
    }
    if (m == 1) lc.c1 = 1.0;  // no pairs; any positive witness will do
    lc.c_hat = 1.0 / (lc.c1 * static_cast<double>(m * m));
    lc.c_check = g.weights().maxCoeff();
    if (lc.c_check <= 0.0) lc.c_check = 1.0;  // single isolated node
    return lc;
}

bool sandwich_check(const ErrorMatrix& e, const Digraph& g, const LemmaConstants& lc) {
    const double total = e.matrix().sum();
    const double weighted = alpha(e, g).sum();
    return lc.c_hat * total <= weighted + kBoundSlack && weighted <= lc.c_check * total + kBoundSlack;
}

bool max_error_bound(const ErrorMatrix& e, const Digraph& g, const LemmaConstants& lc) {
    return e.max_entry() <= lc.c1 * alpha(e, g).sum() + kMaxErrorSlack;
}

}  // namespace lohe
