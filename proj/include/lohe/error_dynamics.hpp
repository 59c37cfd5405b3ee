#pragma once

#include <vector>

#include "lohe/digraph.hpp"
#include "lohe/dynamics.hpp"
#include "lohe/types.hpp"

namespace lohe {

/// Tolerance on [0, 2] accepted by ErrorMatrix and the Riccati integrator.
inline constexpr double kErrorRangeTol = 1e-6;

/// Pairwise errors e_ij = 1 - r_i . r_j. Symmetric, zero diagonal,
/// entries in [0, 2].
class ErrorMatrix {
public:
    /// Validates the invariants; throws InvariantViolation.
    explicit ErrorMatrix(Matrix entries);

    static ErrorMatrix zero(Index m) { return ErrorMatrix(Matrix::Zero(m, m)); }

    Index size() const noexcept { return e_.rows(); }
    const Matrix& matrix() const noexcept { return e_; }
    double operator()(Index i, Index j) const { return e_(i, j); }
    double max_entry() const { return e_.maxCoeff(); }

private:
    Matrix e_;
};

/// e_ij evaluated as |r_i - r_j|^2 / 2, which keeps relative accuracy as the
/// oscillators close in on each other.
ErrorMatrix error_from_states(const StateMatrix& state);

/// alpha_i(E) = sum_l a_il e_il.
Vector alpha(const Matrix& e, const Digraph& g);
inline Vector alpha(const ErrorMatrix& e, const Digraph& g) { return alpha(e.matrix(), g); }

/// Right-hand side of the matrix Riccati error equation
///   E' = -k L E - k E L^T - k alpha 1^T - k 1 alpha^T + k Lambda E + k E Lambda.
Matrix riccati_rhs(const Matrix& e, const Matrix& laplacian, const Digraph& g, double k);
Matrix riccati_rhs(const ErrorMatrix& e, const Digraph& g, double k);

struct ErrorSample {
    double t;
    ErrorMatrix e;
};

/// RK4 on the Riccati equation, sampled like integrate(). After every step
/// the iterate is symmetrised and its diagonal zeroed; entries within 1e-9 of
/// [0, 2] are clamped, entries beyond kErrorRangeTol raise InvariantViolation.
std::vector<ErrorSample> integrate_riccati(const ErrorMatrix& e0, const Digraph& g, double k,
                                           const SimConfig& cfg);

/// V(E) = beta^T E beta / 2, beta in original node order.
double total_error(const ErrorMatrix& e, const BetaWeights& beta);
double total_error(const Matrix& e, const Vector& beta);

/// gamma(E) = k beta^T Lambda(E) E beta, the quadratic remainder in V'.
double gamma_term(const ErrorMatrix& e, const Digraph& g, const BetaWeights& beta, double k);
double gamma_term(const Matrix& e, const Digraph& g, const Vector& beta, double k);

/// e_ij <= s (e_{i k1} + ... + e_{k_{s-1} j}) for the node sequence
/// path = [i, k1, ..., j] with s = path.size() - 1 segments.
bool path_bound(const ErrorMatrix& e, const std::vector<Index>& path);

struct LemmaConstants {
    double c1 = 0.0;
    double c_hat = 0.0;    // 1 / (c1 m^2)
    double c_check = 0.0;  // max_pq a_pq
};

/// Shortest-path witness for c1: for each pair (i, j), i != j, concatenate
/// BFS paths from the root to i and to j; c1 = max of (edges / lightest edge).
LemmaConstants lemma_constants(const Digraph& g, const Condensation& c);

/// Smallest-index node of the source block; it reaches every other node.
Index root_node(const Condensation& c);

/// c_hat 1^T E 1 <= 1^T alpha(E) <= c_check 1^T E 1.
bool sandwich_check(const ErrorMatrix& e, const Digraph& g, const LemmaConstants& lc);

/// max_ij e_ij <= c1 sum_pq a_pq e_pq.
bool max_error_bound(const ErrorMatrix& e, const Digraph& g, const LemmaConstants& lc);

}  // namespace lohe
