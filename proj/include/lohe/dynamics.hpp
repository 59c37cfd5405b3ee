#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lohe/digraph.hpp"
#include "lohe/types.hpp"

namespace lohe {

inline constexpr double kUnitNormTol = 1e-9;
inline constexpr double kSkewTol = 1e-12;

/// m oscillator directions in R^n, one per row, each of unit length.
class StateMatrix {
public:
    /// Takes rows as given; throws InvariantViolation if any row is off the
    /// unit sphere by more than kUnitNormTol.
    explicit StateMatrix(Matrix rows);

    /// Rescales every row to unit length. Rows shorter than 1e-6 are rejected.
    static StateMatrix normalized(Matrix rows);

    Index m() const noexcept { return rows_.rows(); }
    Index n() const noexcept { return rows_.cols(); }
    const Matrix& matrix() const noexcept { return rows_; }
    auto row(Index i) const { return rows_.row(i); }

private:
    Matrix rows_;
};

struct ModelParams {
    double k = 1.0;
    std::optional<Matrix> omega;  // common skew-symmetric frequency matrix

    void validate() const;
};

struct SimConfig {
    double dt = 1e-3;
    double t_end = 50.0;
    int record_every = 10;

    void validate() const;
    /// Number of steps; the last one is shortened to land on t_end.
    std::int64_t step_count() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateMatrix> states;

    std::size_t size() const noexcept { return times.size(); }
};

/// k sum_j a_ij (r_j - (r_i . r_j) r_i), row by row.
Matrix lohe_rhs(const StateMatrix& state, const Digraph& g, double k);
Matrix lohe_rhs(const Matrix& rows, const Digraph& g, double k);

/// Omega r_i plus the coupling term. Without omega this equals lohe_rhs.
Matrix general_rhs(const StateMatrix& state, const Digraph& g, const ModelParams& params);
Matrix general_rhs(const Matrix& rows, const Digraph& g, const ModelParams& params);

/// One RK4 step without the projection back onto the sphere.
Matrix rk4_raw_step(const Matrix& rows, const Digraph& g, const ModelParams& params, double dt);

/// Fixed-step RK4 with row renormalisation after every step. Samples at
/// t = 0, every record_every steps, and t_end.
Trajectory integrate(const StateMatrix& state0, const Digraph& g, const ModelParams& params,
                     const SimConfig& cfg);

void require_skew_symmetric(const Matrix& omega);

/// exp(omega * t) by scaling and squaring of a 12-term Taylor polynomial.
Matrix matrix_exp_skew(const Matrix& omega, double t);

/// s_i(t) = exp(-omega t) r_i(t) for every sample.
Trajectory rotate_frame(const Trajectory& traj, const Matrix& omega);

/// Unit v with v . r_i > 0 for all i, if the origin lies strictly outside the
/// convex hull of the rows. Uses Gilbert / Frank-Wolfe iterations on the
/// minimum-norm point of the hull.
std::optional<Vector> hemisphere_certificate(const StateMatrix& state);

/// r_i = (cos theta_i, sin theta_i).
StateMatrix embed_phases(std::span<const double> thetas);

/// Random states in an open hemisphere: Gaussian directions folded towards a
/// random pivot u, with rows closer than `margin` to the equator re-drawn.
StateMatrix sample_hemisphere_states(Index m, Index n, std::uint64_t seed, double margin = 0.2);

}  // namespace lohe
