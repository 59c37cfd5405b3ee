#include "lohe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lohe/random.hpp"
#include "lohe/rk4.hpp"

namespace lohe {

namespace {

constexpr double kMinRowNorm = 1e-6;
constexpr int kHullMaxIterations = 10000;
constexpr double kHullMinNorm = 1e-6;
constexpr double kHullGapTol = 1e-15;
constexpr int kTaylorDegree = 12;

void check_finite(const Matrix& rows, double t) {
    if (!rows.allFinite()) {
        throw NonFinite("state became non-finite at t=" + std::to_string(t));
    }
}

void normalize_rows(Matrix& rows) {
    for (Index i = 0; i < rows.rows(); ++i) rows.row(i).normalize();
}

}  // namespace

StateMatrix::StateMatrix(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.cols() < 1) {
        throw ValidationError("state needs at least one oscillator and one coordinate");
    }
    for (Index i = 0; i < rows_.rows(); ++i) {
        const double norm = rows_.row(i).norm();
        if (!std::isfinite(norm)) throw NonFinite("state row " + std::to_string(i + 1) + " is not finite");
        if (std::abs(norm - 1.0) > kUnitNormTol) {
            throw InvariantViolation("state row " + std::to_string(i + 1) + " has norm " + std::to_string(norm));
        }
    }
}

StateMatrix StateMatrix::normalized(Matrix rows) {
    for (Index i = 0; i < rows.rows(); ++i) {
        const double norm = rows.row(i).norm();
        if (!std::isfinite(norm) || norm < kMinRowNorm) {
            throw ValidationError("state row " + std::to_string(i + 1) + " is too short to normalise");
        }
        rows.row(i) /= norm;
    }
    return StateMatrix(std::move(rows));
}

void ModelParams::validate() const {
    if (!std::isfinite(k) || k < 0.0) throw ValidationError("gain k must be finite and nonnegative");
    if (omega) require_skew_symmetric(*omega);
}

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
    if (dt > t_end) throw ValidationError("dt must not exceed t_end");
    if (record_every < 1) throw ValidationError("record_every must be at least 1");
}

std::int64_t SimConfig::step_count() const {
    return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

Matrix lohe_rhs(const Matrix& rows, const Digraph& g, double k) {
    if (g.size() != rows.rows()) {
        throw DimensionMismatch("digraph has " + std::to_string(g.size()) + " nodes, state has " +
                                std::to_string(rows.rows()) + " oscillators");
    }
    const Matrix& a = g.weights();
    const Matrix gram = rows * rows.transpose();
    const Vector pull = a.cwiseProduct(gram).rowwise().sum();
    return k * (a * rows - pull.asDiagonal() * rows);
}

Matrix lohe_rhs(const StateMatrix& state, const Digraph& g, double k) {
    return lohe_rhs(state.matrix(), g, k);
}

Matrix general_rhs(const Matrix& rows, const Digraph& g, const ModelParams& params) {
    Matrix out = lohe_rhs(rows, g, params.k);
    if (params.omega) {
        const Matrix& omega = *params.omega;
        if (omega.rows() != rows.cols() || omega.cols() != rows.cols()) {
            throw DimensionMismatch("omega must be n x n with n = " + std::to_string(rows.cols()));
        }
        out.noalias() += rows * omega.transpose();
    }
    return out;
}

Matrix general_rhs(const StateMatrix& state, const Digraph& g, const ModelParams& params) {
    if (params.omega) require_skew_symmetric(*params.omega);
    return general_rhs(state.matrix(), g, params);
}

Matrix rk4_raw_step(const Matrix& rows, const Digraph& g, const ModelParams& params, double dt) {
    auto rhs = [&](const Matrix& y) { return general_rhs(y, g, params); };
    return rk4_step(rhs, rows, dt);
}

Trajectory integrate(const StateMatrix& state0, const Digraph& g, const ModelParams& params,
                     const SimConfig& cfg) {
    cfg.validate();
    params.validate();
    if (g.size() != state0.m()) {
        throw DimensionMismatch("digraph and initial state disagree on the oscillator count");
    }

    const std::int64_t steps = cfg.step_count();
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps / cfg.record_every + 2));
    traj.states.reserve(traj.times.capacity());
    traj.times.push_back(0.0);
    traj.states.push_back(state0);

    Matrix y = state0.matrix();
    double t = 0.0;
    for (std::int64_t s = 1; s <= steps; ++s) {
        const double t_next = std::min(static_cast<double>(s) * cfg.dt, cfg.t_end);
        y = rk4_raw_step(y, g, params, t_next - t);
        check_finite(y, t_next);
        normalize_rows(y);
        t = t_next;
        if (s % cfg.record_every == 0 || s == steps) {
            traj.times.push_back(t);
            traj.states.emplace_back(y);
        }
    }
    return traj;
}

void require_skew_symmetric(const Matrix& omega) {
    if (omega.rows() != omega.cols()) throw NotSkewSymmetric("omega must be square");
    if (!omega.allFinite()) throw NotSkewSymmetric("omega has non-finite entries");
    const double asym = (omega + omega.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
    if (asym > kSkewTol) {
        throw NotSkewSymmetric("omega + omega^T has infinity norm " + std::to_string(asym));
    }
}

Matrix matrix_exp_skew(const Matrix& omega, double t) {
    require_skew_symmetric(omega);
    const Index n = omega.rows();
    Matrix a = omega * t;
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    a /= std::ldexp(1.0, squarings);

    // Horner form of sum_{j<=12} a^j / j!
    Matrix result = Matrix::Identity(n, n);
    for (int j = kTaylorDegree; j >= 1; --j) {
        result = Matrix::Identity(n, n) + (a * result) / static_cast<double>(j);
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

Trajectory rotate_frame(const Trajectory& traj, const Matrix& omega) {
    require_skew_symmetric(omega);
    Trajectory out;
    out.times = traj.times;
    out.states.reserve(traj.size());
    for (std::size_t p = 0; p < traj.size(); ++p) {
        const Matrix& rows = traj.states[p].matrix();
        if (omega.rows() != rows.cols()) throw DimensionMismatch("omega dimension differs from state dimension");
        const Matrix back = matrix_exp_skew(omega, -traj.times[p]);
        out.states.emplace_back(Matrix(rows * back.transpose()));
    }
    return out;
}

std::optional<Vector> hemisphere_certificate(const StateMatrix& state) {
    const Matrix& r = state.matrix();
    Vector x = r.row(0).transpose();

    for (int it = 0; it < kHullMaxIterations; ++it) {
        if (x.norm() <= kHullMinNorm) return std::nullopt;
        const Vector dots = r * x;
        Index idx = 0;
        const double lowest = dots.minCoeff(&idx);
        if (x.squaredNorm() - lowest <= kHullGapTol) break;
        const Vector d = x - r.row(idx).transpose();
        const double step = std::clamp(x.dot(d) / d.squaredNorm(), 0.0, 1.0);
        if (step == 0.0) break;
        x -= step * d;
    }

    if (x.norm() <= kHullMinNorm) return std::nullopt;
    Vector v = x.normalized();
    if ((r * v).minCoeff() <= 0.0) return std::nullopt;
    return v;
}

StateMatrix embed_phases(std::span<const double> thetas) {
    Matrix rows(static_cast<Index>(thetas.size()), 2);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        rows(static_cast<Index>(i), 0) = std::cos(thetas[i]);
        rows(static_cast<Index>(i), 1) = std::sin(thetas[i]);
    }
    return StateMatrix(std::move(rows));
}

StateMatrix sample_hemisphere_states(Index m, Index n, std::uint64_t seed, double margin) {
    if (m < 1 || n < 2) throw ValidationError("need m >= 1 oscillators in dimension n >= 2");
    if (!(margin >= 0.0 && margin < 1.0)) throw ValidationError("hemisphere margin must lie in [0, 1)");

    SplitMix64 rng(seed);
    auto draw_direction = [&] {
        Vector v(n);
        do {
            for (Index c = 0; c < n; ++c) v(c) = rng.normal();
        } while (v.norm() < kMinRowNorm);
        return Vector(v.normalized());
    };

    const Vector pivot = draw_direction();
    Matrix rows(m, n);
    for (Index i = 0; i < m; ++i) {
        Vector r;
        double along;
        do {
            r = draw_direction();
            along = r.dot(pivot);
            if (along < 0.0) {
                r = -r;
                along = -along;
            }
        } while (along < margin);
        rows.row(i) = r.transpose();
    }
    return StateMatrix(std::move(rows));
}

}  // namespace lohe
