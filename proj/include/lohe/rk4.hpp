#pragma once

namespace lohe {

/// One classical fourth-order Runge-Kutta step for an autonomous system.
/// `State` only needs vector-space operators (Eigen matrices qualify).
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, const State& y, double dt) {
    const State k1 = rhs(y);
    const State k2 = rhs(State(y + (0.5 * dt) * k1));
    const State k3 = rhs(State(y + (0.5 * dt) * k2));
    const State k4 = rhs(State(y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace lohe
