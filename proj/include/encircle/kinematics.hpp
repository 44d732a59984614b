#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace encircle {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Position/velocity state of one agent, stacked as (p, v).
struct AgentState {
    Vec3 position{Vec3::Zero()};
    Vec3 velocity{Vec3::Zero()};

    Vec6 stacked() const {
        Vec6 x;
        x << position, velocity;
        return x;
    }

    static AgentState from_stacked(const Vec6& x) {
        return {x.head<3>(), x.tail<3>()};
    }
};

/// Discrete double-integrator step matrices for sampling period t:
/// A = [[I, tI], [0, I]],  B = [[t^2/2 I], [t I]].
struct StepMatrices {
    Mat6 A;
    Mat63 B;
    double t = 0.0;
};

inline StepMatrices make_step_matrices(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("sampling period must be finite and > 0");
    }
    StepMatrices m;
    m.t = t;
    m.A.setIdentity();
    m.A.topRightCorner<3, 3>() = t * Mat3::Identity();
    m.B.topRows<3>() = 0.5 * t * t * Mat3::Identity();
    m.B.bottomRows<3>() = t * Mat3::Identity();
    return m;
}

/// One step of X(k+1) = A X(k) + B u(k).
inline AgentState propagate(const AgentState& state, const Vec3& accel,
                            const StepMatrices& m) {
    if (!state.stacked().allFinite() || !accel.allFinite()) {
        throw std::invalid_argument("propagate: non-finite state or acceleration");
    }
    return AgentState::from_stacked(m.A * state.stacked() + m.B * accel);
}

} // namespace encircle
