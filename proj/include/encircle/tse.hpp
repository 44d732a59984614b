#pragma once

#include "encircle/kinematics.hpp"
#include "encircle/ranging.hpp"

namespace encircle {

/// Target state estimate (position, velocity) and its error covariance.
/// The covariance is re-symmetrized after every step.
struct FilterState {
    Vec6 estimate{Vec6::Zero()};
    Mat6 covariance{Mat6::Identity()};
};

struct FilterParams {
    StepMatrices step;
    Mat3 process_variance{Mat3::Zero()};   // variance of the target acceleration
    Mat6 initial_covariance{Mat6::Identity()};
};

struct Prediction {
    Vec6 estimate{Vec6::Zero()};
    Mat6 covariance{Mat6::Identity()};
};

struct UpdateResult {
    FilterState state;
    double innovation = 0.0;
    double innovation_variance = 0.0;
};

/// Time update: x^- = A x, G^- = A G A^T + B W B^T.
Prediction predict(const FilterState& fs, const FilterParams& params);

/// Scalar measurement update with gain K = G^- c / (c^T G^- c + gamma2)
/// and Joseph-form posterior covariance. A zero observation row gives
/// K = 0: the prediction passes through unchanged.
UpdateResult update(const Prediction& predicted, const ObservationSample& obs,
                    const FilterParams& params);

inline FilterState step(const FilterState& fs, const ObservationSample& obs,
                        const FilterParams& params) {
    return update(predict(fs, params), obs, params).state;
}

struct DistanceEstimates {
    double between_targets = 0.0;  // || protected_pos - est_pos ||
    double from_guardian1 = 0.0;   // || p1 - est_pos ||
    double from_guardian2 = 0.0;   // || p2 - est_pos ||
};

DistanceEstimates estimate_distances(const FilterState& fs, const Vec3& p1,
                                     const Vec3& p2, const Vec3& protected_pos);

/// Single-guardian variant when only the local relative position q12 is
/// available. Runs the same predict/update cycle on the relative state
/// (p_i - pbar2, v_i - vbar2) with observation
///   Y_i = (-1)^i (m_other - m_own - q12^T q12) / 2.
/// `own_accel` is the guardian's applied control, a known input to the
/// relative dynamics; passing the true value makes the relative estimate
/// track (guardian state - global estimate) exactly.
FilterState relative_update(const FilterState& fs_rel, const Vec3& q12,
                            double m1sq, double m2sq, int which,
                            const RangeNoiseModel& noise,
                            const FilterParams& params,
                            const Vec3& own_accel = Vec3::Zero());

} // namespace encircle
