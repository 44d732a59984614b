#include "encircle/tse.hpp"

#include <stdexcept>

namespace encircle {

namespace {

Mat6 symmetrized(const Mat6& m) {
    return 0.5 * (m + m.transpose());
}

} // namespace

Prediction predict(const FilterState& fs, const FilterParams& params) {
    const Mat6& A = params.step.A;
    const Mat63& B = params.step.B;
    Prediction pred;
    pred.estimate = A * fs.estimate;
    pred.covariance = symmetrized(A * fs.covariance * A.transpose() +
                                  B * params.process_variance * B.transpose());
    return pred;
}

UpdateResult update(const Prediction& predicted, const ObservationSample& obs,
                    const FilterParams& params) {
    (void)params;
    UpdateResult res;

    const Vec6& c = obs.c_row;
    if (obs.degenerate || c.squaredNorm() == 0.0) {
        // Uninformative sample: keep the prediction.
        res.state.estimate = predicted.estimate;
        res.state.covariance = predicted.covariance;
        res.innovation = 0.0;
        res.innovation_variance = obs.gamma2;
        return res;
    }

    const double s = c.dot(predicted.covariance * c) + obs.gamma2;
    if (!(s > 0.0)) {
        if (obs.gamma2 > 0.0) {
            throw std::logic_error("tse: innovation variance is not positive");
        }
        // Noise-free measurement along a direction with no remaining
        // uncertainty: there is nothing left to correct.
        res.state.estimate = predicted.estimate;
        res.state.covariance = predicted.covariance;
        res.innovation = 0.0;
        res.innovation_variance = 0.0;
        return res;
    }
    const Vec6 gain = predicted.covariance * c / s;
    const double y_hat = c.dot(predicted.estimate);
    res.innovation = obs.y - y_hat;
    res.innovation_variance = s;
    res.state.estimate = predicted.estimate + gain * res.innovation;

    // Joseph form keeps the posterior symmetric positive definite.
    const Mat6 ikc = Mat6::Identity() - gain * c.transpose();
    res.state.covariance = symmetrized(ikc * predicted.covariance * ikc.transpose() +
                                       gain * obs.gamma2 * gain.transpose());
    return res;
}

DistanceEstimates estimate_distances(const FilterState& fs, const Vec3& p1,
                                     const Vec3& p2, const Vec3& protected_pos) {
    const Vec3 est_pos = fs.estimate.head<3>();
    return {(protected_pos - est_pos).norm(),
            (p1 - est_pos).norm(),
            (p2 - est_pos).norm()};
}

FilterState relative_update(const FilterState& fs_rel, const Vec3& q12,
                            double m1sq, double m2sq, int which,
                            const RangeNoiseModel& noise,
                            const FilterParams& params, const Vec3& own_accel) {
    if (which != 1 && which != 2) {
        throw std::invalid_argument("relative_update: guardian index must be 1 or 2");
    }
    const double m_own = (which == 1) ? m1sq : m2sq;
    const double m_other = (which == 1) ? m2sq : m1sq;
    const double sign = (which == 1) ? -1.0 : 1.0;

    ObservationSample obs;
    obs.y = sign * 0.5 * (m_other - m_own - q12.dot(q12));
    obs.c_row.head<3>() = q12;
    // eta_i = (-1)^i (eta_other - eta_own)/2 has the same variance as the
    // global observation noise.
    obs.gamma2 = 0.25 * (noise.sigma1 + noise.sigma2);
    obs.degenerate = (q12.squaredNorm() == 0.0);

    // Known input enters the prediction of the relative state.
    Prediction pred = predict(fs_rel, params);
    pred.estimate += params.step.B * own_accel;

    return update(pred, obs, params).state;
}

} // namespace encircle
