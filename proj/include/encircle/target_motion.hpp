#pragma once

#include "encircle/kinematics.hpp"
#include "encircle/rng.hpp"

namespace encircle {

/// Bernoulli mixture of two zero-mean Gaussians for target acceleration:
/// with probability gamma draw from N(0, W1), otherwise from N(0, W2).
/// W1 is the frequent mild component, W2 the rare aggressive one.
///
/// Singular variances are allowed (a grounded target has zero vertical
/// variance), so sampling goes through an eigendecomposition factor
/// rather than a Cholesky factor.
class MixtureAccelModel {
public:
    MixtureAccelModel(double gamma, const Mat3& w1, const Mat3& w2);

    static MixtureAccelModel diagonal(double gamma, const Vec3& w1_diag,
                                      const Vec3& w2_diag);

    double gamma() const { return gamma_; }
    const Mat3& w1() const { return w1_; }
    const Mat3& w2() const { return w2_; }

    /// gamma*W1 + (1-gamma)*W2, the variance seen by the filter.
    Mat3 effective_variance() const;

    /// One acceleration draw. Consumes the same number of uniforms on both
    /// mixture branches, so the stream stays aligned regardless of outcome.
    Vec3 sample(RngStream& rng) const;

private:
    double gamma_;
    Mat3 w1_, w2_;
    Mat3 l1_, l2_; // factors with L L^T = W
};

inline Vec3 sample_acceleration(const MixtureAccelModel& model, RngStream& rng) {
    return model.sample(rng);
}

inline Mat3 effective_variance(const MixtureAccelModel& model) {
    return model.effective_variance();
}

} // namespace encircle
