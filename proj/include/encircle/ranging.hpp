#pragma once

#include "encircle/kinematics.hpp"
#include "encircle/rng.hpp"

namespace encircle {

/// Additive noise variances on the two guardians' squared-range readings.
/// Zero is accepted so noise-free oracle runs can reuse the same path.
struct RangeNoiseModel {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

/// Scalar observation assembled from two squared ranges:
///   y = q12^T pbar2 + eta,  c_row = [q12^T, 0, 0, 0],
///   gamma2 = Var{eta} = (sigma1 + sigma2) / 4.
/// Coincident guardians produce a zero row; the filter treats such a
/// sample as an uninformative update.
struct ObservationSample {
    double y = 0.0;
    Vec6 c_row{Vec6::Zero()};
    double gamma2 = 0.0;
    bool degenerate = false;
};

/// Squared distance plus N(0, sigma) noise. Not clamped at zero: clamping
/// would bias the differenced observation and change its variance.
double measure_squared_range(const Vec3& sensor_pos, const Vec3& target_pos,
                             double sigma, RngStream& rng);

ObservationSample build_observation(const Vec3& p1, const Vec3& p2,
                                    double m1sq, double m2sq,
                                    const RangeNoiseModel& noise);

} // namespace encircle
