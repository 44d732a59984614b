#include "encircle/ranging.hpp"

#include <stdexcept>

namespace encircle {

double measure_squared_range(const Vec3& sensor_pos, const Vec3& target_pos,
                             double sigma, RngStream& rng) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        throw std::invalid_argument("range noise variance must be finite and >= 0");
    }
    const double true_sq = (sensor_pos - target_pos).squaredNorm();
    const double eta = (sigma > 0.0) ? rng.gaussian(0.0, std::sqrt(sigma)) : 0.0;
    return true_sq + eta;
}

ObservationSample build_observation(const Vec3& p1, const Vec3& p2,
                                    double m1sq, double m2sq,
                                    const RangeNoiseModel& noise) {
    ObservationSample obs;
    obs.y = -0.5 * (m1sq - m2sq - p1.dot(p1) + p2.dot(p2));
    const Vec3 q12 = p1 - p2;
    obs.c_row.head<3>() = q12;
    obs.gamma2 = 0.25 * (noise.sigma1 + noise.sigma2);
    obs.degenerate = (q12.squaredNorm() == 0.0);
    return obs;
}

} // namespace encircle
