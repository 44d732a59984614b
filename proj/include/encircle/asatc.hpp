#pragma once

#include "encircle/kinematics.hpp"
#include "encircle/tse.hpp"

#include <array>
#include <functional>
#include <utility>

namespace encircle {

/// Encirclement shape zeta(k) = r(k) [sin(rho k pi), cos(rho k pi), h(k)]^T.
/// Radius and vertical motion are step-indexed callables so the capture
/// schedule can shrink r(k) without touching the shape evaluation.
struct ShapeParams {
    double rho = 0.0;
    std::function<double(long)> radius;
    std::function<double(long)> height;
};

enum class Zone { Protect, Warn, Capture };

const char* zone_name(Zone z);

struct ControllerParams {
    double alpha = -0.1;     // gain, must lie in (-1/beta, 0)
    double beta = 10.0;      // saturation shaping constant, > 1
    double u_dist = 1.5;     // distance where the constraint starts to bite
    double t = 0.5;          // sampling period
    double r1 = 0.9;         // nominal encirclement radius
    double rc = 0.1;         // capture radius
    long t_in = 30;          // steps to shrink r1 -> rc
    double l_protect = 8.5;  // zone thresholds on the estimated
    double l_warn = 5.5;     //   inter-target distance
    double l_capture = 3.0;
    double h1 = 0.7;         // projection height for a ground protected target
    bool protected_ground = false;
    // Optional band around the zone thresholds: leaving a zone requires
    // crossing its boundary by this margin. Zero (the default) is the pure
    // threshold rule; a positive band suppresses chatter from estimate
    // noise near a boundary.
    double zone_hysteresis = 0.0;

    void validate() const;
};

/// Zone membership and capture-countdown progress. Owned by the simulation
/// loop; transitions are driven only by the estimated inter-target distance.
struct EngagementState {
    Zone zone = Zone::Protect;
    double current_radius = 0.0;
    long capture_step_count = 0;
};

Vec3 shape_vector(long k, const ShapeParams& sp);

/// (-1)^i (zeta(k+1) - alpha zeta(k)); the sign places the two guardians on
/// opposite ends of the shape vector.
Vec3 delta_zeta(int guardian, long k, double alpha, const ShapeParams& sp);

/// Input-constraint gain in (1/beta, 1]; equals 1 until the mean of the two
/// guardian-target distances exceeds u_dist, then decays toward 1/beta.
double g_constraint(double d1, double d2, const ControllerParams& cp);

/// Protect iff d >= l_protect, Warn iff l_warn <= d < l_protect, Capture
/// below that (a partition of [0, inf); below l_capture stays Capture).
Zone classify_zone(double d12_hat, const ControllerParams& cp);

/// Threshold rule with the hysteresis band applied relative to the
/// previous zone. With a zero band this is exactly classify_zone.
Zone classify_zone_hysteresis(double d12_hat, Zone previous,
                              const ControllerParams& cp);

/// Scheduled radius after `capture_step_count` steps inside the capture
/// zone: r1 minus a linear decrement, exactly rc from step t_in on.
double radius_schedule(const EngagementState& eng, const ControllerParams& cp);

/// Zone transition plus radius bookkeeping for one step. Entering Capture
/// restarts the countdown at r1; leaving it resets the radius.
EngagementState step_engagement(const EngagementState& eng, double d12_hat,
                                const ControllerParams& cp);

/// Reference position the guardians encircle: the target position itself,
/// or its projection onto the plane z = h1 for a ground target.
Vec3 protected_reference(const Vec3& protected_pos, const ControllerParams& cp);

/// Case 1 law: encircle the cooperative protected target using its true
/// state. Both guardian states are needed because the constraint gain
/// depends on both guardian-target distances.
Vec3 control_protect(int guardian, const std::array<AgentState, 2>& guardians,
                     const AgentState& protected_state, long k,
                     const ControllerParams& cp, const ShapeParams& sp);

/// Case 2/3 law: encircle the hostile target using the filter estimate.
/// The two cases share the expression; only the radius schedule inside
/// `sp` differs.
Vec3 control_engage(int guardian, const std::array<AgentState, 2>& guardians,
                    const FilterState& fs, long k,
                    const ControllerParams& cp, const ShapeParams& sp);

/// The Case 1 law split into encirclement, tracking, and velocity
/// compensation accelerations; the three parts sum back to the law.
struct ControlDecomposition {
    Vec3 encircle{Vec3::Zero()};
    Vec3 track{Vec3::Zero()};
    Vec3 compensate{Vec3::Zero()};

    Vec3 total() const { return encircle + track + compensate; }
};

ControlDecomposition control_protect_parts(int guardian,
                                           const std::array<AgentState, 2>& guardians,
                                           const AgentState& protected_state, long k,
                                           const ControllerParams& cp,
                                           const ShapeParams& sp);

/// Anti-synchronization residuals of Definition 1:
/// res1 = zeta . q1 + |zeta||q1|, res2 = zeta . q2 - |zeta||q2|.
/// Both vanish exactly when guardian 1 sits at -zeta and guardian 2 at
/// +zeta relative to the target.
std::pair<double, double> as_manner_residual(const Vec3& zeta, const Vec3& q1,
                                             const Vec3& q2);

} // namespace encircle
