#include "encircle/asatc.hpp"

#include <cmath>
#include <stdexcept>

namespace encircle {

const char* zone_name(Zone z) {
    switch (z) {
        case Zone::Protect: return "protect";
        case Zone::Warn: return "warn";
        case Zone::Capture: return "capture";
    }
    return "?";
}

void ControllerParams::validate() const {
    if (!(beta > 1.0)) {
        throw std::invalid_argument("controller: beta must be > 1");
    }
    // The closed left endpoint admits the published (alpha, beta) pair
    // (-0.1, 10): the closed-loop factor g(alpha-1)+1 stays strictly
    // inside +-max{1/beta, 1-1/beta} there for every admissible g.
    if (!(alpha >= -1.0 / beta) || !(alpha < 0.0)) {
        throw std::invalid_argument("controller: alpha must lie in [-1/beta, 0)");
    }
    if (!(u_dist > 0.0)) {
        throw std::invalid_argument("controller: u_dist must be > 0");
    }
    if (!(t > 0.0)) {
        throw std::invalid_argument("controller: sampling period must be > 0");
    }
    if (!(l_protect > l_warn) || !(l_warn > l_capture) || !(l_capture > 0.0)) {
        throw std::invalid_argument(
            "controller: zone thresholds must satisfy l_protect > l_warn > l_capture > 0");
    }
    if (!(rc > 0.0) || !(rc < r1)) {
        throw std::invalid_argument("controller: radii must satisfy 0 < rc < r1");
    }
    if (t_in < 1) {
        throw std::invalid_argument("controller: t_in must be >= 1");
    }
}

Vec3 shape_vector(long k, const ShapeParams& sp) {
    const double r = sp.radius(k);
    const double phase = sp.rho * static_cast<double>(k) * M_PI;
    return r * Vec3{std::sin(phase), std::cos(phase), sp.height(k)};
}

Vec3 delta_zeta(int guardian, long k, double alpha, const ShapeParams& sp) {
    if (guardian != 1 && guardian != 2) {
        throw std::invalid_argument("delta_zeta: guardian index must be 1 or 2");
    }
    const double sign = (guardian == 1) ? -1.0 : 1.0;
    return sign * (shape_vector(k + 1, sp) - alpha * shape_vector(k, sp));
}

double g_constraint(double d1, double d2, const ControllerParams& cp) {
    if (d1 < 0.0 || d2 < 0.0) {
        throw std::invalid_argument("g_constraint: distances must be >= 0");
    }
    const double mean = 0.5 * (d1 + d2);
    return (cp.u_dist * (cp.beta - 1.0) / std::max(cp.u_dist, mean) + 1.0) / cp.beta;
}

Zone classify_zone(double d12_hat, const ControllerParams& cp) {
    if (d12_hat >= cp.l_protect) return Zone::Protect;
    if (d12_hat >= cp.l_warn) return Zone::Warn;
    return Zone::Capture;
}

Zone classify_zone_hysteresis(double d12_hat, Zone previous,
                              const ControllerParams& cp) {
    const double band = cp.zone_hysteresis;
    // Staying in a zone stretches that zone's boundary by the band.
    const double protect_edge =
        (previous == Zone::Protect) ? cp.l_protect - band : cp.l_protect + band;
    const double capture_edge =
        (previous == Zone::Capture) ? cp.l_warn + band : cp.l_warn - band;
    if (d12_hat >= protect_edge) return Zone::Protect;
    if (d12_hat < capture_edge) return Zone::Capture;
    return Zone::Warn;
}

double radius_schedule(const EngagementState& eng, const ControllerParams& cp) {
    if (eng.capture_step_count >= cp.t_in) return cp.rc;
    return cp.r1 - static_cast<double>(eng.capture_step_count) * (cp.r1 - cp.rc) /
                       static_cast<double>(cp.t_in);
}

EngagementState step_engagement(const EngagementState& eng, double d12_hat,
                                const ControllerParams& cp) {
    EngagementState next;
    next.zone = classify_zone(d12_hat, cp);
    if (next.zone == Zone::Capture) {
        next.capture_step_count =
            (eng.zone == Zone::Capture) ? eng.capture_step_count + 1 : 0;
        next.current_radius = radius_schedule(next, cp);
    } else {
        next.capture_step_count = 0;
        next.current_radius = cp.r1;
    }
    return next;
}

Vec3 protected_reference(const Vec3& protected_pos, const ControllerParams& cp) {
    if (!cp.protected_ground) return protected_pos;
    return {protected_pos.x(), protected_pos.y(), cp.h1};
}

namespace {

// u_i = 2/t^2 [ (alpha-1) g q_i + delta_zeta_i ] + 2/t (v_target - v_i)
Vec3 control_law(int guardian, const AgentState& g_state, const Vec3& target_pos,
                 const Vec3& target_vel, double g, long k,
                 const ControllerParams& cp, const ShapeParams& sp) {
    const Vec3 q = g_state.position - target_pos;
    const double t2 = cp.t * cp.t;
    return 2.0 / t2 * ((cp.alpha - 1.0) * g * q + delta_zeta(guardian, k, cp.alpha, sp)) +
           2.0 / cp.t * (target_vel - g_state.velocity);
}

} // namespace

Vec3 control_protect(int guardian, const std::array<AgentState, 2>& guardians,
                     const AgentState& protected_state, long k,
                     const ControllerParams& cp, const ShapeParams& sp) {
    const Vec3 ref = protected_reference(protected_state.position, cp);
    const double g = g_constraint((guardians[0].position - ref).norm(),
                                  (guardians[1].position - ref).norm(), cp);
    return control_law(guardian, guardians[guardian - 1], ref,
                       protected_state.velocity, g, k, cp, sp);
}

Vec3 control_engage(int guardian, const std::array<AgentState, 2>& guardians,
                    const FilterState& fs, long k,
                    const ControllerParams& cp, const ShapeParams& sp) {
    const Vec3 est_pos = fs.estimate.head<3>();
    const Vec3 est_vel = fs.estimate.tail<3>();
    const double g = g_constraint((guardians[0].position - est_pos).norm(),
                                  (guardians[1].position - est_pos).norm(), cp);
    return control_law(guardian, guardians[guardian - 1], est_pos, est_vel, g, k,
                       cp, sp);
}

ControlDecomposition control_protect_parts(int guardian,
                                           const std::array<AgentState, 2>& guardians,
                                           const AgentState& protected_state, long k,
                                           const ControllerParams& cp,
                                           const ShapeParams& sp) {
    if (guardian != 1 && guardian != 2) {
        throw std::invalid_argument("control_protect_parts: guardian index must be 1 or 2");
    }
    const Vec3 ref = protected_reference(protected_state.position, cp);
    const double g = g_constraint((guardians[0].position - ref).norm(),
                                  (guardians[1].position - ref).norm(), cp);
    const Vec3 q = guardians[guardian - 1].position - ref;
    // The shape terms carry the opposite sign of delta_zeta's (-1)^i.
    const double sign = (guardian == 1) ? 1.0 : -1.0;
    const double t2 = cp.t * cp.t;

    ControlDecomposition parts;
    parts.encircle = 2.0 * cp.alpha / t2 * (g * q + sign * shape_vector(k, sp));
    parts.track = -2.0 / t2 * (g * q + sign * shape_vector(k + 1, sp));
    parts.compensate =
        2.0 / cp.t * (protected_state.velocity - guardians[guardian - 1].velocity);
    return parts;
}

std::pair<double, double> as_manner_residual(const Vec3& zeta, const Vec3& q1,
                                             const Vec3& q2) {
    const double nz = zeta.norm();
    return {zeta.dot(q1) + nz * q1.norm(), zeta.dot(q2) - nz * q2.norm()};
}

} // namespace encircle
