#pragma once

#include "encircle/kinematics.hpp"
#include "encircle/simlog.hpp"

#include <span>
#include <vector>

namespace encircle {

/// Eigenvalue bounds of a windowed excitation or observability Gramian.
struct GramianReport {
    long window_start = 0;
    long window_len = 0;
    double min_eig = 0.0;
    double max_eig = 0.0;
    bool is_pe = false;
};

inline constexpr double kPeTolerance = 1e-8;

/// S = sum_{m=start}^{start+window-1} v(m) v(m)^T, reported through its
/// eigenvalue range. A uniformly positive min eigenvalue over all windows
/// is the persistent-excitation property.
GramianReport pe_gramian(std::span<const Vec3> seq, long start, long window,
                         double tol = kPeTolerance);

/// Windowed observability Gramian of the pair (A, C(m)) with
/// C(m) = [q12(m)^T, 0] and the inverse-power weights of the double
/// integrator: each term contributes
///   gamma2^-1 [ q q^T, h_m q q^T ; h_m q q^T, h_m^2 q q^T ],
/// h_m = -(start + window - 1 - m) t.
GramianReport observability_gramian(std::span<const Vec3> q12_seq, double gamma2,
                                    double t, long start, long window,
                                    double tol = kPeTolerance);

/// Per-step estimation and encirclement errors extracted from a log.
/// The encirclement reference for a ground protected target is its
/// projection onto the plane z = h1, matching what the controller tracks.
struct ErrorTrace {
    std::vector<double> est_pos_norm;  // || pbar2 - phat2 ||
    std::vector<double> est_vel_norm;  // || vbar2 - vhat2 ||
    std::vector<double> e1_norm;       // || q1^1 + q2^1 ||
    std::vector<double> e2_norm;       // || q1^2 + q2^2 ||
    std::vector<Zone> zone;

    // Mean squared norms over steps k > burn_in, split by controller phase:
    // e1 over Protect steps, e2 over Warn/Capture steps.
    double mean_sq_est_pos = 0.0;
    double mean_sq_est_vel = 0.0;
    double mean_sq_e1_protect = 0.0;
    double mean_sq_e2_engage = 0.0;
    long burn_in = 0;
};

ErrorTrace compute_errors(const SimLog& log, long burn_in = 0);

/// True iff every logged constraint value keeps the closed-loop factor
/// alpha_tilde = g (alpha - 1) + 1 strictly inside the contraction bound
/// max{1/beta, 1 - 1/beta}.
bool contraction_check(std::span<const double> g_seq, double alpha, double beta);

} // namespace encircle
