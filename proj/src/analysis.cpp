#include "encircle/analysis.hpp"

#include "encircle/asatc.hpp"

#include <stdexcept>

namespace encircle {

namespace {

GramianReport report_from(const Mat3& s, long start, long window, double tol) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(s);
    GramianReport rep;
    rep.window_start = start;
    rep.window_len = window;
    rep.min_eig = es.eigenvalues().minCoeff();
    rep.max_eig = es.eigenvalues().maxCoeff();
    rep.is_pe = rep.min_eig > tol;
    return rep;
}

void check_window(std::size_t n, long start, long window, const char* what) {
    if (window < 1) {
        throw std::out_of_range(std::string(what) + ": window must be >= 1");
    }
    if (start < 0 || static_cast<std::size_t>(start + window) > n) {
        throw std::out_of_range(std::string(what) + ": window exceeds sequence");
    }
}

} // namespace

GramianReport pe_gramian(std::span<const Vec3> seq, long start, long window,
                         double tol) {
    check_window(seq.size(), start, window, "pe_gramian");
    Mat3 s = Mat3::Zero();
    for (long m = start; m < start + window; ++m) {
        s += seq[m] * seq[m].transpose();
    }
    return report_from(s, start, window, tol);
}

GramianReport observability_gramian(std::span<const Vec3> q12_seq, double gamma2,
                                    double t, long start, long window, double tol) {
    check_window(q12_seq.size(), start, window, "observability_gramian");
    if (!(gamma2 > 0.0)) {
        throw std::invalid_argument("observability_gramian: gamma2 must be > 0");
    }
    Mat6 s = Mat6::Zero();
    for (long m = start; m < start + window; ++m) {
        const Mat3 outer = q12_seq[m] * q12_seq[m].transpose();
        const double h = -static_cast<double>(start + window - 1 - m) * t;
        s.topLeftCorner<3, 3>() += outer;
        s.topRightCorner<3, 3>() += h * outer;
        s.bottomLeftCorner<3, 3>() += h * outer;
        s.bottomRightCorner<3, 3>() += h * h * outer;
    }
    s /= gamma2;

    Eigen::SelfAdjointEigenSolver<Mat6> es(s);
    GramianReport rep;
    rep.window_start = start;
    rep.window_len = window;
    rep.min_eig = es.eigenvalues().minCoeff();
    rep.max_eig = es.eigenvalues().maxCoeff();
    rep.is_pe = rep.min_eig > tol;
    return rep;
}

ErrorTrace compute_errors(const SimLog& log, long burn_in) {
    ErrorTrace tr;
    tr.burn_in = burn_in;
    const std::size_t n = log.steps.size();
    tr.est_pos_norm.reserve(n);
    tr.est_vel_norm.reserve(n);
    tr.e1_norm.reserve(n);
    tr.e2_norm.reserve(n);
    tr.zone.reserve(n);

    double sum_pos = 0.0, sum_vel = 0.0, sum_e1 = 0.0, sum_e2 = 0.0;
    long n_post = 0, n_e1 = 0, n_e2 = 0;

    for (const StepRecord& r : log.steps) {
        const Vec3 est_p = r.estimate.head<3>();
        const Vec3 est_v = r.estimate.tail<3>();
        const double ep = (r.hostile_target.position - est_p).norm();
        const double ev = (r.hostile_target.velocity - est_v).norm();

        Vec3 ref1 = r.protected_target.position;
        if (log.protected_ground) ref1.z() = log.protected_height;
        const double e1 = ((r.guardian1.position - ref1) +
                           (r.guardian2.position - ref1)).norm();
        const Vec3& t2 = r.hostile_target.position;
        const double e2 = ((r.guardian1.position - t2) +
                           (r.guardian2.position - t2)).norm();

        const Zone z = static_cast<Zone>(r.zone);
        tr.est_pos_norm.push_back(ep);
        tr.est_vel_norm.push_back(ev);
        tr.e1_norm.push_back(e1);
        tr.e2_norm.push_back(e2);
        tr.zone.push_back(z);

        if (r.k > burn_in) {
            sum_pos += ep * ep;
            sum_vel += ev * ev;
            ++n_post;
            if (z == Zone::Protect) {
                sum_e1 += e1 * e1;
                ++n_e1;
            } else {
                sum_e2 += e2 * e2;
                ++n_e2;
            }
        }
    }

    if (n_post > 0) {
        tr.mean_sq_est_pos = sum_pos / static_cast<double>(n_post);
        tr.mean_sq_est_vel = sum_vel / static_cast<double>(n_post);
    }
    if (n_e1 > 0) tr.mean_sq_e1_protect = sum_e1 / static_cast<double>(n_e1);
    if (n_e2 > 0) tr.mean_sq_e2_engage = sum_e2 / static_cast<double>(n_e2);
    return tr;
}

bool contraction_check(std::span<const double> g_seq, double alpha, double beta) {
    const double bound = std::max(1.0 / beta, 1.0 - 1.0 / beta);
    for (double g : g_seq) {
        const double a_tilde = g * (alpha - 1.0) + 1.0;
        if (!(std::abs(a_tilde) < bound)) return false;
    }
    return true;
}

} // namespace encircle
