#include "encircle/target_motion.hpp"

#include <stdexcept>

namespace encircle {

namespace {

// Symmetric PSD factor L with L L^T = W, tolerant of zero eigenvalues.
Mat3 psd_factor(const Mat3& w, const char* name) {
    if (!w.allFinite()) {
        throw std::invalid_argument(std::string(name) + ": non-finite entries");
    }
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument(std::string(name) + ": not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(w);
    Vec3 lambda = es.eigenvalues();
    if (lambda.minCoeff() < -1e-12) {
        throw std::invalid_argument(std::string(name) + ": not positive semidefinite");
    }
    lambda = lambda.cwiseMax(0.0);
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
}

} // namespace

MixtureAccelModel::MixtureAccelModel(double gamma, const Mat3& w1, const Mat3& w2)
    : gamma_(gamma), w1_(w1), w2_(w2) {
    if (!(gamma > 0.0) || !(gamma <= 1.0)) {
        throw std::invalid_argument("mixture gamma must be in (0, 1]");
    }
    l1_ = psd_factor(w1, "W1");
    l2_ = psd_factor(w2, "W2");
}

MixtureAccelModel MixtureAccelModel::diagonal(double gamma, const Vec3& w1_diag,
                                              const Vec3& w2_diag) {
    return MixtureAccelModel(gamma, w1_diag.asDiagonal(), w2_diag.asDiagonal());
}

Mat3 MixtureAccelModel::effective_variance() const {
    return gamma_ * w1_ + (1.0 - gamma_) * w2_;
}

Vec3 MixtureAccelModel::sample(RngStream& rng) const {
    const bool mild = rng.bernoulli(gamma_);
    const Vec3 z{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    return (mild ? l1_ : l2_) * z;
}

} // namespace encircle
