#include "encircle/simulate.hpp"

#include "encircle/analysis.hpp"
#include "encircle/rng.hpp"
#include "encircle/tse.hpp"

#include <stdexcept>
#include <string>

namespace encircle {

namespace {

void check_finite(const AgentState& s, long k, const char* who) {
    if (!s.stacked().allFinite()) {
        throw std::runtime_error("simulation diverged at step " + std::to_string(k) +
                                 ": non-finite state of " + who);
    }
}

} // namespace

SimLog run_episode(const ScenarioConfig& cfg, std::uint64_t seed) {
    cfg.validate();

    const StepMatrices step_m = make_step_matrices(cfg.timestep);
    const MixtureAccelModel mix1 = cfg.protected_target.mixture();
    const MixtureAccelModel mix2 = cfg.hostile_target.mixture();

    FilterParams fp;
    fp.step = step_m;
    fp.process_variance = mix2.effective_variance();
    fp.initial_covariance = cfg.initial_covariance;

    FilterState fs;
    fs.estimate = cfg.resolved_initial_estimate();
    fs.covariance = cfg.initial_covariance;

    const ControllerParams& cp = cfg.controller;
    EngagementState eng{Zone::Protect, cp.r1, 0};

    AgentState g1 = cfg.guardian1;
    AgentState g2 = cfg.guardian2;
    AgentState t1 = cfg.protected_target.initial;
    AgentState t2 = cfg.hostile_target.initial;

    RngStream root(seed);
    RngStream accel_rng = root.split(0);
    RngStream range_rng = root.split(1);

    SimLog log;
    log.seed = seed;
    log.config_hash = cfg.hash();
    log.timestep = cfg.timestep;
    log.alpha = cp.alpha;
    log.beta = cp.beta;
    log.protected_ground = cp.protected_ground;
    log.protected_height = cp.h1;
    log.steps.reserve(static_cast<std::size_t>(cfg.horizon));

    for (long k = 0; k < cfg.horizon; ++k) {
        // Targets move on their own.
        const Vec3 u1bar = mix1.sample(accel_rng);
        const Vec3 u2bar = mix2.sample(accel_rng);
        t1 = propagate(t1, u1bar, step_m);
        t2 = propagate(t2, u2bar, step_m);

        // Range the hostile target from the current guardian positions.
        const double m1sq = measure_squared_range(g1.position, t2.position,
                                                  cfg.range_noise.sigma1, range_rng);
        const double m2sq = measure_squared_range(g2.position, t2.position,
                                                  cfg.range_noise.sigma2, range_rng);
        const ObservationSample obs =
            build_observation(g1.position, g2.position, m1sq, m2sq, cfg.range_noise);

        const Prediction pred = predict(fs, fp);
        const UpdateResult upd = update(pred, obs, fp);
        fs = upd.state;

        const DistanceEstimates dist =
            estimate_distances(fs, g1.position, g2.position, t1.position);
        eng = step_engagement(eng, dist.between_targets, cp);

        // Shape the controller sees this step: the capture schedule owns the
        // radius inside the capture zone, r1 elsewhere.
        ShapeParams sp;
        sp.rho = cfg.shape.rho;
        sp.height = [&cfg](long kk) { return cfg.shape.height_at(kk); };
        if (eng.zone == Zone::Capture) {
            const EngagementState eng_now = eng;
            sp.radius = [eng_now, &cp, k](long kk) {
                EngagementState e = eng_now;
                e.capture_step_count += kk - k;
                return radius_schedule(e, cp);
            };
        } else {
            sp.radius = [&cp](long) { return cp.r1; };
        }

        const std::array<AgentState, 2> guardians{g1, g2};
        Vec3 u1, u2;
        double g_used;
        if (eng.zone == Zone::Protect) {
            const Vec3 ref = protected_reference(t1.position, cp);
            g_used = g_constraint((g1.position - ref).norm(),
                                  (g2.position - ref).norm(), cp);
            u1 = control_protect(1, guardians, t1, k, cp, sp);
            u2 = control_protect(2, guardians, t1, k, cp, sp);
        } else {
            g_used = g_constraint(dist.from_guardian1, dist.from_guardian2, cp);
            u1 = control_engage(1, guardians, fs, k, cp, sp);
            u2 = control_engage(2, guardians, fs, k, cp, sp);
        }

        g1 = propagate(g1, u1, step_m);
        g2 = propagate(g2, u2, step_m);
        check_finite(g1, k, "guardian 1");
        check_finite(g2, k, "guardian 2");
        check_finite(t2, k, "hostile target");
        if (!fs.estimate.allFinite()) {
            throw std::runtime_error("simulation diverged at step " +
                                     std::to_string(k) + ": non-finite estimate");
        }

        StepRecord rec;
        rec.k = k;
        rec.guardian1 = g1;
        rec.guardian2 = g2;
        rec.protected_target = t1;
        rec.hostile_target = t2;
        rec.estimate = fs.estimate;
        rec.covariance_diag = fs.covariance.diagonal();
        rec.y = obs.y;
        rec.zone = static_cast<int>(eng.zone);
        rec.u1 = u1;
        rec.u2 = u2;
        rec.g = g_used;
        rec.radius = eng.current_radius;
        rec.nis = (upd.innovation_variance > 0.0)
                      ? upd.innovation * upd.innovation / upd.innovation_variance
                      : 0.0;
        rec.err_pos = (t2.position - fs.estimate.head<3>()).norm();
        rec.err_vel = (t2.velocity - fs.estimate.tail<3>()).norm();
        const Vec3 ref1 = protected_reference(t1.position, cp);
        rec.e1_norm = ((g1.position - ref1) + (g2.position - ref1)).norm();
        rec.e2_norm = ((g1.position - t2.position) + (g2.position - t2.position)).norm();
        log.steps.push_back(rec);

        if (eng.zone == Zone::Capture && eng.current_radius <= cp.rc) {
            log.captured = true;
            log.capture_step = k;
            break;
        }
    }
    return log;
}

SeedSummary summarize_episode(const SimLog& log, long burn_in) {
    SeedSummary s;
    s.seed = log.seed;
    s.captured = log.captured;
    s.capture_step = log.capture_step;
    s.steps = static_cast<long>(log.steps.size());

    long n = 0, n_pos_ok = 0, n_vel_ok = 0, n_e1 = 0, n_e2 = 0;
    double sum_pos = 0.0, sum_vel = 0.0, sum_e1 = 0.0, sum_e2 = 0.0;
    for (const StepRecord& r : log.steps) {
        if (r.k <= burn_in) continue;
        ++n;
        sum_pos += r.err_pos;
        sum_vel += r.err_vel;
        if (r.err_pos < 0.5) ++n_pos_ok;
        if (r.err_vel < 0.1) ++n_vel_ok;
        if (static_cast<Zone>(r.zone) == Zone::Protect) {
            sum_e1 += r.e1_norm;
            ++n_e1;
        } else {
            sum_e2 += r.e2_norm;
            ++n_e2;
        }
    }
    if (n > 0) {
        s.mean_err_pos = sum_pos / n;
        s.mean_err_vel = sum_vel / n;
        s.frac_pos_within = static_cast<double>(n_pos_ok) / n;
        s.frac_vel_within = static_cast<double>(n_vel_ok) / n;
    }
    if (n_e1 > 0) s.mean_e1_protect = sum_e1 / n_e1;
    if (n_e2 > 0) s.mean_e2_engage = sum_e2 / n_e2;
    return s;
}

BatchSummary run_batch(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                       std::vector<SimLog>* logs) {
    if (seeds.empty()) {
        throw std::invalid_argument("run_batch: at least one seed is required");
    }
    BatchSummary b;
    b.per_seed.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        SimLog log = run_episode(cfg, seed);
        SeedSummary s = summarize_episode(log, cfg.burn_in);
        b.ensemble_mean_err_pos += s.mean_err_pos;
        b.ensemble_mean_err_vel += s.mean_err_vel;
        b.ensemble_mean_e1_protect += s.mean_e1_protect;
        b.ensemble_mean_e2_engage += s.mean_e2_engage;
        if (s.captured) ++b.captured_count;
        b.per_seed.push_back(s);
        if (logs) logs->push_back(std::move(log));
    }
    const double n = static_cast<double>(b.per_seed.size());
    b.ensemble_mean_err_pos /= n;
    b.ensemble_mean_err_vel /= n;
    b.ensemble_mean_e1_protect /= n;
    b.ensemble_mean_e2_engage /= n;
    return b;
}

} // namespace encircle
