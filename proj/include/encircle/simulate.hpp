#pragma once

#include "encircle/scenario.hpp"
#include "encircle/simlog.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace encircle {

/// Run one episode. Per step: sample target accelerations, propagate the
/// targets, take the two squared-range measurements, run the estimator,
/// classify the zone from the estimated inter-target distance, advance the
/// capture schedule, compute the guardian controls, propagate the
/// guardians, log. The episode ends at the horizon or when the
/// encirclement radius reaches the capture radius inside the capture zone.
///
/// Deterministic: the same (config, seed) produces an identical log.
/// Throws on numeric blow-up, naming the step and the offending quantity.
SimLog run_episode(const ScenarioConfig& cfg, std::uint64_t seed);

struct SeedSummary {
    std::uint64_t seed = 0;
    bool captured = false;
    long capture_step = -1;
    long steps = 0;
    // Post-burn-in statistics.
    double mean_err_pos = 0.0;
    double mean_err_vel = 0.0;
    double frac_pos_within = 0.0;  // fraction of steps with err_pos < 0.5
    double frac_vel_within = 0.0;  // fraction of steps with err_vel < 0.1
    double mean_e1_protect = 0.0;
    double mean_e2_engage = 0.0;
};

struct BatchSummary {
    std::vector<SeedSummary> per_seed;
    double ensemble_mean_err_pos = 0.0;
    double ensemble_mean_err_vel = 0.0;
    double ensemble_mean_e1_protect = 0.0;
    double ensemble_mean_e2_engage = 0.0;
    long captured_count = 0;
};

SeedSummary summarize_episode(const SimLog& log, long burn_in);

/// Sequentially run one episode per seed and aggregate. Deterministic
/// given the seed list. Logs can optionally be collected for export.
BatchSummary run_batch(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                       std::vector<SimLog>* logs = nullptr);

} // namespace encircle
