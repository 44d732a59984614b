#pragma once

#include "encircle/asatc.hpp"
#include "encircle/kinematics.hpp"
#include "encircle/target_motion.hpp"
#include "encircle/ranging.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace encircle {

struct TargetConfig {
    AgentState initial;
    double gamma = 1.0;
    Mat3 w1{Mat3::Zero()};
    Mat3 w2{Mat3::Zero()};

    MixtureAccelModel mixture() const { return MixtureAccelModel(gamma, w1, w2); }
};

struct ShapeConfig {
    double rho = 1.0 / 24.0;
    double height_amp = 0.2;   // h(k) = height_amp * cos(height_freq * pi * k)
    double height_freq = 1.0 / 8.0;

    double height_at(long k) const;
};

/// Full scenario description: everything an episode needs besides a seed.
struct ScenarioConfig {
    double timestep = 0.5;
    long horizon = 200;
    long burn_in = 100;
    std::vector<std::uint64_t> seeds;

    AgentState guardian1, guardian2;
    TargetConfig protected_target;
    TargetConfig hostile_target;
    RangeNoiseModel range_noise;
    ShapeConfig shape;
    ControllerParams controller;

    Mat6 initial_covariance{Mat6::Identity()};
    // Absent: start the estimate at the protected target's position with
    // zero velocity.
    std::optional<Vec6> initial_estimate;

    Vec6 resolved_initial_estimate() const;
    void validate() const;

    /// FNV-1a hash of a canonical serialization; identifies the scenario in
    /// exported logs.
    std::string hash() const;
    std::string canonical_string() const;
};

/// Parse and validate a YAML scenario file. Unknown keys are rejected;
/// validation failures name the violated constraint.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& yaml_text);

} // namespace encircle
