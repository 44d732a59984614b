#pragma once

#include "encircle/kinematics.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace encircle {

enum class Zone; // asatc.hpp

/// One simulation step. States are the post-propagation values for the
/// step; the observation and controls are the ones produced during it.
struct StepRecord {
    long k = 0;
    AgentState guardian1, guardian2;
    AgentState protected_target, hostile_target;
    Vec6 estimate{Vec6::Zero()};
    Vec6 covariance_diag{Vec6::Zero()};
    double y = 0.0;
    int zone = 0; // Zone enum value
    Vec3 u1{Vec3::Zero()}, u2{Vec3::Zero()};
    double g = 0.0;
    double radius = 0.0;
    double nis = 0.0; // innovation^2 / innovation variance
    double err_pos = 0.0;
    double err_vel = 0.0;
    double e1_norm = 0.0;
    double e2_norm = 0.0;
};

/// Append-only episode log plus the metadata needed to interpret it
/// without the original config object.
struct SimLog {
    std::vector<StepRecord> steps;

    std::uint64_t seed = 0;
    std::string config_hash;
    bool captured = false;
    long capture_step = -1;
    double timestep = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    bool protected_ground = false;
    double protected_height = 0.0;

    bool operator==(const SimLog&) const;
};

bool operator==(const StepRecord&, const StepRecord&);

/// Delimited text export: '#' metadata lines, one header row, one row per
/// step in a fixed documented column order. Values are written with enough
/// digits to round-trip doubles exactly.
void export_csv(const SimLog& log, std::ostream& out);
void export_csv(const SimLog& log, const std::string& path);

SimLog import_csv(std::istream& in);
SimLog import_csv(const std::string& path);

/// Number of data columns in the export schema.
int csv_column_count();

/// Emit a standalone Python script that plots control magnitudes, error
/// norms, and the 3D trajectories from an exported log.
void write_plot_script(const std::string& csv_path, const std::string& script_path);

} // namespace encircle
