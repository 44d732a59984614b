#include "encircle/simlog.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace encircle {

namespace {

const char* const kColumns[] = {
    "k",
    "g1_px", "g1_py", "g1_pz", "g1_vx", "g1_vy", "g1_vz",
    "g2_px", "g2_py", "g2_pz", "g2_vx", "g2_vy", "g2_vz",
    "t1_px", "t1_py", "t1_pz", "t1_vx", "t1_vy", "t1_vz",
    "t2_px", "t2_py", "t2_pz", "t2_vx", "t2_vy", "t2_vz",
    "est_px", "est_py", "est_pz", "est_vx", "est_vy", "est_vz",
    "cov_d1", "cov_d2", "cov_d3", "cov_d4", "cov_d5", "cov_d6",
    "y", "zone",
    "u1_x", "u1_y", "u1_z", "u2_x", "u2_y", "u2_z",
    "g", "radius", "nis",
    "err_pos", "err_vel", "e1_norm", "e2_norm",
};
constexpr int kNumColumns = static_cast<int>(sizeof(kColumns) / sizeof(kColumns[0]));

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void flatten(const StepRecord& r, std::vector<double>& out) {
    out.clear();
    out.push_back(static_cast<double>(r.k));
    auto push_state = [&](const AgentState& s) {
        for (int i = 0; i < 3; ++i) out.push_back(s.position[i]);
        for (int i = 0; i < 3; ++i) out.push_back(s.velocity[i]);
    };
    push_state(r.guardian1);
    push_state(r.guardian2);
    push_state(r.protected_target);
    push_state(r.hostile_target);
    for (int i = 0; i < 6; ++i) out.push_back(r.estimate[i]);
    for (int i = 0; i < 6; ++i) out.push_back(r.covariance_diag[i]);
    out.push_back(r.y);
    out.push_back(static_cast<double>(r.zone));
    for (int i = 0; i < 3; ++i) out.push_back(r.u1[i]);
    for (int i = 0; i < 3; ++i) out.push_back(r.u2[i]);
    out.push_back(r.g);
    out.push_back(r.radius);
    out.push_back(r.nis);
    out.push_back(r.err_pos);
    out.push_back(r.err_vel);
    out.push_back(r.e1_norm);
    out.push_back(r.e2_norm);
}

StepRecord unflatten(const std::vector<double>& v) {
    StepRecord r;
    int i = 0;
    r.k = static_cast<long>(v[i++]);
    auto pull_state = [&](AgentState& s) {
        for (int j = 0; j < 3; ++j) s.position[j] = v[i++];
        for (int j = 0; j < 3; ++j) s.velocity[j] = v[i++];
    };
    pull_state(r.guardian1);
    pull_state(r.guardian2);
    pull_state(r.protected_target);
    pull_state(r.hostile_target);
    for (int j = 0; j < 6; ++j) r.estimate[j] = v[i++];
    for (int j = 0; j < 6; ++j) r.covariance_diag[j] = v[i++];
    r.y = v[i++];
    r.zone = static_cast<int>(v[i++]);
    for (int j = 0; j < 3; ++j) r.u1[j] = v[i++];
    for (int j = 0; j < 3; ++j) r.u2[j] = v[i++];
    r.g = v[i++];
    r.radius = v[i++];
    r.nis = v[i++];
    r.err_pos = v[i++];
    r.err_vel = v[i++];
    r.e1_norm = v[i++];
    r.e2_norm = v[i++];
    return r;
}

} // namespace

int csv_column_count() { return kNumColumns; }

bool operator==(const StepRecord& a, const StepRecord& b) {
    std::vector<double> fa, fb;
    flatten(a, fa);
    flatten(b, fb);
    return fa == fb;
}

bool SimLog::operator==(const SimLog& o) const {
    return steps == o.steps && seed == o.seed && config_hash == o.config_hash &&
           captured == o.captured && capture_step == o.capture_step &&
           timestep == o.timestep && alpha == o.alpha && beta == o.beta &&
           protected_ground == o.protected_ground &&
           protected_height == o.protected_height;
}

void export_csv(const SimLog& log, std::ostream& out) {
    out << "# seed=" << log.seed << "\n";
    out << "# config_hash=" << log.config_hash << "\n";
    out << "# captured=" << (log.captured ? 1 : 0) << "\n";
    out << "# capture_step=" << log.capture_step << "\n";
    out << "# timestep=" << fmt(log.timestep) << "\n";
    out << "# alpha=" << fmt(log.alpha) << "\n";
    out << "# beta=" << fmt(log.beta) << "\n";
    out << "# protected_ground=" << (log.protected_ground ? 1 : 0) << "\n";
    out << "# protected_height=" << fmt(log.protected_height) << "\n";
    for (int i = 0; i < kNumColumns; ++i) {
        out << kColumns[i] << (i + 1 < kNumColumns ? ',' : '\n');
    }
    std::vector<double> row;
    for (const StepRecord& r : log.steps) {
        flatten(r, row);
        for (int i = 0; i < kNumColumns; ++i) {
            out << fmt(row[i]) << (i + 1 < kNumColumns ? ',' : '\n');
        }
    }
}

void export_csv(const SimLog& log, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    export_csv(log, f);
    if (!f.good()) throw std::runtime_error("write failed: " + path);
}

SimLog import_csv(std::istream& in) {
    SimLog log;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            std::string val = line.substr(eq + 1);
            if (key == "seed") log.seed = std::stoull(val);
            else if (key == "config_hash") log.config_hash = val;
            else if (key == "captured") log.captured = (val == "1");
            else if (key == "capture_step") log.capture_step = std::stol(val);
            else if (key == "timestep") log.timestep = std::stod(val);
            else if (key == "alpha") log.alpha = std::stod(val);
            else if (key == "beta") log.beta = std::stod(val);
            else if (key == "protected_ground") log.protected_ground = (val == "1");
            else if (key == "protected_height") log.protected_height = std::stod(val);
            continue;
        }
        if (!header_seen) { // column names
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(kNumColumns);
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != kNumColumns) {
            throw std::runtime_error("log row has " + std::to_string(row.size()) +
                                     " columns, expected " + std::to_string(kNumColumns));
        }
        log.steps.push_back(unflatten(row));
    }
    return log;
}

SimLog import_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return import_csv(f);
}

void write_plot_script(const std::string& csv_path, const std::string& script_path) {
    std::ofstream f(script_path);
    if (!f) throw std::runtime_error("cannot open for writing: " + script_path);
    f << R"PY(#!/usr/bin/env python3
"""Plot an exported episode log: control magnitudes, error norms, 3D paths.

Usage: plot_episode.py [log.csv [outdir]]
"""
import csv
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

log_path = sys.argv[1] if len(sys.argv) > 1 else )PY";
    f << '"' << csv_path << '"';
    f << R"PY(
outdir = sys.argv[2] if len(sys.argv) > 2 else os.path.dirname(log_path) or "."

rows = []
with open(log_path) as fh:
    reader = csv.DictReader(r for r in fh if not r.startswith("#"))
    for row in reader:
        rows.append({k: float(v) for k, v in row.items()})

k = [r["k"] for r in rows]
norm3 = lambda r, p: math.sqrt(r[p + "_x"] ** 2 + r[p + "_y"] ** 2 + r[p + "_z"] ** 2)

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
ax1.plot(k, [norm3(r, "u1") for r in rows], label="||u1||")
ax1.plot(k, [norm3(r, "u2") for r in rows], label="||u2||")
ax1.set_ylabel("control magnitude [m/s^2]")
ax1.legend()
ax2.plot(k, [r["g"] for r in rows], label="g", color="tab:green")
ax2.set_ylabel("constraint g")
ax2.set_xlabel("step k")
ax2.legend()
fig.tight_layout()
fig.savefig(os.path.join(outdir, "controls.png"), dpi=120)

fig, (ax1, ax2, ax3) = plt.subplots(3, 1, figsize=(7, 8), sharex=True)
ax1.plot(k, [r["err_pos"] for r in rows], label="position est. error")
ax1.axhline(0.5, ls="--", c="gray")
ax1.set_ylabel("[m]")
ax1.legend()
ax2.plot(k, [r["err_vel"] for r in rows], label="velocity est. error")
ax2.axhline(0.1, ls="--", c="gray")
ax2.set_ylabel("[m/s]")
ax2.legend()
ax3.plot(k, [r["e1_norm"] for r in rows], label="||e1|| (protected)")
ax3.plot(k, [r["e2_norm"] for r in rows], label="||e2|| (hostile)")
ax3.set_ylabel("[m]")
ax3.set_xlabel("step k")
ax3.legend()
fig.tight_layout()
fig.savefig(os.path.join(outdir, "errors.png"), dpi=120)

fig = plt.figure(figsize=(7, 6))
ax = fig.add_subplot(projection="3d")
for prefix, label in [("g1", "guardian 1"), ("g2", "guardian 2"),
                      ("t1", "protected target"), ("t2", "hostile target")]:
    ax.plot([r[prefix + "_px"] for r in rows],
            [r[prefix + "_py"] for r in rows],
            [r[prefix + "_pz"] for r in rows], label=label)
est = ax.plot([r["est_px"] for r in rows], [r["est_py"] for r in rows],
              [r["est_pz"] for r in rows], "--", label="estimate")
ax.set_xlabel("x [m]"); ax.set_ylabel("y [m]"); ax.set_zlabel("z [m]")
ax.legend()
fig.savefig(os.path.join(outdir, "trajectories.png"), dpi=120)
print("wrote plots to", outdir)
)PY";
    if (!f.good()) throw std::runtime_error("write failed: " + script_path);
}

} // namespace encircle
