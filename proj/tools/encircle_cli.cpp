// Command-line front end: run episodes, batch over seeds, analyze logs,
// emit plot scripts.

#include "encircle/analysis.hpp"
#include "encircle/simulate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace encircle;

namespace {

std::string log_filename(std::uint64_t seed) {
    return "episode_seed" + std::to_string(seed) + ".csv";
}

void print_seed_summary(const SeedSummary& s) {
    std::cout << "seed " << s.seed << ": steps=" << s.steps
              << " captured=" << (s.captured ? "yes" : "no");
    if (s.captured) std::cout << " at k=" << s.capture_step;
    std::cout << "\n  post burn-in: mean err_pos=" << s.mean_err_pos
              << " m, mean err_vel=" << s.mean_err_vel
              << " m/s, within-bounds frac pos=" << s.frac_pos_within
              << " vel=" << s.frac_vel_within
              << "\n  mean |e1| (protect)=" << s.mean_e1_protect
              << " m, mean |e2| (warn/capture)=" << s.mean_e2_engage << " m\n";
}

int cmd_run(const std::string& config_path, std::uint64_t seed,
            const std::string& outdir, long burn_in_override) {
    ScenarioConfig cfg = load_config(config_path);
    if (burn_in_override >= 0) cfg.burn_in = burn_in_override;

    SimLog log = run_episode(cfg, seed);
    fs::create_directories(outdir);
    const std::string path = (fs::path(outdir) / log_filename(seed)).string();
    export_csv(log, path);
    print_seed_summary(summarize_episode(log, cfg.burn_in));
    std::cout << "log written to " << path << "\n";
    return 0;
}

int cmd_batch(const std::string& config_path, std::vector<std::uint64_t> seeds,
              const std::string& outdir, long burn_in_override) {
    ScenarioConfig cfg = load_config(config_path);
    if (burn_in_override >= 0) cfg.burn_in = burn_in_override;
    if (seeds.empty()) seeds = cfg.seeds;
    if (seeds.empty()) {
        std::cerr << "error: no seeds given (config has none and --seeds is empty)\n";
        return 2;
    }

    std::vector<SimLog> logs;
    BatchSummary batch = run_batch(cfg, seeds, &logs);

    fs::create_directories(outdir);
    for (const SimLog& log : logs) {
        export_csv(log, (fs::path(outdir) / log_filename(log.seed)).string());
    }
    for (const SeedSummary& s : batch.per_seed) print_seed_summary(s);
    std::cout << "--- ensemble (" << batch.per_seed.size() << " seeds) ---\n"
              << "mean err_pos=" << batch.ensemble_mean_err_pos << " m\n"
              << "mean err_vel=" << batch.ensemble_mean_err_vel << " m/s\n"
              << "mean |e1| (protect)=" << batch.ensemble_mean_e1_protect << " m\n"
              << "mean |e2| (warn/capture)=" << batch.ensemble_mean_e2_engage << " m\n"
              << "captured " << batch.captured_count << "/" << batch.per_seed.size()
              << "\n";
    std::cout << "logs written to " << outdir << "\n";
    return 0;
}

int cmd_analyze(const std::string& log_path, const std::string& config_path,
                long burn_in_override, long pe_window, long obs_window) {
    ScenarioConfig cfg = load_config(config_path);
    if (burn_in_override >= 0) cfg.burn_in = burn_in_override;

    const SimLog log = import_csv(log_path);
    const ErrorTrace tr = compute_errors(log, cfg.burn_in);

    std::vector<Vec3> q12;
    std::vector<double> g_seq;
    q12.reserve(log.steps.size());
    for (const StepRecord& r : log.steps) {
        q12.push_back(r.guardian1.position - r.guardian2.position);
        g_seq.push_back(r.g);
    }

    const double gamma2 =
        0.25 * (cfg.range_noise.sigma1 + cfg.range_noise.sigma2);
    const long n = static_cast<long>(q12.size());

    std::cout << "episode: " << n << " steps, seed " << log.seed
              << ", captured=" << (log.captured ? "yes" : "no") << "\n";

    double pe_min = -1.0, pe_max = 0.0;
    long pe_windows = 0;
    for (long s = cfg.burn_in; s + pe_window <= n; ++s) {
        GramianReport rep = pe_gramian(q12, s, pe_window);
        if (pe_min < 0.0 || rep.min_eig < pe_min) pe_min = rep.min_eig;
        if (rep.max_eig > pe_max) pe_max = rep.max_eig;
        ++pe_windows;
    }
    std::cout << "PE of q12 (window " << pe_window << "): " << pe_windows
              << " windows, min eig in [" << pe_min << ", " << pe_max << "]\n";

    double obs_min = -1.0;
    long obs_windows = 0;
    if (gamma2 > 0.0) {
        for (long s = cfg.burn_in; s + obs_window <= n; ++s) {
            GramianReport rep =
                observability_gramian(q12, gamma2, cfg.timestep, s, obs_window);
            if (obs_min < 0.0 || rep.min_eig < obs_min) obs_min = rep.min_eig;
            ++obs_windows;
        }
        std::cout << "observability Gramian (window " << obs_window << "): "
                  << obs_windows << " windows, min eig >= " << obs_min << "\n";
    } else {
        std::cout << "observability Gramian skipped: gamma2 = 0\n";
    }

    const bool contraction = contraction_check(g_seq, cfg.controller.alpha,
                                               cfg.controller.beta);
    std::cout << "contraction |g(alpha-1)+1| < max{1/beta, 1-1/beta}: "
              << (contraction ? "holds" : "VIOLATED") << "\n";
    std::cout << "post burn-in mean-square errors: est_pos=" << tr.mean_sq_est_pos
              << " est_vel=" << tr.mean_sq_est_vel
              << " e1(protect)=" << tr.mean_sq_e1_protect
              << " e2(warn/capture)=" << tr.mean_sq_e2_engage << "\n";

    std::cout << "--- summary ---\n"
              << "steps=" << n << "\n"
              << "captured=" << (log.captured ? 1 : 0) << "\n"
              << "capture_step=" << log.capture_step << "\n"
              << "pe_min_eig=" << pe_min << "\n"
              << "obs_min_eig=" << obs_min << "\n"
              << "contraction_ok=" << (contraction ? 1 : 0) << "\n"
              << "mean_sq_est_pos=" << tr.mean_sq_est_pos << "\n"
              << "mean_sq_est_vel=" << tr.mean_sq_est_vel << "\n"
              << "mean_sq_e1_protect=" << tr.mean_sq_e1_protect << "\n"
              << "mean_sq_e2_engage=" << tr.mean_sq_e2_engage << "\n"
              << "--- end summary ---\n";
    return 0;
}

int cmd_export_figures(const std::string& log_path, const std::string& outdir) {
    fs::create_directories(outdir);
    const std::string script = (fs::path(outdir) / "plot_episode.py").string();
    write_plot_script(fs::absolute(log_path).string(), script);
    std::cout << "plot script written to " << script
              << " (requires python3 + matplotlib)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Range-only target encirclement and interception simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string log_path;
    std::string outdir = "out";
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;
    long burn_in = -1;
    long pe_window = 48;
    long obs_window = 72;

    auto* run = app.add_subcommand("run", "run a single episode");
    run->add_option("-c,--config", config_path, "scenario YAML")->required();
    run->add_option("-s,--seed", seed, "RNG seed");
    run->add_option("-o,--out", outdir, "output directory");
    run->add_option("--burn-in", burn_in, "override burn-in steps");

    auto* batch = app.add_subcommand("batch", "run one episode per seed");
    batch->add_option("-c,--config", config_path, "scenario YAML")->required();
    batch->add_option("-s,--seeds", seeds, "seed list (default: config seeds)");
    batch->add_option("-o,--out", outdir, "output directory");
    batch->add_option("--burn-in", burn_in, "override burn-in steps");

    auto* analyze = app.add_subcommand("analyze", "Gramian and error report for a log");
    analyze->add_option("-l,--log", log_path, "exported episode CSV")->required();
    analyze->add_option("-c,--config", config_path, "scenario YAML")->required();
    analyze->add_option("--burn-in", burn_in, "override burn-in steps");
    analyze->add_option("--pe-window", pe_window, "PE window length");
    analyze->add_option("--obs-window", obs_window, "observability window length");

    auto* figures = app.add_subcommand("export-figures", "emit a plot script for a log");
    figures->add_option("-l,--log", log_path, "exported episode CSV")->required();
    figures->add_option("-o,--out", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, outdir, burn_in);
        if (batch->parsed()) return cmd_batch(config_path, seeds, outdir, burn_in);
        if (analyze->parsed()) {
            return cmd_analyze(log_path, config_path, burn_in, pe_window, obs_window);
        }
        if (figures->parsed()) return cmd_export_figures(log_path, outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
