#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "encircle/analysis.hpp"
#include "encircle/simulate.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace encircle;

namespace {

const std::string kConfigDir = ENCIRCLE_CONFIG_DIR;

ScenarioConfig sec4_config() {
    return load_config(kConfigDir + "/paper_sec4.yaml");
}

ScenarioConfig noise_free_config() {
    return load_config(kConfigDir + "/noise_free_protect.yaml");
}

} // namespace

TEST_CASE("bundled reference config carries the published parameters") {
    const ScenarioConfig cfg = sec4_config();
    CHECK(cfg.timestep == 0.5);
    CHECK(cfg.range_noise.sigma1 == 0.1);
    CHECK(cfg.range_noise.sigma2 == 0.1);
    CHECK(cfg.controller.alpha == -0.1);
    CHECK(cfg.controller.beta == 10.0);
    CHECK(cfg.controller.u_dist == 1.5);
    CHECK(cfg.controller.r1 == 0.9);
    CHECK(cfg.controller.rc == 0.1);
    CHECK(cfg.controller.t_in == 30);
    CHECK(cfg.controller.l_protect == 8.5);
    CHECK(cfg.controller.l_warn == 5.5);
    CHECK(cfg.controller.l_capture == 3.0);
    CHECK(cfg.controller.h1 == 0.7);
    CHECK(cfg.controller.protected_ground);
    CHECK(cfg.shape.rho == 1.0 / 24.0);
    CHECK(cfg.guardian1.position == Vec3{2, 2, 1});
    CHECK(cfg.guardian2.position == Vec3{0, 1.5, 0.5});
    CHECK(cfg.protected_target.initial.position == Vec3::Zero());
    CHECK(cfg.hostile_target.initial.position == Vec3{2, 12, 2});
    CHECK(cfg.hostile_target.initial.velocity == Vec3{-0.02, -0.1, 0});
    CHECK(cfg.initial_covariance == Mat6::Identity());
    CHECK(cfg.seeds.size() == 20);
    CHECK(cfg.resolved_initial_estimate() == Vec6::Zero());

    // Hostile mixture keeps the published shape: mild component frequent,
    // aggressive component rare and much larger.
    CHECK(cfg.hostile_target.gamma == 0.95);
    CHECK(cfg.hostile_target.w1(2, 2) == 0.0);
    CHECK(cfg.hostile_target.w2(0, 0) ==
          doctest::Approx(5.0 * cfg.hostile_target.w1(0, 0)).epsilon(1e-12));
    CHECK(cfg.hostile_target.w2(1, 1) ==
          doctest::Approx(5.0 * cfg.hostile_target.w1(1, 1)).epsilon(1e-12));
    CHECK(cfg.protected_target.gamma == 1.0);
}

TEST_CASE("config validation rejects broken scenarios") {
    const std::string base = R"(
timestep: 0.5
horizon: 10
burn_in: 0
)";
    // Unknown key.
    CHECK_THROWS_WITH_AS(parse_config(base + "bogus_key: 1\n"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    // Threshold ordering.
    CHECK_THROWS_WITH_AS(
        parse_config(base + "controller: {l_protect: 5.0, l_warn: 6.0}\n"),
        doctest::Contains("l_protect > l_warn"), std::invalid_argument);
    // Gain outside (-1/beta, 0).
    CHECK_THROWS_WITH_AS(parse_config(base + "controller: {alpha: -0.2, beta: 10.0}\n"),
                         doctest::Contains("alpha"), std::invalid_argument);
    // Bad mixture.
    CHECK_THROWS_AS(parse_config(base + "hostile_target: {gamma: 2.0}\n"),
                    std::invalid_argument);
    // Negative noise.
    CHECK_THROWS_AS(parse_config(base + "ranging: {sigma1: -0.1}\n"),
                    std::invalid_argument);
    // Horizon below burn-in.
    CHECK_THROWS_AS(parse_config("timestep: 0.5\nhorizon: 5\nburn_in: 50\n"),
                    std::invalid_argument);
    // Parse error.
    CHECK_THROWS_AS(parse_config("timestep: [unclosed\n"), std::invalid_argument);
}

TEST_CASE("fraction strings parse exactly") {
    const ScenarioConfig cfg = parse_config(
        "timestep: 0.5\nhorizon: 10\nburn_in: 0\nshape: {rho: 1/24, height_freq: 1/8}\n");
    CHECK(cfg.shape.rho == 1.0 / 24.0);
    CHECK(cfg.shape.height_freq == 0.125);
}

TEST_CASE("zero horizon gives an empty log") {
    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 0;
    cfg.burn_in = 0;
    const SimLog log = run_episode(cfg, 1);
    CHECK(log.steps.empty());
    CHECK_FALSE(log.captured);
}

TEST_CASE("episodes are deterministic and seed-sensitive") {
    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 120;

    const SimLog a = run_episode(cfg, 7);
    const SimLog b = run_episode(cfg, 7);
    CHECK(a == b);

    std::ostringstream csv_a, csv_b;
    export_csv(a, csv_a);
    export_csv(b, csv_b);
    CHECK(csv_a.str() == csv_b.str()); // bit-identical export

    const SimLog c = run_episode(cfg, 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("export/import round-trips every record") {
    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 60;
    cfg.burn_in = 20;
    const SimLog log = run_episode(cfg, 3);

    std::stringstream buf;
    export_csv(log, buf);
    const SimLog back = import_csv(buf);
    CHECK(back == log);

    // Header row matches the documented schema width.
    std::stringstream again(buf.str());
    std::string line;
    int header_cols = 0;
    while (std::getline(again, line)) {
        if (line.empty() || line[0] == '#') continue;
        header_cols = 1;
        for (char ch : line) {
            if (ch == ',') ++header_cols;
        }
        break;
    }
    CHECK(header_cols == csv_column_count());
}

TEST_CASE("reference scenario reaches capture and declares it") {
    ScenarioConfig cfg = sec4_config();
    const SimLog log = run_episode(cfg, 1);
    REQUIRE(log.captured);
    CHECK(log.capture_step > 0);
    const StepRecord& last = log.steps.back();
    CHECK(last.radius == cfg.controller.rc);
    CHECK(static_cast<Zone>(last.zone) == Zone::Capture);
    CHECK(last.k == log.capture_step);

    // The capture countdown: final contiguous capture run spans exactly
    // t_in steps from entry (radius r1) to declaration (radius rc).
    long entry = static_cast<long>(log.steps.size()) - 1;
    while (entry > 0 &&
           static_cast<Zone>(log.steps[entry - 1].zone) == Zone::Capture) {
        --entry;
    }
    CHECK(log.steps.back().k - log.steps[entry].k == cfg.controller.t_in);
    CHECK(log.steps[entry].radius == cfg.controller.r1);
}

TEST_CASE("noise-free protect run decays and obeys the closed-form recursion") {
    const ScenarioConfig cfg = noise_free_config();
    const SimLog log = run_episode(cfg, 1);
    REQUIRE(log.steps.size() == 500);
    CHECK_FALSE(log.captured);

    // Every step stays in the protect zone (the hostile target is parked
    // 12.3 m away and nothing moves it).
    for (const StepRecord& r : log.steps) {
        CHECK(static_cast<Zone>(r.zone) == Zone::Protect);
    }

    // e1 decays geometrically at rate |alpha_tilde| early on, then sits at
    // machine scale.
    const double a0 = log.steps[2].e1_norm;
    const double a1 = log.steps[3].e1_norm;
    const double a_tilde = log.steps[3].g * (cfg.controller.alpha - 1.0) + 1.0;
    CHECK(a1 / a0 == doctest::Approx(std::abs(a_tilde)).epsilon(0.05));
    CHECK(log.steps.back().e1_norm <= 1e-9);

    // Closed-form recursion for q12 against the simulated sequence.
    ShapeParams sp;
    sp.rho = cfg.shape.rho;
    sp.radius = [&](long) { return cfg.controller.r1; };
    sp.height = [&](long k) { return cfg.shape.height_at(k); };
    for (std::size_t i = 1; i < log.steps.size(); ++i) {
        const StepRecord& prev = log.steps[i - 1];
        const StepRecord& cur = log.steps[i];
        const Vec3 q_prev = prev.guardian1.position - prev.guardian2.position;
        const Vec3 q_cur = cur.guardian1.position - cur.guardian2.position;
        const double at = cur.g * (cfg.controller.alpha - 1.0) + 1.0;
        const Vec3 predicted =
            at * q_prev + 2.0 * (cfg.controller.alpha * shape_vector(cur.k, sp) -
                                 shape_vector(cur.k + 1, sp));
        CHECK((q_cur - predicted).cwiseAbs().maxCoeff() <= 1e-10);
    }

    // Converged run satisfies the AS definition on time average. Logged
    // positions are post-propagation, so record k sits at orbit phase k+1.
    double res_sum = 0.0;
    long n_res = 0;
    for (std::size_t i = 100; i < log.steps.size(); ++i) {
        const StepRecord& r = log.steps[i];
        const Vec3 zeta = shape_vector(r.k + 1, sp);
        Vec3 ref = r.protected_target.position;
        ref.z() = cfg.controller.h1;
        const auto [res1, res2] = as_manner_residual(
            zeta, r.guardian1.position - ref, r.guardian2.position - ref);
        res_sum += std::abs(res1) + std::abs(res2);
        n_res += 2;
    }
    CHECK(res_sum / n_res <= 1e-6);
}

TEST_CASE("batch runs are deterministic and summarized per seed") {
    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 150;
    cfg.burn_in = 50;
    const std::vector<std::uint64_t> seeds{1, 2, 3};

    std::vector<SimLog> logs1, logs2;
    const BatchSummary b1 = run_batch(cfg, seeds, &logs1);
    const BatchSummary b2 = run_batch(cfg, seeds, &logs2);
    REQUIRE(logs1.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(logs1[i] == logs2[i]);
    CHECK(b1.per_seed.size() == 3);
    CHECK(b1.ensemble_mean_err_pos == b2.ensemble_mean_err_pos);
    CHECK(b1.per_seed[0].seed == 1);

    CHECK_THROWS_AS(run_batch(cfg, {}, nullptr), std::invalid_argument);
}

TEST_CASE("closed-loop innovations stay white on the reference scenario") {
    const ScenarioConfig cfg = sec4_config();
    const SimLog log = run_episode(cfg, 1);
    double nis_sum = 0.0;
    long n = 0;
    for (const StepRecord& r : log.steps) {
        if (r.k <= 50) continue;
        nis_sum += r.nis;
        ++n;
    }
    REQUIRE(n > 50);
    const double nis_mean = nis_sum / n;
    CHECK(nis_mean > 0.5);
    CHECK(nis_mean < 1.5);
}

TEST_CASE("closed-loop q12 stays persistently exciting across seeds") {
    // Excitation floor pinned from observed runs: min windowed eigenvalue
    // across 20 seeds measured 1.66; the protect-phase orbit alone gives
    // (2*0.9)^2 * 0.04 * 24 ~ 3.1 in the weak (vertical) direction.
    const ScenarioConfig cfg = sec4_config();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SimLog log = run_episode(cfg, seed);
        std::vector<Vec3> q12;
        for (const StepRecord& r : log.steps) {
            q12.push_back(r.guardian1.position - r.guardian2.position);
        }
        const long n = static_cast<long>(q12.size());
        for (long s = 50; s + 48 <= n; s += 3) {
            CHECK(pe_gramian(q12, s, 48).min_eig > 0.5);
        }
    }
}

TEST_CASE("estimation mean-square error does not diverge") {
    // Ensemble average of the post-transient last quarter at or below the
    // first quarter. Individual seeds fluctuate (the weakly excited
    // vertical channel mixes slowly), so the expectation is taken across
    // seeds.
    const ScenarioConfig cfg = sec4_config();
    double first_sum = 0.0, last_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SimLog log = run_episode(cfg, seed);
        std::vector<double> sq;
        for (const StepRecord& r : log.steps) {
            if (r.k <= 20) continue;
            sq.push_back(r.err_pos * r.err_pos + r.err_vel * r.err_vel);
        }
        REQUIRE(sq.size() > 40);
        const std::size_t quarter = sq.size() / 4;
        double first = 0.0, last = 0.0;
        for (std::size_t i = 0; i < quarter; ++i) {
            first += sq[i];
            last += sq[sq.size() - 1 - i];
        }
        first_sum += first / quarter;
        last_sum += last / quarter;
    }
    CHECK(last_sum <= first_sum);
}

TEST_CASE("episode wall clock stays under a second") {
    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 200;
    const auto start = std::chrono::steady_clock::now();
    (void)run_episode(cfg, 5);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 1000);
}

TEST_CASE("plot script generation feeds on an exported log") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "encircle_plot_test";
    fs::create_directories(dir);

    ScenarioConfig cfg = sec4_config();
    cfg.horizon = 40;
    cfg.burn_in = 10;
    const SimLog log = run_episode(cfg, 2);
    const std::string csv = (dir / "episode.csv").string();
    export_csv(log, csv);
    const std::string script = (dir / "plot_episode.py").string();
    write_plot_script(csv, script);

    REQUIRE(fs::exists(script));

    // Run it if a python with matplotlib is around; skip silently otherwise.
    const std::string probe =
        "python3 -c 'import matplotlib' >/dev/null 2>&1";
    if (std::system(probe.c_str()) == 0) {
        const std::string cmd = "python3 " + script + " " + csv + " " +
                                dir.string() + " >/dev/null 2>&1";
        CHECK(std::system(cmd.c_str()) == 0);
        CHECK(fs::exists(dir / "controls.png"));
        CHECK(fs::exists(dir / "errors.png"));
        CHECK(fs::exists(dir / "trajectories.png"));
    }
    fs::remove_all(dir);
}

TEST_CASE("config hash distinguishes scenarios") {
    const ScenarioConfig a = sec4_config();
    ScenarioConfig b = a;
    CHECK(a.hash() == b.hash());
    b.controller.r1 = 0.8;
    CHECK(a.hash() != b.hash());
}
