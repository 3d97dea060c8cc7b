#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seadvr/config.hpp"
#include "seadvr/experiment.hpp"

using namespace seadvr;
using Catch::Approx;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.hydrophones = 10;
    cfg.source_depth = 99.0;
    cfg.ranges = {10000.0};
    cfg.sweep_lo = 40.0;
    cfg.sweep_hi = 60.0;
    cfg.sweep_step = 10.0;
    cfg.noise_enabled = true;
    cfg.snr_db = {10.0};
    cfg.varsigma = 1.0;
    cfg.realizations = 3;
    cfg.seed = 7;
    cfg.threads = 1;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("reconstruction setup maps hydrophone counts through the DVR grid") {
    EnvironmentModel env;
    auto s = make_reconstruction_setup(env, 30, env.L);
    REQUIRE(s.array.J == 10);
    REQUIRE(s.array.dz == Approx(300.0 / 30.5));
    REQUIRE(s.array.depth(10) <= env.h);

    REQUIRE_THROWS_AS(make_reconstruction_setup(env, 30, 50.0), config_error);
}

TEST_CASE("noiseless frequency sweep produces sane fidelities") {
    auto cfg = small_config();
    auto records = sweep_frequency_noiseless(cfg);
    REQUIRE(records.size() == 3);
    for (const auto& rec : records) {
        REQUIRE(rec.J == 10);
        REQUIRE(rec.F > 0.9);  // low frequency, well inside the confidence range
        REQUIRE(rec.F <= 1.0 + 1e-10);
    }
}

TEST_CASE("single-mode low-frequency limit reconstructs accurately with one hydrophone") {
    ExperimentConfig cfg;
    cfg.hydrophones = 1;
    cfg.source_depth = 50.0;
    cfg.ranges = {30000.0};
    cfg.validate();
    auto setup = make_reconstruction_setup(cfg.env, cfg.resolved_j_max(), cfg.env.L);
    REQUIRE(setup.array.J == 1);

    double prev = 0.0;
    for (double f : {6.0, 4.0, 2.5}) {
        auto grid = make_mode_grid(cfg.env, f);
        auto modes = solve_modes(cfg.env, f, grid);
        auto exact = cw_field(cfg.env, modes, cfg.source_depth, cfg.ranges[0], grid);
        auto meas = sample_field(exact, setup.array);
        double F = reconstruction_fidelity(cfg.env, exact, setup, meas);
        REQUIRE(F >= prev - 0.05);  // improves as the field becomes single-scale
        prev = F;
    }
    REQUIRE(prev > 0.9);
}

TEST_CASE("monte-carlo sweep is deterministic and thread-invariant") {
    auto cfg = small_config();
    auto a = monte_carlo_sweep(cfg);
    cfg.threads = 4;
    auto b = monte_carlo_sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].F_mean == b[i].F_mean);
        REQUIRE(a[i].F_median == b[i].F_median);
        REQUIRE(a[i].F_averaged == b[i].F_averaged);
    }
    SECTION("noise hurts and averaging helps") {
        for (const auto& rec : a) {
            REQUIRE(rec.F_mean < rec.F_clean);
            REQUIRE(rec.F_averaged > rec.F_mean);
        }
    }
    SECTION("different seed changes the draw") {
        cfg.seed = 8;
        auto c = monte_carlo_sweep(cfg);
        REQUIRE(c[0].F_mean != a[0].F_mean);
    }
}

TEST_CASE("profile compare emits the three reconstructions") {
    auto cfg = small_config();
    cfg.hydrophones = 20;
    cfg.frequency = 500.0;
    auto res = profile_compare(cfg);
    REQUIRE(res.F_clean > 0.9);
    REQUIRE(res.F_clean <= 1.0);
    REQUIRE(res.F_noisy < res.F_clean);
    REQUIRE(res.F_averaged > res.F_noisy);
    REQUIRE(res.meas_clean.values.size() == 20);
    REQUIRE(res.meas_averaged.n_realizations == 3);
    // estimates live in the water column band of the grid
    REQUIRE(res.est_clean.head(200).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("csv outputs are byte-identical across reruns") {
    auto cfg = small_config();
    cfg.sweep_hi = 50.0;
    auto dir = std::filesystem::temp_directory_path() / "seadvr_det_test";
    std::filesystem::remove_all(dir);
    cfg.out_dir = (dir / "a").string();
    auto p1 = run_monte_carlo(cfg);
    cfg.out_dir = (dir / "b").string();
    cfg.threads = 3;
    auto p2 = run_monte_carlo(cfg);
    REQUIRE(slurp(p1) == slurp(p2));
    REQUIRE(slurp(p1).find("frequency_hz") == 0);
}

TEST_CASE("frequency sweep CSV layout") {
    auto cfg = small_config();
    cfg.noise_enabled = false;
    auto dir = std::filesystem::temp_directory_path() / "seadvr_sweep_test";
    std::filesystem::remove_all(dir);
    cfg.out_dir = dir.string();
    auto path = run_sweep_frequency(cfg);
    auto text = slurp(path);
    REQUIRE(text.find("frequency_hz,range_m,hydrophones,fidelity\n") == 0);
    int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    REQUIRE(lines == 4);  // header + 3 sweep points
    REQUIRE(std::filesystem::exists(dir / "confidence_ranges.txt"));
}

TEST_CASE("spacing sweep on a narrow pulse stays near unity at fine spacing") {
    ExperimentConfig cfg;
    cfg.hydrophones = 20;
    cfg.source_depth = 99.0;
    cfg.ranges = {10000.0};
    cfg.sweep_kind = "spacing";
    cfg.sweep_lo = 3.0;
    cfg.sweep_hi = 12.0;
    cfg.sweep_step = 9.0;  // two points: 3 m and 12 m
    cfg.center_freqs = {120.0};
    cfg.n_freq = 96;
    cfg.n_time = 512;
    cfg.threads = 4;
    auto records = sweep_spacing(cfg);
    REQUIRE(records.size() == 2);
    REQUIRE(records[0].dz == 3.0);
    REQUIRE(records[0].F > 0.95);
    REQUIRE(records[1].F < records[0].F);
}
