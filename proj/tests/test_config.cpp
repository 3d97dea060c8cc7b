#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "seadvr/config.hpp"

using namespace seadvr;
using Catch::Approx;

namespace {

const char* kSample = R"(
# paper setup, 20 hydrophones
[environment]
c0 = 1500
delta_c = 25
z_c = 50
delta_z = 10
c_b = 1600
h = 100
L = 300
rho_wat = 1.0
rho_sed = 1.7
att_coeff = 4.2e-7

[source]
depth = 99

[array]
hydrophones = 20

[sweep]
kind = frequency
lo = 10
hi = 800
step = 5

[experiment]
ranges = 1000, 10000, 40000
mode_selection = all

[noise]
enabled = true
snr_db = 1, 5, 10, 20
varsigma = 1
realizations = 10
seed = 42

[pulse]
center_freqs = 120, 240, 420
n_freq = 512
n_time = 2048

[output]
dir = out
threads = 4
)";

}  // namespace

TEST_CASE("parsing the reference configuration") {
    auto cfg = parse_config_string(kSample);
    REQUIRE(cfg.env.c_b == 1600.0);
    REQUIRE(cfg.env.att_coeff == Approx(0.42e-6));
    REQUIRE(cfg.source_depth == 99.0);
    REQUIRE(cfg.hydrophones == 20);
    REQUIRE(cfg.resolved_j_max() == 60);
    REQUIRE(cfg.resolved_hydrophones() == 20);
    REQUIRE(cfg.ranges == std::vector<double>{1000.0, 10000.0, 40000.0});
    REQUIRE(cfg.snr_db.size() == 4);
    REQUIRE(cfg.noise_enabled);
    REQUIRE(cfg.seed == 42);
    REQUIRE(cfg.realizations == 10);
    REQUIRE(cfg.center_freqs == std::vector<double>{120.0, 240.0, 420.0});
    REQUIRE(cfg.out_dir == "out");
    REQUIRE(cfg.threads == 4);
}

TEST_CASE("defaults fill unspecified keys") {
    auto cfg = parse_config_string("[array]\nj_max = 30\n");
    REQUIRE(cfg.env.c0 == 1500.0);
    REQUIRE(cfg.env.L == 300.0);
    REQUIRE(cfg.source_depth == 99.0);
    REQUIRE(cfg.resolved_hydrophones() == 10);  // floor(30 * 100/300)
    REQUIRE(cfg.resolved_L_eff() == 300.0);
    REQUIRE(cfg.sweep_kind == "frequency");
}

TEST_CASE("round trip: parse(serialize(parse(x))) == parse(x)") {
    auto a = parse_config_string(kSample);
    auto b = parse_config_string(serialize_config(a));
    REQUIRE(serialize_config(a) == serialize_config(b));
    REQUIRE(a.env.att_coeff == b.env.att_coeff);
    REQUIRE(a.ranges == b.ranges);
    REQUIRE(a.snr_db == b.snr_db);
    REQUIRE(a.seed == b.seed);
    REQUIRE(a.sweep_lo == b.sweep_lo);
    REQUIRE(a.center_freqs == b.center_freqs);
}

TEST_CASE("config validation failures") {
    SECTION("unknown key names the section") {
        try {
            parse_config_string("[array]\nj_max = 10\nbogus = 3\n");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            REQUIRE(std::string(e.what()).find("bogus") != std::string::npos);
            REQUIRE(std::string(e.what()).find("[array]") != std::string::npos);
        }
    }
    SECTION("bad numeric value reports the key") {
        REQUIRE_THROWS_AS(parse_config_string("[array]\nj_max = ten\n"), config_error);
    }
    SECTION("missing array block") {
        REQUIRE_THROWS_AS(parse_config_string("[source]\ndepth = 50\n"), config_error);
    }
    SECTION("line without equals sign") {
        REQUIRE_THROWS_AS(parse_config_string("[array]\nj_max 10\n"), config_error);
    }
    SECTION("source outside the water column") {
        REQUIRE_THROWS_AS(parse_config_string("[array]\nj_max = 10\n[source]\ndepth = 150\n"),
                          config_error);
    }
    SECTION("zero seed with noise enabled") {
        REQUIRE_THROWS_AS(
            parse_config_string("[array]\nj_max = 10\n[noise]\nenabled = true\nseed = 0\n"),
            config_error);
    }
    SECTION("descending sweep grid") {
        REQUIRE_THROWS_AS(
            parse_config_string("[array]\nj_max = 10\n[sweep]\nlo = 100\nhi = 50\n"),
            config_error);
    }
    SECTION("bad mode selection") {
        REQUIRE_THROWS_AS(
            parse_config_string("[array]\nj_max = 10\n[experiment]\nmode_selection = some\n"),
            config_error);
    }
}
