#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "seadvr/field.hpp"
#include "seadvr/quadrature.hpp"

using namespace seadvr;
using Catch::Approx;

namespace {

/// Hand-built single-mode ModeSet for spreading/decay laws.
ModeSet single_mode(double k, double alpha, const DepthGrid& grid) {
    ModeSet ms;
    ms.frequency = 100.0;
    ms.grid = grid;
    ms.k_rm = {k};
    ms.alpha_m = {alpha};
    ms.psi = Eigen::MatrixXd::Zero(grid.n_points, 1);
    ms.weight.assign(grid.n_points, grid.spacing());
    for (int i = 0; i < grid.n_points; ++i)
        ms.psi(i, 0) = std::sin(0.5 * kPi * grid.depth(i) / grid.z_max);
    return ms;
}

}  // namespace

TEST_CASE("cylindrical spreading of a lossless mode") {
    EnvironmentModel env;
    DepthGrid grid{env.L, 301};
    auto ms = single_mode(0.8, 0.0, grid);
    double r = 2000.0;
    auto f1 = cw_field(env, ms, 50.0, r, grid);
    auto f4 = cw_field(env, ms, 50.0, 4.0 * r, grid);
    for (int i : {30, 100, 250})
        REQUIRE(std::abs(f1.profile[i]) == Approx(2.0 * std::abs(f4.profile[i])).epsilon(1e-12));
}

TEST_CASE("modal decay law") {
    EnvironmentModel env;
    DepthGrid grid{env.L, 301};
    double alpha = 3e-4;
    auto ms = single_mode(0.9, alpha, grid);
    double r = 5000.0, dr = 2500.0;
    auto fa = cw_field(env, ms, 50.0, r, grid);
    auto fb = cw_field(env, ms, 50.0, r + dr, grid);
    double expected = std::exp(alpha * dr) * std::sqrt((r + dr) / r);
    REQUIRE(std::abs(fa.profile[120]) / std::abs(fb.profile[120]) ==
            Approx(expected).epsilon(1e-12));
}

TEST_CASE("modal sum matches an independent direct summation") {
    EnvironmentModel env;
    double f = 300.0;
    auto grid = make_mode_grid(env, f);
    auto ms = solve_modes(env, f, grid);
    auto field = cw_field(env, ms, 99.0, 10000.0, grid);

    std::vector<double> zs;
    for (int i = 0; i < grid.n_points; i += 7) zs.push_back(grid.depth(i));
    auto naive = oracles::naive_modal_sum(ms, 99.0, 10000.0, zs);
    double scale = field.profile.cwiseAbs().maxCoeff();
    for (std::size_t q = 0; q < zs.size(); ++q) {
        auto got = field.value_at(zs[q]);
        REQUIRE(std::abs(got - naive[q]) < 1e-8 * scale);
    }
}

TEST_CASE("production field tracks the complex-eigenvalue oracle") {
    EnvironmentModel env;
    double f = 145.0, r = 10000.0, z_s = 99.0;
    DepthGrid grid{env.L, 601};
    auto ms = solve_modes(env, f, grid);
    auto field = cw_field(env, ms, z_s, r, grid);

    double k0 = env.reference_wavenumber(f);
    auto cx = oracles::dense_complex_modes(env, f, grid, std::pow(1e-4 * k0, 2), k0 * k0);
    // independent field: exact complex wavenumbers, same modal-sum formula
    Eigen::VectorXcd oracle = Eigen::VectorXcd::Zero(grid.n_points);
    const std::complex<double> iu{0.0, 1.0};
    std::complex<double> pref =
        iu / (2.0 * std::sqrt(2.0 * kPi * r)) * std::exp(-iu * kPi / 4.0);
    for (std::size_t m = 0; m < cx.k.size(); ++m) {
        // interpolate psi at the source depth (solver nodes start at z = delta)
        double x = z_s / cx.delta;
        int i = static_cast<int>(std::floor(x)) - 1;
        double t = x - (i + 1);
        std::complex<double> at_src = (1.0 - t) * cx.psi[m][i] + t * cx.psi[m][i + 1];
        std::complex<double> cm =
            pref / std::sqrt(cx.k[m]) * std::exp(iu * cx.k[m] * r) * at_src;
        for (int a = 1; a < grid.n_points; ++a) oracle[a] += cm * cx.psi[m][a - 1];
    }
    double rel = (field.profile - oracle).norm() / oracle.norm();
    REQUIRE(rel < 2e-2);  // first-order attenuation against the exact solve
}

TEST_CASE("field is linear in the mode partition") {
    EnvironmentModel env;
    double f = 80.0;
    auto grid = make_mode_grid(env, f);
    auto ms = solve_modes(env, f, grid);
    REQUIRE(ms.mode_count() >= 4);
    int split = ms.mode_count() / 2;

    auto take = [&](int lo, int hi) {
        ModeSet part = ms;
        part.k_rm.assign(ms.k_rm.begin() + lo, ms.k_rm.begin() + hi);
        part.alpha_m.assign(ms.alpha_m.begin() + lo, ms.alpha_m.begin() + hi);
        part.psi = ms.psi.middleCols(lo, hi - lo).eval();
        return part;
    };
    auto fa = cw_field(env, take(0, split), 60.0, 3000.0, grid);
    auto fb = cw_field(env, take(split, ms.mode_count()), 60.0, 3000.0, grid);
    auto fall = cw_field(env, ms, 60.0, 3000.0, grid);
    double scale = fall.profile.cwiseAbs().maxCoeff();
    for (int i = 0; i < grid.n_points; i += 50)
        REQUIRE(std::abs(fall.profile[i] - fa.profile[i] - fb.profile[i]) < 1e-14 * scale);
}

TEST_CASE("water-column energy is non-increasing with range beyond 1 km") {
    EnvironmentModel env;
    double f = 300.0;
    auto grid = make_mode_grid(env, f);
    auto ms = solve_modes(env, f, grid);
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {1000.0, 2000.0, 5000.0, 10000.0, 20000.0, 40000.0}) {
        auto field = cw_field(env, ms, 99.0, r, grid);
        // r-normalized energy removes cylindrical spreading, leaving attenuation
        double e = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            if (grid.depth(i) > env.h) break;
            e += std::norm(field.profile[i]) * grid.spacing();
        }
        e *= r;
        REQUIRE(e <= prev * (1.0 + 1e-9));
        prev = e;
    }
}

TEST_CASE("empty mode set gives a flagged zero field") {
    EnvironmentModel env;
    ModeSet empty;
    empty.frequency = 1.0;
    empty.grid = DepthGrid{env.L, 301};
    auto field = cw_field(env, empty, 50.0, 1000.0, empty.grid);
    REQUIRE(field.empty_spectrum);
    REQUIRE(field.profile.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("domain errors of the modal sum") {
    EnvironmentModel env;
    DepthGrid grid{env.L, 301};
    auto ms = single_mode(1.0, 0.0, grid);
    REQUIRE_THROWS_AS(cw_field(env, ms, 50.0, 0.0, grid), std::domain_error);
    REQUIRE_THROWS_AS(cw_field(env, ms, 150.0, 100.0, grid), std::domain_error);  // below h
}

TEST_CASE("gaussian source spectrum") {
    double fc = 240.0;
    auto s = gaussian_spectrum(2.0 * kPi * fc);
    REQUIRE(s.omega_c == Approx(480.0 * kPi));
    REQUIRE(s.delta_omega == Approx(240.0 * kPi));
    REQUIRE(s.T == Approx(std::sqrt(2.0 * kPi) / s.delta_omega));
    REQUIRE(s.value(s.omega_c) == Approx(s.T / std::sqrt(2.0 * kPi)).epsilon(1e-14));

    GaussLegendre gl(24);
    double integral = gl.integrate_composite([&](double w) { return s.value(w); },
                                             s.omega_c - 8.0 * s.delta_omega,
                                             s.omega_c + 8.0 * s.delta_omega, 32);
    REQUIRE(integral == Approx(1.0).epsilon(1e-10));
    REQUIRE_THROWS_AS(gaussian_spectrum(0.0), std::domain_error);
}

TEST_CASE("pulse synthesis") {
    EnvironmentModel env;
    double fc = 120.0, r = 10000.0, z_s = 99.0;

    SECTION("narrowband limit reproduces the CW profile shape") {
        auto s = gaussian_spectrum(2.0 * kPi * fc);
        SignalSpectrum narrow{s.omega_c, s.delta_omega / 100.0, s.T * 100.0};
        auto stack = compute_cw_stack(env, z_s, r, narrow, 64,
                                      ModeSelection::AllPropagating, 601);
        // ~100x narrower spectrum: the whole pulse is one slowly modulated carrier
        auto pulse = synthesize_pulse(stack, 6.2, 7.4, 512, 1,
                                      std::numeric_limits<double>::infinity());
        int peak_t = 0;
        double best = 0.0;
        for (int t = 0; t < pulse.n_time(); ++t) {
            double e = pulse.values.row(t).squaredNorm();
            if (e > best) {
                best = e;
                peak_t = t;
            }
        }
        auto grid = stack.grid;
        auto modes = solve_modes(env, fc, grid);
        auto cw = cw_field(env, modes, z_s, r, grid);
        // compare |profile| shapes up to overall scale
        double num = 0.0, den_a = 0.0, den_b = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            double a = std::abs(pulse.values(peak_t, i)), b = std::abs(cw.profile[i]);
            num += a * b;
            den_a += a * a;
            den_b += b * b;
        }
        double corr = num / std::sqrt(den_a * den_b);
        REQUIRE(corr > 0.99);
    }

    SECTION("frequency-grid self-convergence") {
        auto s = gaussian_spectrum(2.0 * kPi * fc);
        auto t_window = std::pair{5.9, 8.2};
        auto p1 = synthesize_pulse(
            compute_cw_stack(env, z_s, r, s, 128, ModeSelection::AllPropagating, 601),
            t_window.first, t_window.second, 700);
        auto p2 = synthesize_pulse(
            compute_cw_stack(env, z_s, r, s, 256, ModeSelection::AllPropagating, 601),
            t_window.first, t_window.second, 700);
        double rel = (p1.values - p2.values).norm() / p2.values.norm();
        REQUIRE(rel < 1e-4);
    }

    SECTION("clipped time window raises window_error") {
        auto s = gaussian_spectrum(2.0 * kPi * fc);
        auto stack = compute_cw_stack(env, z_s, r, s, 64, ModeSelection::AllPropagating, 601);
        REQUIRE_THROWS_AS(synthesize_pulse(stack, 6.6, 6.7, 128), window_error);
    }

    SECTION("arrival pattern sits inside the expected travel-time band") {
        auto s = gaussian_spectrum(2.0 * kPi * 240.0);
        auto stack = compute_cw_stack(env, z_s, r, s, 128, ModeSelection::AllPropagating, 601);
        auto pulse = synthesize_pulse(stack, 5.9, 8.2, 1024);
        Eigen::VectorXd energy(pulse.n_time());
        for (int t = 0; t < pulse.n_time(); ++t)
            energy[t] = pulse.values.row(t).squaredNorm();
        int peak_t = 0;
        energy.maxCoeff(&peak_t);
        double t_peak = pulse.times[peak_t];
        REQUIRE(t_peak > r / env.c_b);
        REQUIRE(t_peak < r / 1350.0);
        // dispersed arrivals: energy support wider than the source envelope
        double above = 0.0;
        for (int t = 0; t < pulse.n_time(); ++t)
            if (energy[t] > 0.01 * energy[peak_t])
                above += pulse.times[1] - pulse.times[0];
        REQUIRE(above > 10.0 * s.T);
    }
}
