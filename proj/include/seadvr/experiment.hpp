// Configuration-driven experiment runners: fidelity-frequency sweeps,
// Monte-Carlo noise studies, profile comparisons, pulse spacing sweeps and
// DVR/mode dumps. Computation functions are pure given the config; run_*
// wrappers write CSV files into the configured output directory.
#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "seadvr/config.hpp"
#include "seadvr/csv.hpp"
#include "seadvr/dvr.hpp"
#include "seadvr/field.hpp"
#include "seadvr/metrics.hpp"
#include "seadvr/modes.hpp"
#include "seadvr/parallel.hpp"
#include "seadvr/rng.hpp"
#include "seadvr/sensing.hpp"

namespace seadvr {

inline ModeSelection selection_from_string(const std::string& s) {
    return s == "trapped" ? ModeSelection::Trapped : ModeSelection::AllPropagating;
}

/// DVR basis plus the matching water-column array: J = floor(j_max h / L_eff)
/// hydrophones at the first J DVR depths.
struct ReconstructionSetup {
    DvrBasis basis;
    ArraySpec array;
};

inline ReconstructionSetup make_reconstruction_setup(const EnvironmentModel& env, int j_max,
                                                     double L_eff) {
    if (L_eff < env.h)
        throw config_error("effective depth smaller than the water column");
    ReconstructionSetup s;
    s.basis = build_dvr(j_max, L_eff);
    int J = static_cast<int>(std::floor(j_max * env.h / L_eff));
    if (J < 1) throw config_error("array would have no hydrophones inside the water column");
    s.array = {J, s.basis.dz};
    s.array.validate(env.h);
    return s;
}

/// Evaluate a reconstructed profile on grid nodes up to z_cap (zero beyond).
inline Eigen::VectorXcd evaluate_profile_on_grid(const ReconstructedProfile& p,
                                                 const DepthGrid& grid, double z_cap) {
    std::vector<double> zs;
    zs.reserve(grid.n_points);
    int n_eval = 0;
    for (int i = 0; i < grid.n_points; ++i) {
        double z = grid.depth(i);
        if (z > z_cap) break;
        zs.push_back(std::min(z, p.effective_depth()));
        ++n_eval;
    }
    auto vals = p.evaluate(zs);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.n_points);
    for (int i = 0; i < n_eval; ++i) out[i] = vals[i];
    return out;
}

/// Sample -> reconstruct -> fidelity over [0, h] for one measurement.
inline double reconstruction_fidelity(const EnvironmentModel& env, const CwField& exact,
                                      const ReconstructionSetup& setup,
                                      const Measurement& meas) {
    auto profile = reconstruct(setup.basis, meas.values);
    auto est = evaluate_profile_on_grid(profile, exact.grid,
                                        env.h + 2.0 * exact.grid.spacing());
    return fidelity_cw(exact.grid,
                       {exact.profile.data(), static_cast<std::size_t>(exact.grid.n_points)},
                       {est.data(), static_cast<std::size_t>(exact.grid.n_points)}, env.h)
        .value;
}

// ---------------------------------------------------------------------------
// Frequency sweep (noiseless)
// ---------------------------------------------------------------------------

struct SweepRecord {
    double f = 0.0;
    double r = 0.0;
    int J = 0;
    double F = 0.0;
};

inline std::vector<double> sweep_grid(const ExperimentConfig& cfg) {
    std::vector<double> xs;
    for (double x = cfg.sweep_lo; x <= cfg.sweep_hi + 1e-9 * cfg.sweep_step;
         x += cfg.sweep_step)
        xs.push_back(x);
    return xs;
}

inline std::vector<SweepRecord> sweep_frequency_noiseless(const ExperimentConfig& cfg) {
    cfg.validate();
    auto setup = make_reconstruction_setup(cfg.env, cfg.resolved_j_max(), cfg.resolved_L_eff());
    auto sel = selection_from_string(cfg.mode_selection);
    auto freqs = sweep_grid(cfg);
    std::size_t nr = cfg.ranges.size();
    std::vector<SweepRecord> records(freqs.size() * nr);

    parallel_for(static_cast<int>(freqs.size()), cfg.threads, [&](int i) {
        double f = freqs[i];
        auto grid = make_mode_grid(cfg.env, f);
        auto modes = solve_modes(cfg.env, f, grid, sel);
        for (std::size_t k = 0; k < nr; ++k) {
            auto exact = cw_field(cfg.env, modes, cfg.source_depth, cfg.ranges[k], grid);
            auto meas = sample_field(exact, setup.array);
            records[i * nr + k] = {f, cfg.ranges[k], setup.array.J,
                                   reconstruction_fidelity(cfg.env, exact, setup, meas)};
        }
    });
    return records;
}

/// Confidence ranges per range value from a noiseless sweep.
inline std::vector<std::pair<double, ConfidenceRange>>
sweep_confidence_ranges(const ExperimentConfig& cfg, const std::vector<SweepRecord>& records,
                        double threshold = 0.9) {
    std::vector<std::pair<double, ConfidenceRange>> out;
    for (std::size_t k = 0; k < cfg.ranges.size(); ++k) {
        std::vector<double> xs, fs;
        for (std::size_t i = k; i < records.size(); i += cfg.ranges.size()) {
            xs.push_back(records[i].f);
            fs.push_back(records[i].F);
        }
        out.emplace_back(cfg.ranges[k], confidence_range(xs, fs, threshold));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo noise sweep
// ---------------------------------------------------------------------------

struct MonteCarloRecord {
    double f = 0.0, r = 0.0, snr_db = 0.0;
    double F_clean = 0.0;     // noiseless reference
    double F_mean = 0.0;      // mean single-realization fidelity
    double F_median = 0.0;    // median single-realization fidelity
    double F_averaged = 0.0;  // fidelity of the N-averaged measurement
    int n_realizations = 0;
};

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// One Monte-Carlo cell: N realizations of (displacement +) noise on the same
/// clean field. Streams are derived from (seed, tags..., realization) so the
/// result is independent of scheduling.
struct MonteCarloCell {
    std::vector<double> single_F;
    double averaged_F = 0.0;
};

inline MonteCarloCell monte_carlo_cell(const EnvironmentModel& env, const CwField& exact,
                                       const ReconstructionSetup& setup, double snr_db,
                                       double varsigma, int realizations,
                                       std::uint64_t stream_seed, bool complex_noise = true) {
    auto clean = sample_field(exact, setup.array);
    double ref_energy = clean.energy();
    DisplacementModel disp{varsigma, env.h};
    MonteCarloCell cell;
    cell.single_F.reserve(realizations);
    std::vector<Measurement> noisy;
    noisy.reserve(realizations);
    for (int n = 0; n < realizations; ++n) {
        RngStream rng(stream_seed, {static_cast<std::uint64_t>(n)});
        Measurement base = varsigma > 0.0 ? displace(exact, setup.array, disp, rng) : clean;
        Measurement m = add_noise(base, snr_db, ref_energy, rng, complex_noise);
        m.seed = stream_seed;
        noisy.push_back(std::move(m));
        cell.single_F.push_back(
            reconstruction_fidelity(env, exact, setup, noisy.back()));
    }
    auto averaged = average_measurements(noisy);
    cell.averaged_F = reconstruction_fidelity(env, exact, setup, averaged);
    return cell;
}

inline std::vector<MonteCarloRecord> monte_carlo_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.noise_enabled) throw config_error("monte-carlo requires [noise] enabled = true");
    auto setup = make_reconstruction_setup(cfg.env, cfg.resolved_j_max(), cfg.resolved_L_eff());
    auto sel = selection_from_string(cfg.mode_selection);
    auto freqs = sweep_grid(cfg);
    std::size_t nr = cfg.ranges.size(), ns = cfg.snr_db.size();
    std::vector<MonteCarloRecord> records(freqs.size() * nr * ns);

    parallel_for(static_cast<int>(freqs.size()), cfg.threads, [&](int i) {
        double f = freqs[i];
        auto grid = make_mode_grid(cfg.env, f);
        auto modes = solve_modes(cfg.env, f, grid, sel);
        for (std::size_t k = 0; k < nr; ++k) {
            auto exact = cw_field(cfg.env, modes, cfg.source_depth, cfg.ranges[k], grid);
            auto clean = sample_field(exact, setup.array);
            double F_clean = reconstruction_fidelity(cfg.env, exact, setup, clean);
            for (std::size_t s = 0; s < ns; ++s) {
                std::uint64_t stream =
                    derive_seed(cfg.seed, {static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(s)});
                auto cell = monte_carlo_cell(cfg.env, exact, setup, cfg.snr_db[s],
                                             cfg.varsigma, cfg.realizations, stream,
                                             cfg.complex_noise);
                double mean = std::accumulate(cell.single_F.begin(), cell.single_F.end(), 0.0) /
                              cell.single_F.size();
                records[(i * nr + k) * ns + s] = {f,
                                                  cfg.ranges[k],
                                                  cfg.snr_db[s],
                                                  F_clean,
                                                  mean,
                                                  median_of(cell.single_F),
                                                  cell.averaged_F,
                                                  cfg.realizations};
            }
        }
    });
    return records;
}

// ---------------------------------------------------------------------------
// Profile comparison (single frequency and range)
// ---------------------------------------------------------------------------

struct ProfileCompareResult {
    DepthGrid grid;
    Eigen::VectorXcd exact, est_clean, est_noisy, est_averaged;
    double F_clean = 0.0, F_noisy = 0.0, F_averaged = 0.0;
    Measurement meas_clean, meas_noisy, meas_averaged;
};

inline ProfileCompareResult profile_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.frequency > 0.0)) throw config_error("profile-compare requires a frequency");
    auto setup = make_reconstruction_setup(cfg.env, cfg.resolved_j_max(), cfg.resolved_L_eff());
    auto sel = selection_from_string(cfg.mode_selection);
    double r = cfg.ranges.front();

    auto grid = make_mode_grid(cfg.env, cfg.frequency);
    auto modes = solve_modes(cfg.env, cfg.frequency, grid, sel);
    auto exact = cw_field(cfg.env, modes, cfg.source_depth, r, grid);

    ProfileCompareResult out;
    out.grid = grid;
    out.exact = exact.profile;
    double z_cap = cfg.env.h + 2.0 * grid.spacing();

    out.meas_clean = sample_field(exact, setup.array);
    double ref_energy = out.meas_clean.energy();
    out.est_clean = evaluate_profile_on_grid(reconstruct(setup.basis, out.meas_clean.values),
                                             grid, z_cap);
    out.F_clean = reconstruction_fidelity(cfg.env, exact, setup, out.meas_clean);

    DisplacementModel disp{cfg.varsigma, cfg.env.h};
    double snr = cfg.snr_db.front();
    std::vector<Measurement> noisy;
    for (int n = 0; n < cfg.realizations; ++n) {
        RngStream rng(cfg.seed, {static_cast<std::uint64_t>(n)});
        Measurement base = cfg.varsigma > 0.0 ? displace(exact, setup.array, disp, rng)
                                              : out.meas_clean;
        auto m = add_noise(base, snr, ref_energy, rng, cfg.complex_noise);
        m.seed = cfg.seed;
        noisy.push_back(std::move(m));
    }
    out.meas_noisy = noisy.front();
    out.est_noisy = evaluate_profile_on_grid(reconstruct(setup.basis, out.meas_noisy.values),
                                             grid, z_cap);
    out.F_noisy = reconstruction_fidelity(cfg.env, exact, setup, out.meas_noisy);

    out.meas_averaged = average_measurements(noisy);
    out.est_averaged = evaluate_profile_on_grid(
        reconstruct(setup.basis, out.meas_averaged.values), grid, z_cap);
    out.F_averaged = reconstruction_fidelity(cfg.env, exact, setup, out.meas_averaged);
    return out;
}

// ---------------------------------------------------------------------------
// Pulse spacing sweep
// ---------------------------------------------------------------------------

struct SpacingRecord {
    double dz = 0.0;
    double fc = 0.0;
    double F = 0.0;
    int J = 0;
};

/// Restrict a CW stack to depths <= z_cap, thinning nodes by `stride`.
inline CwStack restrict_stack(const CwStack& st, double z_cap, int stride) {
    CwStack out;
    out.omegas = st.omegas;
    out.quad_weights = st.quad_weights;
    out.spectrum = st.spectrum;
    int last = 0;
    while ((last + stride) * st.grid.spacing() <= z_cap + 1e-9 &&
           last + stride < st.grid.n_points)
        last += stride;
    out.grid = {last * st.grid.spacing(), last / stride + 1};
    out.profiles.resize(st.profiles.rows(), out.grid.n_points);
    for (int c = 0; c <= last / stride; ++c) out.profiles.col(c) = st.profiles.col(c * stride);
    return out;
}

/// Estimate the arrival window from a coarse synthesis over a generous span,
/// then pad the measured support by 15% on both sides.
inline std::pair<double, double> auto_time_window(const CwStack& st, double r,
                                                  double c_fast, double c_min) {
    double t_lo = 0.9 * r / c_fast, t_hi = 1.8 * r / c_min;
    CwStack coarse = restrict_stack(st, st.grid.z_max, std::max(1, (st.grid.n_points - 1) / 64));
    PulseField probe = synthesize_pulse(coarse, t_lo, t_hi, 1024, 1,
                                        std::numeric_limits<double>::infinity());
    Eigen::VectorXd energy(probe.n_time());
    for (int t = 0; t < probe.n_time(); ++t) energy[t] = probe.values.row(t).squaredNorm();
    double peak = energy.maxCoeff();
    int first = 0, last = probe.n_time() - 1;
    while (first < last && energy[first] < 1e-6 * peak) ++first;
    while (last > first && energy[last] < 1e-6 * peak) --last;
    double a = probe.times[first], b = probe.times[last];
    double pad = 0.15 * (b - a) + 0.01;
    return {a - pad, b + pad};
}

/// Reconstruct every frequency component from array samples of the exact CW
/// stack and evaluate on the (thinned) fidelity grid.
inline CwStack reconstruct_stack(const CwStack& full, const CwStack& thin,
                                 const EnvironmentModel& env,
                                 const ReconstructionSetup& setup) {
    CwStack est = thin;
    int n_freq = static_cast<int>(full.omegas.size());
    std::vector<double> zs(thin.grid.n_points);
    for (int i = 0; i < thin.grid.n_points; ++i)
        zs[i] = std::min(thin.grid.depth(i), setup.basis.L_eff);
    for (int k = 0; k < n_freq; ++k) {
        std::vector<std::complex<double>> samples(setup.array.J);
        for (int j = 1; j <= setup.array.J; ++j) {
            double z = setup.array.depth(j);
            double x = z / full.grid.spacing();
            int i = std::clamp(static_cast<int>(std::floor(x)), 0, full.grid.n_points - 2);
            double t = x - i;
            samples[j - 1] = (1.0 - t) * full.profiles(k, i) + t * full.profiles(k, i + 1);
        }
        auto vals = reconstruct(setup.basis, samples).evaluate(zs);
        for (int i = 0; i < thin.grid.n_points; ++i) est.profiles(k, i) = vals[i];
    }
    return est;
}

inline std::vector<SpacingRecord> sweep_spacing(const ExperimentConfig& cfg) {
    cfg.validate();
    auto sel = selection_from_string(cfg.mode_selection);
    double r = cfg.ranges.front();
    std::vector<double> dzs = sweep_grid(cfg);
    std::vector<SpacingRecord> records(dzs.size() * cfg.center_freqs.size());

    for (std::size_t c = 0; c < cfg.center_freqs.size(); ++c) {
        double fc = cfg.center_freqs[c];
        auto spectrum = gaussian_spectrum(2.0 * kPi * fc);
        CwStack full = prepare_cw_stack(cfg.env, spectrum, cfg.n_freq);
        parallel_for(cfg.n_freq, cfg.threads,
                     [&](int k) { solve_stack_row(full, k, cfg.env, cfg.source_depth, r, sel); });

        auto [t0, t1] = (cfg.time_lo < cfg.time_hi)
                            ? std::pair<double, double>{cfg.time_lo, cfg.time_hi}
                            : auto_time_window(full, r, cfg.env.c_b, cfg.env.min_sound_speed());
        double beat_hz = (full.omegas.back() - full.omegas.front()) / (2.0 * kPi);
        int n_time = std::max(cfg.n_time,
                              static_cast<int>(std::ceil((t1 - t0) * 3.0 * beat_hz)));

        // fidelity grid: coarsest node stride that keeps spacing below 0.5 m
        int stride = std::max(1, static_cast<int>(std::floor(0.5 / full.grid.spacing())));
        while (stride > 1 && (full.grid.n_points - 1) % stride != 0) --stride;
        CwStack thin = restrict_stack(full, cfg.env.h + 2.0, stride);
        PulseField exact = synthesize_pulse(thin, t0, t1, n_time);

        parallel_for(static_cast<int>(dzs.size()), cfg.threads, [&](int di) {
            double dz = dzs[di];
            int j_max = static_cast<int>(std::ceil(cfg.env.L / dz - 0.5));
            auto setup = make_reconstruction_setup(
                cfg.env, j_max, effective_depth(dz, j_max));
            CwStack est_stack = reconstruct_stack(full, thin, cfg.env, setup);
            PulseField est = synthesize_pulse(est_stack, t0, t1, n_time, 1,
                                              std::numeric_limits<double>::infinity());
            double F = fidelity_pulse(exact, est, cfg.env.h).value;
            records[di * cfg.center_freqs.size() + c] = {dz, fc, F, setup.array.J};
        });
    }
    return records;
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

inline std::string ensure_out_dir(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

inline std::string run_sweep_frequency(const ExperimentConfig& cfg) {
    auto records = sweep_frequency_noiseless(cfg);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/sweep_frequency.csv";
    CsvWriter csv(path);
    csv.header({"frequency_hz", "range_m", "hydrophones", "fidelity"});
    for (const auto& rec : records)
        csv.row({rec.f, rec.r, static_cast<double>(rec.J), rec.F});

    CsvWriter summary(dir + "/confidence_ranges.txt");
    for (const auto& [r, cr] : sweep_confidence_ranges(cfg, records)) {
        std::string line = "range_m=" + format_number(r) + " threshold=" +
                           format_number(cr.threshold) + " intervals=";
        for (std::size_t i = 0; i < cr.intervals.size(); ++i) {
            line += (i ? " " : "") + std::string("[") + format_number(cr.intervals[i].first) +
                    "," + format_number(cr.intervals[i].second) + "]";
        }
        if (!cr.dips.empty()) {
            line += " bridged_dips=";
            for (std::size_t i = 0; i < cr.dips.size(); ++i)
                line += (i ? " " : "") + format_number(cr.dips[i]);
        }
        summary.mixed_row({line});
    }
    return path;
}

inline std::string run_monte_carlo(const ExperimentConfig& cfg) {
    auto records = monte_carlo_sweep(cfg);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/monte_carlo.csv";
    CsvWriter csv(path);
    csv.header({"frequency_hz", "range_m", "snr_db", "fidelity_clean", "fidelity_mean",
                "fidelity_median", "fidelity_averaged", "realizations"});
    for (const auto& rec : records)
        csv.row({rec.f, rec.r, rec.snr_db, rec.F_clean, rec.F_mean, rec.F_median,
                 rec.F_averaged, static_cast<double>(rec.n_realizations)});
    return path;
}

inline std::string run_profile_compare(const ExperimentConfig& cfg) {
    auto res = profile_compare(cfg);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/profile_compare.csv";
    CsvWriter csv(path);
    csv.header({"depth_m", "re_exact", "im_exact", "re_clean", "im_clean", "re_noisy",
                "im_noisy", "re_averaged", "im_averaged"});
    for (int i = 0; i < res.grid.n_points; ++i)
        csv.row({res.grid.depth(i), res.exact[i].real(), res.exact[i].imag(),
                 res.est_clean[i].real(), res.est_clean[i].imag(), res.est_noisy[i].real(),
                 res.est_noisy[i].imag(), res.est_averaged[i].real(),
                 res.est_averaged[i].imag()});

    CsvWriter summary(dir + "/profile_compare_fidelity.csv");
    summary.header({"variant", "fidelity"});
    summary.mixed_row({"clean", format_number(res.F_clean)});
    summary.mixed_row({"noisy_single", format_number(res.F_noisy)});
    summary.mixed_row({"averaged", format_number(res.F_averaged)});

    CsvWriter meas(dir + "/measurements.csv");
    meas.header({"j", "depth_m", "re", "im", "kind", "seed"});
    auto dump = [&](const Measurement& m, const std::string& kind) {
        auto setup =
            make_reconstruction_setup(cfg.env, cfg.resolved_j_max(), cfg.resolved_L_eff());
        for (std::size_t j = 0; j < m.values.size(); ++j)
            meas.mixed_row({std::to_string(j + 1),
                            format_number(setup.array.depth(static_cast<int>(j + 1))),
                            format_number(m.values[j].real()),
                            format_number(m.values[j].imag()), kind,
                            std::to_string(m.seed)});
    };
    dump(res.meas_clean, "clean");
    dump(res.meas_noisy, "noisy");
    dump(res.meas_averaged, "averaged");
    return path;
}

inline std::string run_sweep_spacing(const ExperimentConfig& cfg) {
    auto records = sweep_spacing(cfg);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/sweep_spacing.csv";
    CsvWriter csv(path);
    csv.header({"spacing_m", "center_frequency_hz", "hydrophones", "fidelity"});
    for (const auto& rec : records)
        csv.row({rec.dz, rec.fc, static_cast<double>(rec.J), rec.F});
    return path;
}

inline std::string run_dump_dvr(const ExperimentConfig& cfg) {
    cfg.validate();
    auto basis = build_dvr(cfg.resolved_j_max(), cfg.resolved_L_eff());
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/dvr_grid.csv";
    {
        CsvWriter csv(path);
        csv.header({"j", "depth_m", "eigenvalue"});
        for (int j = 1; j <= basis.j_max; ++j)
            csv.row({static_cast<double>(j), basis.depth(j), basis.eigenvalues[j - 1]});
    }
    {
        CsvWriter csv(dir + "/dvr_functions.csv");
        std::vector<std::string> names = {"depth_m"};
        for (int j = 1; j <= basis.j_max; ++j) names.push_back("chi_" + std::to_string(j));
        csv.header(names);
        int n = 20 * basis.j_max + 1;
        for (int i = 0; i < n; ++i) {
            double z = basis.L_eff * i / (n - 1);
            std::vector<double> row = {z};
            for (int j = 1; j <= basis.j_max; ++j) row.push_back(eval_chi(basis, j, z));
            csv.row(row);
        }
    }
    return path;
}

inline std::string run_dump_modes(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.frequency > 0.0)) throw config_error("modes dump requires a frequency");
    auto grid = make_mode_grid(cfg.env, cfg.frequency);
    auto modes = solve_modes(cfg.env, cfg.frequency, grid,
                             selection_from_string(cfg.mode_selection));
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/modes.csv";
    {
        CsvWriter csv(path);
        csv.header({"m", "k_rm_rad_per_m", "alpha_np_per_m", "phase_speed_m_per_s"});
        for (int m = 1; m <= modes.mode_count(); ++m)
            csv.row({static_cast<double>(m), modes.k_rm[m - 1], modes.alpha_m[m - 1],
                     2.0 * kPi * cfg.frequency / modes.k_rm[m - 1]});
    }
    {
        CsvWriter csv(dir + "/mode_shapes.csv");
        std::vector<std::string> names = {"depth_m"};
        for (int m = 1; m <= modes.mode_count(); ++m)
            names.push_back("psi_" + std::to_string(m));
        csv.header(names);
        int stride = std::max(1, (grid.n_points - 1) / 600);
        for (int i = 0; i < grid.n_points; i += stride) {
            std::vector<double> row = {grid.depth(i)};
            for (int m = 1; m <= modes.mode_count(); ++m) row.push_back(modes.psi(i, m - 1));
            csv.row(row);
        }
    }
    return path;
}

inline std::string run_dump_cw(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.frequency > 0.0)) throw config_error("cw dump requires a frequency");
    auto grid = make_mode_grid(cfg.env, cfg.frequency);
    auto modes = solve_modes(cfg.env, cfg.frequency, grid,
                             selection_from_string(cfg.mode_selection));
    auto field = cw_field(cfg.env, modes, cfg.source_depth, cfg.ranges.front(), grid);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/cw_profile.csv";
    CsvWriter csv(path);
    csv.header({"depth_m", "re", "im", "abs"});
    for (int i = 0; i < grid.n_points; ++i)
        csv.row({grid.depth(i), field.profile[i].real(), field.profile[i].imag(),
                 std::abs(field.profile[i])});
    return path;
}

inline std::string run_dump_pulse(const ExperimentConfig& cfg) {
    cfg.validate();
    double fc = cfg.center_freqs.front();
    double r = cfg.ranges.front();
    auto spectrum = gaussian_spectrum(2.0 * kPi * fc);
    auto stack = compute_cw_stack(cfg.env, cfg.source_depth, r, spectrum, cfg.n_freq,
                                  selection_from_string(cfg.mode_selection));
    auto [t0, t1] = (cfg.time_lo < cfg.time_hi)
                        ? std::pair<double, double>{cfg.time_lo, cfg.time_hi}
                        : auto_time_window(stack, r, cfg.env.c_b, cfg.env.min_sound_speed());
    int stride = std::max(1, (stack.grid.n_points - 1) / 256);
    while ((stack.grid.n_points - 1) % stride != 0) ++stride;
    CwStack thin = restrict_stack(stack, stack.grid.z_max, stride);
    auto pulse = synthesize_pulse(thin, t0, t1, cfg.n_time);
    auto dir = ensure_out_dir(cfg);
    std::string path = dir + "/pulse_field.csv";
    CsvWriter csv(path);
    std::vector<std::string> names = {"time_s"};
    for (int i = 0; i < pulse.grid.n_points; ++i)
        names.push_back("z_" + format_number(pulse.grid.depth(i)));
    csv.header(names);
    for (int t = 0; t < pulse.n_time(); ++t) {
        std::vector<double> row = {pulse.times[t]};
        for (int i = 0; i < pulse.grid.n_points; ++i)
            row.push_back(pulse.values(t, i).real());
        csv.row(row);
    }
    return path;
}

}  // namespace seadvr
