// CW wavefields (far-field modal sum) and broadband pulse synthesis.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "seadvr/env.hpp"
#include "seadvr/modes.hpp"

namespace seadvr {

struct window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Complex CW depth profile at fixed range.
struct CwField {
    double frequency = 0.0;
    double range = 0.0;
    double source_depth = 0.0;
    DepthGrid grid;
    Eigen::VectorXcd profile;     // sampled on grid nodes
    bool empty_spectrum = false;  // set when the mode sum had no terms

    std::complex<double> value_at(double z) const {
        double s = grid.spacing();
        double x = z / s;
        int i = std::clamp(static_cast<int>(std::floor(x)), 0, grid.n_points - 2);
        double t = x - i;
        return (1.0 - t) * profile[i] + t * profile[i + 1];
    }
};

/// Psi(r,z) = i/(2 sqrt(2 pi r)) e^{-i pi/4}
///            sum_m k_rm^{-1/2} e^{i(k_rm + i alpha_m) r} psi_m(z_s) psi_m(z).
/// Mode values at z_s and at target grid nodes come from linear interpolation
/// on the mode grid (exact when the grids coincide).
inline CwField cw_field(const EnvironmentModel& env, const ModeSet& modes, double z_s,
                        double r, const DepthGrid& grid) {
    if (!(r > 0.0)) throw std::domain_error("cw_field: range must be positive (far field)");
    if (!(z_s > 0.0 && z_s < env.h))
        throw std::domain_error("cw_field: source depth must lie inside the water column");

    CwField out;
    out.frequency = modes.frequency;
    out.range = r;
    out.source_depth = z_s;
    out.grid = grid;
    out.profile = Eigen::VectorXcd::Zero(grid.n_points);
    if (modes.mode_count() == 0) {
        out.empty_spectrum = true;
        return out;
    }

    std::complex<double> amp =
        std::complex<double>(0.0, 1.0) / (2.0 * std::sqrt(2.0 * kPi * r)) *
        std::exp(std::complex<double>(0.0, -kPi / 4.0));

    int M = modes.mode_count();
    Eigen::VectorXcd coeff(M);
    for (int m = 1; m <= M; ++m) {
        double k = modes.k_rm[m - 1];
        double decay = modes.alpha_m[m - 1] * r;
        double mag = std::exp(-decay) / std::sqrt(k);
        coeff[m - 1] = amp * modes.value_at(m, z_s) * mag *
                       std::exp(std::complex<double>(0.0, k * r));
    }

    if (grid == modes.grid) {
        out.profile = modes.psi * coeff;
    } else {
        for (int i = 0; i < grid.n_points; ++i) {
            double z = std::min(grid.depth(i), modes.grid.z_max);
            std::complex<double> acc{0.0, 0.0};
            for (int m = 1; m <= M; ++m) acc += coeff[m - 1] * modes.value_at(m, z);
            out.profile[i] = acc;
        }
    }
    return out;
}

/// Gaussian source spectrum s(Omega) = T/sqrt(2 pi) exp(-(Omega-Omega_c)^2 T^2/2),
/// T = sqrt(2 pi)/DeltaOmega, DeltaOmega = Omega_c/2. Unit integral.
struct SignalSpectrum {
    double omega_c = 0.0;      // center angular frequency (rad/s)
    double delta_omega = 0.0;  // bandwidth (rad/s)
    double T = 0.0;            // envelope duration (s)

    double value(double omega) const {
        double d = (omega - omega_c) * T;
        return T / std::sqrt(2.0 * kPi) * std::exp(-0.5 * d * d);
    }
};

inline SignalSpectrum gaussian_spectrum(double omega_c) {
    if (!(omega_c > 0.0)) throw std::domain_error("gaussian_spectrum: omega_c > 0 required");
    SignalSpectrum s;
    s.omega_c = omega_c;
    s.delta_omega = 0.5 * omega_c;
    s.T = std::sqrt(2.0 * kPi) / s.delta_omega;
    return s;
}

/// Real time x depth arrival pattern of a broadband pulse.
struct PulseField {
    std::vector<double> times;  // strictly increasing (s)
    DepthGrid grid;
    Eigen::MatrixXcd values;  // n_time x n_points

    int n_time() const { return static_cast<int>(times.size()); }
};

/// Per-frequency CW stack shared between pulse synthesis and reconstruction:
/// rows of `profiles` hold Psi(r, z; Omega_k) on e grid nodes.
struct CwStack {
    std::vector<double> omegas;        // angular frequency grid (rad/s)
    std::vector<double> quad_weights;  // trapezoid weights (rad/s)
    SignalSpectrum spectrum;
    DepthGrid grid;
    Eigen::MatrixXcd profiles;  // n_freq x n_points
};

/// Frequency grid spanning Omega_c +/- 4 DeltaOmega, clipped at a positive
/// floor; modes re-solved per frequency on a grid adequate for the top one.
/// The per-frequency solves are independent; `solve_row` lets callers run them
/// through their own scheduler (see experiment.hpp).
inline CwStack prepare_cw_stack(const EnvironmentModel& env, const SignalSpectrum& spectrum,
                                int n_freq, int min_grid_points = 2001) {
    if (n_freq < 64) throw std::invalid_argument("cw stack: n_freq >= 64 required");
    double lo = std::max(spectrum.omega_c - 4.0 * spectrum.delta_omega,
                         2.0 * kPi * std::max(1.0, spectrum.omega_c / (200.0 * kPi)));
    double hi = spectrum.omega_c + 4.0 * spectrum.delta_omega;
    CwStack st;
    st.spectrum = spectrum;
    st.grid = make_mode_grid(env, hi / (2.0 * kPi), min_grid_points);
    st.omegas.resize(n_freq);
    st.quad_weights.resize(n_freq);
    double d = (hi - lo) / (n_freq - 1);
    for (int k = 0; k < n_freq; ++k) {
        st.omegas[k] = lo + k * d;
        st.quad_weights[k] = (k == 0 || k == n_freq - 1) ? 0.5 * d : d;
    }
    st.profiles = Eigen::MatrixXcd::Zero(n_freq, st.grid.n_points);
    return st;
}

inline void solve_stack_row(CwStack& st, int k, const EnvironmentModel& env, double z_s,
                            double r, ModeSelection selection) {
    auto modes = solve_modes(env, st.omegas[k] / (2.0 * kPi), st.grid, selection);
    st.profiles.row(k) = cw_field(env, modes, z_s, r, st.grid).profile.transpose();
}

inline CwStack compute_cw_stack(const EnvironmentModel& env, double z_s, double r,
                                const SignalSpectrum& spectrum, int n_freq,
                                ModeSelection selection = ModeSelection::AllPropagating,
                                int min_grid_points = 2001) {
    CwStack st = prepare_cw_stack(env, spectrum, n_freq, min_grid_points);
    for (int k = 0; k < n_freq; ++k) solve_stack_row(st, k, env, z_s, r, selection);
    return st;
}

/// Fourier synthesis Psi~(t,z) = sum_k w_k s(Omega_k) Psi(r,z;Omega_k) e^{-i Omega_k t}.
/// `z_stride` keeps every stride-th depth node (must divide n_points - 1).
/// Throws window_error when a significant share of pulse energy sits at the
/// first or last time frame (time window clipping).
inline PulseField synthesize_pulse(const CwStack& st, double t0, double t1, int n_time,
                                   int z_stride = 1, double clip_tolerance = 1e-3) {
    if (n_time < 2) throw std::invalid_argument("synthesize_pulse: n_time >= 2 required");
    if (!(t1 > t0)) throw std::invalid_argument("synthesize_pulse: empty time window");
    if (z_stride < 1 || (st.grid.n_points - 1) % z_stride != 0)
        throw std::invalid_argument("synthesize_pulse: z_stride must divide n_points - 1");
    int n_freq = static_cast<int>(st.omegas.size());
    PulseField out;
    out.grid = {st.grid.z_max, (st.grid.n_points - 1) / z_stride + 1};
    out.times.resize(n_time);
    double dt = (t1 - t0) / (n_time - 1);
    Eigen::MatrixXcd kernel(n_time, n_freq);
    for (int t = 0; t < n_time; ++t) {
        out.times[t] = t0 + t * dt;
        for (int k = 0; k < n_freq; ++k) {
            double w = st.quad_weights[k] * st.spectrum.value(st.omegas[k]);
            kernel(t, k) = std::polar(w, -st.omegas[k] * out.times[t]);
        }
    }
    if (z_stride == 1) {
        out.values = kernel * st.profiles;
    } else {
        Eigen::MatrixXcd thin(n_freq, out.grid.n_points);
        for (int i = 0; i < out.grid.n_points; ++i)
            thin.col(i) = st.profiles.col(i * z_stride);
        out.values = kernel * thin;
    }

    Eigen::VectorXd frame_energy(n_time);
    for (int t = 0; t < n_time; ++t) frame_energy[t] = out.values.row(t).squaredNorm();
    double peak = frame_energy.maxCoeff();
    if (peak > 0.0 &&
        std::max(frame_energy[0], frame_energy[n_time - 1]) > clip_tolerance * peak)
        throw window_error("synthesize_pulse: pulse energy clipped at the time window edge");
    return out;
}

inline PulseField pulse_field(const EnvironmentModel& env, double z_s, double r,
                              const SignalSpectrum& spectrum, double t0, double t1,
                              int n_freq = 512, int n_time = 2048,
                              ModeSelection selection = ModeSelection::AllPropagating) {
    return synthesize_pulse(compute_cw_stack(env, z_s, r, spectrum, n_freq, selection),
                            t0, t1, n_time);
}

}  // namespace seadvr
