// Normal modes of the waveguide: finite-difference Sturm-Liouville solver.
//
// The flux form rho d/dz[(1/rho) dpsi/dz] + k0^2 n^2 psi = k^2 psi is
// discretized by a finite-volume scheme on a uniform grid (Dirichlet at the
// surface, Neumann at the basement). Cell integrals of 1/rho and n^2/rho are
// split at the water-sediment interface and interval flux coefficients use the
// harmonic mean of 1/rho, which keeps the discrete operator self-adjoint under
// the 1/rho inner product and the eigenvalue error second order in spacing.
// Selected eigenpairs come from LAPACK's dstevr on the symmetrized tridiagonal
// matrix; attenuation rates are first-order perturbations from Im(n^2).
#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "seadvr/env.hpp"

namespace seadvr {

struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform depth grid on [0, z_max] with n_points nodes (node 0 at the surface).
struct DepthGrid {
    double z_max = 0.0;
    int n_points = 0;

    double spacing() const { return z_max / (n_points - 1); }
    double depth(int i) const { return i * spacing(); }

    void validate() const {
        if (n_points < 3) throw std::invalid_argument("DepthGrid: n_points >= 3 required");
        if (!(z_max > 0.0)) throw std::invalid_argument("DepthGrid: z_max > 0 required");
    }

    bool operator==(const DepthGrid&) const = default;
};

/// Grid for solve_modes: at least `min_points`, at least `points_per_wavelength`
/// nodes per minimal acoustic wavelength, and node counts adjusted so the
/// water-sediment interface falls on a grid node when h/L is a simple ratio.
inline DepthGrid make_mode_grid(const EnvironmentModel& env, double f,
                                int min_points = 2001, int points_per_wavelength = 20) {
    double lambda_min = env.min_sound_speed() / f;
    double s = std::min(env.L / (min_points - 1), lambda_min / points_per_wavelength);
    int n1 = static_cast<int>(std::ceil(env.L / s));
    double frac = env.h / env.L;
    for (int q = 1; q <= 1024; ++q) {
        if (std::abs(q * frac - std::round(q * frac)) < 1e-9) {
            n1 = ((n1 + q - 1) / q) * q;
            break;
        }
    }
    return {env.L, n1 + 1};
}

enum class ModeSelection {
    AllPropagating,  // every discrete mode with k_rm^2 > 0
    Trapped,         // phase speed below c_b only
};

/// Normal modes at one frequency. psi columns are density-normalized
/// (sum_i weight_i psi_i^2 = 1, the discrete form of int psi^2 / rho dz = 1)
/// and sampled on `grid` including the surface node (identically zero there).
struct ModeSet {
    double frequency = 0.0;
    DepthGrid grid;
    std::vector<double> k_rm;     // horizontal wavenumbers, descending (rad/m)
    std::vector<double> alpha_m;  // modal attenuation rates (nepers/m)
    Eigen::MatrixXd psi;          // n_points x M
    std::vector<double> weight;   // 1/rho quadrature weights per node

    int mode_count() const { return static_cast<int>(k_rm.size()); }

    /// Linear interpolation of mode m (1-based) at depth z.
    double value_at(int m, double z) const {
        if (m < 1 || m > mode_count()) throw std::invalid_argument("mode index out of range");
        double s = grid.spacing();
        double x = z / s;
        int i = std::clamp(static_cast<int>(std::floor(x)), 0, grid.n_points - 2);
        double t = x - i;
        return (1.0 - t) * psi(i, m - 1) + t * psi(i + 1, m - 1);
    }

    /// Discrete density-weighted inner product int psi_m psi_n / rho dz.
    double inner_product(int m, int n) const {
        double acc = 0.0;
        for (int i = 0; i < grid.n_points; ++i)
            acc += weight[i] * psi(i, m - 1) * psi(i, n - 1);
        return acc;
    }
};

namespace detail {

/// Finite-volume coefficients on the solver nodes a = 1..N (z = a*delta).
struct SturmLiouvilleCoefficients {
    int n_solver = 0;  // N (node N sits at z = L)
    double delta = 0.0;
    std::vector<double> p_left;   // flux coefficient on (z_{a-1}, z_a)
    std::vector<double> weight;   // int_cell 1/rho dz
    std::vector<double> q_re;     // int_cell Re n^2 / rho dz
    std::vector<double> q_im;     // int_cell Im n^2 / rho dz
};

inline SturmLiouvilleCoefficients
build_coefficients(const EnvironmentModel& env, double f, const DepthGrid& grid) {
    SturmLiouvilleCoefficients c;
    c.n_solver = grid.n_points - 1;
    c.delta = grid.spacing();
    int N = c.n_solver;
    c.p_left.assign(N + 1, 0.0);
    c.weight.assign(N + 1, 0.0);
    c.q_re.assign(N + 1, 0.0);
    c.q_im.assign(N + 1, 0.0);

    // int rho dz over an interval, splitting at the interface
    auto rho_integral = [&](double a, double b) {
        double wat = std::clamp(env.h - a, 0.0, b - a);
        return wat * env.rho_wat + (b - a - wat) * env.rho_sed;
    };
    // accumulate cell integrals of 1/rho and n^2/rho by midpoint per segment
    auto add_cell = [&](int node, double a, double b) {
        double pts[3] = {a, std::clamp(env.h, a, b), b};
        for (int s = 0; s < 2; ++s) {
            double len = pts[s + 1] - pts[s];
            if (len <= 0.0) continue;
            double mid = 0.5 * (pts[s] + pts[s + 1]);
            double rho = env.density(mid);
            auto n2 = env.refractive_index_sq(mid, f);
            c.weight[node] += len / rho;
            c.q_re[node] += len * n2.real() / rho;
            c.q_im[node] += len * n2.imag() / rho;
        }
    };

    for (int a = 1; a <= N; ++a) {
        double za = a * c.delta;
        c.p_left[a] = c.delta / rho_integral(za - c.delta, za);
        double lo = za - 0.5 * c.delta;
        double hi = (a < N) ? za + 0.5 * c.delta : za;
        add_cell(a, lo, hi);
    }
    return c;
}

}  // namespace detail

/// First-order perturbative attenuation rate of one mode:
/// alpha = k0^2/(2 k_rm) * int Im(n^2) psi^2 / rho dz.
/// `psi` must be density-normalized on the solver grid (surface node included).
inline double modal_attenuation(const EnvironmentModel& env, double f,
                                const DepthGrid& grid,
                                const Eigen::Ref<const Eigen::VectorXd>& psi,
                                double k_rm) {
    if (!(k_rm > 0.0)) throw std::invalid_argument("modal_attenuation: degenerate mode, k_rm <= 0");
    auto c = detail::build_coefficients(env, f, grid);
    double k0 = env.reference_wavenumber(f);
    double acc = 0.0;
    for (int a = 1; a <= c.n_solver; ++a)
        acc += c.q_im[a] * psi[a] * psi[a];
    return k0 * k0 / (2.0 * k_rm) * acc;
}

/// Solve the normal-mode problem on `grid` (grid.z_max must equal env.L).
/// Returns modes ordered by descending k_rm; an empty spectrum is a valid
/// result, not an error. Throws resolution_error when the grid has fewer than
/// 8 points per shortest vertical wavelength.
inline ModeSet solve_modes(const EnvironmentModel& env, double f, const DepthGrid& grid,
                           ModeSelection selection = ModeSelection::AllPropagating) {
    env.validate();
    grid.validate();
    if (std::abs(grid.z_max - env.L) > 1e-9 * env.L)
        throw std::invalid_argument("solve_modes: grid must span [0, env.L]");
    double k0 = env.reference_wavenumber(f);
    double lambda_min = env.min_sound_speed() / f;
    if (grid.spacing() > lambda_min / 8.0)
        throw resolution_error("solve_modes: grid coarser than 8 points per vertical wavelength");

    auto c = detail::build_coefficients(env, f, grid);
    int N = c.n_solver;

    // symmetrized tridiagonal matrix B = W^{-1/2} K W^{-1/2}
    std::vector<double> diag(N), off(std::max(N - 1, 0));
    for (int a = 1; a <= N; ++a) {
        double p_r = (a < N) ? c.p_left[a + 1] : 0.0;
        diag[a - 1] = (-(c.p_left[a] + p_r) / c.delta + k0 * k0 * c.q_re[a]) / c.weight[a];
        if (a < N)
            off[a - 1] = c.p_left[a + 1] / c.delta / std::sqrt(c.weight[a] * c.weight[a + 1]);
    }

    double vu = k0 * k0;
    double vl = (selection == ModeSelection::Trapped)
                    ? std::pow(2.0 * kPi * f / env.c_b, 2)
                    : std::pow(1e-4 * k0, 2);

    ModeSet out;
    out.frequency = f;
    out.grid = grid;
    out.weight.assign(grid.n_points, 0.0);
    for (int a = 1; a <= N; ++a) out.weight[a] = c.weight[a];

    // count first, then compute eigenpairs into an exact-size buffer
    lapack_int m = 0;
    std::vector<double> d0(diag), e0(off), w(N);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(N) + 2);
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', N, d0.data(), e0.data(),
                                     vl, vu, 0, 0, 0.0, &m, w.data(), nullptr, 1,
                                     isuppz.data());
    if (info != 0) throw std::runtime_error("solve_modes: dstevr (count) failed");
    if (m == 0) return out;  // empty spectrum

    Eigen::MatrixXd z(N, m);
    d0 = diag;
    e0 = off;
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'V', N, d0.data(), e0.data(), vl, vu, 0,
                          0, 0.0, &m, w.data(), z.data(), N, isuppz.data());
    if (info != 0) throw std::runtime_error("solve_modes: dstevr failed");

    // eigenvalues ascend; modes are ordered by descending k_rm
    out.k_rm.resize(m);
    out.alpha_m.resize(m);
    out.psi = Eigen::MatrixXd::Zero(grid.n_points, m);
    for (int j = 0; j < m; ++j) {
        int src = m - 1 - j;
        out.k_rm[j] = std::sqrt(w[src]);
        Eigen::VectorXd u = z.col(src);
        if (u[0] < 0.0) u = -u;  // sign convention: positive near the surface
        for (int a = 1; a <= N; ++a)
            out.psi(a, j) = u[a - 1] / std::sqrt(c.weight[a]);
        double acc = 0.0;
        for (int a = 1; a <= N; ++a)
            acc += c.q_im[a] * out.psi(a, j) * out.psi(a, j);
        out.alpha_m[j] = k0 * k0 / (2.0 * out.k_rm[j]) * acc;
    }
    return out;
}

}  // namespace seadvr
