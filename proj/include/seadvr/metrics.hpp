// Reconstruction fidelity (CW and pulse) and confidence-range extraction.
#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "seadvr/field.hpp"

namespace seadvr {

/// Normalized squared overlap F = |int conj(exact) est dz|^2 / (A_exact A_est),
/// F = 1 iff the inputs agree up to a global complex scalar.
struct FidelityResult {
    double value = 0.0;
    double a_exact = 0.0;
    double a_est = 0.0;
};

namespace detail {

/// Trapezoid overlap and norms over [0, min(h, z_max)] on a uniform grid;
/// the upper endpoint is interpolated when h falls between nodes.
struct OverlapAccumulator {
    std::complex<double> overlap{0.0, 0.0};
    double norm_a = 0.0, norm_b = 0.0;

    void add(std::complex<double> a, std::complex<double> b, double w) {
        overlap += w * std::conj(a) * b;
        norm_a += w * std::norm(a);
        norm_b += w * std::norm(b);
    }
};

template <class GetA, class GetB>
inline OverlapAccumulator trapezoid_overlap(const DepthGrid& grid, double h, GetA&& a,
                                            GetB&& b) {
    OverlapAccumulator acc;
    double s = grid.spacing();
    double zmax = std::min(h, grid.z_max);
    int full = static_cast<int>(std::floor(zmax / s + 1e-12));
    full = std::min(full, grid.n_points - 1);
    for (int i = 0; i <= full; ++i) {
        double w = (i == 0 || i == full) ? 0.5 * s : s;
        acc.add(a(i), b(i), w);
    }
    double rest = zmax - full * s;
    if (rest > 1e-12 && full + 1 < grid.n_points) {
        double t = rest / s;
        auto am = (1.0 - t) * a(full) + t * a(full + 1);
        auto bm = (1.0 - t) * b(full) + t * b(full + 1);
        // trapezoid over the partial cell [full*s, zmax]
        acc.add(a(full), b(full), 0.5 * rest);
        acc.add(am, bm, 0.5 * rest);
    }
    return acc;
}

}  // namespace detail

/// CW fidelity on a common grid, integration domain [0, h].
inline FidelityResult fidelity_cw(const DepthGrid& grid,
                                  std::span<const std::complex<double>> exact,
                                  std::span<const std::complex<double>> est, double h) {
    if (static_cast<int>(exact.size()) != grid.n_points ||
        static_cast<int>(est.size()) != grid.n_points)
        throw std::invalid_argument("fidelity_cw: profile length does not match grid");
    auto acc = detail::trapezoid_overlap(
        grid, h, [&](int i) { return exact[i]; }, [&](int i) { return est[i]; });
    if (!(acc.norm_a > 0.0) || !(acc.norm_b > 0.0))
        throw std::invalid_argument("fidelity_cw: zero-norm input");
    return {std::norm(acc.overlap) / (acc.norm_a * acc.norm_b), acc.norm_a, acc.norm_b};
}

/// Pulse fidelity over the time window x [0, h]. The squared modulus is
/// applied to the double integral for consistency with the CW definition.
inline FidelityResult fidelity_pulse(const PulseField& exact, const PulseField& est,
                                     double h) {
    if (exact.times != est.times || !(exact.grid == est.grid))
        throw std::invalid_argument("fidelity_pulse: time/depth axes mismatch");
    std::complex<double> overlap{0.0, 0.0};
    double na = 0.0, nb = 0.0;
    for (int t = 0; t < exact.n_time(); ++t) {
        double wt = 1.0;
        if (t == 0 || t == exact.n_time() - 1) wt = 0.5;
        wt *= (exact.times.back() - exact.times.front()) / (exact.n_time() - 1);
        auto acc = detail::trapezoid_overlap(
            exact.grid, h, [&](int i) { return exact.values(t, i); },
            [&](int i) { return est.values(t, i); });
        overlap += wt * acc.overlap;
        na += wt * acc.norm_a;
        nb += wt * acc.norm_b;
    }
    if (!(na > 0.0) || !(nb > 0.0))
        throw std::invalid_argument("fidelity_pulse: zero-norm input");
    return {std::norm(overlap) / (na * nb), na, nb};
}

/// Maximal intervals where F > threshold on a sampled curve. Crossing points
/// are linearly interpolated. An isolated single-sample dip below threshold
/// does not split an interval; dips are reported in `dips`.
struct ConfidenceRange {
    double threshold = 0.9;
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> dips;  // x positions of bridged single-point dips
};

inline ConfidenceRange confidence_range(std::span<const double> xs,
                                        std::span<const double> fs,
                                        double threshold = 0.9) {
    if (xs.size() != fs.size()) throw std::invalid_argument("confidence_range: size mismatch");
    std::size_t n = xs.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("confidence_range: x grid must ascend");

    ConfidenceRange out;
    out.threshold = threshold;
    std::vector<bool> above(n);
    for (std::size_t i = 0; i < n; ++i) above[i] = fs[i] > threshold;
    // bridge isolated single-point dips
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!above[i] && above[i - 1] && above[i + 1]) {
            above[i] = true;
            out.dips.push_back(xs[i]);
        }
    }

    auto cross = [&](std::size_t lo, std::size_t hi) {
        // linear interpolation of the threshold crossing between samples lo < hi
        double t = (threshold - fs[lo]) / (fs[hi] - fs[lo]);
        return xs[lo] + t * (xs[hi] - xs[lo]);
    };

    std::size_t i = 0;
    while (i < n) {
        if (!above[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && above[j + 1]) ++j;
        double left = (i == 0) ? xs[0] : cross(i - 1, i);
        double right = (j + 1 == n) ? xs[n - 1] : cross(j + 1, j);
        out.intervals.emplace_back(left, right);
        i = j + 1;
    }
    return out;
}

}  // namespace seadvr
