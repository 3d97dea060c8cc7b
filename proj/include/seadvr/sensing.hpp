// Array measurement simulation: pointwise sampling, cable-shape displacement,
// additive white noise at prescribed SNR, multi-realization averaging.
#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "seadvr/env.hpp"
#include "seadvr/field.hpp"
#include "seadvr/rng.hpp"

namespace seadvr {

/// Equispaced vertical array with hydrophones at z_j = j * dz, j = 1..J.
struct ArraySpec {
    int J = 0;
    double dz = 0.0;

    double depth(int j) const { return j * dz; }

    void validate(double water_depth) const {
        if (J < 1) throw std::invalid_argument("ArraySpec: J >= 1 required");
        if (!(dz > 0.0)) throw std::invalid_argument("ArraySpec: dz > 0 required");
        if (J * dz > water_depth + 1e-9)
            throw std::invalid_argument("ArraySpec: array must span the water column only");
    }
};

/// Cable displacement: two fixed-end sine modes with Gaussian amplitudes,
/// zeta(z) = varsigma/sqrt(2) (zeta1 sin(pi z/h) + zeta2 sin(2 pi z/h)).
struct DisplacementModel {
    double varsigma = 0.0;  // r.m.s. amplitude (m)
    double h = 0.0;         // water depth; both cable ends fixed

    double profile(double z, double zeta1, double zeta2) const {
        return varsigma / std::sqrt(2.0) *
               (zeta1 * std::sin(kPi * z / h) + zeta2 * std::sin(2.0 * kPi * z / h));
    }
};

enum class MeasurementKind { Clean, Displaced, Noisy, Averaged };

struct Measurement {
    std::vector<std::complex<double>> values;
    MeasurementKind kind = MeasurementKind::Clean;
    std::uint64_t seed = 0;
    int n_realizations = 1;
    double realized_snr_db = std::numeric_limits<double>::quiet_NaN();

    double energy() const {
        double acc = 0.0;
        for (auto v : values) acc += std::norm(v);
        return acc;
    }
};

/// Clean pointwise samples of the field at the array depths.
inline Measurement sample_field(const CwField& field, const ArraySpec& array) {
    Measurement m;
    m.kind = MeasurementKind::Clean;
    m.values.resize(array.J);
    for (int j = 1; j <= array.J; ++j) {
        double z = array.depth(j);
        if (z > field.grid.z_max + 1e-9)
            throw std::domain_error("sample_field: hydrophone below the field grid");
        m.values[j - 1] = field.value_at(z);
    }
    return m;
}

/// Samples at displaced depths z_j + zeta(z_j); one cable shape per call,
/// shared by all hydrophones. Depths are clamped to [0, grid max].
inline Measurement displace(const CwField& field, const ArraySpec& array,
                            const DisplacementModel& model, RngStream& rng) {
    if (model.varsigma < 0.0) throw std::invalid_argument("displace: varsigma >= 0 required");
    double zeta1 = rng.normal();
    double zeta2 = rng.normal();
    Measurement m;
    m.kind = MeasurementKind::Displaced;
    m.values.resize(array.J);
    for (int j = 1; j <= array.J; ++j) {
        double z = array.depth(j) + model.profile(array.depth(j), zeta1, zeta2);
        z = std::clamp(z, 0.0, field.grid.z_max);
        m.values[j - 1] = field.value_at(z);
    }
    return m;
}

/// Add i.i.d. noise calibrated so that the expected realized SNR
/// 10 log10(reference_energy / sum |xi_j|^2) equals snr_db. `reference_energy`
/// is the clean signal energy at the hydrophones (sum |Psi_exact(z_j)|^2).
/// Noise is circular complex Gaussian by default; `complex_noise = false`
/// draws real Gaussian perturbations instead.
inline Measurement add_noise(const Measurement& meas, double snr_db, double reference_energy,
                             RngStream& rng, bool complex_noise = true) {
    if (!(reference_energy > 0.0))
        throw std::invalid_argument("add_noise: zero-energy measurement, SNR undefined");
    int J = static_cast<int>(meas.values.size());
    double sigma2 = reference_energy / (J * std::pow(10.0, snr_db / 10.0));
    Measurement out = meas;
    out.kind = MeasurementKind::Noisy;
    double noise_energy = 0.0;
    for (auto& v : out.values) {
        std::complex<double> xi = complex_noise
                                      ? std::sqrt(sigma2) * rng.complex_normal()
                                      : std::complex<double>(std::sqrt(sigma2) * rng.normal(), 0.0);
        noise_energy += std::norm(xi);
        v += xi;
    }
    out.realized_snr_db = 10.0 * std::log10(reference_energy / noise_energy);
    return out;
}

/// Elementwise arithmetic mean of same-geometry measurements.
inline Measurement average_measurements(std::span<const Measurement> list) {
    if (list.empty()) throw std::invalid_argument("average_measurements: empty list");
    std::size_t J = list.front().values.size();
    Measurement out;
    out.kind = MeasurementKind::Averaged;
    out.n_realizations = static_cast<int>(list.size());
    out.seed = list.front().seed;
    out.values.assign(J, {0.0, 0.0});
    for (const auto& m : list) {
        if (m.values.size() != J)
            throw std::invalid_argument("average_measurements: mismatched lengths");
        for (std::size_t j = 0; j < J; ++j) out.values[j] += m.values[j];
    }
    for (auto& v : out.values) v /= static_cast<double>(list.size());
    return out;
}

}  // namespace seadvr
