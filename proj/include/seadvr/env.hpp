// Shallow-water waveguide environment: sound-speed profile, density step,
// sediment attenuation law, reference wavenumber.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace seadvr {

/// 1 neper = 20*log10(e) dB
inline constexpr double kDbPerNeper = 8.685889638065035;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Two-layer waveguide: water column with a tanh thermocline over a lossy
/// sediment layer, rigid basement at z = L. Depths in m, speeds in m/s,
/// densities in g/cm^3. Immutable after construction; safe to share across
/// threads.
struct EnvironmentModel {
    double c0 = 1500.0;       // sound speed at the surface (m/s)
    double delta_c = 25.0;    // thermocline speed drop (m/s)
    double z_c = 50.0;        // thermocline center depth (m)
    double delta_z = 10.0;    // thermocline width (m)
    double c_b = 1600.0;      // sediment sound speed (m/s)
    double h = 100.0;         // water-sediment interface depth (m)
    double L = 300.0;         // sediment-basement interface depth (m)
    double rho_wat = 1.0;     // water density (g/cm^3)
    double rho_sed = 1.7;     // sediment density (g/cm^3)
    double att_coeff = 0.42e-6;  // attenuation coefficient (dB s^2 / m)

    void validate() const {
        if (!(0.0 < z_c && z_c < h && h < L))
            throw std::invalid_argument("EnvironmentModel: require 0 < z_c < h < L");
        if (!(delta_z > 0.0))
            throw std::invalid_argument("EnvironmentModel: delta_z must be positive");
        if (!(delta_c >= 0.0))
            throw std::invalid_argument("EnvironmentModel: delta_c must be nonnegative");
        if (!(rho_wat > 0.0 && rho_sed > 0.0))
            throw std::invalid_argument("EnvironmentModel: densities must be positive");
        if (!(c_b > c0 - delta_c))
            throw std::invalid_argument("EnvironmentModel: c_b must exceed minimal water speed");
        if (!(att_coeff >= 0.0))
            throw std::invalid_argument("EnvironmentModel: att_coeff must be nonnegative");
    }

    /// Minimal sound speed in the water column, c_min = c0 - delta_c.
    double min_sound_speed() const { return c0 - delta_c; }

    /// c(z): tanh profile in the water column, constant c_b in the sediment.
    /// z = h belongs to the sediment branch.
    double sound_speed(double z) const {
        check_depth(z);
        if (z < h)
            return c0 - 0.5 * delta_c * (1.0 + std::tanh((z - z_c) / delta_z));
        return c_b;
    }

    /// rho(z): step profile; z = h belongs to the sediment branch.
    double density(double z) const {
        check_depth(z);
        return z < h ? rho_wat : rho_sed;
    }

    /// Sediment attenuation law alpha(f) = att_coeff * f^2 in dB/m.
    double attenuation_db_per_m(double f) const {
        check_frequency(f);
        return att_coeff * f * f;
    }

    /// Squared refractive index n^2(z,f) relative to c_min. Real part
    /// (c_min/c(z))^2; imaginary part 2*Re(n)*alpha_np/k0 in the sediment
    /// (alpha converted dB -> nepers), zero in the water column.
    std::complex<double> refractive_index_sq(double z, double f) const {
        check_frequency(f);
        double nr = min_sound_speed() / sound_speed(z);
        if (z < h)
            return {nr * nr, 0.0};
        double alpha_np = attenuation_db_per_m(f) / kDbPerNeper;
        return {nr * nr, 2.0 * nr * alpha_np / reference_wavenumber(f)};
    }

    /// k0 = 2*pi*f / c_min (rad/m).
    double reference_wavenumber(double f) const {
        check_frequency(f);
        return 2.0 * kPi * f / min_sound_speed();
    }

private:
    void check_depth(double z) const {
        if (!(z >= 0.0 && z <= L))
            throw std::domain_error("depth outside [0, L]: z = " + std::to_string(z));
    }
    static void check_frequency(double f) {
        if (!(f > 0.0))
            throw std::domain_error("frequency must be positive");
    }
};

}  // namespace seadvr
