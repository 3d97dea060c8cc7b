// Reproducible random streams for Monte-Carlo experiments.
//
// Stream layout: every consumer derives its own generator from the experiment
// seed plus integer tags (e.g. sweep point index, realization index) through a
// splitmix64 chain. Results are therefore independent of thread scheduling:
// the same (seed, tags) always produce the same draws.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace seadvr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive a substream seed from a base seed and a list of integer tags.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = seed;
    std::uint64_t out = splitmix64(s);
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ULL + (out << 6) + (out >> 2);
        out = splitmix64(s);
    }
    return out;
}

/// mt19937_64-backed stream with a portable Box-Muller normal transform.
/// std::normal_distribution is implementation-defined, so it is avoided here;
/// draws from this class are identical on every standards-conforming platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
        : gen_(derive_seed(seed, tags)) {}

    /// Uniform on (0, 1].
    double uniform_pos() {
        // 53-bit mantissa; shift guarantees a value in [2^-53, 1]
        return ((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, pair-cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circular complex normal with E|xi|^2 = 1.
    std::complex<double> complex_normal() {
        constexpr double inv_sqrt2 = 0.7071067811865475244;
        double re = normal();
        double im = normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace seadvr
