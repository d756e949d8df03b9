#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace itosup {

// splitmix64 finalizer; a bijection on 64-bit integers.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based per-path random stream. Every draw is a pure function of
// (seed, stream, path, counter), so a path's numbers do not depend on how
// paths are partitioned across workers.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint32_t stream, std::uint64_t path) {
        std::uint64_t k = mix64(seed);
        k = mix64(k ^ (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(stream) + 1)));
        key_ = mix64(k ^ (0x8CB92BA72F3D8DD7ull * (path + 1)));
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(key_ + counter * 0x9E3779B97F4A7C15ull);
    }

    // uniform in (0, 1]; strictly positive so log() is safe
    double u01(std::uint64_t counter) const {
        return ((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal pair from uniform counters (2j, 2j+1), Box-Muller
    void normal_pair(std::uint64_t j, double& z0, double& z1) const {
        const double u1 = u01(2 * j);
        const double u2 = u01(2 * j + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }

    // fills z[0..n-1] with standard normals; z[i] comes from pair i/2
    void fill_normals(std::span<double> z) const {
        std::size_t i = 0;
        for (; i + 1 < z.size(); i += 2) {
            normal_pair(i / 2, z[i], z[i + 1]);
        }
        if (i < z.size()) {
            double a, b;
            normal_pair(i / 2, a, b);
            z[i] = a;
        }
    }

private:
    std::uint64_t key_;
};

} // namespace itosup
