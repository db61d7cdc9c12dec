#pragma once

// Seeded random streams for the simulator. Every consumer draws from a
// stream keyed by (master seed, stream id, index), so codebook generation,
// message selection and channel noise never share state and any trial can
// be regenerated in isolation. Keys are mixed through splitmix64 into a
// mt19937_64 engine (period >> 2^64).
//
// Stream usage:
//   codebook  - index = user * 3 + book (secret 0, open 1, randomization 2)
//   messages  - index = trial / z-sample number; message and randomization draws
//   noise     - index = trial / z-sample number; receiver and wiretap noise
//   experiment- derives phase sub-seeds inside run_experiment

#include <cstdint>
#include <limits>
#include <random>

namespace gmacwt {

enum class RngStream : std::uint64_t {
    codebook = 1,
    messages = 2,
    noise = 3,
    experiment = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, RngStream stream, std::uint64_t index = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(stream) + 1)));
    k = splitmix64(k ^ (0xbf58476d1ce4e5b9ull * (index + 1)));
    return k;
}

class Rng {
public:
    Rng(std::uint64_t seed, RngStream stream, std::uint64_t index = 0)
        : engine_(derive_seed(seed, stream, index)) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Power-of-two sizes consume exactly one
    // engine step; other sizes use rejection to stay unbiased.
    std::uint64_t below(std::uint64_t n) {
        if ((n & (n - 1)) == 0) return engine_() & (n - 1);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    // Standard normal via Box-Muller (implementation-pinned for stable
    // streams across standard-library versions).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double stddev) { return stddev == 0.0 ? 0.0 : stddev * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gmacwt
