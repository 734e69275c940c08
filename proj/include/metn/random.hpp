#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace metn {

// SplitMix64 finalizer, used to decorrelate seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Seeded generator with explicit bit-to-double conversions so that streams are
// reproducible independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t bits() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) {
        if (!(rate > 0.0)) {
            throw std::invalid_argument("exponential draw requires positive rate");
        }
        return -std::log(uniform_pos()) / rate;
    }

    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Knuth's product method; cheap for small means.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) {
            throw std::invalid_argument("poisson draw requires nonnegative mean");
        }
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            std::uint64_t k = 0;
            double p = 1.0;
            do {
                ++k;
                p *= uniform_pos();
            } while (p > limit);
            return k - 1;
        }
        // For larger means sum exponential arrivals; keeps draws exact.
        double t = 0.0;
        std::uint64_t k = 0;
        while (true) {
            t += exponential(mean);
            if (t > 1.0) break;
            ++k;
        }
        return k;
    }

    // unbiased integer in [0, n)
    std::size_t index(std::size_t n) {
        if (n == 0) {
            throw std::invalid_argument("index draw requires n > 0");
        }
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

private:
    std::mt19937_64 gen_;
};

// Counter-style fan-out: adding a new stream never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x51ed2701a9b4d22bULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
    return derive_seed(master, fnv1a(stream));
}

} // namespace metn
