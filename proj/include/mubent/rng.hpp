#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mubent::rng {

// Counter-based generator: every stream is a pure function of
// (seed, purpose tag, stream index, draw counter), so independent streams can
// be opened anywhere without shared state and results are reproducible across
// runs and platforms.
//
// Construction: the stream key is the FNV-1a hash of (seed, tag, index); the
// n-th output is the SplitMix64 finalizer applied to key + n * golden ratio.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a_byte(std::uint64_t h, unsigned char b) {
    return (h ^ b) * 0x100000001B3ULL;
}

inline constexpr std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h = fnv1a_byte(h, static_cast<unsigned char>(v >> (8 * i)));
    }
    return h;
}

inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                          std::uint64_t index) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV offset basis
    h = fnv1a_u64(h, seed);
    for (char c : tag) {
        h = fnv1a_byte(h, static_cast<unsigned char>(c));
    }
    h = fnv1a_u64(h, index);
    return h;
}

class Stream {
  public:
    Stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0)
        : key_(stream_key(seed, tag, index)) {}

    std::uint64_t next_u64() { return splitmix64_finalize(key_ + (++counter_) * kGolden); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller; the spare value is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_double();  // (0, 1]
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> next_complex_gaussian() {
        double re = next_gaussian();
        double im = next_gaussian();
        return {re, im};
    }

    // Dirichlet(1, ..., 1): normalized Exp(1) draws.
    std::vector<double> next_simplex(std::size_t n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) {
            x = -std::log(1.0 - next_double());
            total += x;
        }
        for (auto& x : w) {
            x /= total;
        }
        return w;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mubent::rng
