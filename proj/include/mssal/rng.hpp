#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mssal {

// Seeded generator with hand-rolled output transforms. The std distribution
// objects (normal_distribution etc.) are implementation-defined, so the same
// seed can produce different streams on different standard libraries; the
// transforms below pin the exact mapping from mt19937_64 output to variates,
// making every seeded run reproducible across platforms. The algorithm is
// documented in the top-level README.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1), 53-bit resolution
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1], safe to pass to log()
    double uniform01_open() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // standard exponential (rate 1)
    double exponential() { return -std::log(uniform01_open()); }

    // standard normal via Box-Muller; generates pairs, caches the second
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform01_open()));
        double theta = 2.0 * M_PI * uniform01();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // uniform on {0, ..., n-1} by rejection, no modulo bias
    int uniform_int(int n) {
        std::uint64_t span = static_cast<std::uint64_t>(n);
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return static_cast<int>(x % span);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mssal
