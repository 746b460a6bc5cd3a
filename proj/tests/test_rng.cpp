#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "mssal/rng.hpp"

using mssal::Rng;

TEST_CASE("uniform01 is the pinned 53-bit mapping of mt19937_64 output") {
    std::mt19937_64 ref(42);
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        double expected = static_cast<double>(ref() >> 11) * 0x1.0p-53;
        CHECK(rng.uniform01() == expected);
    }
}

TEST_CASE("uniform01_open never returns zero and matches the shifted mapping") {
    std::mt19937_64 ref(7);
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        double expected = static_cast<double>((ref() >> 11) + 1) * 0x1.0p-53;
        double got = rng.uniform01_open();
        CHECK(got == expected);
        CHECK(got > 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("exponential is -log of the open uniform draw") {
    std::mt19937_64 ref(99);
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        double u = static_cast<double>((ref() >> 11) + 1) * 0x1.0p-53;
        CHECK(rng.exponential() == -std::log(u));
    }
}

TEST_CASE("normal follows Box-Muller with a cached spare") {
    std::mt19937_64 ref(5);
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        double u1 = static_cast<double>((ref() >> 11) + 1) * 0x1.0p-53;
        double u2 = static_cast<double>(ref() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        CHECK(rng.normal() == r * std::cos(theta));
        CHECK(rng.normal() == r * std::sin(theta));
    }
}

TEST_CASE("same seed gives identical streams, different seeds differ") {
    Rng a(123), b(123), c(124);
    bool all_equal_c = true;
    for (int i = 0; i < 200; ++i) {
        std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) all_equal_c = false;
    }
    CHECK_FALSE(all_equal_c);
}

TEST_CASE("uniform_int stays in range and covers all values") {
    Rng rng(11);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        int v = rng.uniform_int(7);
        REQUIRE(v >= 0);
        REQUIRE(v < 7);
        counts[v]++;
    }
    // each bucket expects 10000; allow 5 sigma of binomial noise
    for (int v = 0; v < 7; ++v) {
        CHECK(counts[v] > 10000 - 5 * 95);
        CHECK(counts[v] < 10000 + 5 * 95);
    }
}

TEST_CASE("moment sanity for the transforms") {
    Rng rng(2024);
    const int n = 200000;
    double su = 0, se = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) su += rng.uniform01();
    for (int i = 0; i < n; ++i) se += rng.exponential();
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sn / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}
