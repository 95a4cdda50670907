#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "edi/rng.hpp"

using edi::Rng;

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, KnownSplitmixValue) {
    // Reference value of the published SplitMix64 sequence for state 0.
    EXPECT_EQ(edi::splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, DerivedStreamsDiffer) {
    EXPECT_NE(edi::derive_seed(1, std::uint64_t{0}), edi::derive_seed(1, std::uint64_t{1}));
    EXPECT_NE(edi::derive_seed(1, "I"), edi::derive_seed(1, "Q"));
    EXPECT_EQ(edi::derive_seed(7, "signs"), edi::derive_seed(7, "signs"));
    Rng a(5, 0), b(5, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) equal += a.next() == b.next();
    EXPECT_EQ(equal, 0);
}

TEST(Rng, BelowStaysInRangeAndIsUniform) {
    Rng r(3);
    constexpr std::uint64_t k = 7;
    std::vector<int> hist(k, 0);
    constexpr int draws = 700000;
    for (int i = 0; i < draws; ++i) {
        const auto v = r.below(k);
        ASSERT_LT(v, k);
        ++hist[v];
    }
    const double expect = double(draws) / k;
    const double sigma = std::sqrt(expect * (1 - 1.0 / k));
    for (int h : hist) EXPECT_NEAR(h, expect, 4 * sigma);
    EXPECT_EQ(r.below(1), 0u);
}

TEST(Rng, UniformAndNormalMoments) {
    Rng r(11);
    constexpr int draws = 400000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / draws, 0.5, 4 * std::sqrt(1.0 / 12 / draws));
    EXPECT_NEAR(sn / draws, 0.0, 4 / std::sqrt(double(draws)));
    EXPECT_NEAR(sn2 / draws, 1.0, 4 * std::sqrt(2.0 / draws));
}

TEST(Rng, WorksAsStandardUrbg) {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    Rng r(1);
    std::shuffle(v.begin(), v.end(), r);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}
