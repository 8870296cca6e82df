// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "docprune/error.hpp"
#include "docprune/numerics.hpp"

using namespace docprune;
using namespace docprune::numerics;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected docprune::Error";
    return ErrorKind::IoError;
}

}  // namespace

TEST(Numerics, Mean) {
    EXPECT_NEAR(mean(std::vector<double>{0.1, 0.2, 0.3}), 0.2, 1e-15);
    EXPECT_EQ(mean(std::vector<double>{3.5}), 3.5);
    EXPECT_NEAR(mean(std::vector<double>{0.4, 0.3, 0.2, 0.1}), 0.25, 1e-15);
    EXPECT_EQ(kind_of([] { mean(std::vector<double>{}); }), ErrorKind::EmptyInput);
}

TEST(Numerics, PopulationStd) {
    EXPECT_EQ(std_pop(std::vector<double>{0.2, 0.2, 0.2}), 0.0);
    EXPECT_NEAR(std_pop(std::vector<double>{0.4, 0.3, 0.2, 0.1}), 0.11180339887498948, 1e-15);
    EXPECT_EQ(std_pop(std::vector<double>{0.0, 1.0}), 0.5);
    EXPECT_EQ(kind_of([] { std_pop(std::vector<double>{}); }), ErrorKind::EmptyInput);
}

TEST(Numerics, CosineSimilarity) {
    EXPECT_EQ(cosine_sim(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
    EXPECT_EQ(cosine_sim(std::vector<double>{1, 0}, std::vector<double>{2, 0}), 1.0);
    EXPECT_NEAR(cosine_sim(std::vector<double>{1, 1}, std::vector<double>{1, 0}), 0.70710678118654752, 1e-15);
    EXPECT_EQ(kind_of([] { cosine_sim(std::vector<double>{0, 0}, std::vector<double>{1, 0}); }),
              ErrorKind::DegenerateVector);
    EXPECT_EQ(kind_of([] { cosine_sim(std::vector<double>{1, 0, 0}, std::vector<double>{1, 0}); }),
              ErrorKind::ShapeError);
}

TEST(Numerics, ShannonEntropy) {
    EXPECT_NEAR(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), std::log(4.0), 1e-15);
    EXPECT_EQ(shannon_entropy(std::vector<double>{1, 0, 0}), 0.0);
    EXPECT_NEAR(shannon_entropy(std::vector<double>{0.5, 0.25, 0.25}), 1.0397207708399179, 1e-15);
    EXPECT_EQ(kind_of([] { shannon_entropy(std::vector<double>{0.5, 0.4}); }), ErrorKind::NotADistribution);
    EXPECT_EQ(kind_of([] { shannon_entropy(std::vector<double>{1.5, -0.5}); }), ErrorKind::NotADistribution);
}

TEST(NumericsProperty, MomentsArePermutationAndAffineCovariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(1 + rng() % 40);
        for (auto& v : x) v = u(rng);
        const double mu = mean(x);
        const double sd = std_pop(x);

        auto shuffled = x;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_NEAR(mean(shuffled), mu, 1e-12);
        EXPECT_NEAR(std_pop(shuffled), sd, 1e-12);

        const double a = 0.1 + std::abs(u(rng));
        const double b = u(rng);
        std::vector<double> y(x.size());
        std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return a * v + b; });
        EXPECT_NEAR(mean(y), a * mu + b, 1e-10);
        EXPECT_NEAR(std_pop(y), a * sd, 1e-10);
    }
}

TEST(NumericsProperty, CosineIsScaleInvariant) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + rng() % 16), b(a.size());
        for (auto& v : a) v = n(rng);
        for (auto& v : b) v = n(rng);
        const double s = std::exp(n(rng) * 3.0);
        std::vector<double> sa(a.size());
        std::transform(a.begin(), a.end(), sa.begin(), [&](double v) { return s * v; });
        EXPECT_NEAR(cosine_sim(sa, b), cosine_sim(a, b), 1e-12);
    }
}

TEST(NumericsProperty, UniformMaximisesEntropy) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n = 1; n <= 16; ++n) {
        const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
        const double h_max = shannon_entropy(uniform);
        EXPECT_NEAR(h_max, std::log(static_cast<double>(n)), 1e-12);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> p(n);
            double total = 0.0;
            for (auto& v : p) total += (v = u(rng));
            for (auto& v : p) v /= total;
            EXPECT_LE(shannon_entropy(p), h_max + 1e-12);
        }
    }
}

TEST(Numerics, MinMaxNormalize) {
    EXPECT_EQ(min_max_normalize(std::vector<double>{2, 4, 3}), (std::vector<double>{0, 1, 0.5}));
    EXPECT_EQ(min_max_normalize(std::vector<double>{7, 7}), (std::vector<double>{0, 0}));
}
