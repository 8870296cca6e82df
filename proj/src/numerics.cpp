// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "docprune/error.hpp"

namespace docprune::numerics {

namespace {

bool is_constant(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

}  // namespace

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "mean of empty sequence");
    }
    if (is_constant(values)) {
        return values.front();
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double std_pop(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "standard deviation of empty sequence");
    }
    if (is_constant(values)) {
        return 0.0;
    }
    const double mu = mean(values);
    double acc = 0.0;
    for (double v : values) {
        acc += (v - mu) * (v - mu);
    }
    return std::sqrt(acc / static_cast<double>(values.size()));
}

double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorKind::ShapeError, "dot product of vectors with different dimensions");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += u[i] * v[i];
    }
    return acc;
}

double norm(std::span<const double> u) {
    return std::sqrt(dot(u, u));
}

double cosine_sim(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorKind::ShapeError, "cosine similarity of vectors with different dimensions");
    }
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) {
        throw Error(ErrorKind::DegenerateVector, "cosine similarity with a zero-norm vector");
    }
    return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

bool is_distribution(std::span<const double> p) noexcept {
    if (p.empty()) {
        return false;
    }
    double total = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
            return false;
        }
        total += x;
    }
    return std::abs(total - 1.0) <= kDistributionTolerance;
}

double shannon_entropy(std::span<const double> p) {
    if (!is_distribution(p)) {
        throw Error(ErrorKind::NotADistribution, "entries must be non-negative and sum to 1");
    }
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) {
            h -= x * std::log(x);
        }
    }
    return h;
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.0);
    if (values.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    if (range <= 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - *lo) / range;
    }
    return out;
}

bool all_finite(std::span<const double> values) noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace docprune::numerics
