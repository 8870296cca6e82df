// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace docprune::numerics {

/// Arithmetic mean. Throws EmptyInput on an empty sequence.
double mean(std::span<const double> values);

/// Population standard deviation (divides by n, not n - 1).
double std_pop(std::span<const double> values);

double dot(std::span<const double> u, std::span<const double> v);

double norm(std::span<const double> u);

/// u.v / (|u||v|). Throws ShapeError on dimension mismatch and
/// DegenerateVector when either input has zero norm.
double cosine_sim(std::span<const double> u, std::span<const double> v);

/// Tolerance on the total mass of a probability distribution.
inline constexpr double kDistributionTolerance = 1e-9;

/// True when all entries are finite, non-negative and sum to 1 within tolerance.
bool is_distribution(std::span<const double> p) noexcept;

/// Shannon entropy in nats, with 0 ln 0 taken as 0.
/// Throws NotADistribution unless is_distribution(p).
double shannon_entropy(std::span<const double> p);

/// Rescales each value into [0, 1] by (x - min) / (max - min).
/// A constant input maps to all zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

bool all_finite(std::span<const double> values) noexcept;

}  // namespace docprune::numerics
