// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docprune/corpus_io.hpp"
#include "docprune/importance.hpp"
#include "docprune/matrix.hpp"

namespace docprune {

enum class PruneMethod {
    docpruner,
    attention_ratio,
    attention_threshold,
    random,
    attn_plus_sim,
    pivot_threshold,
};

std::string_view to_string(PruneMethod method) noexcept;

/// Parses the command-line spelling ("attention-ratio", ...). Throws UnsupportedMethod.
PruneMethod parse_prune_method(std::string_view name);

/// Adaptation-factor grid used for k sweeps.
inline constexpr double kDefaultKGrid[] = {-0.5, -0.25, 0.0, 0.25, 0.5, 1.0};
/// Ratio grid for the random baseline.
inline constexpr double kDefaultRatioGrid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
inline constexpr double kDefaultAlphaGrid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
inline constexpr int kDefaultPivotGrid[] = {5, 10, 15, 20};

/// Only the fields relevant to `method` are read.
struct PruneConfig {
    PruneMethod method = PruneMethod::docpruner;
    double k = -0.25;
    double ratio = 0.5;
    double fixed_threshold = 0.0;
    double alpha = 0.5;
    double k_dup = 1.0;
    std::size_t num_pivots = 10;
    std::uint64_t seed = 0;
};

struct PrunedDocument {
    std::string doc_id;
    std::vector<std::size_t> kept_indices;  // strictly increasing
    Matrix kept_embeddings;
    double pruning_ratio = 0.0;
    std::optional<double> threshold_used;
    PruneMethod method = PruneMethod::docpruner;
};

/// Relative margin below which a score counts as equal to its threshold.
inline constexpr double kThresholdTolerance = 1e-12;

double max_magnitude(std::span<const double> values);

/// value > threshold, treating differences within kThresholdTolerance * scale
/// as ties (not exceeding).
bool exceeds_threshold(double value, double threshold, double scale);

/// tau = mu + k * sigma.
double adaptive_threshold(const ImportanceScores& scores, double k);

/// Keeps patches whose importance strictly exceeds mu + k*sigma, falling
/// back to the single highest-scoring patch (lowest index on ties).
PrunedDocument docpruner_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k);

/// Keeps the top max(1, ceil((1 - ratio) * L)) patches by importance.
PrunedDocument attention_ratio_prune(const DocumentRecord& doc, const ImportanceScores& scores, double ratio);

/// Keeps patches with importance strictly above a corpus-wide constant.
PrunedDocument attention_threshold_prune(const DocumentRecord& doc, const ImportanceScores& scores,
                                         double fixed_threshold);

/// Removes floor(ratio * L) patches uniformly at random, never the last one.
/// The stream depends only on (seed, doc_id).
PrunedDocument random_prune(const DocumentRecord& doc, double ratio, std::uint64_t seed);

/// Composite alpha * minmax(importance) + (1 - alpha) * minmax(cos(patch, global)),
/// thresholded at mean + k * std of the composite.
/// Throws MissingGlobalEmbedding when the record has no global embedding.
PrunedDocument attn_plus_sim_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k,
                                   double alpha);

/// Two stages: adaptive importance filter, then de-duplication of
/// non-pivot patches against the top-importance pivots.
PrunedDocument pivot_threshold_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k,
                                     double k_dup, std::size_t num_pivots);

PrunedDocument prune(const DocumentRecord& doc, const ImportanceScores& scores, const PruneConfig& config);

/// Index of the largest value, lowest index on ties.
std::size_t argmax_lowest(std::span<const double> values);

}  // namespace docprune
