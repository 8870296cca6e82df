// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/pruners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "docprune/error.hpp"
#include "docprune/numerics.hpp"

namespace docprune {

namespace {

// Absorbs representation error in products like 0.7 * 10 before rounding.
constexpr double kCountEpsilon = 1e-9;

void check_scores(const DocumentRecord& doc, const ImportanceScores& scores) {
    if (scores.scores.size() != doc.patch_count()) {
        throw Error(ErrorKind::ShapeError, "document '" + doc.doc_id + "': importance length " +
                                               std::to_string(scores.scores.size()) + " != patch count " +
                                               std::to_string(doc.patch_count()));
    }
}

void check_unit_interval(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorKind::InvariantViolation, std::string(name) + " must lie in [0, 1]");
    }
}

PrunedDocument make_pruned(const DocumentRecord& doc, std::vector<std::size_t> kept, PruneMethod method,
                           std::optional<double> threshold) {
    PrunedDocument out;
    out.doc_id = doc.doc_id;
    out.kept_embeddings = doc.embeddings.select_rows(kept);
    out.pruning_ratio = 1.0 - static_cast<double>(kept.size()) / static_cast<double>(doc.patch_count());
    out.kept_indices = std::move(kept);
    out.threshold_used = threshold;
    out.method = method;
    return out;
}

/// {j : values[j] > threshold}, or {argmax} when that set is empty.
std::vector<std::size_t> keep_above(std::span<const double> values, double threshold) {
    const double scale = max_magnitude(values);
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (exceeds_threshold(values[j], threshold, scale)) {
            kept.push_back(j);
        }
    }
    if (kept.empty()) {
        kept.push_back(argmax_lowest(values));
    }
    return kept;
}

/// Positions ordered by descending value, ascending index on ties.
std::vector<std::size_t> rank_descending(std::span<const double> values, std::span<const std::size_t> among) {
    std::vector<std::size_t> order(among.begin(), among.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

double cosine_or_zero(std::span<const double> u, std::span<const double> v) {
    const double nu = numerics::norm(u);
    const double nv = numerics::norm(v);
    if (nu == 0.0 || nv == 0.0) {
        return 0.0;
    }
    return std::clamp(numerics::dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unbiased draw in [0, bound); std::uniform_int_distribution is not portable across stdlibs.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= floor) {
            return r % bound;
        }
    }
}

}  // namespace

std::string_view to_string(PruneMethod method) noexcept {
    switch (method) {
    case PruneMethod::docpruner: return "docpruner";
    case PruneMethod::attention_ratio: return "attention-ratio";
    case PruneMethod::attention_threshold: return "attention-threshold";
    case PruneMethod::random: return "random";
    case PruneMethod::attn_plus_sim: return "attn-plus-sim";
    case PruneMethod::pivot_threshold: return "pivot-threshold";
    }
    return "unknown";
}

PruneMethod parse_prune_method(std::string_view name) {
    for (auto m : {PruneMethod::docpruner, PruneMethod::attention_ratio, PruneMethod::attention_threshold,
                   PruneMethod::random, PruneMethod::attn_plus_sim, PruneMethod::pivot_threshold}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw Error(ErrorKind::UnsupportedMethod, "unknown pruning method '" + std::string(name) + "'");
}

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "argmax of empty sequence");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (values[j] > values[best]) {
            best = j;
        }
    }
    return best;
}

double max_magnitude(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool exceeds_threshold(double value, double threshold, double scale) {
    return value - threshold > kThresholdTolerance * scale;
}

double adaptive_threshold(const ImportanceScores& scores, double k) {
    return scores.mu + k * scores.sigma;
}

PrunedDocument docpruner_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k) {
    check_scores(doc, scores);
    const double tau = adaptive_threshold(scores, k);
    return make_pruned(doc, keep_above(scores.scores, tau), PruneMethod::docpruner, tau);
}

PrunedDocument attention_ratio_prune(const DocumentRecord& doc, const ImportanceScores& scores, double ratio) {
    check_scores(doc, scores);
    check_unit_interval(ratio, "ratio");
    const std::size_t total = doc.patch_count();
    const double raw = std::ceil((1.0 - ratio) * static_cast<double>(total) - kCountEpsilon);
    const std::size_t keep = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 0.0)), 1, total);

    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto order = rank_descending(scores.scores, all);
    order.resize(keep);
    std::sort(order.begin(), order.end());
    return make_pruned(doc, std::move(order), PruneMethod::attention_ratio, std::nullopt);
}

PrunedDocument attention_threshold_prune(const DocumentRecord& doc, const ImportanceScores& scores,
                                         double fixed_threshold) {
    check_scores(doc, scores);
    return make_pruned(doc, keep_above(scores.scores, fixed_threshold), PruneMethod::attention_threshold,
                       fixed_threshold);
}

PrunedDocument random_prune(const DocumentRecord& doc, double ratio, std::uint64_t seed) {
    check_unit_interval(ratio, "ratio");
    const std::size_t total = doc.patch_count();
    const auto requested = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(total) + kCountEpsilon));
    const std::size_t remove = std::min(requested, total - 1);

    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(fnv1a(doc.doc_id))));
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `remove` slots become the removed set.
    for (std::size_t i = 0; i < remove; ++i) {
        const auto pick = i + static_cast<std::size_t>(uniform_below(rng, total - i));
        std::swap(pool[i], pool[pick]);
    }
    std::vector<std::size_t> kept(pool.begin() + static_cast<std::ptrdiff_t>(remove), pool.end());
    std::sort(kept.begin(), kept.end());
    return make_pruned(doc, std::move(kept), PruneMethod::random, std::nullopt);
}

PrunedDocument attn_plus_sim_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k,
                                   double alpha) {
    check_scores(doc, scores);
    check_unit_interval(alpha, "alpha");
    if (!doc.global_embedding) {
        throw Error(ErrorKind::MissingGlobalEmbedding, "document '" + doc.doc_id + "' has no global embedding");
    }
    const std::size_t total = doc.patch_count();
    std::vector<double> similarity(total);
    for (std::size_t j = 0; j < total; ++j) {
        similarity[j] = cosine_or_zero(doc.embeddings.row(j), *doc.global_embedding);
    }
    const auto importance_norm = numerics::min_max_normalize(scores.scores);
    const auto similarity_norm = numerics::min_max_normalize(similarity);

    std::vector<double> composite(total);
    for (std::size_t j = 0; j < total; ++j) {
        composite[j] = alpha * importance_norm[j] + (1.0 - alpha) * similarity_norm[j];
    }
    const double tau = numerics::mean(composite) + k * numerics::std_pop(composite);
    return make_pruned(doc, keep_above(composite, tau), PruneMethod::attn_plus_sim, tau);
}

PrunedDocument pivot_threshold_prune(const DocumentRecord& doc, const ImportanceScores& scores, double k,
                                     double k_dup, std::size_t num_pivots) {
    check_scores(doc, scores);
    if (num_pivots == 0) {
        throw Error(ErrorKind::InvariantViolation, "num_pivots must be at least 1");
    }
    const double tau = adaptive_threshold(scores, k);
    auto important = keep_above(scores.scores, tau);
    if (important.size() <= num_pivots) {
        return make_pruned(doc, std::move(important), PruneMethod::pivot_threshold, tau);
    }

    const auto order = rank_descending(scores.scores, important);
    std::vector<std::size_t> pivots(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(num_pivots));
    std::vector<std::size_t> others(order.begin() + static_cast<std::ptrdiff_t>(num_pivots), order.end());

    std::vector<double> dup(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) {
        double best = -1.0;
        for (std::size_t p : pivots) {
            best = std::max(best, cosine_or_zero(doc.embeddings.row(others[i]), doc.embeddings.row(p)));
        }
        dup[i] = best;
    }
    const double tau_dup = numerics::mean(dup) + k_dup * numerics::std_pop(dup);

    std::vector<std::size_t> kept = std::move(pivots);
    for (std::size_t i = 0; i < others.size(); ++i) {
        if (!exceeds_threshold(dup[i], tau_dup, 1.0)) {
            kept.push_back(others[i]);
        }
    }
    std::sort(kept.begin(), kept.end());
    return make_pruned(doc, std::move(kept), PruneMethod::pivot_threshold, tau);
}

PrunedDocument prune(const DocumentRecord& doc, const ImportanceScores& scores, const PruneConfig& config) {
    switch (config.method) {
    case PruneMethod::docpruner: return docpruner_prune(doc, scores, config.k);
    case PruneMethod::attention_ratio: return attention_ratio_prune(doc, scores, config.ratio);
    case PruneMethod::attention_threshold: return attention_threshold_prune(doc, scores, config.fixed_threshold);
    case PruneMethod::random: return random_prune(doc, config.ratio, config.seed);
    case PruneMethod::attn_plus_sim: return attn_plus_sim_prune(doc, scores, config.k, config.alpha);
    case PruneMethod::pivot_threshold:
        return pivot_threshold_prune(doc, scores, config.k, config.k_dup, config.num_pivots);
    }
    throw Error(ErrorKind::UnsupportedMethod,
                "unknown pruning method tag " + std::to_string(static_cast<int>(config.method)));
}

}  // namespace docprune
