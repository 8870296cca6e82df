// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docprune/corpus_io.hpp"
#include "docprune/matrix.hpp"

namespace docprune {

enum class MergeMethod { sem_cluster, pool1d, pool2d };

std::string_view to_string(MergeMethod method) noexcept;
MergeMethod parse_merge_method(std::string_view name);

inline constexpr std::size_t kSemClusterFactors[] = {2, 4, 9, 16, 25};
inline constexpr std::size_t kPool1dFactors[] = {2, 4, 9, 16, 25};
inline constexpr std::size_t kPool2dFactors[] = {4, 9, 16, 25};

struct MergeConfig {
    MergeMethod method = MergeMethod::sem_cluster;
    std::size_t factor = 4;
};

struct MergedDocument {
    std::string doc_id;
    Matrix merged_embeddings;
    std::vector<std::vector<std::size_t>> source_groups;  // original patch indices per output row
    double compression_ratio = 0.0;
    MergeMethod method = MergeMethod::sem_cluster;
};

/// Cluster labels of an agglomerative Ward clustering over a precomputed
/// symmetric distance matrix, stopping at `clusters` groups. Groups are
/// returned ordered by their smallest member. Ties between candidate pairs
/// go to the lexicographically smallest (i, j).
std::vector<std::vector<std::size_t>> ward_clusters(const Matrix& distances, std::size_t clusters);

/// Ward clustering on 1 - cosine similarity of unit-normalized patches,
/// max(1, floor(L / factor)) clusters, centroids over the raw embeddings.
/// Throws DegenerateVector on a zero-norm patch.
MergedDocument sem_cluster_merge(const DocumentRecord& doc, std::size_t merging_factor);

/// Consecutive windows of `merging_factor` patches, zero-padded at the end;
/// each window sum is divided by the full window size.
MergedDocument pool1d_merge(const DocumentRecord& doc, std::size_t merging_factor);

/// s x s windows over the patch grid (s = sqrt(factor)), averaged over real
/// cells only. Throws MissingGrid or BadFactor.
MergedDocument pool2d_merge(const DocumentRecord& doc, std::size_t merging_factor);

MergedDocument merge(const DocumentRecord& doc, const MergeConfig& config);

}  // namespace docprune
