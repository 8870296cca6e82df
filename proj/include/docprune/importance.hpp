// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "docprune/corpus_io.hpp"
#include "docprune/matrix.hpp"

namespace docprune {

/// Per-patch salience of one document with its first two moments and the
/// entropy of the normalized distribution.
struct ImportanceScores {
    std::vector<double> scores;
    double mu = 0.0;
    double sigma = 0.0;
    std::optional<double> entropy;  // nats; absent when the scores carry no mass

    /// Computes the statistics for an arbitrary score vector.
    static ImportanceScores from_scores(std::vector<double> scores);
};

/// Column-wise mean over heads. Throws ShapeError on an empty matrix.
std::vector<double> average_heads(const Matrix& head_attention);

/// Importance of a document's patches. A stored importance vector is used
/// verbatim; otherwise the per-head attention is averaged.
/// Throws MissingImportanceSource if the record carries neither.
ImportanceScores importance_of(const DocumentRecord& doc);

/// scores / sum(scores). Throws DegenerateAttention when the sum is not positive.
std::vector<double> attention_distribution(const ImportanceScores& scores);

}  // namespace docprune
