// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "docprune/corpus_io.hpp"
#include "docprune/matrix.hpp"

namespace docprune {

/// The vectors a document contributes at query time (full, pruned or merged).
struct IndexedDocument {
    std::string doc_id;
    Matrix vectors;
};

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
    std::string query_id;
    std::vector<RankedEntry> entries;  // descending score, ascending doc_id on ties

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Late-interaction relevance: sum over query tokens of the best dot product
/// against any document vector. Throws EmptyDocument or ShapeError.
double maxsim_score(const Matrix& query, const Matrix& doc_vectors);

/// Scores every document and sorts. Throws EmptyCorpus.
/// The result does not depend on `threads`.
RankedList rank_corpus(const QueryRecord& query, std::span<const IndexedDocument> corpus, std::size_t threads = 1);

/// First min(cutoff, corpus size) entries of rank_corpus.
RankedList retrieve_topk(const QueryRecord& query, std::span<const IndexedDocument> corpus, std::size_t cutoff,
                         std::size_t threads = 1);

}  // namespace docprune
