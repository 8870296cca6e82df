// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/retrieval.hpp"

#include <algorithm>
#include <limits>

#include "docprune/error.hpp"
#include "docprune/parallel.hpp"

namespace docprune {

double maxsim_score(const Matrix& query, const Matrix& doc_vectors) {
    if (doc_vectors.rows() == 0) {
        throw Error(ErrorKind::EmptyDocument, "document has no vectors");
    }
    if (query.cols() != doc_vectors.cols()) {
        throw Error(ErrorKind::ShapeError, "query dimension " + std::to_string(query.cols()) +
                                               " != document dimension " + std::to_string(doc_vectors.cols()));
    }
    const std::size_t dim = query.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < query.rows(); ++i) {
        const double* q = query.row(i).data();
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < doc_vectors.rows(); ++j) {
            const double* d = doc_vectors.row(j).data();
            double acc = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                acc += q[c] * d[c];
            }
            best = std::max(best, acc);
        }
        total += best;
    }
    return total;
}

RankedList rank_corpus(const QueryRecord& query, std::span<const IndexedDocument> corpus, std::size_t threads) {
    if (corpus.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "cannot rank query '" + query.query_id + "' against an empty corpus");
    }
    RankedList out;
    out.query_id = query.query_id;
    out.entries.resize(corpus.size());
    parallel_for(corpus.size(), threads, [&](std::size_t i) {
        try {
            out.entries[i] = {corpus[i].doc_id, maxsim_score(query.embeddings, corpus[i].vectors)};
        } catch (const Error& e) {
            throw e.with_context("query '" + query.query_id + "' vs document '" + corpus[i].doc_id + "'");
        }
    });
    std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc_id < b.doc_id;
    });
    return out;
}

RankedList retrieve_topk(const QueryRecord& query, std::span<const IndexedDocument> corpus, std::size_t cutoff,
                         std::size_t threads) {
    auto ranked = rank_corpus(query, corpus, threads);
    if (ranked.entries.size() > cutoff) {
        ranked.entries.resize(cutoff);
    }
    return ranked;
}

}  // namespace docprune
