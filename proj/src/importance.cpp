// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/importance.hpp"

#include <numeric>

#include "docprune/error.hpp"
#include "docprune/numerics.hpp"

namespace docprune {

namespace {

std::optional<std::vector<double>> normalized(const std::vector<double>& scores) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    if (!(total > 0.0)) {
        return std::nullopt;
    }
    std::vector<double> p(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
        p[j] = scores[j] / total;
    }
    return p;
}

}  // namespace

ImportanceScores ImportanceScores::from_scores(std::vector<double> scores) {
    ImportanceScores out;
    out.mu = numerics::mean(scores);
    out.sigma = numerics::std_pop(scores);
    if (auto p = normalized(scores)) {
        out.entropy = numerics::shannon_entropy(*p);
    }
    out.scores = std::move(scores);
    return out;
}

std::vector<double> average_heads(const Matrix& head_attention) {
    if (head_attention.rows() == 0 || head_attention.cols() == 0) {
        throw Error(ErrorKind::ShapeError, "head attention matrix is empty");
    }
    std::vector<double> out(head_attention.cols(), 0.0);
    for (std::size_t h = 0; h < head_attention.rows(); ++h) {
        auto row = head_attention.row(h);
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] += row[j];
        }
    }
    const auto heads = static_cast<double>(head_attention.rows());
    for (auto& v : out) {
        v /= heads;
    }
    return out;
}

ImportanceScores importance_of(const DocumentRecord& doc) {
    if (doc.importance) {
        return ImportanceScores::from_scores(*doc.importance);
    }
    if (doc.head_attention) {
        return ImportanceScores::from_scores(average_heads(*doc.head_attention));
    }
    throw Error(ErrorKind::MissingImportanceSource, "document '" + doc.doc_id + "' has no importance source");
}

std::vector<double> attention_distribution(const ImportanceScores& scores) {
    auto p = normalized(scores.scores);
    if (!p) {
        throw Error(ErrorKind::DegenerateAttention, "importance scores sum to zero");
    }
    return *p;
}

}  // namespace docprune
