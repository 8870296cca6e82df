// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "docprune/error.hpp"

namespace docprune::synthetic {

namespace {

double f32(double v) {
    return static_cast<double>(static_cast<float>(v));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return f32(std::uniform_real_distribution<double>(lo, hi)(rng));
}

Matrix gaussian_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (auto& v : m.data()) {
        v = f32(normal(rng));
    }
    return m;
}

}  // namespace

std::vector<double> random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim);
    double len = 0.0;
    while (len < 1e-6) {
        for (auto& x : v) {
            x = normal(rng);
        }
        len = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    }
    for (auto& x : v) {
        x = f32(x / len);
    }
    return v;
}

DocumentRecord random_document(std::mt19937_64& rng, std::string doc_id, const DocumentShape& shape) {
    DocumentRecord doc;
    doc.doc_id = std::move(doc_id);
    doc.embeddings = gaussian_matrix(rng, shape.patches, shape.dim);
    if (shape.with_importance) {
        std::vector<double> importance(shape.patches);
        for (auto& v : importance) {
            v = uniform(rng, 0.0, 1.0);
        }
        doc.importance = std::move(importance);
    }
    if (shape.heads > 0) {
        Matrix attention(shape.heads, shape.patches);
        for (auto& v : attention.data()) {
            v = uniform(rng, 0.0, 1.0);
        }
        doc.head_attention = std::move(attention);
    }
    if (shape.with_grid) {
        if (static_cast<std::size_t>(shape.grid_rows) * shape.grid_cols != shape.patches) {
            throw Error(ErrorKind::ShapeError, "grid does not cover the patch count");
        }
        doc.grid = GridShape{shape.grid_rows, shape.grid_cols};
    }
    if (shape.with_global_embedding) {
        const auto row = gaussian_matrix(rng, 1, shape.dim);
        doc.global_embedding = std::vector<double>(row.data().begin(), row.data().end());
    }
    return doc;
}

Benchmark make_planted_benchmark(const PlantedOptions& options) {
    if (options.queries > options.documents || options.min_patches < 2 ||
        options.max_patches < options.min_patches || options.dim == 0) {
        throw Error(ErrorKind::InvariantViolation, "inconsistent planted benchmark options");
    }
    std::mt19937_64 rng(options.seed);
    Benchmark out;

    std::uniform_int_distribution<std::size_t> patch_count(options.min_patches, options.max_patches);
    for (std::size_t d = 0; d < options.documents; ++d) {
        DocumentRecord doc;
        doc.doc_id = "d" + std::to_string(d);
        const std::size_t patches = patch_count(rng);

        doc.embeddings = Matrix(patches, options.dim);
        std::vector<double> importance(patches);
        for (std::size_t j = 0; j < patches; ++j) {
            const auto v = random_unit_vector(rng, options.dim);
            std::copy(v.begin(), v.end(), doc.embeddings.row(j).begin());
            importance[j] = uniform(rng, 0.0, 0.2);
        }

        if (d < options.queries) {
            const double fraction = uniform(rng, options.min_salient_fraction, options.max_salient_fraction);
            const std::size_t planted = std::clamp<std::size_t>(
                static_cast<std::size_t>(std::lround(fraction * static_cast<double>(patches))), 1, patches - 1);
            std::vector<std::size_t> order(patches);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng);

            QueryRecord query;
            query.query_id = "q" + std::to_string(d);
            query.embeddings = Matrix(planted, options.dim);
            for (std::size_t t = 0; t < planted; ++t) {
                const auto v = random_unit_vector(rng, options.dim);
                std::copy(v.begin(), v.end(), query.embeddings.row(t).begin());
                std::copy(v.begin(), v.end(), doc.embeddings.row(order[t]).begin());
                importance[order[t]] = uniform(rng, 0.8, 1.0);
            }
            out.qrels.set(query.query_id, doc.doc_id, 1);
            out.queries.push_back(std::move(query));
        }
        doc.importance = std::move(importance);
        out.corpus.push_back(std::move(doc));
    }
    // Targets should not sit in corpus order.
    std::shuffle(out.corpus.begin(), out.corpus.end(), rng);
    return out;
}

std::vector<DocumentRecord> make_entropy_contrast_corpus(std::size_t peaked, std::size_t flat, std::size_t patches,
                                                         std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<DocumentRecord> corpus;
    std::uniform_int_distribution<std::size_t> position(0, patches - 1);
    for (std::size_t i = 0; i < peaked + flat; ++i) {
        const bool is_peaked = i < peaked;
        DocumentRecord doc;
        doc.doc_id = (is_peaked ? "peaked-" : "flat-") + std::to_string(is_peaked ? i : i - peaked);
        doc.embeddings = gaussian_matrix(rng, patches, dim);
        std::vector<double> importance(patches, 0.0);
        if (is_peaked) {
            importance[position(rng)] = 1.0;
        } else {
            const double base = 1.0 / static_cast<double>(patches);
            for (auto& v : importance) {
                v = f32(base * (1.0 + uniform(rng, -0.01, 0.01)));
            }
        }
        doc.importance = std::move(importance);
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

}  // namespace docprune::synthetic
