// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "docprune/corpus_io.hpp"

namespace docprune::synthetic {

// Generators for test fixtures and the `synth` subcommand. Every value is
// binary32-representable so corpora survive a container round trip unchanged.

std::vector<double> random_unit_vector(std::mt19937_64& rng, std::size_t dim);

struct DocumentShape {
    std::size_t patches = 16;
    std::size_t dim = 8;
    bool with_importance = true;
    std::size_t heads = 0;  // 0: no head attention
    bool with_grid = false;  // needs grid_rows * grid_cols == patches
    std::uint32_t grid_rows = 0;
    std::uint32_t grid_cols = 0;
    bool with_global_embedding = false;
};

/// Gaussian embeddings and uniform [0, 1) attention.
DocumentRecord random_document(std::mt19937_64& rng, std::string doc_id, const DocumentShape& shape);

struct PlantedOptions {
    std::size_t documents = 200;
    std::size_t dim = 16;
    std::size_t min_patches = 20;
    std::size_t max_patches = 60;
    std::size_t queries = 200;  // documents d0..d{queries-1} are targets
    double min_salient_fraction = 0.4;
    double max_salient_fraction = 0.6;
    std::uint64_t seed = 7;
};

struct Benchmark {
    std::vector<DocumentRecord> corpus;
    std::vector<QueryRecord> queries;
    Qrels qrels;
};

/// Query q<i> targets document d<i> (grade 1): its token vectors are copied
/// into a random salient fraction of that document's patches, which get
/// importance in [0.8, 1). Every other patch is a random unit vector with
/// importance in [0, 0.2).
Benchmark make_planted_benchmark(const PlantedOptions& options);

/// `peaked` documents with one-hot importance followed by `flat` documents
/// with uniform importance plus +-1% jitter.
std::vector<DocumentRecord> make_entropy_contrast_corpus(std::size_t peaked, std::size_t flat, std::size_t patches,
                                                         std::size_t dim, std::uint64_t seed);

}  // namespace docprune::synthetic
