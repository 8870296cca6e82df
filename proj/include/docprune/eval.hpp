// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "docprune/corpus_io.hpp"
#include "docprune/mergers.hpp"
#include "docprune/pruners.hpp"
#include "docprune/retrieval.hpp"

namespace docprune {

/// Full patch sets; the base-model reference run.
struct NoReduction {};

using ReductionConfig = std::variant<NoReduction, PruneConfig, MergeConfig>;

/// Command-line spelling of the configured method ("none" for NoReduction).
std::string method_name(const ReductionConfig& config);

struct NdcgResult {
    double value = 0.0;
    bool no_relevant = false;  // the query has no positive judgment
};

/// Linear-gain nDCG over the first `cutoff` entries; unjudged documents count as 0.
NdcgResult ndcg_at_k(const RankedList& ranking, const Qrels& qrels, std::size_t cutoff);

/// Bytes to hold `vector_count` binary32 vectors of dimension `dim`.
std::uint64_t storage_bytes(std::uint64_t vector_count, std::uint64_t dim);

struct EvalOptions {
    std::size_t cutoff = 5;
    std::size_t threads = 1;
};

struct EvalReport {
    std::string method;
    ReductionConfig config;
    std::size_t cutoff = 5;

    std::map<std::string, double> per_query_ndcg;
    std::vector<std::string> no_relevant_queries;
    double aggregate_ndcg = 0.0;

    std::map<std::string, double> per_doc_ratio;
    std::map<std::string, std::optional<double>> per_doc_entropy;
    double mean_pruning_ratio = 0.0;
    std::uint64_t vectors_before = 0;
    std::uint64_t vectors_after = 0;
    std::uint64_t storage_bytes_before = 0;
    std::uint64_t storage_bytes_after = 0;
    double storage_delta_pct = 0.0;

    double offline_seconds = 0.0;

    std::vector<RankedList> rankings;  // one per query, input order
};

/// Reduces every document per `config`, ranks every query against the
/// reduced corpus and aggregates retrieval, storage and timing figures.
EvalReport evaluate_run(std::span<const DocumentRecord> corpus, std::span<const QueryRecord> queries,
                        const Qrels& qrels, const ReductionConfig& config, const EvalOptions& options = {});

/// One report per config, in grid order. Throws EmptyGrid.
std::vector<EvalReport> sweep(std::span<const DocumentRecord> corpus, std::span<const QueryRecord> queries,
                              const Qrels& qrels, std::span<const ReductionConfig> grid,
                              const EvalOptions& options = {});

/// Default sweep grid for a method: the k grid for adaptive pruners, the
/// ratio grid for ratio-based ones and the factor grid for mergers.
/// attention-threshold has no default grid and throws EmptyGrid.
std::vector<ReductionConfig> default_grid(const ReductionConfig& base);

struct FrontierPoint {
    double pruning_ratio = 0.0;
    double ndcg = 0.0;
};

/// (pruning ratio, nDCG) per report, sorted by ratio.
std::vector<FrontierPoint> frontier(std::span<const EvalReport> reports);

/// Per-document importance statistics without queries.
struct DocumentStats {
    std::string doc_id;
    std::size_t patches = 0;
    double mu = 0.0;
    double sigma = 0.0;
    std::optional<double> entropy;
    double docpruner_ratio = 0.0;
};

std::vector<DocumentStats> corpus_stats(std::span<const DocumentRecord> corpus, double k, std::size_t threads = 1);

nlohmann::json config_to_json(const ReductionConfig& config);
nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json stats_to_json(std::span<const DocumentStats> stats, double k);

/// Header plus one row per query.
std::string report_csv_header();
std::string report_to_csv_rows(const EvalReport& report);

}  // namespace docprune
