// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "docprune/error.hpp"
#include "docprune/importance.hpp"
#include "docprune/parallel.hpp"

namespace docprune {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t common_dim(std::span<const DocumentRecord> corpus, std::span<const QueryRecord> queries) {
    const std::size_t dim = corpus.front().dim();
    for (const auto& doc : corpus) {
        if (doc.dim() != dim) {
            throw Error(ErrorKind::ShapeError, "document '" + doc.doc_id + "' has dimension " +
                                                   std::to_string(doc.dim()) + ", corpus uses " +
                                                   std::to_string(dim));
        }
    }
    for (const auto& q : queries) {
        if (q.dim() != dim) {
            throw Error(ErrorKind::ShapeError, "query '" + q.query_id + "' has dimension " + std::to_string(q.dim()) +
                                                   ", corpus uses " + std::to_string(dim));
        }
    }
    return dim;
}

struct Reduced {
    Matrix vectors;
    double ratio = 0.0;
};

Reduced reduce(const DocumentRecord& doc, const ImportanceScores& scores, const ReductionConfig& config) {
    return std::visit(overloaded{
                          [&](const NoReduction&) { return Reduced{doc.embeddings, 0.0}; },
                          [&](const PruneConfig& c) {
                              auto p = prune(doc, scores, c);
                              return Reduced{std::move(p.kept_embeddings), p.pruning_ratio};
                          },
                          [&](const MergeConfig& c) {
                              auto m = merge(doc, c);
                              return Reduced{std::move(m.merged_embeddings), m.compression_ratio};
                          },
                      },
                      config);
}

}  // namespace

std::string method_name(const ReductionConfig& config) {
    return std::visit(overloaded{
                          [](const NoReduction&) { return std::string("none"); },
                          [](const PruneConfig& c) { return std::string(to_string(c.method)); },
                          [](const MergeConfig& c) { return std::string(to_string(c.method)); },
                      },
                      config);
}

NdcgResult ndcg_at_k(const RankedList& ranking, const Qrels& qrels, std::size_t cutoff) {
    if (cutoff == 0) {
        throw Error(ErrorKind::InvariantViolation, "nDCG cutoff must be at least 1");
    }
    std::vector<int> ideal;
    for (const auto& [doc_id, grade] : qrels.judgments(ranking.query_id)) {
        if (grade > 0) {
            ideal.push_back(grade);
        }
    }
    if (ideal.empty()) {
        return {0.0, true};
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>());

    double dcg = 0.0;
    const std::size_t depth = std::min(cutoff, ranking.entries.size());
    for (std::size_t i = 0; i < depth; ++i) {
        const int rel = qrels.grade(ranking.query_id, ranking.entries[i].doc_id);
        dcg += static_cast<double>(rel) / std::log2(static_cast<double>(i) + 2.0);
    }
    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(cutoff, ideal.size()); ++i) {
        idcg += static_cast<double>(ideal[i]) / std::log2(static_cast<double>(i) + 2.0);
    }
    return {dcg / idcg, false};
}

std::uint64_t storage_bytes(std::uint64_t vector_count, std::uint64_t dim) {
    return vector_count * dim * sizeof(float);
}

EvalReport evaluate_run(std::span<const DocumentRecord> corpus, std::span<const QueryRecord> queries,
                        const Qrels& qrels, const ReductionConfig& config, const EvalOptions& options) {
    if (corpus.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "evaluation needs at least one document");
    }
    const std::size_t dim = common_dim(corpus, queries);

    EvalReport report;
    report.method = method_name(config);
    report.config = config;
    report.cutoff = options.cutoff;

    std::vector<ImportanceScores> scores(corpus.size());
    parallel_for(corpus.size(), options.threads, [&](std::size_t i) {
        try {
            scores[i] = importance_of(corpus[i]);
        } catch (const Error& e) {
            throw e.with_context("document '" + corpus[i].doc_id + "'");
        }
    });

    std::vector<IndexedDocument> reduced(corpus.size());
    std::vector<double> ratios(corpus.size());
    const auto started = std::chrono::steady_clock::now();
    parallel_for(corpus.size(), options.threads, [&](std::size_t i) {
        try {
            auto r = reduce(corpus[i], scores[i], config);
            reduced[i] = {corpus[i].doc_id, std::move(r.vectors)};
            ratios[i] = r.ratio;
        } catch (const Error& e) {
            throw e.with_context("document '" + corpus[i].doc_id + "'");
        }
    });
    report.offline_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        report.per_doc_ratio[corpus[i].doc_id] = ratios[i];
        report.per_doc_entropy[corpus[i].doc_id] = scores[i].entropy;
        report.vectors_before += corpus[i].patch_count();
        report.vectors_after += reduced[i].vectors.rows();
    }
    report.storage_bytes_before = storage_bytes(report.vectors_before, dim);
    report.storage_bytes_after = storage_bytes(report.vectors_after, dim);
    report.mean_pruning_ratio =
        1.0 - static_cast<double>(report.vectors_after) / static_cast<double>(report.vectors_before);
    report.storage_delta_pct = 100.0 *
                               (static_cast<double>(report.storage_bytes_after) -
                                static_cast<double>(report.storage_bytes_before)) /
                               static_cast<double>(report.storage_bytes_before);

    report.rankings.resize(queries.size());
    parallel_for(queries.size(), options.threads,
                 [&](std::size_t q) { report.rankings[q] = rank_corpus(queries[q], reduced, 1); });

    double total = 0.0;
    for (const auto& ranking : report.rankings) {
        const auto result = ndcg_at_k(ranking, qrels, options.cutoff);
        report.per_query_ndcg[ranking.query_id] = result.value;
        if (result.no_relevant) {
            report.no_relevant_queries.push_back(ranking.query_id);
        }
        total += result.value;
    }
    report.aggregate_ndcg = queries.empty() ? 0.0 : total / static_cast<double>(queries.size());
    return report;
}

std::vector<EvalReport> sweep(std::span<const DocumentRecord> corpus, std::span<const QueryRecord> queries,
                              const Qrels& qrels, std::span<const ReductionConfig> grid, const EvalOptions& options) {
    if (grid.empty()) {
        throw Error(ErrorKind::EmptyGrid, "sweep needs at least one configuration");
    }
    std::vector<EvalReport> reports;
    reports.reserve(grid.size());
    for (const auto& config : grid) {
        reports.push_back(evaluate_run(corpus, queries, qrels, config, options));
    }
    return reports;
}

std::vector<ReductionConfig> default_grid(const ReductionConfig& base) {
    std::vector<ReductionConfig> grid;
    std::visit(overloaded{
                   [&](const NoReduction&) { grid.emplace_back(NoReduction{}); },
                   [&](const PruneConfig& c) {
                       switch (c.method) {
                       case PruneMethod::docpruner:
                       case PruneMethod::attn_plus_sim:
                       case PruneMethod::pivot_threshold:
                           for (double k : kDefaultKGrid) {
                               auto next = c;
                               next.k = k;
                               grid.emplace_back(next);
                           }
                           break;
                       case PruneMethod::attention_ratio:
                       case PruneMethod::random:
                           for (double r : kDefaultRatioGrid) {
                               auto next = c;
                               next.ratio = r;
                               grid.emplace_back(next);
                           }
                           break;
                       case PruneMethod::attention_threshold:
                           throw Error(ErrorKind::EmptyGrid,
                                       "attention-threshold has no default grid; pass explicit thresholds");
                       }
                   },
                   [&](const MergeConfig& c) {
                       std::span<const std::size_t> factors = kSemClusterFactors;
                       if (c.method == MergeMethod::pool1d) factors = kPool1dFactors;
                       if (c.method == MergeMethod::pool2d) factors = kPool2dFactors;
                       for (std::size_t f : factors) {
                           grid.emplace_back(MergeConfig{c.method, f});
                       }
                   },
               },
               base);
    return grid;
}

std::vector<FrontierPoint> frontier(std::span<const EvalReport> reports) {
    std::vector<FrontierPoint> points;
    for (const auto& r : reports) {
        points.push_back({r.mean_pruning_ratio, r.aggregate_ndcg});
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const FrontierPoint& a, const FrontierPoint& b) { return a.pruning_ratio < b.pruning_ratio; });
    return points;
}

std::vector<DocumentStats> corpus_stats(std::span<const DocumentRecord> corpus, double k, std::size_t threads) {
    std::vector<DocumentStats> out(corpus.size());
    parallel_for(corpus.size(), threads, [&](std::size_t i) {
        const auto scores = importance_of(corpus[i]);
        const auto pruned = docpruner_prune(corpus[i], scores, k);
        out[i] = {corpus[i].doc_id, corpus[i].patch_count(), scores.mu, scores.sigma, scores.entropy,
                  pruned.pruning_ratio};
    });
    return out;
}

nlohmann::json config_to_json(const ReductionConfig& config) {
    return std::visit(overloaded{
                          [](const NoReduction&) { return nlohmann::json::object(); },
                          [](const PruneConfig& c) {
                              nlohmann::json j = nlohmann::json::object();
                              switch (c.method) {
                              case PruneMethod::docpruner: j["k"] = c.k; break;
                              case PruneMethod::attention_ratio: j["ratio"] = c.ratio; break;
                              case PruneMethod::attention_threshold: j["threshold"] = c.fixed_threshold; break;
                              case PruneMethod::random:
                                  j["ratio"] = c.ratio;
                                  j["seed"] = c.seed;
                                  break;
                              case PruneMethod::attn_plus_sim:
                                  j["k"] = c.k;
                                  j["alpha"] = c.alpha;
                                  break;
                              case PruneMethod::pivot_threshold:
                                  j["k"] = c.k;
                                  j["k_dup"] = c.k_dup;
                                  j["num_pivots"] = c.num_pivots;
                                  break;
                              }
                              return j;
                          },
                          [](const MergeConfig& c) { return nlohmann::json{{"factor", c.factor}}; },
                      },
                      config);
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json per_query = nlohmann::json::object();
    for (const auto& [qid, v] : report.per_query_ndcg) {
        per_query[qid] = v;
    }
    nlohmann::json ratio = nlohmann::json::object();
    for (const auto& [id, v] : report.per_doc_ratio) {
        ratio[id] = v;
    }
    nlohmann::json entropy = nlohmann::json::object();
    for (const auto& [id, v] : report.per_doc_entropy) {
        entropy[id] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }
    return {
        {"method", report.method},
        {"config", config_to_json(report.config)},
        {"cutoff", report.cutoff},
        {"aggregate_ndcg", report.aggregate_ndcg},
        {"mean_pruning_ratio", report.mean_pruning_ratio},
        {"vectors_before", report.vectors_before},
        {"vectors_after", report.vectors_after},
        {"storage_bytes_before", report.storage_bytes_before},
        {"storage_bytes_after", report.storage_bytes_after},
        {"storage_delta_pct", report.storage_delta_pct},
        {"offline_seconds", report.offline_seconds},
        {"per_query", per_query},
        {"no_relevant_queries", report.no_relevant_queries},
        {"per_doc", {{"ratio", ratio}, {"entropy", entropy}}},
    };
}

nlohmann::json stats_to_json(std::span<const DocumentStats> stats, double k) {
    nlohmann::json docs = nlohmann::json::array();
    double ratio_sum = 0.0;
    for (const auto& s : stats) {
        docs.push_back({{"doc_id", s.doc_id},
                        {"patches", s.patches},
                        {"mu", s.mu},
                        {"sigma", s.sigma},
                        {"entropy", s.entropy ? nlohmann::json(*s.entropy) : nlohmann::json(nullptr)},
                        {"docpruner_ratio", s.docpruner_ratio}});
        ratio_sum += s.docpruner_ratio;
    }
    return {{"k", k},
            {"documents", docs},
            {"mean_docpruner_ratio", stats.empty() ? 0.0 : ratio_sum / static_cast<double>(stats.size())}};
}

std::string report_csv_header() {
    return "query_id,ndcg,method,k,ratio,threshold,alpha,k_dup,num_pivots,factor,seed\n";
}

std::string report_to_csv_rows(const EvalReport& report) {
    // Columns after `method`: k, ratio, threshold, alpha, k_dup, num_pivots, factor, seed.
    std::vector<std::string> params(8);
    std::visit(overloaded{
                   [](const NoReduction&) {},
                   [&](const PruneConfig& c) {
                       switch (c.method) {
                       case PruneMethod::docpruner: params[0] = format_real(c.k); break;
                       case PruneMethod::attention_ratio: params[1] = format_real(c.ratio); break;
                       case PruneMethod::attention_threshold: params[2] = format_real(c.fixed_threshold); break;
                       case PruneMethod::random:
                           params[1] = format_real(c.ratio);
                           params[7] = std::to_string(c.seed);
                           break;
                       case PruneMethod::attn_plus_sim:
                           params[0] = format_real(c.k);
                           params[3] = format_real(c.alpha);
                           break;
                       case PruneMethod::pivot_threshold:
                           params[0] = format_real(c.k);
                           params[4] = format_real(c.k_dup);
                           params[5] = std::to_string(c.num_pivots);
                           break;
                       }
                   },
                   [&](const MergeConfig& c) { params[6] = std::to_string(c.factor); },
               },
               report.config);

    auto quote = [](const std::string& field) {
        if (field.find_first_of(",\"\n") == std::string::npos) {
            return field;
        }
        std::string out = "\"";
        for (char ch : field) {
            if (ch == '"') out += '"';
            out += ch;
        }
        return out + "\"";
    };

    std::ostringstream out;
    for (const auto& ranking : report.rankings) {
        out << quote(ranking.query_id) << ',' << format_real(report.per_query_ndcg.at(ranking.query_id)) << ','
            << report.method;
        for (const auto& p : params) {
            out << ',' << p;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace docprune
