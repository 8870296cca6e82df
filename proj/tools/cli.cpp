// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "docprune/corpus_io.hpp"
#include "docprune/error.hpp"
#include "docprune/eval.hpp"
#include "docprune/importance.hpp"
#include "docprune/synthetic.hpp"

namespace docprune::cli {

namespace {

const std::vector<std::string> kMethods = {"docpruner",     "attention-ratio", "attention-threshold", "random",
                                           "attn-plus-sim", "pivot-threshold", "sem-cluster",         "pool1d",
                                           "pool2d",        "none"};

/// Flag values shared by evaluate and sweep.
struct RunSpec {
    std::string corpus_path;
    std::string queries_path;
    std::string qrels_path;
    std::string method = "docpruner";
    double k = -0.25;
    double ratio = 0.5;
    double threshold = 0.0;
    double alpha = 0.5;
    double k_dup = 1.0;
    std::size_t num_pivots = 10;
    std::size_t factor = 4;
    std::size_t cutoff = 5;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out_path;
    std::string format = "json";
    std::vector<double> grid;
};

void add_run_options(CLI::App& cmd, RunSpec& spec) {
    cmd.add_option("--corpus", spec.corpus_path, "MVDR corpus file")->required();
    cmd.add_option("--queries", spec.queries_path, "MVDQ query file")->required();
    cmd.add_option("--qrels", spec.qrels_path, "TREC qrels file")->required();
    cmd.add_option("--method", spec.method, "Reduction method")->check(CLI::IsMember(kMethods))->capture_default_str();
    cmd.add_option("--k", spec.k, "Adaptation factor")->capture_default_str();
    cmd.add_option("--ratio", spec.ratio, "Pruning ratio")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd.add_option("--threshold", spec.threshold, "Fixed attention threshold")->capture_default_str();
    cmd.add_option("--alpha", spec.alpha, "Attention weight in attn-plus-sim")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--k-dup", spec.k_dup, "De-duplication factor")->capture_default_str();
    cmd.add_option("--num-pivots", spec.num_pivots, "Pivot count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--factor", spec.factor, "Merging factor")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--cutoff", spec.cutoff, "nDCG cutoff")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--seed", spec.seed, "Seed for random pruning")->capture_default_str();
    cmd.add_option("--threads", spec.threads, "Worker threads (0 = auto)")->capture_default_str();
    cmd.add_option("--out", spec.out_path, "Report path (default: stdout)");
    cmd.add_option("--format", spec.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

ReductionConfig to_config(const RunSpec& spec) {
    if (spec.method == "none") {
        return NoReduction{};
    }
    if (spec.method == "sem-cluster" || spec.method == "pool1d" || spec.method == "pool2d") {
        return MergeConfig{parse_merge_method(spec.method), spec.factor};
    }
    PruneConfig c;
    c.method = parse_prune_method(spec.method);
    c.k = spec.k;
    c.ratio = spec.ratio;
    c.fixed_threshold = spec.threshold;
    c.alpha = spec.alpha;
    c.k_dup = spec.k_dup;
    c.num_pivots = spec.num_pivots;
    c.seed = spec.seed;
    return c;
}

/// Replaces the swept hyperparameter of `base` with each grid value.
std::vector<ReductionConfig> explicit_grid(const ReductionConfig& base, const std::vector<double>& values) {
    std::vector<ReductionConfig> grid;
    for (double v : values) {
        ReductionConfig next = base;
        if (auto* p = std::get_if<PruneConfig>(&next)) {
            switch (p->method) {
            case PruneMethod::docpruner:
            case PruneMethod::attn_plus_sim:
            case PruneMethod::pivot_threshold: p->k = v; break;
            case PruneMethod::attention_ratio:
            case PruneMethod::random:
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw CLI::ValidationError("--grid", "ratio values must lie in [0, 1]");
                }
                p->ratio = v;
                break;
            case PruneMethod::attention_threshold: p->fixed_threshold = v; break;
            }
        } else if (auto* m = std::get_if<MergeConfig>(&next)) {
            if (!(v >= 1.0) || v != std::floor(v)) {
                throw CLI::ValidationError("--grid", "merging factors must be positive integers");
            }
            m->factor = static_cast<std::size_t>(v);
        }
        grid.push_back(next);
    }
    return grid;
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : m_path(path), m_out(&fallback) {
        if (!path.empty()) {
            m_file.open(path, std::ios::trunc);
            if (!m_file) {
                throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
            }
            m_out = &m_file;
        }
    }
    std::ostream& stream() { return *m_out; }
    void finish() {
        m_out->flush();
        if (!*m_out) {
            throw Error(ErrorKind::IoError, "write failure on '" + (m_path.empty() ? "<stdout>" : m_path) + "'");
        }
    }

private:
    std::string m_path;
    std::ofstream m_file;
    std::ostream* m_out;
};

struct Inputs {
    std::vector<DocumentRecord> corpus;
    std::vector<QueryRecord> queries;
    Qrels qrels;
};

Inputs load(const RunSpec& spec) {
    return {read_corpus(spec.corpus_path), read_queries(spec.queries_path), read_qrels(spec.qrels_path)};
}

int cmd_evaluate(const RunSpec& spec, std::ostream& out) {
    const auto config = to_config(spec);
    const auto in = load(spec);
    const auto report = evaluate_run(in.corpus, in.queries, in.qrels, config, {spec.cutoff, spec.threads});
    Sink sink(spec.out_path, out);
    if (spec.format == "csv") {
        sink.stream() << report_csv_header() << report_to_csv_rows(report);
    } else {
        sink.stream() << report_to_json(report).dump(2) << '\n';
    }
    sink.finish();
    return kExitOk;
}

int cmd_sweep(const RunSpec& spec, std::ostream& out) {
    const auto base = to_config(spec);
    const auto grid = spec.grid.empty() ? default_grid(base) : explicit_grid(base, spec.grid);
    const auto in = load(spec);
    const auto reports = sweep(in.corpus, in.queries, in.qrels, grid, {spec.cutoff, spec.threads});
    Sink sink(spec.out_path, out);
    if (spec.format == "csv") {
        sink.stream() << report_csv_header();
        for (const auto& r : reports) {
            sink.stream() << report_to_csv_rows(r);
        }
    } else {
        nlohmann::json doc;
        doc["method"] = method_name(base);
        doc["reports"] = nlohmann::json::array();
        for (const auto& r : reports) {
            doc["reports"].push_back(report_to_json(r));
        }
        doc["frontier"] = nlohmann::json::array();
        for (const auto& p : frontier(reports)) {
            doc["frontier"].push_back({{"pruning_ratio", p.pruning_ratio}, {"ndcg", p.ndcg}});
        }
        sink.stream() << doc.dump(2) << '\n';
    }
    sink.finish();
    return kExitOk;
}

nlohmann::json vector_json(std::span<const double> v) {
    return nlohmann::json(std::vector<double>(v.begin(), v.end()));
}

nlohmann::json document_json(const DocumentRecord& doc, bool with_embeddings) {
    const auto scores = importance_of(doc);
    nlohmann::json j = {
        {"doc_id", doc.doc_id},
        {"patches", doc.patch_count()},
        {"dim", doc.dim()},
        {"grid", doc.grid ? nlohmann::json{doc.grid->rows, doc.grid->cols} : nlohmann::json(nullptr)},
        {"has_importance", doc.importance.has_value()},
        {"heads", doc.head_attention ? doc.head_attention->rows() : 0},
        {"has_global_embedding", doc.global_embedding.has_value()},
        {"importance", scores.scores},
        {"mu", scores.mu},
        {"sigma", scores.sigma},
        {"entropy", scores.entropy ? nlohmann::json(*scores.entropy) : nlohmann::json(nullptr)},
    };
    if (with_embeddings) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < doc.patch_count(); ++r) {
            rows.push_back(vector_json(doc.embeddings.row(r)));
        }
        j["embeddings"] = std::move(rows);
        if (doc.global_embedding) {
            j["global_embedding"] = *doc.global_embedding;
        }
    }
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Attention-guided pruning and evaluation of multi-vector document embeddings", "docprune"};
    app.require_subcommand(1);

    RunSpec eval_spec;
    auto* evaluate = app.add_subcommand("evaluate", "Reduce the corpus with one configuration and score it");
    add_run_options(*evaluate, eval_spec);

    RunSpec sweep_spec;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a grid over k, ratio, threshold or factor");
    add_run_options(*sweep_cmd, sweep_spec);
    sweep_cmd->add_option("--grid", sweep_spec.grid, "Comma-separated values of the swept hyperparameter")
        ->delimiter(',');

    std::string stats_corpus;
    std::string stats_out;
    double stats_k = -0.25;
    std::size_t stats_threads = 0;
    auto* stats = app.add_subcommand("stats", "Importance, entropy and pruning-ratio distributions");
    stats->add_option("--corpus", stats_corpus, "MVDR corpus file")->required();
    stats->add_option("--k", stats_k, "Adaptation factor")->capture_default_str();
    stats->add_option("--threads", stats_threads, "Worker threads (0 = auto)");
    stats->add_option("--out", stats_out, "Report path (default: stdout)");

    std::string inspect_corpus;
    std::string inspect_doc;
    bool inspect_embeddings = false;
    auto* inspect = app.add_subcommand("inspect", "Dump document records as JSON");
    inspect->add_option("--corpus", inspect_corpus, "MVDR corpus file")->required();
    inspect->add_option("--doc", inspect_doc, "Only this document");
    inspect->add_flag("--embeddings", inspect_embeddings, "Include embedding rows");

    std::string validate_corpus;
    std::string validate_queries;
    std::string validate_qrels;
    auto* validate = app.add_subcommand("validate", "Check container and qrels files");
    validate->add_option("--corpus", validate_corpus, "MVDR corpus file");
    validate->add_option("--queries", validate_queries, "MVDQ query file");
    validate->add_option("--qrels", validate_qrels, "TREC qrels file");

    std::string synth_dir;
    synthetic::PlantedOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a planted-relevance benchmark fixture");
    synth_cmd->add_option("--out-dir", synth_dir, "Directory for corpus.mvdr, queries.mvdq, qrels.txt")->required();
    synth_cmd->add_option("--docs", synth.documents)->check(CLI::PositiveNumber)->capture_default_str();
    synth_cmd->add_option("--queries", synth.queries)->capture_default_str();
    synth_cmd->add_option("--dim", synth.dim)->check(CLI::PositiveNumber)->capture_default_str();
    synth_cmd->add_option("--min-patches", synth.min_patches)->capture_default_str();
    synth_cmd->add_option("--max-patches", synth.max_patches)->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << failed->help();
        return kExitUsage;
    }

    try {
        if (*evaluate) {
            return cmd_evaluate(eval_spec, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_spec, out);
        }
        if (*stats) {
            const auto corpus = read_corpus(stats_corpus);
            const auto s = corpus_stats(corpus, stats_k, stats_threads);
            Sink sink(stats_out, out);
            sink.stream() << stats_to_json(s, stats_k).dump(2) << '\n';
            sink.finish();
            return kExitOk;
        }
        if (*inspect) {
            const auto corpus = read_corpus(inspect_corpus);
            nlohmann::json docs = nlohmann::json::array();
            for (const auto& doc : corpus) {
                if (inspect_doc.empty() || doc.doc_id == inspect_doc) {
                    docs.push_back(document_json(doc, inspect_embeddings));
                }
            }
            if (!inspect_doc.empty() && docs.empty()) {
                throw Error(ErrorKind::InvariantViolation, "no document '" + inspect_doc + "' in corpus");
            }
            out << docs.dump(2) << '\n';
            return kExitOk;
        }
        if (*validate) {
            if (validate_corpus.empty() && validate_queries.empty() && validate_qrels.empty()) {
                err << "error: validate needs at least one of --corpus, --queries, --qrels\n\n"
                    << validate->help();
                return kExitUsage;
            }
            std::optional<std::size_t> corpus_dim;
            if (!validate_corpus.empty()) {
                const auto corpus = read_corpus(validate_corpus);
                out << validate_corpus << ": OK, " << corpus.size() << " documents\n";
                if (!corpus.empty()) corpus_dim = corpus.front().dim();
            }
            if (!validate_queries.empty()) {
                const auto queries = read_queries(validate_queries);
                for (const auto& q : queries) {
                    if (corpus_dim && q.dim() != *corpus_dim) {
                        throw Error(ErrorKind::ShapeError, "query '" + q.query_id + "' dimension " +
                                                               std::to_string(q.dim()) + " != corpus dimension " +
                                                               std::to_string(*corpus_dim));
                    }
                }
                out << validate_queries << ": OK, " << queries.size() << " queries\n";
            }
            if (!validate_qrels.empty()) {
                const auto qrels = read_qrels(validate_qrels);
                out << validate_qrels << ": OK, " << qrels.size() << " judgments\n";
            }
            return kExitOk;
        }
        if (*synth_cmd) {
            const auto bench = synthetic::make_planted_benchmark(synth);
            const std::filesystem::path dir(synth_dir);
            std::filesystem::create_directories(dir);
            write_corpus(dir / "corpus.mvdr", bench.corpus);
            write_queries(dir / "queries.mvdq", bench.queries);
            write_qrels(dir / "qrels.txt", bench.qrels);
            out << "wrote " << bench.corpus.size() << " documents and " << bench.queries.size() << " queries to "
                << dir.string() << '\n';
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: IoError: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace docprune::cli
