// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docprune/matrix.hpp"

namespace docprune {

struct GridShape {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// One document page: its patch embeddings and the attention signal used to rank them.
struct DocumentRecord {
    std::string doc_id;
    Matrix embeddings;  // patch_count x dim
    std::optional<GridShape> grid;
    std::optional<std::vector<double>> importance;  // pre-averaged global-token attention
    std::optional<Matrix> head_attention;           // heads x patch_count
    std::optional<std::vector<double>> global_embedding;

    std::size_t patch_count() const noexcept { return embeddings.rows(); }
    std::size_t dim() const noexcept { return embeddings.cols(); }

    friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct QueryRecord {
    std::string query_id;
    Matrix embeddings;  // token_count x dim

    std::size_t token_count() const noexcept { return embeddings.rows(); }
    std::size_t dim() const noexcept { return embeddings.cols(); }

    friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

/// Relevance judgments, query_id -> doc_id -> grade.
class Qrels {
public:
    void set(const std::string& query_id, const std::string& doc_id, int grade);

    /// Grade of (query, doc); unjudged pairs are 0.
    int grade(const std::string& query_id, const std::string& doc_id) const;

    /// All judgments for one query (empty if none).
    const std::map<std::string, int>& judgments(const std::string& query_id) const;

    std::size_t size() const noexcept;
    bool empty() const noexcept { return m_grades.empty(); }

    const std::map<std::string, std::map<std::string, int>>& all() const noexcept { return m_grades; }

private:
    std::map<std::string, std::map<std::string, int>> m_grades;
};

inline constexpr std::uint32_t kContainerVersion = 1;

// Bit layout of the per-document flags byte.
inline constexpr std::uint8_t kFlagImportance = 0x1;
inline constexpr std::uint8_t kFlagHeadAttention = 0x2;
inline constexpr std::uint8_t kFlagGlobalEmbedding = 0x4;

/// Throws InvariantViolation naming the document and field.
void validate_document(const DocumentRecord& doc);
void validate_query(const QueryRecord& query);

std::vector<std::uint8_t> encode_corpus(std::span<const DocumentRecord> docs);
std::vector<DocumentRecord> decode_corpus(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_queries(std::span<const QueryRecord> queries);
std::vector<QueryRecord> decode_queries(std::span<const std::uint8_t> bytes);

std::vector<DocumentRecord> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, std::span<const DocumentRecord> docs);
std::vector<QueryRecord> read_queries(const std::filesystem::path& path);
void write_queries(const std::filesystem::path& path, std::span<const QueryRecord> queries);

/// TREC-style "query_id iter doc_id grade" lines. Later duplicates win.
Qrels parse_qrels(const std::string& text);
Qrels read_qrels(const std::filesystem::path& path);
void write_qrels(const std::filesystem::path& path, const Qrels& qrels);

}  // namespace docprune
