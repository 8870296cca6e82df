// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <unistd.h>

#include "docprune/corpus_io.hpp"
#include "docprune/error.hpp"
#include "docprune/synthetic.hpp"

using namespace docprune;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("docprune_io_" + std::to_string(::getpid()) + "_" + name);
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected docprune::Error";
    return ErrorKind::IoError;
}

DocumentRecord tiny_doc() {
    DocumentRecord d;
    d.doc_id = "page-1";
    d.embeddings = Matrix::from_rows({{0.5, -1.25}, {2.0, 0.125}});
    d.importance = std::vector<double>{0.75, 0.25};
    return d;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

TEST(CorpusIo, EmptyCorpusRoundTrips) {
    const auto path = temp_file("empty.mvdr");
    write_corpus(path, {});
    EXPECT_TRUE(read_corpus(path).empty());
    EXPECT_EQ(std::filesystem::file_size(path), 16u);  // magic + version + count
    std::filesystem::remove(path);
}

TEST(CorpusIo, SingleDocumentRoundTripsBitExactly) {
    const auto path = temp_file("one.mvdr");
    const std::vector<DocumentRecord> docs{tiny_doc()};
    write_corpus(path, docs);
    const auto back = read_corpus(path);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], docs[0]);
    std::filesystem::remove(path);
}

TEST(CorpusIo, ByteLayoutMatchesContainerFormat) {
    auto doc = tiny_doc();
    doc.grid = GridShape{1, 2};
    const auto bytes = encode_corpus(std::vector<DocumentRecord>{doc});
    ASSERT_GE(bytes.size(), 16u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "MVDR");
    EXPECT_EQ(bytes[4], 1);  // version, little-endian
    EXPECT_EQ(bytes[8], 1);  // document count
    // id length (4) + id (6) + L_d + P + rows + cols (16) + flags (1) + 4 embeddings + 2 importance
    EXPECT_EQ(bytes.size(), 16u + 4 + 6 + 16 + 1 + 4 * 4 + 2 * 4);
    EXPECT_EQ(bytes[16 + 4 + 6 + 16], kFlagImportance);
    float first = 0.0f;
    std::memcpy(&first, bytes.data() + 16 + 4 + 6 + 16 + 1, 4);
    EXPECT_EQ(first, 0.5f);
}

TEST(CorpusIo, NanEmbeddingIsRejectedOnRead) {
    auto bytes = encode_corpus(std::vector<DocumentRecord>{tiny_doc()});
    const std::size_t first_value = 16 + 4 + 6 + 16 + 1;
    const float nan = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(bytes.data() + first_value, &nan, 4);
    EXPECT_EQ(kind_of([&] { decode_corpus(bytes); }), ErrorKind::InvariantViolation);
}

TEST(CorpusIo, WriterRejectsInvalidRecords) {
    auto doc = tiny_doc();
    doc.importance.reset();
    EXPECT_EQ(kind_of([&] { encode_corpus(std::vector<DocumentRecord>{doc}); }), ErrorKind::InvariantViolation);
    doc = tiny_doc();
    doc.grid = GridShape{3, 1};
    EXPECT_EQ(kind_of([&] { encode_corpus(std::vector<DocumentRecord>{doc}); }), ErrorKind::InvariantViolation);
    doc = tiny_doc();
    (*doc.importance)[0] = -0.1;
    EXPECT_EQ(kind_of([&] { encode_corpus(std::vector<DocumentRecord>{doc}); }), ErrorKind::InvariantViolation);
}

TEST(CorpusIo, HeaderErrors) {
    std::vector<std::uint8_t> bad{'M', 'V', 'D', 'X', 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    EXPECT_EQ(kind_of([&] { decode_corpus(bad); }), ErrorKind::BadMagic);
    std::vector<std::uint8_t> v2{'M', 'V', 'D', 'R', 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    EXPECT_EQ(kind_of([&] { decode_corpus(v2); }), ErrorKind::UnsupportedVersion);
    auto full = encode_corpus(std::vector<DocumentRecord>{tiny_doc()});
    full.resize(full.size() - 3);
    EXPECT_EQ(kind_of([&] { decode_corpus(full); }), ErrorKind::TruncatedFile);
    // Query file handed to the corpus reader.
    const auto queries = encode_queries({});
    EXPECT_EQ(kind_of([&] { decode_corpus(queries); }), ErrorKind::BadMagic);
}

TEST(CorpusIo, MissingFileIsIoErrorWithPath) {
    try {
        read_corpus("/nonexistent/dir/corpus.mvdr");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/corpus.mvdr"), std::string::npos);
    }
}

TEST(CorpusIo, InvariantViolationNamesDocumentAndField) {
    auto doc = tiny_doc();
    doc.doc_id = "scan-42";
    doc.global_embedding = std::vector<double>{1.0};
    try {
        validate_document(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("scan-42"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("global_embedding"), std::string::npos);
    }
}

TEST(QueryIo, RoundTripAndRejections) {
    EXPECT_TRUE(decode_queries(encode_queries({})).empty());

    QueryRecord q{"q1", Matrix::from_rows({{1.0, 0.0}, {0.25, -0.5}, {3.0, 4.0}})};
    const auto path = temp_file("q.mvdq");
    write_queries(path, std::vector<QueryRecord>{q});
    const auto back = read_queries(path);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], q);
    std::filesystem::remove(path);

    // A query record declaring P = 0.
    std::vector<std::uint8_t> bytes{'M', 'V', 'D', 'Q'};
    put_u32(bytes, 1);
    put_u32(bytes, 1);
    put_u32(bytes, 0);
    put_u32(bytes, 2);
    bytes.push_back('q');
    bytes.push_back('0');
    put_u32(bytes, 3);
    put_u32(bytes, 0);
    EXPECT_EQ(kind_of([&] { decode_queries(bytes); }), ErrorKind::InvariantViolation);
}

TEST(CorpusIoProperty, RandomCorporaRoundTripWithOptionalFields) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DocumentRecord> docs;
        const std::size_t n = rng() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            synthetic::DocumentShape shape;
            shape.with_grid = rng() % 2;
            shape.grid_rows = 1 + rng() % 5;
            shape.grid_cols = 1 + rng() % 5;
            shape.patches = shape.with_grid ? shape.grid_rows * shape.grid_cols : 1 + rng() % 20;
            shape.dim = 1 + rng() % 8;
            const unsigned sources = 1 + rng() % 3;  // importance, heads or both
            shape.with_importance = sources & 1;
            shape.heads = (sources & 2) ? 1 + rng() % 4 : 0;
            shape.with_global_embedding = rng() % 2;
            docs.push_back(synthetic::random_document(rng, "doc" + std::to_string(i), shape));
        }
        EXPECT_EQ(decode_corpus(encode_corpus(docs)), docs);
    }
}

TEST(CorpusIoProperty, CorruptedBytesNeverYieldInvalidRecords) {
    std::mt19937_64 rng(99);
    std::vector<DocumentRecord> docs;
    for (int i = 0; i < 3; ++i) {
        synthetic::DocumentShape shape{6, 3, true, 2, true, 2, 3, true};
        docs.push_back(synthetic::random_document(rng, "d" + std::to_string(i), shape));
    }
    const auto clean = encode_corpus(docs);
    for (int trial = 0; trial < 2000; ++trial) {
        auto bytes = clean;
        if (trial % 3 == 0) {
            bytes.resize(rng() % bytes.size());
        } else {
            const int flips = 1 + static_cast<int>(rng() % 4);
            for (int f = 0; f < flips; ++f) {
                bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
            }
        }
        try {
            for (const auto& doc : decode_corpus(bytes)) {
                EXPECT_NO_THROW(validate_document(doc));
            }
        } catch (const Error&) {
            // rejection is the expected outcome for most corruptions
        }
    }
}

TEST(Qrels, ParsesTrecLines) {
    auto q = parse_qrels("q1 0 d1 1\n");
    EXPECT_EQ(q.grade("q1", "d1"), 1);
    EXPECT_EQ(q.grade("q1", "d2"), 0);
    EXPECT_EQ(q.size(), 1u);

    q = parse_qrels("q1 0 d1 1\nq1 0 d1 2\n");
    EXPECT_EQ(q.grade("q1", "d1"), 2);
    EXPECT_EQ(q.size(), 1u);

    q = parse_qrels("\n  \nq1\t0\td1   3\n\n");
    EXPECT_EQ(q.grade("q1", "d1"), 3);
}

TEST(Qrels, MalformedLinesReportLineNumber) {
    try {
        parse_qrels("q1 d1 1");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    try {
        parse_qrels("q1 0 d1 1\nq2 0 d2 -1\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Qrels, FileRoundTrip) {
    Qrels q;
    q.set("a", "x", 1);
    q.set("a", "y", 0);
    q.set("b", "x", 3);
    const auto path = temp_file("qrels.txt");
    write_qrels(path, q);
    const auto back = read_qrels(path);
    EXPECT_EQ(back.all(), q.all());
    std::filesystem::remove(path);
}
