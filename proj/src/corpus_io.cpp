// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/corpus_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "docprune/error.hpp"
#include "docprune/numerics.hpp"

namespace docprune {

namespace {

constexpr char kCorpusMagic[4] = {'M', 'V', 'D', 'R'};
constexpr char kQueryMagic[4] = {'M', 'V', 'D', 'Q'};
constexpr std::uint8_t kKnownFlags = kFlagImportance | kFlagHeadAttention | kFlagGlobalEmbedding;

class Writer {
public:
    void bytes(const void* src, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(src);
        m_out.insert(m_out.end(), p, p + n);
    }
    void u8(std::uint8_t v) { m_out.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
    void f32s(std::span<const double> values) {
        for (double v : values) {
            f32(v);
        }
    }
    void str(const std::string& s) {
        u32(checked_u32(s.size(), "id length"));
        bytes(s.data(), s.size());
    }

    static std::uint32_t checked_u32(std::size_t v, const char* what) {
        if (v > std::numeric_limits<std::uint32_t>::max()) {
            throw Error(ErrorKind::InvariantViolation, std::string(what) + " exceeds 32-bit range");
        }
        return static_cast<std::uint32_t>(v);
    }

    std::vector<std::uint8_t> take() { return std::move(m_out); }

private:
    std::vector<std::uint8_t> m_out;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : m_bytes(bytes) {}

    std::size_t remaining() const noexcept { return m_bytes.size() - m_pos; }

    void need(std::uint64_t n, const char* what) const {
        if (n > remaining()) {
            throw Error(ErrorKind::TruncatedFile, std::string("unexpected end of data reading ") + what);
        }
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return m_bytes[m_pos++];
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(m_bytes[m_pos + i]) << (8 * i);
        }
        m_pos += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(m_bytes[m_pos + i]) << (8 * i);
        }
        m_pos += 8;
        return v;
    }
    std::vector<double> f32s(std::uint64_t count, const char* what) {
        if (count > remaining() / 4) {
            throw Error(ErrorKind::TruncatedFile, std::string("unexpected end of data reading ") + what);
        }
        std::vector<double> out(count);
        for (auto& v : out) {
            v = static_cast<double>(std::bit_cast<float>(u32(what)));
        }
        return out;
    }
    std::string str(const char* what) {
        const std::uint32_t len = u32(what);
        need(len, what);
        std::string s(reinterpret_cast<const char*>(m_bytes.data() + m_pos), len);
        m_pos += len;
        return s;
    }
    void magic(const char (&expected)[4]) {
        if (remaining() < 4 || std::memcmp(m_bytes.data(), expected, 4) != 0) {
            throw Error(ErrorKind::BadMagic,
                        std::string("expected magic \"") + std::string(expected, 4) + "\"");
        }
        m_pos += 4;
    }

private:
    std::span<const std::uint8_t> m_bytes;
    std::size_t m_pos = 0;
};

[[noreturn]] void violation(const std::string& id, const std::string& field, const std::string& what) {
    throw Error(ErrorKind::InvariantViolation, "record '" + id + "' field " + field + ": " + what);
}

void check_finite(std::span<const double> values, const std::string& id, const char* field) {
    if (!numerics::all_finite(values)) {
        violation(id, field, "non-finite value");
    }
}

void check_non_negative(std::span<const double> values, const std::string& id, const char* field) {
    if (std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; })) {
        violation(id, field, "negative value");
    }
}

void check_version(Reader& in) {
    const std::uint32_t version = in.u32("format version");
    if (version != kContainerVersion) {
        throw Error(ErrorKind::UnsupportedVersion, "format version " + std::to_string(version));
    }
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorKind::IoError, "read failure on '" + path.string() + "'");
    }
    return bytes;
}

void spill(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorKind::IoError, "write failure on '" + path.string() + "'");
    }
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IoError) {
            throw;
        }
        throw e.with_context(path.string());
    }
}

}  // namespace

void Qrels::set(const std::string& query_id, const std::string& doc_id, int grade) {
    m_grades[query_id][doc_id] = grade;
}

int Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
    auto q = m_grades.find(query_id);
    if (q == m_grades.end()) {
        return 0;
    }
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

const std::map<std::string, int>& Qrels::judgments(const std::string& query_id) const {
    static const std::map<std::string, int> kNone;
    auto q = m_grades.find(query_id);
    return q == m_grades.end() ? kNone : q->second;
}

std::size_t Qrels::size() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, docs] : m_grades) {
        n += docs.size();
    }
    return n;
}

void validate_document(const DocumentRecord& doc) {
    const auto& id = doc.doc_id;
    if (id.empty()) {
        violation(id, "doc_id", "empty identifier");
    }
    const std::size_t patches = doc.patch_count();
    if (patches == 0) {
        violation(id, "L_d", "patch count must be positive");
    }
    if (doc.dim() == 0) {
        violation(id, "P", "embedding dimension must be positive");
    }
    check_finite(doc.embeddings.data(), id, "embeddings");
    if (doc.grid) {
        if (doc.grid->rows == 0 || doc.grid->cols == 0) {
            violation(id, "grid", "grid dimensions must be positive");
        }
        if (static_cast<std::uint64_t>(doc.grid->rows) * doc.grid->cols != patches) {
            violation(id, "grid", "grid_rows * grid_cols != patch count");
        }
    }
    if (!doc.importance && !doc.head_attention) {
        violation(id, "importance", "neither importance nor head_attention present");
    }
    if (doc.importance) {
        if (doc.importance->size() != patches) {
            violation(id, "importance", "length differs from patch count");
        }
        check_finite(*doc.importance, id, "importance");
        check_non_negative(*doc.importance, id, "importance");
    }
    if (doc.head_attention) {
        if (doc.head_attention->rows() == 0) {
            violation(id, "head_attention", "head count must be positive");
        }
        if (doc.head_attention->cols() != patches) {
            violation(id, "head_attention", "column count differs from patch count");
        }
        check_finite(doc.head_attention->data(), id, "head_attention");
        check_non_negative(doc.head_attention->data(), id, "head_attention");
    }
    if (doc.global_embedding) {
        if (doc.global_embedding->size() != doc.dim()) {
            violation(id, "global_embedding", "length differs from embedding dimension");
        }
        check_finite(*doc.global_embedding, id, "global_embedding");
    }
}

void validate_query(const QueryRecord& query) {
    const auto& id = query.query_id;
    if (id.empty()) {
        violation(id, "query_id", "empty identifier");
    }
    if (query.token_count() == 0) {
        violation(id, "L_q", "token count must be positive");
    }
    if (query.dim() == 0) {
        violation(id, "P", "embedding dimension must be positive");
    }
    check_finite(query.embeddings.data(), id, "embeddings");
}

std::vector<std::uint8_t> encode_corpus(std::span<const DocumentRecord> docs) {
    Writer out;
    out.bytes(kCorpusMagic, 4);
    out.u32(kContainerVersion);
    out.u64(docs.size());
    for (const auto& doc : docs) {
        validate_document(doc);
        out.str(doc.doc_id);
        out.u32(Writer::checked_u32(doc.patch_count(), "L_d"));
        out.u32(Writer::checked_u32(doc.dim(), "P"));
        out.u32(doc.grid ? doc.grid->rows : 0);
        out.u32(doc.grid ? doc.grid->cols : 0);
        std::uint8_t flags = 0;
        if (doc.importance) flags |= kFlagImportance;
        if (doc.head_attention) flags |= kFlagHeadAttention;
        if (doc.global_embedding) flags |= kFlagGlobalEmbedding;
        out.u8(flags);
        out.f32s(doc.embeddings.data());
        if (doc.importance) {
            out.f32s(*doc.importance);
        }
        if (doc.head_attention) {
            out.u32(Writer::checked_u32(doc.head_attention->rows(), "H"));
            out.f32s(doc.head_attention->data());
        }
        if (doc.global_embedding) {
            out.f32s(*doc.global_embedding);
        }
    }
    return out.take();
}

std::vector<DocumentRecord> decode_corpus(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.magic(kCorpusMagic);
    check_version(in);
    const std::uint64_t count = in.u64("document count");
    std::vector<DocumentRecord> docs;
    std::set<std::string> seen;
    for (std::uint64_t n = 0; n < count; ++n) {
        DocumentRecord doc;
        doc.doc_id = in.str("doc_id");
        const std::uint32_t patches = in.u32("L_d");
        const std::uint32_t dim = in.u32("P");
        const std::uint32_t grid_rows = in.u32("grid_rows");
        const std::uint32_t grid_cols = in.u32("grid_cols");
        const std::uint8_t flags = in.u8("flags");
        if (patches == 0) violation(doc.doc_id, "L_d", "patch count must be positive");
        if (dim == 0) violation(doc.doc_id, "P", "embedding dimension must be positive");
        if ((flags & ~kKnownFlags) != 0) violation(doc.doc_id, "flags", "unknown flag bits");
        if ((grid_rows == 0) != (grid_cols == 0)) {
            violation(doc.doc_id, "grid", "only one grid dimension present");
        }
        if (grid_rows != 0) {
            doc.grid = GridShape{grid_rows, grid_cols};
        }
        const std::uint64_t cells = static_cast<std::uint64_t>(patches) * dim;
        doc.embeddings = Matrix(patches, dim, in.f32s(cells, "embeddings"));
        if (flags & kFlagImportance) {
            doc.importance = in.f32s(patches, "importance");
        }
        if (flags & kFlagHeadAttention) {
            const std::uint32_t heads = in.u32("H");
            if (heads == 0) violation(doc.doc_id, "head_attention", "head count must be positive");
            doc.head_attention =
                Matrix(heads, patches, in.f32s(static_cast<std::uint64_t>(heads) * patches, "head_attention"));
        }
        if (flags & kFlagGlobalEmbedding) {
            doc.global_embedding = in.f32s(dim, "global_embedding");
        }
        validate_document(doc);
        if (!seen.insert(doc.doc_id).second) {
            violation(doc.doc_id, "doc_id", "duplicate identifier");
        }
        docs.push_back(std::move(doc));
    }
    if (in.remaining() != 0) {
        throw Error(ErrorKind::InvariantViolation, "trailing bytes after last document");
    }
    return docs;
}

std::vector<std::uint8_t> encode_queries(std::span<const QueryRecord> queries) {
    Writer out;
    out.bytes(kQueryMagic, 4);
    out.u32(kContainerVersion);
    out.u64(queries.size());
    for (const auto& q : queries) {
        validate_query(q);
        out.str(q.query_id);
        out.u32(Writer::checked_u32(q.token_count(), "L_q"));
        out.u32(Writer::checked_u32(q.dim(), "P"));
        out.f32s(q.embeddings.data());
    }
    return out.take();
}

std::vector<QueryRecord> decode_queries(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.magic(kQueryMagic);
    check_version(in);
    const std::uint64_t count = in.u64("query count");
    std::vector<QueryRecord> queries;
    std::set<std::string> seen;
    for (std::uint64_t n = 0; n < count; ++n) {
        QueryRecord q;
        q.query_id = in.str("query_id");
        const std::uint32_t tokens = in.u32("L_q");
        const std::uint32_t dim = in.u32("P");
        if (tokens == 0) violation(q.query_id, "L_q", "token count must be positive");
        if (dim == 0) violation(q.query_id, "P", "embedding dimension must be positive");
        q.embeddings = Matrix(tokens, dim, in.f32s(static_cast<std::uint64_t>(tokens) * dim, "embeddings"));
        validate_query(q);
        if (!seen.insert(q.query_id).second) {
            violation(q.query_id, "query_id", "duplicate identifier");
        }
        queries.push_back(std::move(q));
    }
    if (in.remaining() != 0) {
        throw Error(ErrorKind::InvariantViolation, "trailing bytes after last query");
    }
    return queries;
}

std::vector<DocumentRecord> read_corpus(const std::filesystem::path& path) {
    return with_path(path, [&] { return decode_corpus(slurp(path)); });
}

void write_corpus(const std::filesystem::path& path, std::span<const DocumentRecord> docs) {
    with_path(path, [&] { spill(path, encode_corpus(docs)); });
}

std::vector<QueryRecord> read_queries(const std::filesystem::path& path) {
    return with_path(path, [&] { return decode_queries(slurp(path)); });
}

void write_queries(const std::filesystem::path& path, std::span<const QueryRecord> queries) {
    with_path(path, [&] { spill(path, encode_queries(queries)); });
}

Qrels parse_qrels(const std::string& text) {
    Qrels qrels;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> tok{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
        if (tok.empty()) {
            continue;
        }
        auto fail = [&](const std::string& why) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
        };
        if (tok.size() != 4) {
            fail("expected 4 fields, got " + std::to_string(tok.size()));
        }
        const std::string& grade_text = tok[3];
        if (grade_text.empty() || !std::all_of(grade_text.begin(), grade_text.end(), [](char c) {
                return c >= '0' && c <= '9';
            })) {
            fail("grade must be a non-negative integer");
        }
        int grade = 0;
        try {
            grade = std::stoi(grade_text);
        } catch (const std::exception&) {
            fail("grade out of range");
        }
        qrels.set(tok[0], tok[2], grade);
    }
    return qrels;
}

Qrels read_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return with_path(path, [&] { return parse_qrels(buf.str()); });
}

void write_qrels(const std::filesystem::path& path, const Qrels& qrels) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    }
    for (const auto& [query_id, docs] : qrels.all()) {
        for (const auto& [doc_id, grade] : docs) {
            out << query_id << " 0 " << doc_id << ' ' << grade << '\n';
        }
    }
    if (!out) {
        throw Error(ErrorKind::IoError, "write failure on '" + path.string() + "'");
    }
}

}  // namespace docprune
