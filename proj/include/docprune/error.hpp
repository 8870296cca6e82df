// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace docprune {

enum class ErrorKind {
    EmptyInput,
    DegenerateVector,
    ShapeError,
    NotADistribution,
    BadMagic,
    UnsupportedVersion,
    TruncatedFile,
    InvariantViolation,
    ParseError,
    IoError,
    MissingImportanceSource,
    DegenerateAttention,
    MissingGlobalEmbedding,
    UnsupportedMethod,
    MissingGrid,
    BadFactor,
    EmptyDocument,
    EmptyCorpus,
    EmptyGrid,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the engine. The kind is machine-checkable;
/// the message carries file, document or query context.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), m_kind(kind), m_detail(detail) {}

    ErrorKind kind() const noexcept { return m_kind; }
    const std::string& detail() const noexcept { return m_detail; }

    /// Same kind, with `context` prepended to the detail.
    Error with_context(const std::string& context) const { return Error(m_kind, context + ": " + m_detail); }

private:
    ErrorKind m_kind;
    std::string m_detail;
};

}  // namespace docprune
