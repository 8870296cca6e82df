// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/error.hpp"

namespace docprune {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateVector: return "DegenerateVector";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::NotADistribution: return "NotADistribution";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MissingImportanceSource: return "MissingImportanceSource";
    case ErrorKind::DegenerateAttention: return "DegenerateAttention";
    case ErrorKind::MissingGlobalEmbedding: return "MissingGlobalEmbedding";
    case ErrorKind::UnsupportedMethod: return "UnsupportedMethod";
    case ErrorKind::MissingGrid: return "MissingGrid";
    case ErrorKind::BadFactor: return "BadFactor";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    }
    return "Unknown";
}

}  // namespace docprune
