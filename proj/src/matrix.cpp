// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/matrix.hpp"

#include <algorithm>

namespace docprune {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        return {};
    }
    const std::size_t cols = rows.front().size();
    Matrix out(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorKind::ShapeError, "ragged rows in matrix literal");
        }
        std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
    }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), m_cols);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= m_rows) {
            throw Error(ErrorKind::ShapeError, "row index out of range");
        }
        auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace docprune
