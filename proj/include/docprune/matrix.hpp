// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "docprune/error.hpp"

namespace docprune {

/// Dense row-major matrix of 64-bit reals. Rows are embedding vectors.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : m_rows(rows), m_cols(cols), m_data(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : m_rows(rows), m_cols(cols), m_data(std::move(data)) {
        if (m_data.size() != rows * cols) {
            throw Error(ErrorKind::ShapeError, "matrix data size does not match rows*cols");
        }
    }

    /// Builds a matrix from nested rows; all rows must share one width.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }
    bool empty() const noexcept { return m_rows == 0; }

    std::span<const double> row(std::size_t r) const noexcept { return {m_data.data() + r * m_cols, m_cols}; }
    std::span<double> row(std::size_t r) noexcept { return {m_data.data() + r * m_cols, m_cols}; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return m_data[r * m_cols + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return m_data[r * m_cols + c]; }

    std::span<const double> data() const noexcept { return m_data; }
    std::span<double> data() noexcept { return m_data; }

    /// Copies the listed rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

}  // namespace docprune
