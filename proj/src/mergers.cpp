// Copyright (C) 2026 The docprune Authors
// SPDX-License-Identifier: Apache-2.0

#include "docprune/mergers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docprune/error.hpp"
#include "docprune/numerics.hpp"

namespace docprune {

namespace {

void check_factor(std::size_t factor) {
    if (factor == 0) {
        throw Error(ErrorKind::BadFactor, "merging factor must be at least 1");
    }
}

MergedDocument assemble(const DocumentRecord& doc, Matrix merged, std::vector<std::vector<std::size_t>> groups,
                        MergeMethod method) {
    MergedDocument out;
    out.doc_id = doc.doc_id;
    out.compression_ratio = 1.0 - static_cast<double>(merged.rows()) / static_cast<double>(doc.patch_count());
    out.merged_embeddings = std::move(merged);
    out.source_groups = std::move(groups);
    out.method = method;
    return out;
}

std::size_t exact_sqrt(std::size_t n) {
    auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

}  // namespace

std::string_view to_string(MergeMethod method) noexcept {
    switch (method) {
    case MergeMethod::sem_cluster: return "sem-cluster";
    case MergeMethod::pool1d: return "pool1d";
    case MergeMethod::pool2d: return "pool2d";
    }
    return "unknown";
}

MergeMethod parse_merge_method(std::string_view name) {
    for (auto m : {MergeMethod::sem_cluster, MergeMethod::pool1d, MergeMethod::pool2d}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw Error(ErrorKind::UnsupportedMethod, "unknown merging method '" + std::string(name) + "'");
}

std::vector<std::vector<std::size_t>> ward_clusters(const Matrix& distances, std::size_t clusters) {
    const std::size_t n = distances.rows();
    if (distances.cols() != n) {
        throw Error(ErrorKind::ShapeError, "distance matrix must be square");
    }
    if (n == 0) {
        return {};
    }
    clusters = std::clamp<std::size_t>(clusters, 1, n);

    Matrix d = distances;
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {i};
    }

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    // nearest[i]: the active j > i minimising d(i, j), lowest j on ties.
    std::vector<std::size_t> nearest(n, kNone);
    auto refresh = [&](std::size_t i) {
        nearest[i] = kNone;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (active[j] && (nearest[i] == kNone || d(i, j) < d(i, nearest[i]))) {
                nearest[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        refresh(i);
    }

    for (std::size_t remaining = n; remaining > clusters; --remaining) {
        std::size_t a = kNone;
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i] && nearest[i] != kNone && (a == kNone || d(i, nearest[i]) < d(a, nearest[a]))) {
                a = i;
            }
        }
        const std::size_t b = nearest[a];
        const double d_ab = d(a, b);
        const double n_a = static_cast<double>(size[a]);
        const double n_b = static_cast<double>(size[b]);

        // Lance-Williams recurrence for Ward linkage.
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) {
                continue;
            }
            const double n_k = static_cast<double>(size[k]);
            const double sq = ((n_a + n_k) * d(a, k) * d(a, k) + (n_b + n_k) * d(b, k) * d(b, k) -
                               n_k * d_ab * d_ab) /
                              (n_a + n_b + n_k);
            const double merged = std::sqrt(std::max(sq, 0.0));
            d(a, k) = merged;
            d(k, a) = merged;
        }
        active[b] = false;
        size[a] += size[b];
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        members[b].clear();

        refresh(a);
        for (std::size_t k = 0; k < a; ++k) {
            if (!active[k]) {
                continue;
            }
            if (nearest[k] == a || nearest[k] == b) {
                refresh(k);
            } else if (nearest[k] != kNone && (d(k, a) < d(k, nearest[k]) ||
                                               (d(k, a) == d(k, nearest[k]) && a < nearest[k]))) {
                nearest[k] = a;
            }
        }
        for (std::size_t k = a + 1; k < n; ++k) {
            if (active[k] && nearest[k] == b) {
                refresh(k);
            }
        }
    }

    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
            std::sort(members[i].begin(), members[i].end());
            groups.push_back(std::move(members[i]));
        }
    }
    return groups;
}

MergedDocument sem_cluster_merge(const DocumentRecord& doc, std::size_t merging_factor) {
    check_factor(merging_factor);
    const std::size_t total = doc.patch_count();
    const std::size_t dim = doc.dim();

    Matrix unit(total, dim);
    for (std::size_t j = 0; j < total; ++j) {
        const double len = numerics::norm(doc.embeddings.row(j));
        if (len == 0.0) {
            throw Error(ErrorKind::DegenerateVector,
                        "document '" + doc.doc_id + "': zero-norm patch " + std::to_string(j));
        }
        auto src = doc.embeddings.row(j);
        auto dst = unit.row(j);
        for (std::size_t c = 0; c < dim; ++c) {
            dst[c] = src[c] / len;
        }
    }
    Matrix distances(total, total);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t j = i + 1; j < total; ++j) {
            const double cos = std::clamp(numerics::dot(unit.row(i), unit.row(j)), -1.0, 1.0);
            distances(i, j) = distances(j, i) = 1.0 - cos;
        }
    }

    const std::size_t target = std::max<std::size_t>(1, total / merging_factor);
    auto groups = ward_clusters(distances, target);

    Matrix merged(groups.size(), dim);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto dst = merged.row(g);
        for (std::size_t j : groups[g]) {
            auto src = doc.embeddings.row(j);
            for (std::size_t c = 0; c < dim; ++c) {
                dst[c] += src[c];
            }
        }
        for (auto& v : dst) {
            v /= static_cast<double>(groups[g].size());
        }
    }
    return assemble(doc, std::move(merged), std::move(groups), MergeMethod::sem_cluster);
}

MergedDocument pool1d_merge(const DocumentRecord& doc, std::size_t merging_factor) {
    check_factor(merging_factor);
    const std::size_t total = doc.patch_count();
    const std::size_t dim = doc.dim();
    const std::size_t windows = (total + merging_factor - 1) / merging_factor;

    Matrix merged(windows, dim);
    std::vector<std::vector<std::size_t>> groups(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        auto dst = merged.row(w);
        const std::size_t end = std::min(total, (w + 1) * merging_factor);
        for (std::size_t j = w * merging_factor; j < end; ++j) {
            groups[w].push_back(j);
            auto src = doc.embeddings.row(j);
            for (std::size_t c = 0; c < dim; ++c) {
                dst[c] += src[c];
            }
        }
        // Zero padding counts toward the divisor.
        for (auto& v : dst) {
            v /= static_cast<double>(merging_factor);
        }
    }
    return assemble(doc, std::move(merged), std::move(groups), MergeMethod::pool1d);
}

MergedDocument pool2d_merge(const DocumentRecord& doc, std::size_t merging_factor) {
    check_factor(merging_factor);
    const std::size_t side = exact_sqrt(merging_factor);
    if (side * side != merging_factor) {
        throw Error(ErrorKind::BadFactor, "2D pooling factor " + std::to_string(merging_factor) +
                                              " is not a perfect square");
    }
    if (!doc.grid) {
        throw Error(ErrorKind::MissingGrid, "document '" + doc.doc_id + "' has no grid dimensions");
    }
    const std::size_t rows = doc.grid->rows;
    const std::size_t cols = doc.grid->cols;
    if (rows * cols != doc.patch_count()) {
        throw Error(ErrorKind::ShapeError, "document '" + doc.doc_id + "': grid does not match patch count");
    }
    const std::size_t dim = doc.dim();
    const std::size_t out_rows = (rows + side - 1) / side;
    const std::size_t out_cols = (cols + side - 1) / side;

    Matrix merged(out_rows * out_cols, dim);
    std::vector<std::vector<std::size_t>> groups(out_rows * out_cols);
    for (std::size_t wr = 0; wr < out_rows; ++wr) {
        for (std::size_t wc = 0; wc < out_cols; ++wc) {
            const std::size_t w = wr * out_cols + wc;
            auto dst = merged.row(w);
            for (std::size_t r = wr * side; r < std::min(rows, (wr + 1) * side); ++r) {
                for (std::size_t c = wc * side; c < std::min(cols, (wc + 1) * side); ++c) {
                    const std::size_t j = r * cols + c;
                    groups[w].push_back(j);
                    auto src = doc.embeddings.row(j);
                    for (std::size_t e = 0; e < dim; ++e) {
                        dst[e] += src[e];
                    }
                }
            }
            std::sort(groups[w].begin(), groups[w].end());
            // Masked mean: only real cells count.
            for (auto& v : dst) {
                v /= static_cast<double>(groups[w].size());
            }
        }
    }
    return assemble(doc, std::move(merged), std::move(groups), MergeMethod::pool2d);
}

MergedDocument merge(const DocumentRecord& doc, const MergeConfig& config) {
    switch (config.method) {
    case MergeMethod::sem_cluster: return sem_cluster_merge(doc, config.factor);
    case MergeMethod::pool1d: return pool1d_merge(doc, config.factor);
    case MergeMethod::pool2d: return pool2d_merge(doc, config.factor);
    }
    throw Error(ErrorKind::UnsupportedMethod,
                "unknown merging method tag " + std::to_string(static_cast<int>(config.method)));
}

}  // namespace docprune
