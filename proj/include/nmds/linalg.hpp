#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nmds/gf.hpp"

namespace nmds {

/// Dense row-major matrix over F_q.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Elem> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    Elem& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    Elem operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<Elem> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const Elem> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// In-place reduced row echelon form with leftmost pivots and the original
/// row order; returns the pivot columns.
inline std::vector<std::size_t> rref(const Field& F, Matrix& M) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
        std::size_t pr = r;
        while (pr < M.rows && M(pr, c) == 0) ++pr;
        if (pr == M.rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < M.cols; ++j) std::swap(M(pr, j), M(r, j));
        const Elem inv = F.inv(M(r, c));
        for (std::size_t j = c; j < M.cols; ++j) M(r, j) = F.mul(M(r, j), inv);
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == r || M(i, c) == 0) continue;
            const Elem factor = M(i, c);
            for (std::size_t j = c; j < M.cols; ++j) M(i, j) = F.sub(M(i, j), F.mul(factor, M(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(const Field& F, Matrix M) { return rref(F, M).size(); }

/// Basis of {v : M v = 0}, one vector per free column, in column order.
inline std::vector<std::vector<Elem>> nullspace(const Field& F, Matrix M) {
    const auto pivots = rref(F, M);
    std::vector<bool> is_pivot(M.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Elem>> basis;
    for (std::size_t free = 0; free < M.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Elem> v(M.cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(M(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Elem dot(const Field& F, std::span<const Elem> a, std::span<const Elem> b) {
    Elem s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
    return s;
}

}  // namespace nmds
